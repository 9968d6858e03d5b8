// Microbenchmarks for the hot paths: canonicalization, the two CRPS
// evaluation strategies, minimizer search on each loss shape, conditional-law
// construction, and the forecast-comparison statistic.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "elicit/distribution.hpp"
#include "elicit/elicitation.hpp"
#include "elicit/functionals.hpp"
#include "elicit/loss.hpp"
#include "elicit/scoring.hpp"

namespace {

using elicit::BivariateDiscreteDistribution;
using elicit::BivariateRawAtom;
using elicit::DiscreteDistribution;
using elicit::RawAtom;

std::vector<RawAtom> random_atoms(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> value(-100.0, 100.0);
    std::uniform_real_distribution<double> mass(0.05, 1.05);
    std::vector<RawAtom> atoms;
    atoms.reserve(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        atoms.push_back(RawAtom{value(engine), mass(engine)});
        total += atoms.back().mass;
    }
    for (RawAtom& atom : atoms) atom.mass /= total;
    return atoms;
}

DiscreteDistribution random_law(std::size_t n, std::uint64_t seed) {
    return DiscreteDistribution::canonicalize(random_atoms(n, seed));
}

void bm_canonicalize(benchmark::State& state) {
    const auto atoms = random_atoms(static_cast<std::size_t>(state.range(0)), 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(DiscreteDistribution::canonicalize(atoms));
    }
}
BENCHMARK(bm_canonicalize)->Arg(64)->Arg(1024)->Arg(16384);

void bm_crps_energy(benchmark::State& state) {
    const DiscreteDistribution law =
        random_law(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            elicit::crps(law, 3.0, elicit::CrpsMethod::energy));
    }
}
BENCHMARK(bm_crps_energy)->Arg(64)->Arg(1024)->Arg(16384);

void bm_crps_threshold(benchmark::State& state) {
    const DiscreteDistribution law =
        random_law(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            elicit::crps(law, 3.0, elicit::CrpsMethod::threshold));
    }
}
BENCHMARK(bm_crps_threshold)->Arg(64)->Arg(1024)->Arg(16384);

void bm_minimizer_piecewise(benchmark::State& state) {
    const DiscreteDistribution law =
        random_law(static_cast<std::size_t>(state.range(0)), 11);
    const elicit::LossFunction loss = elicit::loss::pinball(0.7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(elicit::minimizer_interval(loss, law));
    }
}
BENCHMARK(bm_minimizer_piecewise)->Arg(64)->Arg(1024);

void bm_minimizer_smooth(benchmark::State& state) {
    const DiscreteDistribution law =
        random_law(static_cast<std::size_t>(state.range(0)), 11);
    const elicit::LossFunction loss = elicit::loss::asymmetric_squared(0.7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(elicit::minimizer_interval(loss, law));
    }
}
BENCHMARK(bm_minimizer_smooth)->Arg(64)->Arg(1024);

void bm_covar_conditional(benchmark::State& state) {
    const std::size_t side = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 engine(13);
    std::uniform_real_distribution<double> mass(0.05, 1.05);
    std::vector<BivariateRawAtom> atoms;
    atoms.reserve(side * side);
    double total = 0.0;
    for (std::size_t i = 0; i < side; ++i) {
        for (std::size_t j = 0; j < side; ++j) {
            atoms.push_back(BivariateRawAtom{static_cast<double>(i),
                                             static_cast<double>(j),
                                             mass(engine)});
            total += atoms.back().mass;
        }
    }
    for (BivariateRawAtom& atom : atoms) atom.mass /= total;
    const BivariateDiscreteDistribution joint =
        BivariateDiscreteDistribution::canonicalize(atoms);
    for (auto _ : state) {
        benchmark::DoNotOptimize(elicit::covar_conditional(joint, 0.9));
    }
}
BENCHMARK(bm_covar_conditional)->Arg(16)->Arg(64);

void bm_diebold_mariano(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 engine(17);
    std::uniform_real_distribution<double> score(0.0, 2.0);
    std::vector<elicit::ScoreEntry> a;
    std::vector<elicit::ScoreEntry> b;
    a.reserve(n);
    b.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = score(engine);
        a.push_back({elicit::ScoreValue(score(engine)), y});
        b.push_back({elicit::ScoreValue(score(engine)), y});
    }
    const elicit::ScoreSeries series_a(a);
    const elicit::ScoreSeries series_b(b);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            elicit::diebold_mariano(series_a, series_b, 8));
    }
}
BENCHMARK(bm_diebold_mariano)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
