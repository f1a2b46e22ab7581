// Microbenchmarks for the dense linear-algebra kernels and the two spectral
// paths. Run manually: build/benchmarks/qclt_benchmarks
#include <benchmark/benchmark.h>

#include "qclt/eig.hpp"
#include "qclt/expm.hpp"
#include "qclt/models.hpp"
#include "qclt/operators.hpp"
#include "qclt/spectral.hpp"
#include "qclt/states.hpp"

#include <cmath>

using namespace qclt;

namespace {

Matrix dense_tf(std::size_t N) {
    auto lat = build_lattice(LatticeKind::chain, {N}, false);
    return dense_hamiltonian(transverse_field_chain(lat));
}

void bm_eigensolver(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    Matrix H = dense_tf(N);
    for (auto _ : state) {
        auto eg = eig_hermitian(H, false);
        benchmark::DoNotOptimize(eg.values.data());
    }
}

void bm_eigensolver_vectors(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    Matrix H = dense_tf(N);
    for (auto _ : state) {
        auto eg = eig_hermitian(H, true);
        benchmark::DoNotOptimize(eg.values.data());
    }
}

void bm_expm(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    Matrix H = dense_tf(N);
    for (auto _ : state) {
        Matrix U = expm_i(H, 0.37);
        benchmark::DoNotOptimize(U.data());
    }
}

void bm_matmul(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    Matrix H = dense_tf(N);
    for (auto _ : state) {
        Matrix P = H * H;
        benchmark::DoNotOptimize(P.data());
    }
}

void bm_fast_measure(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    auto lat = build_lattice(LatticeKind::chain, {N}, false);
    auto model = zz_chain(lat);
    auto mm = maximally_mixed(N);
    for (auto _ : state) {
        auto m = fast_commuting_measure(model, mm);
        benchmark::DoNotOptimize(m.energies.data());
    }
}

void bm_kolmogorov(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    auto lat = build_lattice(LatticeKind::chain, {N}, false);
    auto m = fast_commuting_measure(zz_chain(lat), maximally_mixed(N));
    auto st = standardize(m, 0.5, 1.0, N);
    for (auto _ : state) {
        double d = kolmogorov_distance(st.measure);
        benchmark::DoNotOptimize(d);
    }
}

} // namespace

BENCHMARK(bm_eigensolver)->Arg(6)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_eigensolver_vectors)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_expm)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_matmul)->Arg(6)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_fast_measure)->Arg(64)->Arg(1024)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_kolmogorov)->Arg(1024)->Arg(65536)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
