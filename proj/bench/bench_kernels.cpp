// Serial reference kernels against their OpenMP versions on model-sized inputs.
#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <vector>

#include "permsym/kernels.hpp"
#include "permsym/models.hpp"

using namespace permsym;

namespace {

std::vector<cplx> random_block(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    std::vector<cplx> x(n);
    for (auto& v : x) {
        v = {dist(rng), dist(rng)};
    }
    return x;
}

// emitter count selects the HTC problem size: N = 2 -> 55 * 3, N = 3 -> 220 * 4
const Model& htc_model(int n) {
    static std::map<int, Model> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, build_model(default_spec(ModelKind::htc, n))).first;
    }
    return it->second;
}

template <bool Parallel>
void bm_spmm(benchmark::State& state) {
    const auto& h = htc_model(static_cast<int>(state.range(0))).hamiltonian.matrix();
    const std::size_t ncols = h.rows();
    const auto x = random_block(h.cols() * ncols, 1);
    std::vector<cplx> y(h.rows() * ncols);
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::spmm(h, x.data(), y.data(), ncols, cplx(0.0, -1.0), false);
        } else {
            kernels::spmm_serial(h, x.data(), y.data(), ncols, cplx(0.0, -1.0), false);
        }
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * h.nnz() * ncols));
}

template <bool Parallel>
void bm_rhs(benchmark::State& state) {
    const Model& m = htc_model(static_cast<int>(state.range(0)));
    const auto sys = make_system(m);
    const auto rho = initial_state(m, sys);
    std::vector<cplx> out(rho.data().size());
    auto ws = sys.make_workspace();
    for (auto _ : state) {
        if constexpr (Parallel) {
            sys.rhs_hermitian(rho.data(), out, ws);
        } else {
            sys.rhs_hermitian_serial(rho.data(), out, ws);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.counters["entries"] = static_cast<double>(out.size());
}

}  // namespace

BENCHMARK(bm_spmm<false>)->Name("spmm/serial")->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_spmm<true>)->Name("spmm/openmp")->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_rhs<false>)->Name("rhs/serial")->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_rhs<true>)->Name("rhs/openmp")->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
