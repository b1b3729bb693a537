#include <random>

#include <benchmark/benchmark.h>

#include "whlab/linalg.hpp"
#include "whlab/operators.hpp"
#include "whlab/spectra.hpp"

using namespace whlab;

namespace {

GridFunction random_function(const Grid& g) {
    std::mt19937 rng(1);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v(g.count());
    for (auto& x : v) x = cplx(nd(rng), nd(rng));
    return GridFunction(g, Weight::constant(), v);
}

void BM_AssembleShift(benchmark::State& state) {
    const Grid g(0.05 * state.range(0), static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_matrix(OperatorSpec::right_shift(1.0), g,
                                                 Weight::exponential(1.0)));
}
BENCHMARK(BM_AssembleShift)->Arg(400)->Arg(1600);

void BM_AssembleConvolution(benchmark::State& state) {
    const Grid g(0.05 * state.range(0), static_cast<int>(state.range(0)));
    const auto spec = OperatorSpec::convolution(Kernel::gaussian_bump(0.0, 1.0, 0.05));
    for (auto _ : state) benchmark::DoNotOptimize(assemble_matrix(spec, g, Weight::constant()));
}
BENCHMARK(BM_AssembleConvolution)->Arg(400)->Arg(800);

void BM_SigmaMin(benchmark::State& state) {
    const Grid g(0.05 * state.range(0), static_cast<int>(state.range(0)));
    const auto m = assemble_matrix(OperatorSpec::right_shift(1.0), g, Weight::constant());
    const Eigen::MatrixXcd a =
        cplx(0.5, 0.2) * Eigen::MatrixXcd::Identity(m.size(), m.size()) - m.matrix;
    for (auto _ : state) benchmark::DoNotOptimize(linalg::smallest_singular_value(a));
}
BENCHMARK(BM_SigmaMin)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Convolution(benchmark::State& state) {
    const Grid g(40.0, 800);
    const double half_width = 0.05 * static_cast<double>(state.range(1));
    const auto spec = OperatorSpec::convolution(Kernel::gaussian_bump(0.0, half_width, 0.05));
    const auto f = random_function(g);
    const auto method = state.range(0) ? ConvolutionMethod::Fft : ConvolutionMethod::Direct;
    for (auto _ : state) benchmark::DoNotOptimize(apply_operator(spec, f, method));
    state.SetLabel(state.range(0) ? "fft" : "direct");
}
BENCHMARK(BM_Convolution)->ArgsProduct({{0, 1}, {16, 64, 256}});

void BM_Pseudospectrum(benchmark::State& state) {
    const Grid g(10.0, 200);
    const auto m = assemble_matrix(OperatorSpec::right_shift(1.0), g, Weight::constant());
    const auto nodes = rectangular_nodes(-2, 2, -2, 2, 9, 9);
    for (auto _ : state) benchmark::DoNotOptimize(pseudospectrum(m, nodes, 1));
}
BENCHMARK(BM_Pseudospectrum)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
