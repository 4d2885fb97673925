#include <benchmark/benchmark.h>

#include "stackel/frame_diag.hpp"
#include "stackel/geodesic_flow.hpp"
#include "stackel/parser.hpp"
#include "stackel/stackel.hpp"

using namespace stk;

namespace {

void BM_ParseExpression(benchmark::State& state) {
    Chart chart = Chart::standard(3);
    for (auto _ : state) {
        ScalarField f =
            parse_expression("(x1 + x2)^3/(1 + x3^2) - 2*x1*x2", chart, Backend::Exact);
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_ParseExpression);

void BM_PoissonBracketExact(benchmark::State& state) {
    StackelSystem system = stackel_integrals(example_liouville_matrix());
    std::vector<MomentaPolynomial> polys = system.integral_polys();
    for (auto _ : state) {
        MomentaPolynomial bracket = poisson_bracket(polys[0], polys[1]);
        benchmark::DoNotOptimize(bracket);
    }
}
BENCHMARK(BM_PoissonBracketExact);

void BM_StackelGenerate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        state.PauseTiming();
        SeededRng rng(static_cast<std::uint64_t>(state.iterations()) + 7);
        StackelMatrix s = random_stackel_matrix(n, rng);
        state.ResumeTiming();
        StackelSystem system = stackel_integrals(s);
        benchmark::DoNotOptimize(system);
    }
}
BENCHMARK(BM_StackelGenerate)->Arg(2)->Arg(3);

void BM_SimultaneousDiagonalize(benchmark::State& state) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd k1(3, 3), k2(3, 3);
    k1 << 2, 1, 0, 1, 2, 0, 0, 0, 5;
    k2 << 4, 2, 0, 2, 4, 0, 0, 0, 1;
    std::vector<Eigen::MatrixXd> ks{k1, k2};
    Eigen::VectorXd point = Eigen::VectorXd::Zero(3);
    for (auto _ : state) {
        DiagOutcome outcome = simultaneous_diagonalize(point, g, ks, 1e-9, 3);
        benchmark::DoNotOptimize(outcome);
    }
}
BENCHMARK(BM_SimultaneousDiagonalize);

void BM_MidpointStep(benchmark::State& state) {
    StackelSystem system = stackel_integrals(example_polar_matrix());
    HamiltonianFlow flow(system.integral_polys()[0].scaled(rational(1, 2)));
    PhaseState s{{1.0, 0.0}, {0.2, 1.0}};
    for (auto _ : state) {
        PhaseState next = flow.midpoint_step(s, 1e-3);
        benchmark::DoNotOptimize(next);
    }
}
BENCHMARK(BM_MidpointStep);

} // namespace

BENCHMARK_MAIN();
