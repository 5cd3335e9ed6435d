#include <benchmark/benchmark.h>

#include "holobench/dnnbuilder.hpp"
#include "holobench/multiindex.hpp"
#include "holobench/polybasis.hpp"
#include "holobench/rng.hpp"
#include "holobench/sensing.hpp"
#include "holobench/solvers.hpp"

using namespace holo;

namespace {

std::vector<std::uint32_t> first_dims(std::uint32_t n) {
  std::vector<std::uint32_t> t;
  for (std::uint32_t j = 1; j <= n; ++j) t.push_back(j);
  return t;
}

Network stacked_relu(const IndexSet& lambda, std::uint32_t dims, double delta) {
  std::vector<Network> nets;
  for (const auto& nu : lambda)
    nets.push_back(build_poly_network(Family::Legendre, nu, delta, first_dims(dims), Activation::relu()).net);
  return stack_networks(nets);
}

void BM_HyperbolicCross(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hci_index_set(n, 8));
  state.counters["N"] = static_cast<double>(hci_index_set(n, 8).size());
}
BENCHMARK(BM_HyperbolicCross)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_AssembleExact(benchmark::State& state) {
  const IndexSet lambda = hci_index_set(static_cast<std::uint32_t>(state.range(0)), 6);
  const PointSet y = sample_points(Family::Legendre, static_cast<std::size_t>(state.range(1)), 6, 1);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_exact(y, lambda, Family::Legendre));
  state.counters["N"] = static_cast<double>(lambda.size());
}
BENCHMARK(BM_AssembleExact)->Args({8, 200})->Args({16, 400})->Args({32, 800});

void BM_AssembleEmulatedRelu(benchmark::State& state) {
  const IndexSet lambda = hci_index_set(8, 3);
  const Network net = stacked_relu(lambda, 3, 1e-3);
  const PointSet y = sample_points(Family::Legendre, static_cast<std::size_t>(state.range(0)), 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_emulated(net, y, lambda, Family::Legendre, 1e-3));
}
BENCHMARK(BM_AssembleEmulatedRelu)->Arg(100)->Arg(400);

void BM_ForwardBatch(benchmark::State& state) {
  const IndexSet lambda = hci_index_set(8, 3);
  const Network net = stacked_relu(lambda, 3, static_cast<double>(state.range(0)) * 1e-4);
  const PointSet y = sample_points(Family::Legendre, 256, 3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward_batch(y));
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_ForwardBatch)->Arg(100)->Arg(10)->Arg(1);

void BM_SrLasso(benchmark::State& state) {
  const IndexSet lambda = hci_index_set(static_cast<std::uint32_t>(state.range(0)), 4);
  const auto m = static_cast<std::size_t>(state.range(1));
  const auto A = assemble_exact(sample_points(Family::Legendre, m, 4, 4), lambda, Family::Legendre);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(A.cols(), 3);
  x.row(0) << 1.0, -0.5, 0.25;
  x.row(1) << 0.3, 0.2, -0.1;
  const Eigen::MatrixXd f = A.entries * x;
  const Eigen::VectorXd u = intrinsic_weights(Family::Legendre, lambda);
  SolverOptions o;
  o.max_iters = 3000;
  o.rel_tol = 1e-7;
  for (auto _ : state) benchmark::DoNotOptimize(solve_srlasso(A.entries, f, u, 0.05, DiscreteSpace(3), o));
  state.counters["N"] = static_cast<double>(lambda.size());
}
BENCHMARK(BM_SrLasso)->Args({8, 100})->Args({16, 200})->Unit(benchmark::kMillisecond);

void BM_LeastSquares(benchmark::State& state) {
  const IndexSet lambda = hci_index_set(static_cast<std::uint32_t>(state.range(0)), 4);
  const auto A = assemble_exact(sample_points(Family::Legendre, 4 * lambda.size(), 4, 5), lambda, Family::Legendre);
  CounterRng rng(6);
  Eigen::MatrixXd f(A.rows(), 31);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(solve_leastsquares(A.entries, f, DiscreteSpace(31)));
}
BENCHMARK(BM_LeastSquares)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
