#include <benchmark/benchmark.h>

#include <vector>

#include "dcki/anchor.hpp"
#include "dcki/graphs.hpp"
#include "dcki/integrate_kernel.hpp"
#include "dcki/integrate_linear.hpp"
#include "dcki/obfuscation.hpp"
#include "dcki/random.hpp"

namespace {

constexpr dcki::Index kParties = 4;
constexpr dcki::Index kDTilde = 4;

// K party views of one random anchor set through random linear maps.
std::vector<dcki::Matrix> party_views(dcki::Index n_a) {
  auto rng = dcki::CounterRng::stream(n_a, dcki::Purpose::kTest);
  const dcki::Matrix A = dcki::random_normal(n_a, 20, rng);
  std::vector<dcki::Matrix> views;
  for (dcki::Index k = 0; k < kParties; ++k)
    views.push_back(A * dcki::random_normal(20, kDTilde, rng) * 0.3);
  return views;
}

void BM_FitLki(benchmark::State& state) {
  const auto views = party_views(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dcki::fit_lki(views, kDTilde));
  state.SetComplexityN(state.range(0));
}

void BM_FitNki(benchmark::State& state) {
  const auto views = party_views(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        dcki::fit_nki(views, {dcki::KernelKind::kRbf, 1.0}, 1.0, kDTilde, dcki::NkiVariant::kPlain));
  state.SetComplexityN(state.range(0));
}

void BM_FitNkiTslCenter(benchmark::State& state) {
  const auto views = party_views(state.range(0));
  dcki::Targets labels(state.range(0));
  for (dcki::Index i = 0; i < labels.size(); ++i) labels(i) = static_cast<double>(i % 3);
  dcki::GraphSpec tsl;
  tsl.kind = dcki::GraphKind::kTargetSimilarity;
  for (auto _ : state) {
    const auto pair = dcki::build_laplacian_pair(views, tsl, std::nullopt, &labels, 1.0);
    benchmark::DoNotOptimize(dcki::fit_nki(views, {dcki::KernelKind::kRbf, 1.0}, 1.0, kDTilde,
                                           dcki::NkiVariant::kGraphCentered, &pair));
  }
  state.SetComplexityN(state.range(0));
}

// g_k on 1000 query rows.
void BM_ApplyNki(benchmark::State& state) {
  const auto views = party_views(state.range(0));
  const auto model =
      dcki::fit_nki(views, {dcki::KernelKind::kRbf, 1.0}, 1.0, kDTilde, dcki::NkiVariant::kPlain);
  auto rng = dcki::CounterRng::stream(1, dcki::Purpose::kTest);
  const dcki::Matrix X = dcki::random_normal(1000, kDTilde, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dcki::apply_nki(model, 0, X));
  state.SetComplexityN(state.range(0));
}

void BM_ApplyLki(benchmark::State& state) {
  const auto views = party_views(state.range(0));
  const auto model = dcki::fit_lki(views, kDTilde);
  auto rng = dcki::CounterRng::stream(1, dcki::Purpose::kTest);
  const dcki::Matrix X = dcki::random_normal(1000, kDTilde, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dcki::apply_linear(model, 0, X));
}

void BM_FitKpca(benchmark::State& state) {
  auto rng = dcki::CounterRng::stream(2, dcki::Purpose::kTest);
  const dcki::Matrix X = dcki::random_normal(state.range(0), 20, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dcki::fit_kpca(X, kDTilde));
  state.SetComplexityN(state.range(0));
}

void BM_GenerateAnchor(benchmark::State& state) {
  auto rng = dcki::CounterRng::stream(3, dcki::Purpose::kTest);
  const dcki::Matrix X = dcki::random_normal(90, 20, rng);
  dcki::Targets y(90);
  for (dcki::Index i = 0; i < 90; ++i) y(i) = static_cast<double>(i % 3);
  dcki::SmoteOptions o;
  o.n_a = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(dcki::generate_anchor(X, y, o, 0));
}

}  // namespace

BENCHMARK(BM_FitLki)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_FitNki)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_FitNkiTslCenter)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplyNki)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_ApplyLki)->Arg(800)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FitKpca)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateAnchor)->Arg(300)->Arg(1200)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
