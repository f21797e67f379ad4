#include <benchmark/benchmark.h>

#include <random>

#include "ptower/abelian.hpp"
#include "ptower/catalog.hpp"
#include "ptower/cover.hpp"
#include "ptower/descendants.hpp"
#include "ptower/filters.hpp"
#include "ptower/low_index.hpp"
#include "ptower/pquotient.hpp"

using namespace ptower;

namespace {

const pc::PcPresentation& koch() {
  static const auto g = tree::p_quotient(tree::builtin_presentation("koch-q2"), 2, 2).group();
  return g;
}

const pc::PcPresentation& ex93(int c) {
  static const auto res = tree::p_quotient(tree::builtin_presentation("ex93"), 2, 8);
  return res.quotients.at(c - 1);
}

void BM_Multiply(benchmark::State& state) {
  const auto& g = ex93(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  std::vector<pc::Element> xs;
  for (int i = 0; i < 64; ++i) xs.push_back(g.decode(rng() & ((std::uint64_t{1} << std::min(g.ngens(), 63)) - 1)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.multiply(xs[i % 64], xs[(i + 1) % 64]));
    ++i;
  }
  state.SetLabel("2^" + std::to_string(g.ngens()));
}
BENCHMARK(BM_Multiply)->DenseRange(2, 8, 2);

void BM_PQuotient(benchmark::State& state) {
  const auto fp = tree::builtin_presentation("ex93");
  for (auto _ : state) benchmark::DoNotOptimize(tree::p_quotient(fp, 2, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PQuotient)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_CoveringGroup(benchmark::State& state) {
  const auto& g = koch();
  for (auto _ : state) benchmark::DoNotOptimize(tree::p_covering_group(g));
}
BENCHMARK(BM_CoveringGroup)->Unit(benchmark::kMillisecond);

void BM_AbelianInvariants(benchmark::State& state) {
  const auto& g = ex93(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pc::abelian_invariants(g));
}
BENCHMARK(BM_AbelianInvariants)->DenseRange(2, 8, 3);

void BM_IndexFourProfile(benchmark::State& state) {
  const auto& g = koch();
  for (auto _ : state) benchmark::DoNotOptimize(filters::abelianization_profile(g, 2));
}
BENCHMARK(BM_IndexFourProfile)->Unit(benchmark::kMillisecond);

void BM_ChildrenOfElementaryAbelian(benchmark::State& state) {
  const auto g = pc::PcPresentation::elementary_abelian(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tree::immediate_descendants(g));
}
BENCHMARK(BM_ChildrenOfElementaryAbelian)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

void BM_EvaluateRootChild(benchmark::State& state) {
  const auto children = tree::random_children(pc::PcPresentation::elementary_abelian(2, 4), 16, 3);
  const auto& fx = filters::shipped_fixture();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& c = children[i++ % children.size()];
    benchmark::DoNotOptimize(filters::abelianization_filter(c, fx.target_ab));
    benchmark::DoNotOptimize(filters::relator_bound_filter(tree::p_covering_group(c), 5));
  }
}
BENCHMARK(BM_EvaluateRootChild)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
