#include <benchmark/benchmark.h>

#include "gradsum/elaborate.hpp"
#include "gradsum/harness.hpp"
#include "gradsum/parser.hpp"
#include "gradsum/relations.hpp"
#include "gradsum/target.hpp"
#include "gradsum/typecheck.hpp"

using namespace gradsum;

namespace {

std::vector<Judgment> corpus(std::size_t n, int max_size) {
  GenConfig cfg;
  cfg.seed = 99;
  cfg.max_size = max_size;
  cfg.max_ctx_vars = 0;
  std::vector<Judgment> out;
  for (std::uint64_t i = 0; out.size() < n; ++i)
    if (auto j = gen_welltyped(cfg, i)) out.push_back(*j);
  return out;
}

BiRef derive(const Judgment& j) {
  auto d = j.dir == Direction::Check ? check(j.ctx, j.expr, j.type) : synth(j.ctx, j.expr);
  return d.value();
}

void BM_Check(benchmark::State& st) {
  auto js = corpus(256, static_cast<int>(st.range(0)));
  std::size_t nodes = 0;
  for (auto _ : st)
    for (const auto& j : js) {
      auto d = derive(j);
      nodes += derivation_size(*d);
      benchmark::DoNotOptimize(d);
    }
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * js.size()));
  st.counters["nodes/prog"] = static_cast<double>(nodes) / (st.iterations() * js.size());
}
BENCHMARK(BM_Check)->Arg(10)->Arg(25)->Arg(60);

void BM_Elaborate(benchmark::State& st) {
  auto js = corpus(256, 25);
  std::vector<BiRef> ds;
  for (const auto& j : js) ds.push_back(derive(j));
  auto mode = st.range(0) ? ElabMode::Saturating : ElabMode::Standard;
  for (auto _ : st)
    for (const auto& d : ds) benchmark::DoNotOptimize(elaborate(*d, mode));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * ds.size()));
}
BENCHMARK(BM_Elaborate)->Arg(0)->Arg(1);

void BM_Evaluate(benchmark::State& st) {
  auto js = corpus(256, 25);
  std::vector<TermRef> ms;
  for (const auto& j : js) ms.push_back(elaborate(*derive(j), ElabMode::Saturating));
  std::uint64_t steps = 0;
  for (auto _ : st)
    for (const auto& m : ms) steps += evaluate(m, 1000000).steps;
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * ms.size()));
  st.counters["steps/prog"] = static_cast<double>(steps) / (st.iterations() * ms.size());
}
BENCHMARK(BM_Evaluate);

void BM_TargetTypecheck(benchmark::State& st) {
  auto js = corpus(256, 25);
  std::vector<TermRef> ms;
  for (const auto& j : js) ms.push_back(elaborate(*derive(j), ElabMode::Saturating));
  for (auto _ : st)
    for (const auto& m : ms) benchmark::DoNotOptimize(target_typecheck(TargetCtx(), m));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * ms.size()));
}
BENCHMARK(BM_TargetTypecheck);

void BM_DconsStructural(benchmark::State& st) {
  auto u = enum_types(2);
  std::uint64_t pairs = 0;
  for (auto _ : st)
    for (const auto& a : u)
      for (const auto& b : u)
        if (same_shape(*a, *b)) {
          benchmark::DoNotOptimize(dcons(*a, *b));
          ++pairs;
        }
  st.SetItemsProcessed(static_cast<std::int64_t>(pairs));
}
BENCHMARK(BM_DconsStructural)->Unit(benchmark::kMillisecond);

void BM_DconsOracle(benchmark::State& st) {
  auto u = enum_types(2);
  std::uint64_t pairs = 0;
  for (auto _ : st) {
    DconsOracle oracle(u);
    for (const auto& a : u)
      for (const auto& b : u)
        if (same_shape(*a, *b)) {
          benchmark::DoNotOptimize(oracle.holds(a, b));
          ++pairs;
        }
  }
  st.SetItemsProcessed(static_cast<std::int64_t>(pairs));
}
BENCHMARK(BM_DconsOracle)->Unit(benchmark::kMillisecond);

void BM_Enumerate(benchmark::State& st) {
  EnumConfig cfg;
  cfg.annotation_types = enum_types(1);
  std::uint64_t n = 0;
  for (auto _ : st)
    enum_exprs(cfg, static_cast<int>(st.range(0)), [&](const ExprRef& e) {
      benchmark::DoNotOptimize(e);
      ++n;
      return true;
    });
  st.SetItemsProcessed(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Enumerate)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
