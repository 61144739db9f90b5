// Benchmarks for the feasibility solver and the tableau engine.
#include <benchmark/benchmark.h>

#include <random>
#include <sstream>
#include <string>

#include "shiq/ilfc.hpp"
#include "shiq/parser.hpp"
#include "shiq/tableau.hpp"

namespace {

using namespace shiq;

FeasibilityProblem randomIlp(std::mt19937_64& rng, int vars, int cons,
                             uint64_t maxBound) {
  FeasibilityProblem p;
  p.numVars = vars;
  for (int i = 0; i < cons; ++i) {
    LinearConstraint c;
    for (int v = 0; v < vars; ++v)
      if (rng() % 2) c.vars.push_back(v);
    if (c.vars.empty()) c.vars.push_back((int)(rng() % vars));
    c.rel = rng() % 2 ? Rel::Le : Rel::Ge;
    c.bound = rng() % (maxBound + 1);
    p.constraints.push_back(c);
  }
  return p;
}

void BM_IlpSmall(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<FeasibilityProblem> probs;
  for (int i = 0; i < 64; ++i) probs.push_back(randomIlp(rng, 6, 5, 6));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(isFeasible(probs[i++ % probs.size()]));
  }
}
BENCHMARK(BM_IlpSmall);

void BM_IlpHugeBounds(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<FeasibilityProblem> probs;
  for (int i = 0; i < 64; ++i)
    probs.push_back(randomIlp(rng, 8, 6, 1'000'000'000ull));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(isFeasible(probs[i++ % probs.size()]));
  }
}
BENCHMARK(BM_IlpHugeBounds);

Verdict check(const std::string& text) {
  TermContext ctx;
  auto parsed = parseKB(ctx, text);
  auto nkb = normalizeKb(ctx, std::get<KnowledgeBase>(parsed));
  return checkSatisfiability(ctx, nkb);
}

void BM_TableauCounting(benchmark::State& state) {
  std::ostringstream kb;
  kb << "assert a : some r . A;"
     << "assert a : all r . (not A or not B);"
     << "assert a : >= " << state.range(0) << " r . B;"
     << "assert a : <= " << state.range(0) << " r . (A or B);";
  for (auto _ : state) benchmark::DoNotOptimize(check(kb.str()));
}
BENCHMARK(BM_TableauCounting)->Arg(1000)->Arg(1'000'000)->Arg(1'000'000'000);

void BM_TableauTransitive(benchmark::State& state) {
  const std::string kb =
      "r sub s; inv(r) sub s; trans(s);"
      "Top sub some r . (A and all s . not A); assert a : Top;";
  for (auto _ : state) benchmark::DoNotOptimize(check(kb));
}
BENCHMARK(BM_TableauTransitive);

void BM_TableauCachedCycle(benchmark::State& state) {
  std::ostringstream kb;
  kb << "trans(s); r sub s;";
  for (int i = 0; i < state.range(0); ++i)
    kb << "A" << i << " sub some r . A" << (i + 1) % state.range(0) << ";";
  kb << "assert a : A0; assert a : all s . B;";
  for (auto _ : state) benchmark::DoNotOptimize(check(kb.str()));
}
BENCHMARK(BM_TableauCachedCycle)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
