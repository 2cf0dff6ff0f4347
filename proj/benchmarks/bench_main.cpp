#include <benchmark/benchmark.h>

#include "dst/dynamics.hpp"
#include "dst/medium.hpp"
#include "dst/mpst.hpp"
#include "dst/printer.hpp"
#include "dst/surface.hpp"
#include "dst/syntax.hpp"
#include "dst/typecheck.hpp"

using namespace dst;

namespace {

GlobalP middleware() {
  auto base = [](const char* b) { return std::optional<Payload>(Payload::b(b)); };
  GlobalP offload = g_comm(
      "mw", "serv",
      {{"req", base("data"), g_comm("serv", "mw", {{"reply", base("ans"), g_end()}})}});
  return g_comm(
      "cl", "mw",
      {{"request", base("req"),
        g_comm("mw", "cl",
               {{"reply", base("ans"), g_comm("mw", "serv", {{"done", std::nullopt, g_end()}})},
                {"wait", std::nullopt,
                 g_comm("mw", "serv",
                        {{"init", std::nullopt,
                          g_move("mw", {"serv"}, DomainTerm::c("w_priv"), offload,
                                 g_comm("mw", "cl", {{"reply", base("ans"), g_end()}}))}})}})}});
}

ProcP composed() {
  GlobalP g = middleware();
  MediumConfig cfg = MediumConfig::defaults(g);
  std::map<Participant, ProcP> impls;
  for (const auto& p : participants(g)) {
    auto impl = canonical_impl(
        g, p, cfg,
        p == "mw" ? scripted_labels({"wait", "init", "req", "reply", "reply"}) : first_label());
    impls[p] = std::get<ProcP>(impl);
  }
  return std::get<ProcP>(compose_system(g, cfg, impls));
}

void BM_normalize(benchmark::State& state) {
  ProcP sys = composed();
  for (auto _ : state) benchmark::DoNotOptimize(normalize(sys));
}
BENCHMARK(BM_normalize);

void BM_verify_medium(benchmark::State& state) {
  GlobalP g = middleware();
  MediumConfig cfg = MediumConfig::defaults(g);
  for (auto _ : state) benchmark::DoNotOptimize(verify_medium(g, cfg));
}
BENCHMARK(BM_verify_medium);

void BM_check_composed(benchmark::State& state) {
  GlobalP g = middleware();
  MediumConfig cfg = MediumConfig::defaults(g);
  ProcP sys = composed();
  Judgment j = composed_judgment(g, cfg, sys);
  for (auto _ : state) benchmark::DoNotOptimize(check(j));
}
BENCHMARK(BM_check_composed);

void BM_reduction_graph(benchmark::State& state) {
  ProcP sys = composed();
  for (auto _ : state) benchmark::DoNotOptimize(reduction_graph(sys, 64));
}
BENCHMARK(BM_reduction_graph);

void BM_parse_print(benchmark::State& state) {
  GlobalP g = middleware();
  std::string text = print(g);
  for (auto _ : state) benchmark::DoNotOptimize(parse_global(text));
}
BENCHMARK(BM_parse_print);

}  // namespace

BENCHMARK_MAIN();
