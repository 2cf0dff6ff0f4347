#include "doctest.h"

#include <algorithm>

#include "dst/dynamics.hpp"
#include "dst/printer.hpp"
#include "gen.hpp"

using namespace dst;

namespace {

bool same_set(const std::vector<ProcP>& a, const std::vector<ProcP>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& p : a) {
    bool found = false;
    for (size_t i = 0; i < b.size(); ++i) {
      if (!used[i] && struct_congruent(p, b[i])) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<ProcP> tau_successors(const ProcP& p) {
  std::vector<ProcP> out;
  for (const auto& [l, q] : transitions(p))
    if (l.is_tau()) {
      bool dup = false;
      for (const auto& seen : out) dup = dup || struct_congruent(seen, q);
      if (!dup) out.push_back(q);
    }
  return out;
}

}  // namespace

TEST_CASE("communication reductions") {
  // x!y.Q | x(z).P  ->  Q | P{y/z}
  ProcP p = p_par(p_send("x", "y", p_inaction()), p_recv("x", "z", p_fwd("z", "k")));
  auto rs = reductions(p);
  REQUIRE(rs.size() == 1);
  CHECK(struct_congruent(rs[0], p_fwd("y", "k")));

  // selection: x[b];P | case x {a: Qa, b: Qb}  ->  P | Qb
  ProcP sel = p_par(p_select("x", "b", p_inaction()),
                    p_branch("x", {{"a", p_fwd("m", "n")}, {"b", p_fwd("r", "s")}}));
  auto rs2 = reductions(sel);
  REQUIRE(rs2.size() == 1);
  CHECK(struct_congruent(rs2[0], p_fwd("r", "s")));

  // forwarder elimination: (new x)(fwd x y | P) -> P{y/x}
  ProcP fw = p_restrict("x", p_par(p_fwd("x", "y"), p_send("x", "k", p_inaction())));
  auto rs3 = reductions(fw);
  REQUIRE(rs3.size() == 1);
  CHECK(struct_congruent(rs3[0], p_send("y", "k", p_inaction())));

  // replicated input stays
  ProcP repl = p_par(p_send("x", "y", p_inaction()), p_repl("x", "z", p_fwd("z", "k")));
  auto rs4 = reductions(repl);
  REQUIRE(rs4.size() == 1);
  CHECK(struct_congruent(rs4[0], p_par(p_fwd("y", "k"), p_repl("x", "z", p_fwd("z", "k")))));

  // domain exchange: x<w1>.P | x(a).Q -> P | Q{w1/a}
  ProcP dc = p_par(p_dsend("x", DomainTerm::c("w1"), p_inaction()),
                   p_drecv("x", "a", p_msend("k", "y", DomainTerm::v("a"), p_inaction())));
  auto rs5 = reductions(dc);
  REQUIRE(rs5.size() == 1);
  CHECK(struct_congruent(rs5[0], p_msend("k", "y", DomainTerm::c("w1"), p_inaction())));

  // migration: x<<y@w>>.P | x((z@w)).Q -> (new y)(P | Q{y/z})
  ProcP mg = p_par(p_msend("x", "y", DomainTerm::c("w"), p_send("y", "k", p_inaction())),
                   p_mrecv("x", "z", DomainTerm::c("w"), p_recv("z", "u", p_inaction())));
  auto rs6 = reductions(mg);
  REQUIRE(rs6.size() == 1);
  CHECK(struct_congruent(
      rs6[0], p_restrict("y", p_par(p_send("y", "k", p_inaction()),
                                    p_recv("y", "u", p_inaction())))));
}

TEST_CASE("visible transitions") {
  auto ts = transitions(p_send("x", "y", p_inaction()));
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].first.k == ActionLabel::K::FreeOut);
  CHECK(ts[0].first.subject == "x");
  CHECK(ts[0].first.object == "y");

  // early domain input: one transition per probe domain (mentioned domains
  // plus a fresh witness)
  ProcP dr = p_par(p_drecv("x", "a", p_dsend("k", DomainTerm::v("a"), p_inaction())),
                   p_msend("m", "y", DomainTerm::c("w1"), p_inaction()));
  size_t domin = 0;
  for (const auto& [l, q] : transitions(dr))
    if (l.k == ActionLabel::K::DomIn) ++domin;
  CHECK(domin == 2);

  // migration output extrudes the fresh name
  ProcP ms = p_msend("x", "y", DomainTerm::c("w"), p_inaction());
  auto ts3 = transitions(ms);
  REQUIRE(ts3.size() == 1);
  CHECK(ts3[0].first.k == ActionLabel::K::MigOut);
  CHECK(ts3[0].first.dom == DomainTerm::c("w"));

  // bound output via open: (new y) x!y.P  --x<(y)>-->  P
  ProcP op = p_restrict("y", p_send("x", "y", p_recv("y", "u", p_inaction())));
  auto ts4 = transitions(op);
  REQUIRE(ts4.size() == 1);
  CHECK(ts4[0].first.k == ActionLabel::K::BoundOut);
}

TEST_CASE("liveness") {
  CHECK_FALSE(is_live(p_inaction()));
  CHECK(is_live(p_recv("x", "y", p_inaction())));
  CHECK_FALSE(is_live(p_restrict("x", p_repl("x", "y", p_recv("k", "u", p_inaction())))));
  CHECK_FALSE(is_live(p_fwd("x", "y")));
  CHECK(is_live(p_restrict("x", p_par(p_send("x", "y", p_inaction()), p_inaction()))));
}

TEST_CASE("run") {
  Trace t0 = run(p_inaction(), 10, RunStrategy::DeterministicFirst);
  CHECK(t0.steps.empty());
  CHECK(t0.terminal);

  ProcP p = p_par(p_send("x", "y", p_inaction()), p_recv("x", "z", p_inaction()));
  Trace t1 = run(p, 10, RunStrategy::DeterministicFirst);
  CHECK(t1.steps.size() == 1);
  CHECK(t1.terminal);
  CHECK(struct_congruent(t1.final, p_inaction()));

  Trace t2 = run(p, 0, RunStrategy::DeterministicFirst);
  CHECK(t2.budget_exhausted);
}

TEST_CASE("reduction graphs") {
  auto g0 = reduction_graph(p_inaction(), 8);
  CHECK(g0.states.size() == 1);
  CHECK(g0.edges.empty());
  CHECK_FALSE(g0.has_cycle);

  // two independent redexes: a diamond of four states
  ProcP redex1 = p_par(p_send("x", "y", p_inaction()), p_recv("x", "z", p_inaction()));
  ProcP redex2 = p_par(p_send("k", "m", p_inaction()), p_recv("k", "u", p_inaction()));
  auto g = reduction_graph(p_par(redex1, redex2), 8);
  CHECK(g.states.size() == 4);
  CHECK(g.edges.size() == 4);
  CHECK_FALSE(g.has_cycle);
  CHECK_FALSE(g.bound_exceeded);

  // bound flag
  auto gb = reduction_graph(p_par(redex1, redex2), 1);
  CHECK(gb.bound_exceeded);
}

TEST_CASE("tau transitions coincide with reductions") {
  testing::Gen gen(47);
  int interesting = 0;
  for (int i = 0; i < 200; ++i) {
    ProcP p = i % 2 == 0 ? gen.process(12) : gen.redexy(10);
    auto red = reductions(p);
    auto tau = tau_successors(p);
    if (!red.empty()) ++interesting;
    CAPTURE(print(p));
    CHECK(same_set(red, tau));
  }
  CHECK(interesting > 40);
}

TEST_CASE("reduction is closed under structural congruence") {
  testing::Gen gen(53);
  for (int i = 0; i < 120; ++i) {
    ProcP p = gen.process(10);
    // a structurally congruent rearrangement
    ProcP q = p_par(p_inaction(), p);
    REQUIRE(struct_congruent(p, q));
    CHECK(same_set(reductions(p), reductions(q)));
  }
}

TEST_CASE("replication can loop the reduction graph") {
  // (new x)(x!y.0 | !x(z). x!y.0): each round restores the same state
  ProcP p = p_restrict("x", p_par(p_send("x", "y", p_inaction()),
                                  p_repl("x", "z", p_send("x", "y", p_inaction()))));
  auto g = reduction_graph(p, 16);
  CHECK(g.has_cycle);
}

TEST_CASE("random strategy is reproducible per seed") {
  testing::Gen gen(83);
  ProcP p = gen.redexy(10);
  Trace a = run(p, 12, RunStrategy::Random, 42);
  Trace b = run(p, 12, RunStrategy::Random, 42);
  REQUIRE(a.steps.size() == b.steps.size());
  for (size_t i = 0; i < a.steps.size(); ++i)
    CHECK(alpha_eq(a.steps[i].after, b.steps[i].after));
}
