#include "rule_suite.hpp"

#include "dst/syntax.hpp"

namespace dst::testing {

namespace {

DomainTerm W(const std::string& n) { return DomainTerm::c(n); }

AccessEnv omega(std::initializer_list<std::pair<std::string, std::string>> edges,
                ClosureConfig cfg = {}) {
  AccessEnv env;
  env.config = cfg;
  for (const auto& [a, b] : edges) env.edges.insert({W(a), W(b)});
  return env;
}

struct J {
  Judgment j;
  J(ProcP p, std::string z, TypeP t, std::string w) {
    j.proc = std::move(p);
    j.offered = std::move(z);
    j.type = std::move(t);
    j.dom = W(w);
  }
  J& om(AccessEnv e) {
    j.omega = std::move(e);
    return *this;
  }
  J& lin(const std::string& x, TypeP t, const std::string& w) {
    j.delta.put(CtxEntry{x, std::move(t), W(w), {}});
    return *this;
  }
  J& sh(const std::string& u, TypeP t, const std::string& w) {
    j.gamma.put(CtxEntry{u, std::move(t), W(w), {}});
    return *this;
  }
  operator Judgment() const { return j; }
};

TypeP plus_a() { return t_plus({{"a", t_one()}}); }

}  // namespace

Judgment exists_at_example() {
  ProcP p = p_dsend("z", W("w2"), p_msend("z", "y", W("w2"), p_inaction()));
  return J(p, "z", t_exists("a", t_at(DomainTerm::v("a"), t_one())), "w1")
      .om(omega({{"w1", "w2"}}));
}

std::vector<RuleCase> rule_suite() {
  std::vector<RuleCase> cases;
  auto add = [&](const std::string& rule, Judgment a, Judgment r) {
    cases.push_back({rule, std::move(a), std::move(r)});
  };

  // id: forwarders link equal sessions at equal domains
  add("id", J(p_fwd("x", "z"), "z", t_one(), "w").lin("x", t_one(), "w"),
      J(p_fwd("x", "z"), "z", t_one(), "w").lin("x", t_tensor(t_one(), t_one()), "w"));

  // 1R
  add("1R", J(p_inaction(), "z", t_one(), "w"),
      J(p_inaction(), "z", t_tensor(t_one(), t_one()), "w"));

  // 1L: unit sessions may be discarded at terminated leaves, others not
  add("1L", J(p_inaction(), "z", t_one(), "w").lin("x", t_one(), "w"),
      J(p_inaction(), "z", t_one(), "w").lin("x", t_tensor(t_one(), t_one()), "w"));

  // *R
  add("*R",
      J(p_bsend("z", "y", p_par(p_inaction(), p_inaction())), "z",
        t_tensor(t_one(), t_one()), "w"),
      J(p_bsend("z", "y", p_par(p_inaction(), p_inaction())), "z",
        t_tensor(t_lolli(t_one(), t_one()), t_one()), "w"));

  // *L
  add("*L", J(p_recv("x", "y", p_inaction()), "z", t_one(), "w")
          .lin("x", t_tensor(t_one(), t_one()), "w"),
      J(p_recv("x", "y", p_inaction()), "z", t_one(), "w")
          .lin("x", t_tensor(plus_a(), t_one()), "w"));

  // -oR
  add("-oR", J(p_recv("z", "y", p_inaction()), "z", t_lolli(t_one(), t_one()), "w"),
      J(p_recv("z", "y", p_inaction()), "z", t_tensor(t_one(), t_one()), "w"));

  // -oL
  add("-oL",
      J(p_bsend("x", "y", p_par(p_inaction(), p_inaction())), "z", t_one(), "w")
          .lin("x", t_lolli(t_one(), t_one()), "w"),
      J(p_bsend("x", "y", p_par(p_inaction(), p_inaction())), "z", t_one(), "w")
          .lin("x", t_lolli(t_one(), plus_a()), "w"));

  // &R: exact branch coverage
  add("&R",
      J(p_branch("z", {{"a", p_inaction()}, {"b", p_inaction()}}), "z",
        t_with({{"a", t_one()}, {"b", t_one()}}), "w"),
      J(p_branch("z", {{"a", p_inaction()}}), "z", t_with({{"a", t_one()}, {"b", t_one()}}),
        "w"));

  // &L1
  add("&L1", J(p_select("x", "a", p_inaction()), "z", t_one(), "w")
          .lin("x", t_with({{"a", t_one()}}), "w"),
      J(p_select("x", "b", p_inaction()), "z", t_one(), "w")
          .lin("x", t_with({{"a", t_one()}}), "w"));

  // &L2: selecting into a wider offer
  add("&L2", J(p_select("x", "a", p_inaction()), "z", t_one(), "w")
          .lin("x", t_with({{"a", t_one()}, {"b", plus_a()}}), "w"),
      J(p_select("x", "c", p_inaction()), "z", t_one(), "w")
          .lin("x", t_with({{"a", t_one()}, {"b", t_one()}}), "w"));

  // +R1
  add("+R1", J(p_select("z", "a", p_inaction()), "z", t_plus({{"a", t_one()}}), "w"),
      J(p_select("z", "b", p_inaction()), "z", t_plus({{"a", t_one()}}), "w"));

  // +R2: selecting one label of a wider type
  add("+R2",
      J(p_select("z", "a", p_inaction()), "z", t_plus({{"a", t_one()}, {"b", t_one()}}), "w"),
      J(p_select("z", "c", p_inaction()), "z", t_plus({{"a", t_one()}, {"b", t_one()}}), "w"));

  // +L: cases must cover the type's labels (extras are tolerated)
  add("+L",
      J(p_branch("x", {{"a", p_inaction()}, {"b", p_inaction()}}), "z", t_one(), "w")
          .lin("x", t_plus({{"a", t_one()}, {"b", t_one()}}), "w"),
      J(p_branch("x", {{"a", p_inaction()}}), "z", t_one(), "w")
          .lin("x", t_plus({{"a", t_one()}, {"b", t_one()}}), "w"));

  // !R: the replicated body may not touch linear sessions
  add("!R", J(p_bsend("z", "u", p_repl("u", "y", p_inaction())), "z", t_bang(t_one()), "w"),
      J(p_bsend("z", "u", p_repl("u", "y", p_select("x", "a", p_inaction()))), "z",
        t_bang(t_one()), "w")
          .lin("x", t_with({{"a", t_one()}}), "w"));

  // !L: a replicated session moves to the shared context by input
  add("!L", J(p_recv("x", "u", p_inaction()), "z", t_one(), "w").lin("x", t_bang(t_one()), "w"),
      J(p_bsend("x", "y", p_par(p_inaction(), p_inaction())), "z", t_one(), "w")
          .lin("x", t_bang(t_one()), "w"));

  // copy: spawning requires the shared session's domain to be reachable
  add("copy", J(p_bsend("u", "y", p_inaction()), "z", t_one(), "w").sh("u", t_one(), "w"),
      J(p_bsend("u", "y", p_inaction()), "z", t_one(), "w1").sh("u", t_one(), "w2"));

  // cut: composition demands an accessible domain and an annotation
  add("cut",
      J(p_restrict("x", RestrictAnnot{t_one(), W("w")}, p_par(p_inaction(), p_inaction())),
        "z", t_one(), "w"),
      J(p_restrict("x", RestrictAnnot{plus_a(), W("w2")},
                   p_par(p_select("x", "a", p_inaction()),
                         p_branch("x", {{"a", p_inaction()}}))),
        "z", t_one(), "w1"));

  // cut!: replicated servers use no linear sessions
  add("cut!",
      J(p_restrict("u", RestrictAnnot{t_one(), W("w")},
                   p_par(p_repl("u", "y", p_inaction()), p_inaction())),
        "z", t_one(), "w"),
      J(p_restrict("u", RestrictAnnot{t_one(), W("w")},
                   p_par(p_repl("u", "y", p_select("k", "a", p_inaction())), p_inaction())),
        "z", t_one(), "w")
          .lin("k", t_with({{"a", t_one()}}), "w"));

  // @R: migration needs a direct edge
  add("@R",
      J(p_msend("z", "y", W("w2"), p_inaction()), "z", t_at(W("w2"), t_one()), "w1")
          .om(omega({{"w1", "w2"}})),
      J(p_msend("z", "y", W("w2"), p_inaction()), "z", t_at(W("w2"), t_one()), "w1"));

  // @L: the prefix target must match the type
  add("@L",
      J(p_mrecv("x", "y", W("w3"), p_inaction()), "z", t_one(), "w1")
          .om(omega({{"w1", "w2"}}))
          .lin("x", t_at(W("w3"), t_one()), "w2"),
      J(p_mrecv("x", "y", W("w4"), p_inaction()), "z", t_one(), "w1")
          .om(omega({{"w1", "w2"}}))
          .lin("x", t_at(W("w3"), t_one()), "w2"));

  // allR: the received domain is hypothetically accessible
  add("allR",
      J(p_drecv("z", "a", p_msend("z", "y", DomainTerm::v("a"), p_inaction())), "z",
        t_forall("a", t_at(DomainTerm::v("a"), t_one())), "w"),
      J(p_drecv("z", "a", p_inaction()), "z", t_forall("a", plus_a()), "w"));

  // allL: instantiating needs a direct edge from the session's domain
  add("allL",
      J(p_dsend("x", W("w3"), p_inaction()), "z", t_one(), "w1")
          .om(omega({{"w1", "w2"}, {"w2", "w3"}}))
          .lin("x", t_forall("a", t_one()), "w2"),
      J(p_dsend("x", W("w3"), p_inaction()), "z", t_one(), "w1")
          .om(omega({{"w1", "w2"}}))
          .lin("x", t_forall("a", t_one()), "w2"));

  // exR
  add("exR",
      J(p_dsend("z", W("w2"), p_inaction()), "z", t_exists("a", t_one()), "w1")
          .om(omega({{"w1", "w2"}})),
      J(p_dsend("z", W("w2"), p_inaction()), "z", t_exists("a", t_one()), "w1"));

  // exL
  add("exL",
      J(p_drecv("x", "a", p_inaction()), "z", t_one(), "w1")
          .om(omega({{"w1", "w2"}}))
          .lin("x", t_exists("a", t_one()), "w2"),
      J(p_drecv("x", "a", p_inaction()), "z", t_one(), "w1")
          .om(omega({{"w1", "w2"}}))
          .lin("x", t_exists("a", plus_a()), "w2"));

  // hereR: binds the current domain silently
  add("hereR", J(p_inaction(), "z", t_here("a", t_one()), "w"),
      J(p_inaction(), "z", t_here("a", t_at(DomainTerm::v("a"), t_one())), "w"));

  // hereL
  add("hereL",
      J(p_bsend("x", "y", p_par(p_inaction(), p_inaction())), "z", t_one(), "w")
          .lin("x", t_here("a", t_lolli(t_one(), t_one())), "w"),
      J(p_inaction(), "z", t_one(), "w")
          .lin("x", t_here("a", t_at(DomainTerm::v("a"), t_one())), "w"));

  return cases;
}

}  // namespace dst::testing
