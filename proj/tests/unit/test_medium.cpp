#include "doctest.h"

#include "corpus.hpp"
#include "dst/dynamics.hpp"
#include "dst/harness.hpp"
#include "dst/medium.hpp"
#include "dst/printer.hpp"
#include "dst/syntax.hpp"

using namespace dst;

namespace {

DomainTerm W(const std::string& n) { return DomainTerm::c(n); }

const GlobalP& by_name(const std::string& n) {
  static auto globals = testing::corpus_globals();
  for (const auto& cg : globals)
    if (cg.name == n) return cg.g;
  static GlobalP none;
  REQUIRE(false);
  return none;
}

}  // namespace

TEST_CASE("process fusion") {
  ProcP q = p_select("c", "l", p_inaction());

  auto f0 = fuse_proc(p_inaction(), q);
  REQUIRE(ok(f0));
  CHECK(alpha_eq(fused(f0), q));

  // branches distribute
  ProcP br = p_branch("c", {{"l1", p_inaction()}, {"l2", p_recv("c", "y", p_inaction())}});
  auto f1 = fuse_proc(br, q);
  REQUIRE(ok(f1));
  CHECK(alpha_eq(fused(f1),
                 p_branch("c", {{"l1", q}, {"l2", p_recv("c", "y", q)}})));

  // the output-with-forwarder clause
  ProcP ow = p_bsend("c", "v", p_par(p_fwd("u", "v"), p_inaction()));
  auto f2 = fuse_proc(ow, q);
  REQUIRE(ok(f2));
  CHECK(alpha_eq(fused(f2), p_bsend("c", "v", p_par(p_fwd("u", "v"), q))));

  // a bare forwarder matches no clause
  auto f3 = fuse_proc(p_fwd("x", "y"), q);
  CHECK_FALSE(ok(f3));
  CHECK(std::get<FuseError>(f3).blocking == "forwarder");
}

TEST_CASE("medium of end and of a single communication") {
  GlobalP end = g_end();
  MediumConfig cfg0 = MediumConfig::defaults(end);
  auto m0 = medium(end, cfg0);
  REQUIRE(std::holds_alternative<ProcP>(m0));
  CHECK(alpha_eq(std::get<ProcP>(m0), p_inaction()));

  GlobalP g = by_name("simple_comm");
  MediumConfig cfg = MediumConfig::defaults(g);
  auto m = medium(g, cfg);
  REQUIRE(std::holds_alternative<ProcP>(m));
  ProcP expect = p_branch(
      "c_p", {{"l", p_recv("c_p", "u",
                           p_select("c_q", "l",
                                    p_bsend("c_q", "v",
                                            p_par(p_fwd("u", "v"), p_inaction()))))}});
  CHECK(alpha_eq(std::get<ProcP>(m), expect));
}

TEST_CASE("medium of the middleware protocol matches the worked reference") {
  GlobalP g = by_name("middleware");
  MediumConfig cfg = MediumConfig::defaults(g);
  auto m = medium(g, cfg);
  REQUIRE(std::holds_alternative<ProcP>(m));
  CHECK(alpha_eq(std::get<ProcP>(m), testing::middleware_reference_medium()));
}

TEST_CASE("compositional judgment of a single communication") {
  GlobalP g = by_name("simple_comm");
  MediumConfig cfg = MediumConfig::defaults(g);
  auto jr = medium_judgment(g, cfg);
  REQUIRE(std::holds_alternative<Judgment>(jr));
  const Judgment& j = std::get<Judgment>(jr);

  CHECK(j.delta.size() == 2);
  CHECK(alpha_eq(j.type, t_one()));
  CHECK(j.dom == cfg.medium_domain);
  const CtxEntry* cp = j.delta.find("c_p");
  REQUIRE(cp);
  CHECK(alpha_eq(cp->type, t_plus({{"l", t_tensor(t_one(), t_one())}})));
  const CtxEntry* cq = j.delta.find("c_q");
  REQUIRE(cq);
  CHECK(alpha_eq(cq->type, t_with({{"l", t_lolli(t_one(), t_one())}})));
  CHECK(j.omega.edges.size() == 2);

  // end: empty judgment
  auto j0 = medium_judgment(g_end(), MediumConfig::defaults(g_end()));
  REQUIRE(std::holds_alternative<Judgment>(j0));
  CHECK(std::get<Judgment>(j0).delta.empty());
}

TEST_CASE("mediums of all corpus protocols are well-typed") {
  for (const auto& cg : testing::corpus_globals()) {
    CAPTURE(cg.name);
    MediumConfig cfg = MediumConfig::defaults(cg.g);
    auto res = verify_medium(cg.g, cfg);
    if (std::holds_alternative<TypeError>(res)) CAPTURE(std::get<TypeError>(res).message);
    if (std::holds_alternative<MediumError>(res)) CAPTURE(std::get<MediumError>(res).message);
    CHECK(std::holds_alternative<DerivP>(res));
    if (std::holds_alternative<DerivP>(res)) {
      auto problems = audit_derivation(std::get<DerivP>(res));
      if (!problems.empty()) CAPTURE(problems[0]);
      CHECK(problems.empty());
    }
  }
}

TEST_CASE("medium type witnesses") {
  for (const auto& cg : testing::corpus_globals()) {
    CAPTURE(cg.name);
    MediumConfig cfg = MediumConfig::defaults(cg.g);

    std::map<Participant, TypeP> assigned;
    std::map<Participant, LocalP> witnesses;
    for (const auto& p : participants(cg.g)) {
      auto pr = project(cg.g, p);
      REQUIRE(ok(pr));
      witnesses[p] = local(pr);
      assigned[p] = to_binary(local(pr));
    }
    CHECK(check_medium_types(cg.g, assigned, witnesses));

    // widened witness: an extra branch in some receive still relates
    bool widened = false;
    for (auto& [p, t] : witnesses) {
      if (t->k == LocalType::K::Recv) {
        auto bs = t->branches;
        bs.push_back({"extra_label", std::nullopt, l_end()});
        witnesses[p] = l_recv(t->peer, bs);
        assigned[p] = to_binary(witnesses[p]);
        widened = true;
        break;
      }
    }
    if (widened) CHECK(check_medium_types(cg.g, assigned, witnesses));

    // a renamed label anywhere breaks the relation
    std::function<LocalP(const LocalP&, bool&)> rename = [&](const LocalP& t,
                                                             bool& done) -> LocalP {
      if (!t || done) return t;
      auto copy = std::make_shared<LocalType>(*t);
      if (!copy->branches.empty()) {
        copy->branches[0].label = "renamed_label";
        done = true;
        return copy;
      }
      if (copy->body) copy->body = rename(copy->body, done);
      return copy;
    };
    bool perturbed = false;
    for (auto& [p, t] : witnesses) {
      bool done = false;
      LocalP broken = rename(t, done);
      if (done) {
        witnesses[p] = broken;
        assigned[p] = to_binary(broken);
        perturbed = true;
        break;
      }
    }
    if (perturbed) CHECK_FALSE(check_medium_types(cg.g, assigned, witnesses));
  }
}

TEST_CASE("composition with canonical implementations") {
  // end: nothing to compose, the system is the medium itself
  auto sys0 = compose_system(g_end(), MediumConfig::defaults(g_end()), {});
  REQUIRE(std::holds_alternative<ProcP>(sys0));
  CHECK(alpha_eq(std::get<ProcP>(sys0), p_inaction()));

  // single communication: closed, runs to a non-live state quickly
  GlobalP g = by_name("simple_comm");
  MediumConfig cfg = MediumConfig::defaults(g);
  std::map<Participant, ProcP> impls;
  for (const auto& p : participants(g)) {
    auto impl = canonical_impl(g, p, cfg, first_label());
    REQUIRE(std::holds_alternative<ProcP>(impl));
    impls[p] = std::get<ProcP>(impl);
  }
  auto sys = compose_system(g, cfg, impls);
  REQUIRE(std::holds_alternative<ProcP>(sys));
  Trace tr = run(std::get<ProcP>(sys), 8, RunStrategy::DeterministicFirst);
  CHECK(tr.terminal);
  CHECK_FALSE(is_live(tr.final));
  CHECK(tr.steps.size() <= 8);
}

TEST_CASE("the middleware offload path runs through both migrations") {
  GlobalP g = by_name("middleware");
  MediumConfig cfg = MediumConfig::defaults(g);
  std::map<Participant, ProcP> impls;
  for (const auto& p : participants(g)) {
    LabelChooser choose = p == "mw"
                              ? scripted_labels({"wait", "init", "req", "reply", "reply"})
                              : first_label();
    auto impl = canonical_impl(g, p, cfg, choose);
    REQUIRE(std::holds_alternative<ProcP>(impl));
    impls[p] = std::get<ProcP>(impl);
  }
  auto sys = compose_system(g, cfg, impls);
  if (std::holds_alternative<ComposeError>(sys))
    CAPTURE(std::get<ComposeError>(sys).error.message);
  REQUIRE(std::holds_alternative<ProcP>(sys));

  Trace tr = run(std::get<ProcP>(sys), 64, RunStrategy::DeterministicFirst);
  CHECK(tr.terminal);
  CHECK_FALSE(is_live(tr.final));
  // both the outbound and the return migrations of mw and serv fire: the
  // run passes through at least four migration synchronizations
  size_t migrations = 0;
  for (const auto& st : tr.steps) {
    ProcSpine before = spine_of(normalize(st.before));
    ProcSpine after = spine_of(normalize(st.after));
    size_t mig_before = 0, mig_after = 0;
    for (const auto& c : before.comps) mig_before += c->k == Process::K::MigrateSend ? 1 : 0;
    for (const auto& c : after.comps) mig_after += c->k == Process::K::MigrateSend ? 1 : 0;
    if (mig_after < mig_before) ++migrations;
  }
  CHECK(migrations >= 4);
}

TEST_CASE("context fusion stacks like the whole-protocol projection") {
  // for each migrant of each Move, the fused local type translated to a
  // binary type equals the inner type of the whole-G projection
  for (const auto& cg : testing::corpus_globals()) {
    std::function<void(const GlobalP&)> walk = [&](const GlobalP& g) {
      if (!g) return;
      if (g->k == GlobalType::K::Comm) {
        for (const auto& b : g->branches) walk(b.cont);
        return;
      }
      if (g->k != GlobalType::K::Move) return;
      std::vector<Participant> movers{g->leader};
      for (const auto& q : g->migrants) movers.push_back(q);
      for (const auto& r : movers) {
        CAPTURE(cg.name);
        CAPTURE(r);
        auto p1 = project(g->sub, r);
        auto p2 = project(g->cont, r);
        REQUIRE(ok(p1));
        REQUIRE(ok(p2));
        // route 1: fuse the phases, then translate
        DomainTerm home = W("w_home");
        auto fusedT = fuse_local(local(p1), l_at(home, local(p2)));
        REQUIRE(fusedT.has_value());
        TypeP route1 = to_binary(*fusedT);
        // route 2: strip the whole-G projection down to the fused core
        auto whole = project(g, r);
        REQUIRE(ok(whole));
        LocalP t = local(whole);
        REQUIRE(t->k == LocalType::K::Here);
        LocalP stripped = subst_domain(t->body, home, t->var);
        REQUIRE((stripped->k == LocalType::K::Exists || stripped->k == LocalType::K::Forall));
        stripped = stripped->body;
        REQUIRE(stripped->k == LocalType::K::At);
        TypeP route2 = to_binary(stripped->body);
        CHECK(alpha_eq(route1, route2));
      }
      walk(g->sub);
      walk(g->cont);
    };
    walk(cg.g);
  }
}

TEST_CASE("the medium is linear in the protocol") {
  // Four prefixes per relayed branch; a migration adds the domain
  // exchange, the outbound migrations, and - grafted at every terminated
  // leaf of the sub-protocol - the return migrations and the continuation
  // medium.  The bound follows that recursion exactly.
  std::function<size_t(const GlobalP&)> leaves = [&](const GlobalP& g) -> size_t {
    if (!g || g->k == GlobalType::K::End) return 1;
    if (g->k == GlobalType::K::Comm) {
      size_t n = 0;
      for (const auto& b : g->branches) n += leaves(b.cont);
      return n;
    }
    return leaves(g->sub) * leaves(g->cont);
  };
  std::function<size_t(const GlobalP&)> bound = [&](const GlobalP& g) -> size_t {
    if (!g || g->k == GlobalType::K::End) return 0;
    if (g->k == GlobalType::K::Comm) {
      size_t n = 0;
      for (const auto& b : g->branches) n += 4 + bound(b.cont);
      return n;
    }
    size_t migr = g->migrants.size();
    return (1 + migr) + (1 + migr) + bound(g->sub) +
           leaves(g->sub) * ((1 + migr) + bound(g->cont));
  };
  for (const auto& cg : testing::corpus_globals()) {
    CAPTURE(cg.name);
    MediumConfig cfg = MediumConfig::defaults(cg.g);
    auto m = medium(cg.g, cfg);
    REQUIRE(std::holds_alternative<ProcP>(m));
    CHECK(prefix_count(std::get<ProcP>(m)) <= bound(cg.g));

    // move-free protocols are linear in the raw branch count
    bool has_move = false;
    std::function<void(const GlobalP&)> scan = [&](const GlobalP& g) {
      if (!g) return;
      has_move |= g->k == GlobalType::K::Move;
      for (const auto& b : g->branches) scan(b.cont);
      scan(g->sub);
      scan(g->cont);
    };
    scan(cg.g);
    if (!has_move) {
      size_t branches = 0;
      std::function<void(const GlobalP&)> count = [&](const GlobalP& g) {
        if (!g) return;
        branches += g->branches.size();
        for (const auto& b : g->branches) count(b.cont);
      };
      count(cg.g);
      CHECK(prefix_count(std::get<ProcP>(m)) <= 4 * branches);
    }
  }
}

TEST_CASE("the middleware judgment assigns the fused migration types") {
  GlobalP g = by_name("middleware");
  MediumConfig cfg = MediumConfig::defaults(g);
  auto jr = medium_judgment(g, cfg);
  REQUIRE(std::holds_alternative<Judgment>(jr));
  const Judgment& j = std::get<Judgment>(jr);
  REQUIRE(j.delta.size() == 3);

  // the client never migrates: a plain selection type
  const CtxEntry* cl = j.delta.find(cfg.name_map.at("cl"));
  REQUIRE(cl);
  CHECK(cl->type->k == Type::K::Plus);

  // middleware and server types bind the current domain and quantify the
  // migration target inside the wait path
  for (const char* who : {"mw", "serv"}) {
    const CtxEntry* e = j.delta.find(cfg.name_map.at(who));
    REQUIRE(e);
    std::function<bool(const TypeP&, Type::K)> contains = [&](const TypeP& t, Type::K k) {
      if (!t) return false;
      if (t->k == k) return true;
      if (contains(t->left, k) || contains(t->body, k)) return true;
      for (const auto& b : t->branches)
        if (contains(b.type, k)) return true;
      return false;
    };
    CHECK(contains(e->type, Type::K::Here));
    CHECK(contains(e->type, Type::K::At));
    CHECK(contains(e->type, std::string(who) == "mw" ? Type::K::Exists : Type::K::Forall));
  }

  // the accessibility hypotheses: one edge per home into the medium's
  // domain plus the migrants' move edges
  CHECK(j.omega.edges.size() == 5);
  CHECK(j.omega.config == equivalence_closure());
}
