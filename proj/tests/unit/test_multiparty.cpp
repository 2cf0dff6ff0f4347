#include "doctest.h"

#include "dst/mpst.hpp"
#include "dst/precongruence.hpp"
#include "dst/printer.hpp"
#include "gen.hpp"

using namespace dst;

namespace {

DomainTerm W(const std::string& n) { return DomainTerm::c(n); }
std::optional<Payload> base(const std::string& b) { return Payload::b(b); }

GlobalP offload() {
  // mw -> serv { req<data>. serv -> mw { reply<ans>. end } }
  return g_comm("mw", "serv",
                {{"req", base("data"),
                  g_comm("serv", "mw", {{"reply", base("ans"), g_end()}})}});
}

}  // namespace

TEST_CASE("participants") {
  CHECK(participants(g_end()).empty());
  CHECK(participants(g_comm("p", "q", {{"l", base("nat"), g_end()}})) ==
        std::set<Participant>{"p", "q"});

  GlobalP mid = g_comm(
      "cl", "mw",
      {{"request", base("req"),
        g_comm("mw", "cl",
               {{"reply", base("ans"), g_comm("mw", "serv", {{"done", std::nullopt, g_end()}})},
                {"wait", std::nullopt,
                 g_comm("mw", "serv",
                        {{"init", std::nullopt,
                          g_move("mw", {"serv"}, W("w_priv"), offload(),
                                 g_comm("mw", "cl", {{"reply", base("ans"), g_end()}}))}})}})}});
  CHECK(participants(mid) == std::set<Participant>{"cl", "mw", "serv"});
}

TEST_CASE("merge") {
  LocalP snd = l_send("p", {{"a", base("nat"), l_end()}});
  auto m1 = merge(snd, snd);
  REQUIRE(m1.has_value());
  CHECK(local_eq(*m1, snd));

  // receives take the branch union
  LocalP r1 = l_recv("p", {{"a", base("nat"), l_end()}});
  LocalP r2 = l_recv("p", {{"b", base("bool"), l_end()}});
  auto m2 = merge(r1, r2);
  REQUIRE(m2.has_value());
  CHECK(local_eq(*m2, l_recv("p", {{"a", base("nat"), l_end()}, {"b", base("bool"), l_end()}})));

  // two different sends do not merge
  LocalP s2 = l_send("p", {{"b", base("nat"), l_end()}});
  CHECK_FALSE(merge(snd, s2).has_value());

  // shared labels merge recursively
  LocalP r3 = l_recv("p", {{"a", base("nat"), l_recv("q", {{"x", std::nullopt, l_end()}})}});
  LocalP r4 = l_recv("p", {{"a", base("nat"), l_recv("q", {{"y", std::nullopt, l_end()}})}});
  auto m3 = merge(r3, r4);
  REQUIRE(m3.has_value());
  CHECK(local_eq(*m3, l_recv("p", {{"a", base("nat"),
                                    l_recv("q", {{"x", std::nullopt, l_end()},
                                                 {"y", std::nullopt, l_end()}})}})));
}

TEST_CASE("local type fusion") {
  LocalP t = l_send("q", {{"l", base("str"), l_end()}});
  auto f1 = fuse_local(l_end(), t);
  REQUIRE(f1.has_value());
  CHECK(local_eq(*f1, t));

  // fusing a two-branch receive under ex/@ threads the tail into both branches
  LocalP t1 = l_exists("a", l_at(DomainTerm::v("a"),
                                 l_recv("p", {{"l1", base("nat"), l_end()},
                                              {"l2", base("bool"), l_end()}})));
  LocalP t2 = l_at(W("w"), l_send("q", {{"l", base("str"), l_end()}}));
  auto f2 = fuse_local(t1, t2);
  REQUIRE(f2.has_value());
  LocalP expect = l_exists(
      "a", l_at(DomainTerm::v("a"),
                l_recv("p", {{"l1", base("nat"), t2}, {"l2", base("bool"), t2}})));
  CHECK(local_eq(*f2, expect));

  // appending end is the identity
  LocalP s = l_send("p", {{"a", base("nat"), l_end()}});
  auto f3 = fuse_local(s, l_end());
  REQUIRE(f3.has_value());
  CHECK(local_eq(*f3, s));
}

TEST_CASE("projection") {
  CHECK(local_eq(local(project(g_end(), "r")), l_end()));

  auto pm = project(offload(), "mw");
  REQUIRE(ok(pm));
  CHECK(local_eq(local(pm), l_send("serv", {{"req", base("data"),
                                             l_recv("serv", {{"reply", base("ans"), l_end()}})}})));

  // leader projection of a move
  GlobalP mv = g_move("p", {"q"}, W("w"), g_comm("p", "q", {{"go", std::nullopt, g_end()}}),
                      g_end());
  auto pp = project(mv, "p");
  REQUIRE(ok(pp));
  const LocalP& t = local(pp);
  REQUIRE(t->k == LocalType::K::Here);
  REQUIRE(t->body->k == LocalType::K::Exists);
  CHECK(t->body->move_target.has_value());
  CHECK(*t->body->move_target == W("w"));
  REQUIRE(t->body->body->k == LocalType::K::At);
  // the fused tail puts the return migration at the end of the sub-protocol
  const LocalP& inner = t->body->body->body;
  REQUIRE(inner->k == LocalType::K::Send);
  REQUIRE(inner->branches.size() == 1);
  CHECK(inner->branches[0].cont->k == LocalType::K::At);

  // migrants get the universal prefix
  auto pq = project(mv, "q");
  REQUIRE(ok(pq));
  CHECK(local(pq)->body->k == LocalType::K::Forall);

  // non-migrants see only the continuation
  GlobalP mv2 = g_move("p", {"q"}, W("w"), g_comm("p", "q", {{"go", std::nullopt, g_end()}}),
                       g_comm("p", "r", {{"bye", std::nullopt, g_end()}}));
  auto pr = project(mv2, "r");
  REQUIRE(ok(pr));
  CHECK(local_eq(local(pr), l_recv("p", {{"bye", std::nullopt, l_end()}})));
}

TEST_CASE("well-formedness") {
  std::map<Participant, DomainTerm> homes{{"p", W("wp")}, {"q", W("wq")}, {"r", W("wr")}};
  AccessEnv env;
  env.edges.insert({W("wp"), W("w")});
  env.edges.insert({W("wq"), W("w")});

  GlobalP mv = g_move("p", {"q"}, W("w"), g_comm("p", "q", {{"go", std::nullopt, g_end()}}),
                      g_end());
  CHECK(well_formed(mv, homes, env).ok);

  // condition (b): migrant homes must reach the target
  AccessEnv weak;
  weak.edges.insert({W("wp"), W("w")});
  CHECK_FALSE(well_formed(mv, homes, weak).ok);

  // condition (a): all migrants must intervene in the sub-protocol
  GlobalP bad = g_move("p", {"q", "r"}, W("w"),
                       g_comm("p", "q", {{"go", std::nullopt, g_end()}}), g_end());
  CHECK_FALSE(projectable(bad).ok);

  // unmergeable third-party projection
  GlobalP nomerge = g_comm(
      "p", "q",
      {{"l1", base("nat"), g_comm("r", "q", {{"a", base("nat"), g_end()}})},
       {"l2", base("nat"), g_comm("r", "q", {{"b", base("nat"), g_end()}})}});
  CHECK_FALSE(projectable(nomerge).ok);

  CHECK(projectable(g_end()).ok);
}

TEST_CASE("binary translation") {
  CHECK(alpha_eq(to_binary(l_end()), t_one()));
  CHECK(alpha_eq(to_binary(Payload::b("nat")), t_one()));

  LocalP snd = l_send("p", {{"l", base("nat"), l_end()}});
  CHECK(alpha_eq(to_binary(snd), t_plus({{"l", t_tensor(t_one(), t_one())}})));

  LocalP rcv = l_recv("p", {{"l", base("nat"), l_end()}});
  CHECK(alpha_eq(to_binary(rcv), t_with({{"l", t_lolli(t_one(), t_one())}})));

  // payload-free labels elide the exchange
  LocalP bare = l_send("p", {{"l", std::nullopt, l_end()}});
  CHECK(alpha_eq(to_binary(bare), t_plus({{"l", t_one()}})));

  CHECK(alpha_eq(to_binary(l_forall("a", l_end())), t_forall("a", t_one())));
  CHECK(alpha_eq(to_binary(l_at(W("w"), l_end())), t_at(W("w"), t_one())));
  CHECK(alpha_eq(to_binary(l_here("a", l_end())), t_here("a", t_one())));
}

TEST_CASE("pre-congruence") {
  LocalP t = l_send("p", {{"a", base("nat"), l_end()}});
  CHECK(precongruent(t, t));  // reflexive

  // silent here introduction when the variable is unused
  CHECK(precongruent(t, l_here("al", t)));
  CHECK_FALSE(precongruent(t, l_here("al", l_at(DomainTerm::v("al"), t))));

  // merge widening on receives
  LocalP r1 = l_recv("p", {{"a", base("nat"), l_end()}});
  LocalP r2 = l_recv("p", {{"a", base("nat"), l_end()}, {"b", base("bool"), l_end()}});
  CHECK(precongruent(r1, r2));
  CHECK_FALSE(precongruent(r2, r1));

  // here elimination instantiates the bound domain
  LocalP h = l_here("al", l_at(DomainTerm::v("al"), l_end()));
  CHECK(precongruent(h, l_at(W("w"), l_end())));

  // label renaming is out
  LocalP r3 = l_recv("p", {{"c", base("nat"), l_end()}});
  CHECK_FALSE(precongruent(r1, r3));
}

TEST_CASE("merge commutativity and idempotence") {
  testing::Gen gen(61);
  for (int i = 0; i < 500; ++i) {
    LocalP a = gen.local(8);
    LocalP b = gen.local(8);
    auto ab = merge(a, b);
    auto ba = merge(b, a);
    CHECK(ab.has_value() == ba.has_value());
    if (ab && ba) CHECK(local_eq(*ab, *ba));

    auto aa = merge(a, a);
    if (aa) CHECK(local_eq(*aa, a));
  }
}

TEST_CASE("fusion associativity on the defined fragment") {
  testing::Gen gen(67);
  int defined = 0;
  for (int i = 0; i < 500; ++i) {
    LocalP a = gen.local(6);
    LocalP b = gen.local(6);
    LocalP c = gen.local(6);
    auto ab = fuse_local(a, b);
    auto bc = fuse_local(b, c);
    if (!ab || !bc) continue;
    auto l = fuse_local(*ab, c);
    auto r = fuse_local(a, *bc);
    REQUIRE(l.has_value());
    REQUIRE(r.has_value());
    CHECK(local_eq(*l, *r));
    ++defined;
  }
  CHECK(defined > 400);
}

TEST_CASE("projection of an absent participant is end") {
  GlobalP g = offload();
  auto pr = project(g, "outsider");
  REQUIRE(ok(pr));
  CHECK(local_eq(local(pr), l_end()));
}

TEST_CASE("binary translation size bound") {
  testing::Gen gen(71);
  for (int i = 0; i < 300; ++i) {
    LocalP t = gen.local(10);
    TypeP b = to_binary(t);
    std::function<size_t(const TypeP&)> tsize = [&](const TypeP& x) -> size_t {
      if (!x) return 0;
      size_t n = 1 + tsize(x->left) + tsize(x->body);
      for (const auto& br : x->branches) n += tsize(br.type);
      return n;
    };
    CHECK(tsize(b) <= 2 * size_of(t) + 1);
  }
}

TEST_CASE("pre-congruence is reflexive and transitive on samples") {
  testing::Gen gen(73);
  for (int i = 0; i < 150; ++i) {
    LocalP a = gen.local(6);
    CHECK(precongruent(a, a));
    // build a chain a <= b <= c by widening and here-introduction
    LocalP b = a;
    if (a->k == LocalType::K::Recv) {
      auto wide = a->branches;
      wide.push_back({"zz", std::nullopt, l_end()});
      b = l_recv(a->peer, wide);
    }
    LocalP c = l_here("hv", b);
    CHECK(precongruent(a, b));
    CHECK(precongruent(b, c));
    CHECK(precongruent(a, c));
  }
}
