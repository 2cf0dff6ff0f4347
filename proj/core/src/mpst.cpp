#include "dst/mpst.hpp"

#include <algorithm>
#include <map>

#include "dst/syntax.hpp"

namespace dst {

GlobalP g_end() {
  static const GlobalP e = std::make_shared<GlobalType>();
  return e;
}

GlobalP g_comm(Participant p, Participant q, std::vector<GBranch> bs) {
  auto g = std::make_shared<GlobalType>();
  g->k = GlobalType::K::Comm;
  g->from = std::move(p);
  g->to = std::move(q);
  g->branches = std::move(bs);
  return g;
}

GlobalP g_move(Participant p, std::vector<Participant> qs, DomainTerm w, GlobalP g1, GlobalP g2) {
  auto g = std::make_shared<GlobalType>();
  g->k = GlobalType::K::Move;
  g->leader = std::move(p);
  g->migrants = std::move(qs);
  g->target = std::move(w);
  g->sub = std::move(g1);
  g->cont = std::move(g2);
  return g;
}

LocalP l_end() {
  static const LocalP e = std::make_shared<LocalType>();
  return e;
}

static LocalP mk_branching(LocalType::K k, Participant p, std::vector<LBranch> bs) {
  auto t = std::make_shared<LocalType>();
  t->k = k;
  t->peer = std::move(p);
  t->branches = std::move(bs);
  return t;
}

LocalP l_recv(Participant p, std::vector<LBranch> bs) {
  return mk_branching(LocalType::K::Recv, std::move(p), std::move(bs));
}

LocalP l_send(Participant p, std::vector<LBranch> bs) {
  return mk_branching(LocalType::K::Send, std::move(p), std::move(bs));
}

LocalP l_forall(std::string a, LocalP t) {
  auto r = std::make_shared<LocalType>();
  r->k = LocalType::K::Forall;
  r->var = std::move(a);
  r->body = std::move(t);
  return r;
}

LocalP l_exists(std::string a, LocalP t) {
  auto r = std::make_shared<LocalType>();
  r->k = LocalType::K::Exists;
  r->var = std::move(a);
  r->body = std::move(t);
  return r;
}

LocalP l_exists(std::string a, LocalP t, DomainTerm target) {
  auto r = std::make_shared<LocalType>();
  r->k = LocalType::K::Exists;
  r->var = std::move(a);
  r->body = std::move(t);
  r->move_target = std::move(target);
  return r;
}

LocalP l_at(DomainTerm w, LocalP t) {
  auto r = std::make_shared<LocalType>();
  r->k = LocalType::K::At;
  r->dom = std::move(w);
  r->body = std::move(t);
  return r;
}

LocalP l_here(std::string a, LocalP t) {
  auto r = std::make_shared<LocalType>();
  r->k = LocalType::K::Here;
  r->var = std::move(a);
  r->body = std::move(t);
  return r;
}

namespace {

using LK = LocalType::K;

bool leq(const LocalP& a, const LocalP& b, std::map<std::string, int>& la,
         std::map<std::string, int>& lb, int& next);

bool peq(const Payload& a, const Payload& b, std::map<std::string, int>& la,
         std::map<std::string, int>& lb, int& next) {
  if (a.k != b.k) return false;
  if (a.k == Payload::K::Base) return a.base == b.base;
  return leq(a.session, b.session, la, lb, next);
}

bool dom_eq2(const DomainTerm& x, const DomainTerm& y, const std::map<std::string, int>& la,
             const std::map<std::string, int>& lb) {
  if (x.kind != y.kind) return false;
  if (x.is_const()) return x.name == y.name;
  auto ia = la.find(x.name);
  auto ib = lb.find(y.name);
  if ((ia != la.end()) != (ib != lb.end())) return false;
  if (ia != la.end()) return ia->second == ib->second;
  return x.name == y.name;
}

bool leq(const LocalP& a, const LocalP& b, std::map<std::string, int>& la,
         std::map<std::string, int>& lb, int& next) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->k != b->k) return false;
  switch (a->k) {
    case LK::End:
      return true;
    case LK::Recv:
    case LK::Send: {
      if (a->peer != b->peer) return false;
      if (a->branches.size() != b->branches.size()) return false;
      auto sa = a->branches;
      auto sb = b->branches;
      auto by_label = [](const LBranch& x, const LBranch& y) { return x.label < y.label; };
      std::sort(sa.begin(), sa.end(), by_label);
      std::sort(sb.begin(), sb.end(), by_label);
      for (size_t i = 0; i < sa.size(); ++i) {
        if (sa[i].label != sb[i].label) return false;
        if (sa[i].payload.has_value() != sb[i].payload.has_value()) return false;
        if (sa[i].payload && !peq(*sa[i].payload, *sb[i].payload, la, lb, next)) return false;
        if (!leq(sa[i].cont, sb[i].cont, la, lb, next)) return false;
      }
      return true;
    }
    case LK::At:
      return dom_eq2(a->dom, b->dom, la, lb) && leq(a->body, b->body, la, lb, next);
    case LK::Forall:
    case LK::Exists:
    case LK::Here: {
      auto sa = la;
      auto sb = lb;
      sa[a->var] = next;
      sb[b->var] = next;
      int n2 = next + 1;
      return leq(a->body, b->body, sa, sb, n2);
    }
  }
  return false;
}

}  // namespace

bool local_eq(const LocalP& a, const LocalP& b) {
  std::map<std::string, int> la, lb;
  int next = 0;
  return leq(a, b, la, lb, next);
}

bool payload_eq(const Payload& a, const Payload& b) {
  std::map<std::string, int> la, lb;
  int next = 0;
  return peq(a, b, la, lb, next);
}

bool global_eq(const GlobalP& a, const GlobalP& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->k != b->k) return false;
  switch (a->k) {
    case GlobalType::K::End:
      return true;
    case GlobalType::K::Comm: {
      if (a->from != b->from || a->to != b->to) return false;
      if (a->branches.size() != b->branches.size()) return false;
      for (size_t i = 0; i < a->branches.size(); ++i) {
        const auto& x = a->branches[i];
        const auto& y = b->branches[i];
        if (x.label != y.label) return false;
        if (x.payload.has_value() != y.payload.has_value()) return false;
        if (x.payload && !payload_eq(*x.payload, *y.payload)) return false;
        if (!global_eq(x.cont, y.cont)) return false;
      }
      return true;
    }
    case GlobalType::K::Move:
      return a->leader == b->leader && a->migrants == b->migrants && a->target == b->target &&
             global_eq(a->sub, b->sub) && global_eq(a->cont, b->cont);
  }
  return false;
}

LocalP subst_domain(const LocalP& t, const DomainTerm& w, const std::string& a) {
  if (!t) return t;
  auto subd = [&](const DomainTerm& d) { return (d.is_var() && d.name == a) ? w : d; };
  switch (t->k) {
    case LK::End:
      return t;
    case LK::Recv:
    case LK::Send: {
      std::vector<LBranch> bs;
      bs.reserve(t->branches.size());
      for (const auto& b : t->branches) {
        std::optional<Payload> pl = b.payload;
        if (pl && pl->k == Payload::K::Session) pl = Payload::s(subst_domain(pl->session, w, a));
        bs.push_back({b.label, pl, subst_domain(b.cont, w, a)});
      }
      return mk_branching(t->k, t->peer, std::move(bs));
    }
    case LK::At:
      return l_at(subd(t->dom), subst_domain(t->body, w, a));
    case LK::Forall:
    case LK::Exists:
    case LK::Here: {
      if (t->var == a) return t;
      std::string v = t->var;
      LocalP body = t->body;
      if (w.is_var() && w.name == v) {
        auto avoid = free_domain_vars(body);
        avoid.insert(w.name);
        avoid.insert(a);
        v = fresh_name(v, {avoid.begin(), avoid.end()});
        body = subst_domain(body, DomainTerm::v(v), t->var);
      }
      body = subst_domain(body, w, a);
      auto r = std::make_shared<LocalType>(*t);
      r->var = v;
      r->body = body;
      if (r->move_target && r->move_target->is_var() && r->move_target->name == a)
        r->move_target = w;
      return r;
    }
  }
  return t;
}

std::set<std::string> free_domain_vars(const LocalP& t) {
  std::set<std::string> out;
  if (!t) return out;
  switch (t->k) {
    case LK::End:
      return out;
    case LK::Recv:
    case LK::Send:
      for (const auto& b : t->branches) {
        if (b.payload && b.payload->k == Payload::K::Session)
          for (const auto& v : free_domain_vars(b.payload->session)) out.insert(v);
        for (const auto& v : free_domain_vars(b.cont)) out.insert(v);
      }
      return out;
    case LK::At:
      if (t->dom.is_var()) out.insert(t->dom.name);
      for (const auto& v : free_domain_vars(t->body)) out.insert(v);
      return out;
    case LK::Forall:
    case LK::Exists:
    case LK::Here: {
      auto inner = free_domain_vars(t->body);
      inner.erase(t->var);
      return inner;
    }
  }
  return out;
}

size_t size_of(const LocalP& t) {
  if (!t) return 0;
  size_t n = 1;
  for (const auto& b : t->branches) {
    if (b.payload && b.payload->k == Payload::K::Session) n += size_of(b.payload->session);
    if (b.payload && b.payload->k == Payload::K::Base) n += 1;
    n += size_of(b.cont);
  }
  n += size_of(t->body);
  return n;
}

size_t size_of(const GlobalP& g) {
  if (!g) return 0;
  size_t n = 1;
  for (const auto& b : g->branches) n += 1 + size_of(b.cont);
  n += size_of(g->sub);
  n += size_of(g->cont);
  return n;
}

std::set<Participant> participants(const GlobalP& g) {
  std::set<Participant> out;
  if (!g) return out;
  switch (g->k) {
    case GlobalType::K::End:
      return out;
    case GlobalType::K::Comm:
      out.insert(g->from);
      out.insert(g->to);
      for (const auto& b : g->branches)
        for (const auto& r : participants(b.cont)) out.insert(r);
      return out;
    case GlobalType::K::Move:
      out.insert(g->leader);
      for (const auto& q : g->migrants) out.insert(q);
      for (const auto& r : participants(g->sub)) out.insert(r);
      for (const auto& r : participants(g->cont)) out.insert(r);
      return out;
  }
  return out;
}

std::optional<Payload> merge(const Payload& a, const Payload& b) {
  if (a.k != b.k) return std::nullopt;
  if (a.k == Payload::K::Base) {
    if (a.base == b.base) return a;
    return std::nullopt;
  }
  auto m = merge(a.session, b.session);
  if (!m) return std::nullopt;
  return Payload::s(*m);
}

std::optional<LocalP> merge(const LocalP& a, const LocalP& b) {
  if (!a || !b) return std::nullopt;
  // item 2: receives merge by branch union, recursively on shared labels
  if (a->k == LK::Recv && b->k == LK::Recv && a->peer == b->peer) {
    std::vector<LBranch> out = a->branches;
    for (const auto& bb : b->branches) {
      LBranch* shared = nullptr;
      for (auto& ab : out)
        if (ab.label == bb.label) shared = &ab;
      if (!shared) {
        out.push_back(bb);
        continue;
      }
      if (shared->payload.has_value() != bb.payload.has_value()) return std::nullopt;
      std::optional<Payload> pl;
      if (shared->payload) {
        auto m = merge(*shared->payload, *bb.payload);
        if (!m) return std::nullopt;
        pl = *m;
      }
      auto mc = merge(shared->cont, bb.cont);
      if (!mc) return std::nullopt;
      shared->payload = pl;
      shared->cont = *mc;
    }
    return l_recv(a->peer, std::move(out));
  }
  // item 1: identical terminated / selection / hybrid types
  switch (a->k) {
    case LK::End:
    case LK::Send:
    case LK::At:
    case LK::Forall:
    case LK::Exists:
      if (local_eq(a, b)) return a;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<LocalP> fuse_local(const LocalP& a, const LocalP& b) {
  if (!a || !b) return std::nullopt;
  switch (a->k) {
    case LK::End:
      return b;
    case LK::Recv:
    case LK::Send: {
      std::vector<LBranch> bs;
      bs.reserve(a->branches.size());
      for (const auto& br : a->branches) {
        auto f = fuse_local(br.cont, b);
        if (!f) return std::nullopt;
        bs.push_back({br.label, br.payload, *f});
      }
      return mk_branching(a->k, a->peer, std::move(bs));
    }
    case LK::Forall:
    case LK::Exists:
    case LK::Here:
    case LK::At: {
      // avoid capturing b's free variables under a's binder
      LocalP body = a->body;
      std::string v = a->var;
      if (a->k != LK::At) {
        auto fv = free_domain_vars(b);
        if (fv.count(v)) {
          auto avoid = free_domain_vars(body);
          for (const auto& x : fv) avoid.insert(x);
          v = fresh_name(v, {avoid.begin(), avoid.end()});
          body = subst_domain(body, DomainTerm::v(v), a->var);
        }
      }
      auto f = fuse_local(body, b);
      if (!f) return std::nullopt;
      auto r = std::make_shared<LocalType>(*a);
      r->var = v;
      r->body = *f;
      return LocalP(r);
    }
  }
  return std::nullopt;
}

namespace {

void collect_domains(const GlobalP& g, NameSet& out) {
  if (!g) return;
  if (g->k == GlobalType::K::Move) {
    out.insert(g->target.name);
    collect_domains(g->sub, out);
    collect_domains(g->cont, out);
    return;
  }
  for (const auto& b : g->branches) {
    if (b.payload && b.payload->k == Payload::K::Session) {
      for (const auto& v : free_domain_vars(b.payload->session)) out.insert(v);
    }
    collect_domains(b.cont, out);
  }
}

ProjResult proj_fail(const Participant& r, std::string msg) {
  return ProjError{r, std::move(msg)};
}

}  // namespace

ProjResult project(const GlobalP& g, const Participant& r) {
  if (!g) return proj_fail(r, "missing global type");
  switch (g->k) {
    case GlobalType::K::End:
      return l_end();
    case GlobalType::K::Comm: {
      std::vector<LBranch> bs;
      std::vector<LocalP> merged;
      for (const auto& b : g->branches) {
        auto sub = project(b.cont, r);
        if (!ok(sub)) return sub;
        if (r == g->from || r == g->to) {
          bs.push_back({b.label, b.payload, local(sub)});
        } else {
          merged.push_back(local(sub));
        }
      }
      if (r == g->from) return l_send(g->to, std::move(bs));
      if (r == g->to) return l_recv(g->from, std::move(bs));
      LocalP acc = merged.front();
      for (size_t i = 1; i < merged.size(); ++i) {
        auto m = merge(acc, merged[i]);
        if (!m)
          return proj_fail(r, "branches " + g->branches[0].label + "/" +
                                  g->branches[i].label + " of " + g->from + "->" + g->to +
                                  " do not merge for " + r);
        acc = *m;
      }
      return acc;
    }
    case GlobalType::K::Move: {
      bool migrant = false;
      for (const auto& q : g->migrants) migrant |= (q == r);
      if (r != g->leader && !migrant) return project(g->cont, r);

      auto s1 = project(g->sub, r);
      if (!ok(s1)) return s1;
      auto s2 = project(g->cont, r);
      if (!ok(s2)) return s2;

      NameSet used;
      collect_domains(g, used);
      for (const auto& v : free_domain_vars(local(s1))) used.insert(v);
      for (const auto& v : free_domain_vars(local(s2))) used.insert(v);
      std::string alpha = fresh_name("a", used);
      used.insert(alpha);
      std::string beta = fresh_name("b", used);

      LocalP inner;
      if (r == g->leader)
        inner = l_exists(alpha, l_at(DomainTerm::v(alpha), local(s1)), g->target);
      else
        inner = l_forall(alpha, l_at(DomainTerm::v(alpha), local(s1)));
      auto fusedT = fuse_local(inner, l_at(DomainTerm::v(beta), local(s2)));
      if (!fusedT) return proj_fail(r, "migration phases do not fuse for " + r);
      return l_here(beta, *fusedT);
    }
  }
  return proj_fail(r, "unreachable");
}

namespace {

void wf_structural(const GlobalP& g, WfReport& rep) {
  if (!g) return;
  switch (g->k) {
    case GlobalType::K::End:
      return;
    case GlobalType::K::Comm: {
      if (g->from == g->to) {
        rep.ok = false;
        rep.diagnostics.push_back("reflexive interaction " + g->from + "->" + g->to);
      }
      if (g->branches.empty()) {
        rep.ok = false;
        rep.diagnostics.push_back("empty branch set in " + g->from + "->" + g->to);
      }
      std::set<std::string> labels;
      for (const auto& b : g->branches) {
        if (!labels.insert(b.label).second) {
          rep.ok = false;
          rep.diagnostics.push_back("duplicate label " + b.label + " in " + g->from + "->" +
                                    g->to);
        }
        wf_structural(b.cont, rep);
      }
      return;
    }
    case GlobalType::K::Move: {
      std::set<Participant> movers{g->leader};
      for (const auto& q : g->migrants) {
        if (q == g->leader) {
          rep.ok = false;
          rep.diagnostics.push_back("leader " + g->leader + " listed among migrants");
        }
        if (!movers.insert(q).second) {
          rep.ok = false;
          rep.diagnostics.push_back("migrant " + q + " listed twice");
        }
      }
      auto subparts = participants(g->sub);
      if (subparts != movers) {
        rep.ok = false;
        rep.diagnostics.push_back(
            "migrating participants must be exactly the participants of the sub-protocol");
      }
      wf_structural(g->sub, rep);
      wf_structural(g->cont, rep);
      return;
    }
  }
}

void wf_moves(const GlobalP& g, const std::map<Participant, DomainTerm>& homes,
              const AccessEnv& env, WfReport& rep) {
  if (!g) return;
  if (g->k == GlobalType::K::Comm) {
    for (const auto& b : g->branches) wf_moves(b.cont, homes, env, rep);
    return;
  }
  if (g->k == GlobalType::K::Move) {
    std::vector<Participant> movers{g->leader};
    for (const auto& q : g->migrants) movers.push_back(q);
    for (const auto& r : movers) {
      auto it = homes.find(r);
      if (it == homes.end()) {
        rep.ok = false;
        rep.diagnostics.push_back("no home domain for migrating participant " + r);
        continue;
      }
      if (!reaches(env, it->second, g->target)) {
        rep.ok = false;
        rep.diagnostics.push_back("domain " + g->target.name + " is not accessible from " +
                                  it->second.name + " (home of " + r + ")");
      }
    }
    wf_moves(g->sub, homes, env, rep);
    wf_moves(g->cont, homes, env, rep);
  }
}

}  // namespace

WfReport projectable(const GlobalP& g) {
  WfReport rep;
  wf_structural(g, rep);
  for (const auto& r : participants(g)) {
    auto pr = project(g, r);
    if (!ok(pr)) {
      rep.ok = false;
      rep.diagnostics.push_back("projection onto " + r + " undefined: " +
                                std::get<ProjError>(pr).message);
    }
  }
  return rep;
}

WfReport well_formed(const GlobalP& g, const std::map<Participant, DomainTerm>& homes,
                     const AccessEnv& env) {
  WfReport rep = projectable(g);
  wf_moves(g, homes, env, rep);
  return rep;
}

TypeP to_binary(const Payload& u) {
  if (u.k == Payload::K::Base) return t_one();
  return to_binary(u.session);
}

TypeP to_binary(const LocalP& t) {
  if (!t) return t_one();
  switch (t->k) {
    case LK::End:
      return t_one();
    case LK::Send: {
      std::vector<TypeBranch> bs;
      for (const auto& b : t->branches) {
        TypeP cont = to_binary(b.cont);
        bs.push_back({b.label, b.payload ? t_tensor(to_binary(*b.payload), cont) : cont});
      }
      return t_plus(std::move(bs));
    }
    case LK::Recv: {
      std::vector<TypeBranch> bs;
      for (const auto& b : t->branches) {
        TypeP cont = to_binary(b.cont);
        bs.push_back({b.label, b.payload ? t_lolli(to_binary(*b.payload), cont) : cont});
      }
      return t_with(std::move(bs));
    }
    case LK::Forall:
      return t_forall(t->var, to_binary(t->body));
    case LK::Exists:
      return t_exists(t->var, to_binary(t->body));
    case LK::At:
      return t_at(t->dom, to_binary(t->body));
    case LK::Here:
      return t_here(t->var, to_binary(t->body));
  }
  return t_one();
}

}  // namespace dst
