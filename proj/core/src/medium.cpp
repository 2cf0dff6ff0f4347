#include "dst/medium.hpp"

#include <algorithm>
#include <functional>

#include "dst/precongruence.hpp"
#include "dst/syntax.hpp"

namespace dst {

namespace {

using PK = Process::K;

NameSet global_domain_names(const GlobalP& g) {
  NameSet out;
  std::function<void(const GlobalP&)> walk = [&](const GlobalP& n) {
    if (!n) return;
    if (n->k == GlobalType::K::Move) {
      out.insert(n->target.name);
      walk(n->sub);
      walk(n->cont);
      return;
    }
    for (const auto& b : n->branches) {
      if (b.payload && b.payload->k == Payload::K::Session)
        for (const auto& v : free_domain_vars(b.payload->session)) out.insert(v);
      walk(b.cont);
    }
  };
  walk(g);
  return out;
}

}  // namespace

MediumConfig MediumConfig::defaults(const GlobalP& g) {
  MediumConfig cfg;
  NameSet doms = global_domain_names(g);
  NameSet chans;
  for (const auto& p : participants(g)) {
    cfg.name_map[p] = fresh_name("c_" + p, chans);
    chans.insert(cfg.name_map[p]);
    std::string w = fresh_name("w_" + p, doms);
    doms.insert(w);
    cfg.home_domains[p] = DomainTerm::c(w);
  }
  std::string wm = fresh_name("w_m", doms);
  cfg.medium_domain = DomainTerm::c(wm);
  cfg.offered = fresh_name("z", chans);
  return cfg;
}

std::string MediumConfig::validate(const GlobalP& g) const {
  std::set<DomainTerm> homes;
  std::set<std::string> chans;
  for (const auto& p : participants(g)) {
    auto hn = home_domains.find(p);
    if (hn == home_domains.end()) return "no home domain for participant " + p;
    if (!homes.insert(hn->second).second)
      return "home domains must be pairwise distinct (" + hn->second.name + " reused)";
    auto cn = name_map.find(p);
    if (cn == name_map.end()) return "no channel for participant " + p;
    if (!chans.insert(cn->second).second)
      return "participant channels must be distinct (" + cn->second + " reused)";
  }
  if (chans.count(offered)) return "offered channel collides with a participant channel";
  return "";
}

FuseResult fuse_proc(const ProcP& p, const ProcP& q) {
  if (!p) return FuseError{"missing process"};
  switch (p->k) {
    case PK::Inaction:
      return q;
    case PK::Branch: {
      std::vector<ProcBranch> bs;
      for (const auto& b : p->branches) {
        auto f = fuse_proc(b.body, q);
        if (!ok(f)) return f;
        bs.push_back({b.label, fused(f)});
      }
      return ProcP(p_branch(p->chan, std::move(bs)));
    }
    case PK::BoundSend: {
      // the output-with-forwarder clause: c<v>.([u<->v] | P) % Q
      if (p->body && p->body->k == PK::Par && p->body->body &&
          p->body->body->k == PK::Forward &&
          (p->body->body->chan == p->arg || p->body->body->arg == p->arg)) {
        ProcP fwd = p->body->body;
        ProcP rest = p->body->rhs;
        std::string v = p->arg;
        if (free_names(q).count(v)) {
          NameSet avoid = free_names(q);
          for (const auto& n : free_names(p)) avoid.insert(n);
          std::string v2 = fresh_name(v, avoid);
          fwd = subst_name(fwd, v2, v);
          rest = subst_name(rest, v2, v);
          v = v2;
        }
        auto f = fuse_proc(rest, q);
        if (!ok(f)) return f;
        return ProcP(p_bsend(p->chan, v, p_par(fwd, fused(f))));
      }
      return FuseError{"bound output without a forwarder payload"};
    }
    case PK::Receive:
    case PK::MigrateSend:
    case PK::MigrateRecv: {
      std::string y = p->arg;
      ProcP body = p->body;
      if (free_names(q).count(y)) {
        NameSet avoid = free_names(q);
        for (const auto& n : free_names(p)) avoid.insert(n);
        std::string y2 = fresh_name(y, avoid);
        body = subst_name(body, y2, y);
        y = y2;
      }
      auto f = fuse_proc(body, q);
      if (!ok(f)) return f;
      auto copy = std::make_shared<Process>(*p);
      copy->arg = y;
      copy->body = fused(f);
      return ProcP(copy);
    }
    case PK::DomRecv: {
      std::string a = p->arg;
      ProcP body = p->body;
      if (free_domain_vars(q).count(a)) {
        NameSet avoid = free_domain_vars(q);
        for (const auto& v : free_domain_vars(p)) avoid.insert(v);
        std::string a2 = fresh_name(a, avoid);
        body = subst_domain(body, DomainTerm::v(a2), a);
        a = a2;
      }
      auto f = fuse_proc(body, q);
      if (!ok(f)) return f;
      auto copy = std::make_shared<Process>(*p);
      copy->arg = a;
      copy->body = fused(f);
      return ProcP(copy);
    }
    case PK::DomSend:
    case PK::Select: {
      auto f = fuse_proc(p->body, q);
      if (!ok(f)) return f;
      auto copy = std::make_shared<Process>(*p);
      copy->body = fused(f);
      return ProcP(copy);
    }
    default:
      break;
  }
  switch (p->k) {
    case PK::Forward: return FuseError{"forwarder"};
    case PK::Par: return FuseError{"parallel composition"};
    case PK::Restrict: return FuseError{"restriction"};
    case PK::Send: return FuseError{"free output"};
    case PK::ReplReceive: return FuseError{"replicated input"};
    default: return FuseError{"unsupported shape"};
  }
}

namespace {

struct MediumGen {
  NameSet used_names;
  NameSet used_doms;

  std::string fresh_chan(const std::string& base) {
    std::string n = fresh_name(base, used_names);
    used_names.insert(n);
    return n;
  }
  std::string fresh_dvar(const std::string& base) {
    std::string d = fresh_name(base, used_doms);
    used_doms.insert(d);
    return d;
  }

  MediumResult gen(const GlobalP& g, const std::map<Participant, std::string>& chan,
                   const std::map<Participant, DomainTerm>& dom) {
    switch (g->k) {
      case GlobalType::K::End:
        return ProcP(p_inaction());
      case GlobalType::K::Comm: {
        const std::string& cp = chan.at(g->from);
        const std::string& cq = chan.at(g->to);
        std::vector<ProcBranch> bs;
        for (const auto& b : g->branches) {
          auto cont = gen(b.cont, chan, dom);
          if (!std::holds_alternative<ProcP>(cont)) return cont;
          ProcP m = std::get<ProcP>(cont);
          if (b.payload) {
            std::string u = fresh_chan("u");
            std::string v = fresh_chan("v");
            bs.push_back({b.label,
                          p_recv(cp, u,
                                 p_select(cq, b.label,
                                          p_bsend(cq, v, p_par(p_fwd(u, v), m))))});
          } else {
            bs.push_back({b.label, p_select(cq, b.label, m)});
          }
        }
        return ProcP(p_branch(cp, std::move(bs)));
      }
      case GlobalType::K::Move: {
        std::vector<Participant> movers{g->leader};
        for (const auto& q : g->migrants) movers.push_back(q);

        std::string alpha = fresh_dvar("a");
        std::map<Participant, std::string> ys, ms;
        for (const auto& r : movers) {
          ys[r] = fresh_chan("y_" + r);
          ms[r] = fresh_chan("m_" + r);
        }

        auto chan1 = chan;
        auto dom1 = dom;
        for (const auto& r : movers) {
          chan1[r] = ys[r];
          dom1[r] = DomainTerm::v(alpha);
        }
        auto m1 = gen(g->sub, chan1, dom1);
        if (!std::holds_alternative<ProcP>(m1)) return m1;

        auto chan2 = chan;
        for (const auto& r : movers) chan2[r] = ms[r];
        auto m2 = gen(g->cont, chan2, dom);
        if (!std::holds_alternative<ProcP>(m2)) return m2;

        // return migrations, leader first
        ProcP ret = std::get<ProcP>(m2);
        for (size_t i = movers.size(); i-- > 0;) {
          const auto& r = movers[i];
          ret = p_mrecv(ys.at(r), ms.at(r), dom.at(r), ret);
        }

        auto body = fuse_proc(std::get<ProcP>(m1), ret);
        if (!ok(body))
          return MediumError{"medium fusion undefined at a " +
                             std::get<FuseError>(body).blocking + " in the sub-protocol"};

        ProcP acc = fused(body);
        for (size_t i = movers.size(); i-- > 0;) {
          const auto& r = movers[i];
          acc = p_mrecv(chan.at(r), ys.at(r), DomainTerm::v(alpha), acc);
        }
        for (size_t i = g->migrants.size(); i-- > 0;) {
          acc = p_dsend(chan.at(g->migrants[i]), DomainTerm::v(alpha), acc);
        }
        return ProcP(p_drecv(chan.at(g->leader), alpha, acc));
      }
    }
    return MediumError{"unreachable"};
  }
};

std::vector<std::pair<DomainTerm, DomainTerm>> move_edges(
    const GlobalP& g, const std::map<Participant, DomainTerm>& homes) {
  std::vector<std::pair<DomainTerm, DomainTerm>> out;
  std::function<void(const GlobalP&, std::map<Participant, DomainTerm>)> walk =
      [&](const GlobalP& n, std::map<Participant, DomainTerm> cur) {
        if (!n) return;
        if (n->k == GlobalType::K::Comm) {
          for (const auto& b : n->branches) walk(b.cont, cur);
          return;
        }
        if (n->k == GlobalType::K::Move) {
          std::vector<Participant> movers{n->leader};
          for (const auto& q : n->migrants) movers.push_back(q);
          auto inner = cur;
          for (const auto& r : movers) {
            auto it = cur.find(r);
            if (it != cur.end()) out.push_back({it->second, n->target});
            inner[r] = n->target;
          }
          walk(n->sub, inner);
          walk(n->cont, cur);
        }
      };
  walk(g, homes);
  return out;
}

}  // namespace

MediumResult medium(const GlobalP& g, const MediumConfig& cfg) {
  std::string bad = cfg.validate(g);
  if (!bad.empty()) return MediumError{bad};

  MediumGen gen;
  std::map<Participant, std::string> chan;
  std::map<Participant, DomainTerm> dom;
  for (const auto& p : participants(g)) {
    chan[p] = cfg.name_map.at(p);
    dom[p] = cfg.home_domains.at(p);
    gen.used_names.insert(chan[p]);
    gen.used_doms.insert(dom[p].name);
  }
  gen.used_names.insert(cfg.offered);
  gen.used_doms.insert(cfg.medium_domain.name);
  for (const auto& d : global_domain_names(g)) gen.used_doms.insert(d);
  return gen.gen(g, chan, dom);
}

JudgmentResult medium_judgment(const GlobalP& g, const MediumConfig& cfg) {
  std::string bad = cfg.validate(g);
  if (!bad.empty()) return MediumError{bad};

  Judgment j;
  j.omega.config = equivalence_closure();
  for (const auto& p : participants(g))
    j.omega.edges.insert({cfg.home_domains.at(p), cfg.medium_domain});
  for (const auto& e : move_edges(g, cfg.home_domains)) j.omega.edges.insert(e);

  for (const auto& p : participants(g)) {
    auto pr = project(g, p);
    if (!ok(pr))
      return MediumError{"projection onto " + p + " undefined: " +
                         std::get<ProjError>(pr).message};
    j.delta.put(CtxEntry{cfg.name_map.at(p), to_binary(local(pr)), cfg.home_domains.at(p), {}});
  }

  auto m = medium(g, cfg);
  if (!std::holds_alternative<ProcP>(m)) return std::get<MediumError>(m);
  j.proc = std::get<ProcP>(m);
  j.offered = cfg.offered;
  j.type = t_one();
  j.dom = cfg.medium_domain;
  return j;
}

VerifyResult verify_medium(const GlobalP& g, const MediumConfig& cfg) {
  auto jr = medium_judgment(g, cfg);
  if (!std::holds_alternative<Judgment>(jr)) return std::get<MediumError>(jr);
  const Judgment& j = std::get<Judgment>(jr);

  auto wf = well_formed(g, cfg.home_domains, j.omega);
  if (!wf.ok) {
    std::string msg = "global type is not well-formed:";
    for (const auto& d : wf.diagnostics) msg += " " + d + ";";
    return MediumError{msg};
  }

  auto res = check(j);
  if (ok(res)) return deriv(res);
  return error(res);
}

bool check_medium_types(const GlobalP& g, const std::map<Participant, TypeP>& assigned,
                        const std::map<Participant, LocalP>& witnesses) {
  for (const auto& p : participants(g)) {
    auto ai = assigned.find(p);
    auto wi = witnesses.find(p);
    if (ai == assigned.end() || wi == witnesses.end()) return false;
    auto pr = project(g, p);
    if (!ok(pr)) return false;
    if (!precongruent(local(pr), wi->second)) return false;
    if (!alpha_eq(to_binary(wi->second), ai->second)) return false;
  }
  return true;
}

LabelChooser first_label() {
  return [](const std::vector<std::string>&, const std::vector<std::string>& labels) {
    return labels.front();
  };
}

LabelChooser scripted_labels(std::vector<std::string> script) {
  auto at = std::make_shared<size_t>(0);
  auto sc = std::make_shared<std::vector<std::string>>(std::move(script));
  return [at, sc](const std::vector<std::string>&, const std::vector<std::string>& labels) {
    if (*at < sc->size()) {
      std::string want = (*sc)[*at];
      for (const auto& l : labels)
        if (l == want) {
          ++*at;
          return want;
        }
    }
    return labels.front();
  };
}

namespace {

struct ImplGen {
  NameSet used;
  const LabelChooser& choose;
  std::vector<std::string> path;

  explicit ImplGen(const LabelChooser& c) : choose(c) {}

  std::string fresh(const std::string& base) {
    std::string n = fresh_name(base, used);
    used.insert(n);
    return n;
  }

  MediumResult gen(const LocalP& t, const std::string& chan, const DomainTerm& cur) {
    using LK = LocalType::K;
    switch (t->k) {
      case LK::End:
        return ProcP(p_inaction());
      case LK::Send: {
        std::vector<std::string> labels;
        for (const auto& b : t->branches) labels.push_back(b.label);
        std::string l = choose(path, labels);
        const LBranch* br = nullptr;
        for (const auto& b : t->branches)
          if (b.label == l) br = &b;
        if (!br) return MediumError{"chooser picked an unknown label " + l};
        path.push_back(l);
        auto cont = gen(br->cont, chan, cur);
        if (!std::holds_alternative<ProcP>(cont)) return cont;
        ProcP after = std::get<ProcP>(cont);
        if (br->payload) {
          std::string u = fresh("u");
          ProcP payload;
          if (br->payload->k == Payload::K::Base) {
            payload = p_inaction();  // unit session
          } else {
            auto pp = gen(br->payload->session, u, cur);
            if (!std::holds_alternative<ProcP>(pp)) return pp;
            payload = std::get<ProcP>(pp);
          }
          after = p_bsend(chan, u, p_par(payload, after));
        }
        return ProcP(p_select(chan, l, after));
      }
      case LK::Recv: {
        std::vector<ProcBranch> bs;
        for (const auto& b : t->branches) {
          auto cont = gen(b.cont, chan, cur);
          if (!std::holds_alternative<ProcP>(cont)) return cont;
          ProcP body = std::get<ProcP>(cont);
          if (b.payload) {
            std::string u = fresh("u");
            body = p_recv(chan, u, body);
          }
          bs.push_back({b.label, body});
        }
        return ProcP(p_branch(chan, std::move(bs)));
      }
      case LK::Forall: {
        auto cont = gen(t->body, chan, cur);
        if (!std::holds_alternative<ProcP>(cont)) return cont;
        return ProcP(p_drecv(chan, t->var, std::get<ProcP>(cont)));
      }
      case LK::Exists: {
        if (!t->move_target)
          return MediumError{"cannot realize an existential domain without a migration target"};
        auto inst = subst_domain(t->body, *t->move_target, t->var);
        auto cont = gen(inst, chan, cur);
        if (!std::holds_alternative<ProcP>(cont)) return cont;
        return ProcP(p_dsend(chan, *t->move_target, std::get<ProcP>(cont)));
      }
      case LK::At: {
        std::string y = fresh("s");
        auto cont = gen(t->body, y, t->dom);
        if (!std::holds_alternative<ProcP>(cont)) return cont;
        return ProcP(p_msend(chan, y, t->dom, std::get<ProcP>(cont)));
      }
      case LK::Here: {
        auto inst = subst_domain(t->body, cur, t->var);
        return gen(inst, chan, cur);
      }
    }
    return MediumError{"unreachable"};
  }
};

}  // namespace

MediumResult canonical_impl(const GlobalP& g, const Participant& r, const MediumConfig& cfg,
                            const LabelChooser& choose) {
  auto pr = project(g, r);
  if (!ok(pr))
    return MediumError{"projection onto " + r + " undefined: " + std::get<ProjError>(pr).message};
  ImplGen gen(choose);
  gen.used.insert(cfg.name_map.at(r));
  return gen.gen(local(pr), cfg.name_map.at(r), cfg.home_domains.at(r));
}

ComposeResult compose_system(const GlobalP& g, const MediumConfig& cfg,
                             const std::map<Participant, ProcP>& impls) {
  auto jr = medium_judgment(g, cfg);
  if (!std::holds_alternative<Judgment>(jr)) return std::get<MediumError>(jr);
  Judgment mj = std::get<Judgment>(jr);

  auto part_set = participants(g);
  std::vector<Participant> parts(part_set.begin(), part_set.end());
  for (const auto& p : parts) {
    auto it = impls.find(p);
    if (it == impls.end()) return MediumError{"no implementation for participant " + p};
    Judgment ij;
    ij.omega = mj.omega;
    ij.proc = it->second;
    ij.offered = cfg.name_map.at(p);
    const CtxEntry* e = mj.delta.find(cfg.name_map.at(p));
    ij.type = e->type;
    ij.dom = e->dom;
    auto res = check(ij);
    if (!ok(res)) return ComposeError{p, error(res)};
  }

  ProcP sys = mj.proc;
  for (size_t i = parts.size(); i-- > 0;) {
    const auto& p = parts[i];
    const CtxEntry* e = mj.delta.find(cfg.name_map.at(p));
    sys = p_restrict(cfg.name_map.at(p), RestrictAnnot{e->type, e->dom},
                     p_par(impls.at(p), sys));
  }

  Judgment root = composed_judgment(g, cfg, sys);
  auto res = check(root);
  if (!ok(res)) return ComposeError{"", error(res)};
  return sys;
}

Judgment composed_judgment(const GlobalP& g, const MediumConfig& cfg, const ProcP& system) {
  Judgment j;
  j.omega.config = equivalence_closure();
  for (const auto& p : participants(g))
    j.omega.edges.insert({cfg.home_domains.at(p), cfg.medium_domain});
  for (const auto& e : move_edges(g, cfg.home_domains)) j.omega.edges.insert(e);
  j.proc = system;
  j.offered = cfg.offered;
  j.type = t_one();
  j.dom = cfg.medium_domain;
  return j;
}

size_t prefix_count(const ProcP& p) {
  if (!p) return 0;
  size_t n = is_prefix(p->k) || p->k == PK::ReplReceive ? 1 : 0;
  n += prefix_count(p->body);
  n += prefix_count(p->rhs);
  for (const auto& b : p->branches) n += prefix_count(b.body);
  return n;
}

}  // namespace dst
