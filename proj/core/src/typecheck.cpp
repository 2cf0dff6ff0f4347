#include "dst/typecheck.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "dst/syntax.hpp"

namespace dst {

const char* rule_name(RuleName r) {
  switch (r) {
    case RuleName::Id: return "id";
    case RuleName::OneR: return "1R";
    case RuleName::OneL: return "1L";
    case RuleName::TensorR: return "*R";
    case RuleName::TensorL: return "*L";
    case RuleName::LolliR: return "-oR";
    case RuleName::LolliL: return "-oL";
    case RuleName::WithR: return "&R";
    case RuleName::WithL1: return "&L1";
    case RuleName::WithL2: return "&L2";
    case RuleName::PlusR1: return "+R1";
    case RuleName::PlusR2: return "+R2";
    case RuleName::PlusL: return "+L";
    case RuleName::BangR: return "!R";
    case RuleName::BangL: return "!L";
    case RuleName::Copy: return "copy";
    case RuleName::Cut: return "cut";
    case RuleName::CutBang: return "cut!";
    case RuleName::AtR: return "@R";
    case RuleName::AtL: return "@L";
    case RuleName::ForallR: return "allR";
    case RuleName::ForallL: return "allL";
    case RuleName::ExistsR: return "exR";
    case RuleName::ExistsL: return "exL";
    case RuleName::HereR: return "hereR";
    case RuleName::HereL: return "hereL";
  }
  return "?";
}

const char* error_kind_name(TypeError::Kind k) {
  switch (k) {
    case TypeError::Kind::LabelMismatch: return "label-mismatch";
    case TypeError::Kind::LinearityViolation: return "linearity-violation";
    case TypeError::Kind::InaccessibleDomain: return "inaccessible-domain";
    case TypeError::Kind::MissingAnnotation: return "missing-annotation";
    case TypeError::Kind::UnusedLinearResource: return "unused-linear-resource";
    case TypeError::Kind::ShapeMismatch: return "shape-mismatch";
    case TypeError::Kind::UnknownName: return "unknown-name";
  }
  return "?";
}

namespace {

using Consumed = std::set<std::string>;

/// Unit session possibly under "here" binders; such assignments may be
/// silently discarded and cross domains as opaque values.
bool unit_after_heres(TypeP t, DomainTerm dom) {
  while (t && t->k == Type::K::Here) t = subst_domain(t->body, dom, t->var);
  return t && t->k == Type::K::One;
}

TypeError err(TypeError::Kind k, const Span& sp, std::string msg,
              std::optional<std::pair<DomainTerm, DomainTerm>> pair = std::nullopt) {
  return TypeError{k, sp, std::move(msg), std::move(pair)};
}

struct Avail {
  std::vector<CtxEntry> entries;

  const CtxEntry* find(const std::string& n) const {
    for (const auto& e : entries)
      if (e.name == n) return &e;
    return nullptr;
  }
  void put(CtxEntry e) {
    for (auto& old : entries)
      if (old.name == e.name) {
        old = std::move(e);
        return;
      }
    entries.push_back(std::move(e));
  }
  void erase(const std::string& n) {
    for (size_t i = 0; i < entries.size(); ++i)
      if (entries[i].name == n) {
        entries.erase(entries.begin() + static_cast<long>(i));
        return;
      }
  }
  Avail without(const Consumed& used) const {
    Avail out;
    for (const auto& e : entries)
      if (!used.count(e.name)) out.entries.push_back(e);
    return out;
  }
  LinearCtx restrict_to(const Consumed& used) const {
    LinearCtx out;
    for (const auto& e : entries)
      if (used.count(e.name)) out.put(e);
    return out;
  }
  NameSet names() const {
    NameSet out;
    for (const auto& e : entries) out.insert(e.name);
    return out;
  }
};

struct Out {
  DerivP d;
  Consumed consumed;
};
using R = std::variant<Out, TypeError>;

bool bad(const R& r) { return std::holds_alternative<TypeError>(r); }
TypeError take_err(R&& r) { return std::get<TypeError>(std::move(r)); }

DerivP node(RuleName rule, Judgment concl, std::vector<DerivP> prem) {
  auto d = std::make_shared<Derivation>();
  d->rule = rule;
  d->conclusion = std::move(concl);
  d->premises = std::move(prem);
  return d;
}

/// Records a unit discard as an explicit 1L step above the nearest
/// terminal leaf of `d`, updating every judgment along the path.  Choice
/// nodes discard in each branch (the branches share the context).
std::optional<DerivP> push_discard(const DerivP& d, const CtxEntry& e) {
  auto with_entry = [&](Judgment j) {
    j.delta.put(e);
    return j;
  };
  if (d->rule == RuleName::OneR || d->rule == RuleName::Id) {
    return node(RuleName::OneL, with_entry(d->conclusion), {d});
  }
  if (d->rule == RuleName::BangR) return std::nullopt;  // premise must stay empty
  if (d->premises.empty()) return std::nullopt;

  auto copy = std::make_shared<Derivation>(*d);
  copy->conclusion = with_entry(d->conclusion);
  if (d->rule == RuleName::WithR || d->rule == RuleName::PlusL) {
    for (auto& prem : copy->premises) {
      auto pushed = push_discard(prem, e);
      if (!pushed) return std::nullopt;
      prem = *pushed;
    }
    return copy;
  }
  size_t last = copy->premises.size() - 1;
  if (d->rule == RuleName::CutBang && copy->premises.size() == 2) last = 1;
  auto pushed = push_discard(copy->premises[last], e);
  if (!pushed) return std::nullopt;
  copy->premises[last] = *pushed;
  return {copy};
}

struct Checker {
  /// Names that are linear in an enclosing scope but fenced off by a
  /// replicated offer; referencing them is a linearity violation.
  NameSet barrier;

  R go(const AccessEnv& om, const SharedCtx& ga, const Avail& av, const ProcP& p,
       const std::string& z, const TypeP& goal, const DomainTerm& dom);

  R go_cut(const AccessEnv& om, const SharedCtx& ga, const Avail& av, const ProcP& p,
           const std::string& z, const TypeP& goal, const DomainTerm& dom,
           const std::string& x, const TypeP& a, const DomainTerm& w2, const ProcP& offer,
           const ProcP& use);

  /// Builds the judgment for a node about to be created and enforces
  /// well-formedness as a construction-time invariant.
  std::variant<Judgment, TypeError> make_judgment(const AccessEnv& om, const SharedCtx& ga,
                                                  const Avail& av, const Consumed& used,
                                                  const ProcP& p, const std::string& z,
                                                  const TypeP& goal, const DomainTerm& dom) {
    Judgment j;
    j.omega = om;
    j.gamma = ga;
    j.delta = av.restrict_to(used);
    j.proc = p;
    j.offered = z;
    j.type = goal;
    j.dom = dom;
    for (const auto& e : j.delta) {
      if (unit_after_heres(e.type, e.dom)) continue;
      if (!reaches(om, dom, e.dom)) {
        return err(TypeError::Kind::InaccessibleDomain, e.span.valid() ? e.span : p->span,
                   "ill-formed sequent: domain " + e.dom.name + " of " + e.name +
                       " is not accessible from " + dom.name,
                   std::make_pair(dom, e.dom));
      }
    }
    return j;
  }

  /// Requires the premise to have consumed `e` (a binder it introduced or
  /// a session it rewrote); a leftover unit is discarded, anything else is
  /// a linearity failure.
  std::variant<Out, TypeError> settle(Out o, const CtxEntry& e, const Span& sp) {
    if (o.consumed.count(e.name)) {
      o.consumed.erase(e.name);
      return o;
    }
    if (unit_after_heres(e.type, e.dom)) {
      auto pushed = push_discard(o.d, e);
      if (pushed) {
        o.d = *pushed;
        return o;
      }
    }
    return err(TypeError::Kind::UnusedLinearResource, sp,
               "session " + e.name + " is not used to completion");
  }

  /// Reconciles branch consumption for &R / +L: every branch must consume
  /// the union, up to discardable units.
  std::variant<std::vector<DerivP>, TypeError> reconcile_branches(
      std::vector<Out>& outs, const Avail& av, const Span& sp, Consumed& total) {
    for (const auto& o : outs)
      for (const auto& n : o.consumed) total.insert(n);
    std::vector<DerivP> prems;
    for (auto& o : outs) {
      DerivP d = o.d;
      for (const auto& n : total) {
        if (o.consumed.count(n)) continue;
        const CtxEntry* e = av.find(n);
        if (!e) continue;
        if (!unit_after_heres(e->type, e->dom)) {
          return err(TypeError::Kind::LinearityViolation, sp,
                     "branches disagree on the use of linear session " + n);
        }
        auto pushed = push_discard(d, *e);
        if (!pushed)
          return err(TypeError::Kind::LinearityViolation, sp,
                     "branches disagree on the use of linear session " + n);
        d = *pushed;
      }
      prems.push_back(d);
    }
    return prems;
  }

  /// Splits the body of a bound output into the payload part (components
  /// mentioning the fresh name) and the continuation.
  static std::pair<ProcP, ProcP> split_by(const ProcP& body, const std::string& y) {
    std::vector<ProcP> comps;
    std::vector<ProcP> stack{body};
    while (!stack.empty()) {
      ProcP q = stack.back();
      stack.pop_back();
      if (!q || q->k == Process::K::Inaction) continue;
      if (q->k == Process::K::Par) {
        stack.push_back(q->rhs);
        stack.push_back(q->body);
        continue;
      }
      comps.push_back(q);
    }
    std::vector<ProcP> with_y, rest;
    for (const auto& c : comps) {
      if (free_names(c).count(y))
        with_y.push_back(c);
      else
        rest.push_back(c);
    }
    auto chain = [](const std::vector<ProcP>& cs) -> ProcP {
      if (cs.empty()) return p_inaction();
      ProcP acc = cs.back();
      for (size_t i = cs.size() - 1; i-- > 0;) acc = p_par(cs[i], acc);
      return acc;
    };
    return {chain(with_y), chain(rest)};
  }

  /// Unfold "here" layers on a hypothesis before a left rule fires; the
  /// returned wrapper re-introduces one hereL node per layer.
  struct HypUse {
    CtxEntry unfolded;
    std::vector<TypeP> layers;  // outermost first
  };
  static HypUse unfold_hyp(const CtxEntry& e) {
    HypUse h{e, {}};
    while (h.unfolded.type && h.unfolded.type->k == Type::K::Here) {
      h.layers.push_back(h.unfolded.type);
      h.unfolded.type =
          subst_domain(h.unfolded.type->body, h.unfolded.dom, h.unfolded.type->var);
    }
    return h;
  }
  static DerivP wrap_herel(DerivP d, const HypUse& h) {
    for (size_t i = h.layers.size(); i-- > 0;) {
      Judgment j = d->conclusion;
      CtxEntry e = h.unfolded;
      e.type = h.layers[i];
      j.delta.put(e);
      d = node(RuleName::HereL, std::move(j), {d});
    }
    return d;
  }

  NameSet taken_names(const SharedCtx& ga, const Avail& av, const std::string& z) const {
    NameSet out = barrier;
    for (const auto& e : ga) out.insert(e.name);
    for (const auto& e : av.entries) out.insert(e.name);
    out.insert(z);
    return out;
  }

  /// Fresh domain variable satisfying the side condition of allR/exL:
  /// not mentioned by Omega, Gamma, Delta, the current domain, or the
  /// remaining goal/process.
  std::string fresh_domvar(const std::string& base, const AccessEnv& om, const SharedCtx& ga,
                           const Avail& av, const DomainTerm& dom, const TypeP& goal,
                           const ProcP& p) const {
    NameSet avoid;
    for (const auto& d : domains_of(om)) avoid.insert(d.name);
    auto add_type = [&](const TypeP& t) {
      if (!t) return;
      for (const auto& v : free_domain_vars(t)) avoid.insert(v);
      for (const auto& c : domain_consts(t)) avoid.insert(c);
    };
    for (const auto& e : ga) {
      add_type(e.type);
      avoid.insert(e.dom.name);
    }
    for (const auto& e : av.entries) {
      add_type(e.type);
      avoid.insert(e.dom.name);
    }
    avoid.insert(dom.name);
    add_type(goal);
    for (const auto& v : free_domain_vars(p)) avoid.insert(v);
    for (const auto& c : domain_consts(p)) avoid.insert(c);
    return fresh_name(base, avoid);
  }
};

R Checker::go_cut(const AccessEnv& om, const SharedCtx& ga, const Avail& av, const ProcP& p,
                  const std::string& z, const TypeP& goal, const DomainTerm& dom,
                  const std::string& x, const TypeP& a, const DomainTerm& w2,
                  const ProcP& offer, const ProcP& use) {
  const Span sp = p->span;
  R sub1 = go(om, ga, av, offer, x, a, w2);
  if (bad(sub1)) return sub1;
  Out o1 = std::get<Out>(std::move(sub1));
  for (const auto& e : av.entries) {
    if (!o1.consumed.count(e.name)) continue;
    if (unit_after_heres(e.type, e.dom)) continue;
    if (!reaches(om, dom, e.dom))
      return err(TypeError::Kind::InaccessibleDomain, sp,
                 "cut context entry " + e.name + " at " + e.dom.name +
                     " is not accessible from " + dom.name,
                 std::make_pair(dom, e.dom));
  }

  Avail av2 = av.without(o1.consumed);
  CtxEntry xe{x, a, w2, sp};
  av2.put(xe);
  R sub2 = go(om, ga, av2, use, z, goal, dom);
  if (bad(sub2)) return sub2;
  auto settled = settle(std::get<Out>(std::move(sub2)), xe, sp);
  if (auto* e = std::get_if<TypeError>(&settled)) return *e;
  Out o2 = std::get<Out>(std::move(settled));

  Consumed used = o1.consumed;
  for (const auto& n : o2.consumed) used.insert(n);
  auto j = make_judgment(om, ga, av, used, p, z, goal, dom);
  if (auto* e = std::get_if<TypeError>(&j)) return *e;
  return Out{node(RuleName::Cut, std::get<Judgment>(std::move(j)), {o1.d, o2.d}),
             std::move(used)};
}

R Checker::go(const AccessEnv& om, const SharedCtx& ga, const Avail& av, const ProcP& p,
              const std::string& z, const TypeP& goal, const DomainTerm& dom) {
  using PK = Process::K;
  using TK = Type::K;
  if (!p) return err(TypeError::Kind::ShapeMismatch, Span{}, "missing process");
  const Span sp = p->span;

  // hereR is silent: apply it eagerly whenever the goal binds the current
  // domain.
  if (goal->k == TK::Here) {
    TypeP inner = subst_domain(goal->body, dom, goal->var);
    R sub = go(om, ga, av, p, z, inner, dom);
    if (bad(sub)) return sub;
    Out o = std::get<Out>(std::move(sub));
    Judgment j = o.d->conclusion;
    j.type = goal;
    o.d = node(RuleName::HereR, std::move(j), {o.d});
    return o;
  }

  auto judge = [&](const Consumed& used) { return make_judgment(om, ga, av, used, p, z, goal, dom); };

  auto lookup = [&](const std::string& n) -> std::variant<const CtxEntry*, TypeError> {
    if (const CtxEntry* e = av.find(n)) return e;
    if (barrier.count(n))
      return err(TypeError::Kind::LinearityViolation, sp,
                 "linear session " + n + " may not be used under a replicated offer");
    if (ga.contains(n))
      return err(TypeError::Kind::ShapeMismatch, sp,
                 "shared session " + n + " is used by spawning a fresh copy, not directly");
    return err(TypeError::Kind::UnknownName, sp, "unknown session name " + n);
  };

  switch (p->k) {
    case PK::Inaction: {
      if (goal->k != TK::One)
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "process is finished but still offers a session on " + z);
      auto j = judge({});
      if (auto* e = std::get_if<TypeError>(&j)) return *e;
      return Out{node(RuleName::OneR, std::get<Judgment>(std::move(j)), {}), {}};
    }

    case PK::Forward: {
      std::string other;
      if (p->chan == z)
        other = p->arg;
      else if (p->arg == z)
        other = p->chan;
      else
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "forwarder does not mention the offered channel " + z);
      auto found = lookup(other);
      if (auto* e = std::get_if<TypeError>(&found)) return *e;
      HypUse h = unfold_hyp(*std::get<const CtxEntry*>(found));
      if (!alpha_eq(h.unfolded.type, goal))
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "forwarder endpoints " + other + " and " + z + " have different types");
      if (!(h.unfolded.dom == dom) && !unit_after_heres(goal, dom))
        return err(TypeError::Kind::InaccessibleDomain, sp,
                   "forwarder links sessions at distinct domains " + h.unfolded.dom.name +
                       " and " + dom.name,
                   std::make_pair(dom, h.unfolded.dom));
      Consumed used{other};
      auto j = judge(used);
      if (auto* e = std::get_if<TypeError>(&j)) return *e;
      return Out{wrap_herel(node(RuleName::Id, std::get<Judgment>(std::move(j)), {}),
                            h),
                 used};
    }

    case PK::Par:
      return err(TypeError::Kind::ShapeMismatch, sp,
                 "parallel composition requires a restriction (cut)");

    case PK::Send:
      return err(TypeError::Kind::ShapeMismatch, sp,
                 "free output is untypable; outputs emit fresh names");

    case PK::ReplReceive:
      return err(TypeError::Kind::ShapeMismatch, sp,
                 "replicated input appears outside a shared-channel offer");

    case PK::Restrict: {
      ProcP body = p->body;
      if (!body || body->k != PK::Par)
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "restriction must compose two processes (cut)");
      std::string x = p->chan;
      ProcP left = body->body;
      ProcP right = body->rhs;
      NameSet taken = taken_names(ga, av, z);
      if (taken.count(x)) {
        std::string x2 = fresh_name(x, taken);
        left = subst_name(left, x2, x);
        right = subst_name(right, x2, x);
        x = x2;
      }
      if (!p->annot)
        return err(TypeError::Kind::MissingAnnotation, sp,
                   "composition on " + p->chan + " needs a type and domain annotation");
      const TypeP& a = p->annot->type;
      const DomainTerm& w2 = p->annot->dom;

      // the replicated offer may sit on either side
      if (right->k == PK::ReplReceive && right->chan == x &&
          !(left->k == PK::ReplReceive && left->chan == x))
        std::swap(left, right);

      if (left->k == PK::ReplReceive && left->chan == x) {
        // cut!: (new u)(!u(y).P | Q)
        Checker inner;
        inner.barrier = av.names();
        for (const auto& n : barrier) inner.barrier.insert(n);
        R sub1 = inner.go(om, ga, Avail{}, left->body, left->arg, a, w2);
        if (bad(sub1)) return sub1;
        Out o1 = std::get<Out>(std::move(sub1));

        SharedCtx ga2 = ga;
        ga2.put(CtxEntry{x, a, w2, sp});
        R sub2 = go(om, ga2, av, right, z, goal, dom);
        if (bad(sub2)) return sub2;
        Out o2 = std::get<Out>(std::move(sub2));

        auto j = judge(o2.consumed);
        if (auto* e = std::get_if<TypeError>(&j)) return *e;
        return Out{node(RuleName::CutBang, std::get<Judgment>(std::move(j)), {o1.d, o2.d}),
                   std::move(o2.consumed)};
      }

      // cut: one side offers x:A[w2], the other uses it.  Typability is
      // closed under structural congruence, so either orientation is
      // admissible; left-offers is tried first.  Unit sessions are opaque
      // values and compose across any domains.
      if (!unit_after_heres(a, w2) && !reaches(om, dom, w2))
        return err(TypeError::Kind::InaccessibleDomain, sp,
                   "cut domain " + w2.name + " is not accessible from " + dom.name,
                   std::make_pair(dom, w2));
      R first = go_cut(om, ga, av, p, z, goal, dom, x, a, w2, left, right);
      if (!bad(first)) return first;
      R second = go_cut(om, ga, av, p, z, goal, dom, x, a, w2, right, left);
      if (!bad(second)) return second;
      return first;
    }

    case PK::BoundSend: {
      if (p->chan == z) {
        std::string y = p->arg;
        ProcP body = p->body;
        NameSet taken = taken_names(ga, av, z);
        if (taken.count(y)) {
          std::string y2 = fresh_name(y, taken);
          body = subst_name(body, y2, y);
          y = y2;
        }
        if (goal->k == TK::Tensor) {
          auto [payload, cont] = split_by(body, y);
          R sub1 = go(om, ga, av, payload, y, goal->left, dom);
          if (bad(sub1)) return sub1;
          Out o1 = std::get<Out>(std::move(sub1));
          Avail av2 = av.without(o1.consumed);
          R sub2 = go(om, ga, av2, cont, z, goal->body, dom);
          if (bad(sub2)) return sub2;
          Out o2 = std::get<Out>(std::move(sub2));
          Consumed used = o1.consumed;
          for (const auto& n : o2.consumed) used.insert(n);
          auto j = judge(used);
          if (auto* e = std::get_if<TypeError>(&j)) return *e;
          return Out{node(RuleName::TensorR, std::get<Judgment>(std::move(j)), {o1.d, o2.d}),
                     std::move(used)};
        }
        if (goal->k == TK::Bang) {
          if (!body || body->k != PK::ReplReceive || body->chan != y)
            return err(TypeError::Kind::ShapeMismatch, sp,
                       "a shared offer sends a fresh name followed by a replicated input");
          Checker inner;
          inner.barrier = av.names();
          for (const auto& n : barrier) inner.barrier.insert(n);
          R sub = inner.go(om, ga, Avail{}, body->body, body->arg, goal->body, dom);
          if (bad(sub)) return sub;
          Out o = std::get<Out>(std::move(sub));
          auto j = judge({});
          if (auto* e = std::get_if<TypeError>(&j)) return *e;
          return Out{node(RuleName::BangR, std::get<Judgment>(std::move(j)), {o.d}), {}};
        }
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "output on " + z + " does not match the offered type");
      }

      // using a hypothesis: lolli-L on Delta, or copy on Gamma
      if (const CtxEntry* raw = av.find(p->chan)) {
        HypUse h = unfold_hyp(*raw);
        if (h.unfolded.type->k != TK::Lolli)
          return err(TypeError::Kind::ShapeMismatch, sp,
                     "output on " + p->chan + " requires a -o typed session");
        std::string y = p->arg;
        ProcP body = p->body;
        NameSet taken = taken_names(ga, av, z);
        if (taken.count(y)) {
          std::string y2 = fresh_name(y, taken);
          body = subst_name(body, y2, y);
          y = y2;
        }
        auto [payload, cont] = split_by(body, y);
        Avail av1 = av;
        av1.erase(p->chan);
        R sub1 = go(om, ga, av1, payload, y, h.unfolded.type->left, h.unfolded.dom);
        if (bad(sub1)) return sub1;
        Out o1 = std::get<Out>(std::move(sub1));

        Avail av2 = av.without(o1.consumed);
        CtxEntry xe{p->chan, h.unfolded.type->body, h.unfolded.dom, sp};
        av2.put(xe);
        R sub2 = go(om, ga, av2, cont, z, goal, dom);
        if (bad(sub2)) return sub2;
        auto settled = settle(std::get<Out>(std::move(sub2)), xe, sp);
        if (auto* e = std::get_if<TypeError>(&settled)) return *e;
        Out o2 = std::get<Out>(std::move(settled));

        Consumed used = o1.consumed;
        for (const auto& n : o2.consumed) used.insert(n);
        used.insert(p->chan);
        auto j = judge(used);
        if (auto* e = std::get_if<TypeError>(&j)) return *e;
        return Out{wrap_herel(node(RuleName::LolliL, std::get<Judgment>(std::move(j)),
                                   {o1.d, o2.d}),
                              h),
                   std::move(used)};
      }
      if (const CtxEntry* ue = ga.find(p->chan)) {
        if (!reaches(om, dom, ue->dom))
          return err(TypeError::Kind::InaccessibleDomain, sp,
                     "shared session " + p->chan + " at " + ue->dom.name +
                         " is not accessible from " + dom.name,
                     std::make_pair(dom, ue->dom));
        std::string y = p->arg;
        ProcP body = p->body;
        NameSet taken = taken_names(ga, av, z);
        if (taken.count(y)) {
          std::string y2 = fresh_name(y, taken);
          body = subst_name(body, y2, y);
          y = y2;
        }
        Avail av2 = av;
        CtxEntry ye{y, ue->type, ue->dom, sp};
        av2.put(ye);
        R sub = go(om, ga, av2, body, z, goal, dom);
        if (bad(sub)) return sub;
        auto settled = settle(std::get<Out>(std::move(sub)), ye, sp);
        if (auto* e = std::get_if<TypeError>(&settled)) return *e;
        Out o = std::get<Out>(std::move(settled));
        auto j = judge(o.consumed);
        if (auto* e = std::get_if<TypeError>(&j)) return *e;
        return Out{node(RuleName::Copy, std::get<Judgment>(std::move(j)), {o.d}),
                   std::move(o.consumed)};
      }
      if (barrier.count(p->chan))
        return err(TypeError::Kind::LinearityViolation, sp,
                   "linear session " + p->chan + " may not be used under a replicated offer");
      return err(TypeError::Kind::UnknownName, sp, "unknown session name " + p->chan);
    }

    case PK::Receive: {
      if (p->chan == z) {
        if (goal->k != TK::Lolli)
          return err(TypeError::Kind::ShapeMismatch, sp,
                     "input on " + z + " requires a -o typed offer");
        std::string y = p->arg;
        ProcP body = p->body;
        NameSet taken = taken_names(ga, av, z);
        if (taken.count(y)) {
          std::string y2 = fresh_name(y, taken);
          body = subst_name(body, y2, y);
          y = y2;
        }
        Avail av2 = av;
        CtxEntry ye{y, goal->left, dom, sp};
        av2.put(ye);
        R sub = go(om, ga, av2, body, z, goal->body, dom);
        if (bad(sub)) return sub;
        auto settled = settle(std::get<Out>(std::move(sub)), ye, sp);
        if (auto* e = std::get_if<TypeError>(&settled)) return *e;
        Out o = std::get<Out>(std::move(settled));
        auto j = judge(o.consumed);
        if (auto* e = std::get_if<TypeError>(&j)) return *e;
        return Out{node(RuleName::LolliR, std::get<Judgment>(std::move(j)), {o.d}),
                   std::move(o.consumed)};
      }
      auto found = lookup(p->chan);
      if (auto* e = std::get_if<TypeError>(&found)) {
        if (ga.contains(p->chan))
          return err(TypeError::Kind::ShapeMismatch, sp,
                     "shared sessions are consumed by spawning (bound output), not input");
        return *e;
      }
      HypUse h = unfold_hyp(*std::get<const CtxEntry*>(found));
      if (h.unfolded.type->k == TK::Tensor) {
        std::string y = p->arg;
        ProcP body = p->body;
        NameSet taken = taken_names(ga, av, z);
        if (taken.count(y)) {
          std::string y2 = fresh_name(y, taken);
          body = subst_name(body, y2, y);
          y = y2;
        }
        Avail av2 = av;
        CtxEntry xe{p->chan, h.unfolded.type->body, h.unfolded.dom, sp};
        av2.put(xe);
        CtxEntry ye{y, h.unfolded.type->left, h.unfolded.dom, sp};
        av2.put(ye);
        R sub = go(om, ga, av2, body, z, goal, dom);
        if (bad(sub)) return sub;
        auto s1 = settle(std::get<Out>(std::move(sub)), ye, sp);
        if (auto* e = std::get_if<TypeError>(&s1)) return *e;
        auto s2 = settle(std::get<Out>(std::move(s1)), xe, sp);
        if (auto* e = std::get_if<TypeError>(&s2)) return *e;
        Out o = std::get<Out>(std::move(s2));
        o.consumed.insert(p->chan);
        auto j = judge(o.consumed);
        if (auto* e = std::get_if<TypeError>(&j)) return *e;
        return Out{wrap_herel(node(RuleName::TensorL, std::get<Judgment>(std::move(j)), {o.d}),
                              h),
                   std::move(o.consumed)};
      }
      if (h.unfolded.type->k == TK::Bang) {
        std::string u = p->arg;
        ProcP body = p->body;
        NameSet taken = taken_names(ga, av, z);
        if (taken.count(u)) {
          std::string u2 = fresh_name(u, taken);
          body = subst_name(body, u2, u);
          u = u2;
        }
        SharedCtx ga2 = ga;
        ga2.put(CtxEntry{u, h.unfolded.type->body, h.unfolded.dom, sp});
        Avail av2 = av;
        av2.erase(p->chan);
        R sub = go(om, ga2, av2, body, z, goal, dom);
        if (bad(sub)) return sub;
        Out o = std::get<Out>(std::move(sub));
        o.consumed.insert(p->chan);
        auto j = judge(o.consumed);
        if (auto* e = std::get_if<TypeError>(&j)) return *e;
        return Out{wrap_herel(node(RuleName::BangL, std::get<Judgment>(std::move(j)), {o.d}),
                              h),
                   std::move(o.consumed)};
      }
      return err(TypeError::Kind::ShapeMismatch, sp,
                 "input on " + p->chan + " does not match its session type");
    }

    case PK::Branch: {
      auto branch_body = [&](const std::string& l) -> ProcP {
        for (const auto& b : p->branches)
          if (b.label == l) return b.body;
        return nullptr;
      };
      if (p->chan == z) {
        if (goal->k != TK::With)
          return err(TypeError::Kind::ShapeMismatch, sp,
                     "offered case on " + z + " requires a & typed offer");
        // exact coverage both ways
        std::set<std::string> tl, pl;
        for (const auto& b : goal->branches) tl.insert(b.label);
        for (const auto& b : p->branches) pl.insert(b.label);
        if (tl != pl) {
          std::string msg = "case on " + z + " must cover exactly the offered labels;";
          for (const auto& l : tl)
            if (!pl.count(l)) msg += " missing " + l;
          for (const auto& l : pl)
            if (!tl.count(l)) msg += " extra " + l;
          return err(TypeError::Kind::LabelMismatch, sp, msg);
        }
        std::vector<Out> outs;
        auto sorted = goal->branches;
        std::sort(sorted.begin(), sorted.end(),
                  [](const TypeBranch& a, const TypeBranch& b) { return a.label < b.label; });
        for (const auto& tb : sorted) {
          R sub = go(om, ga, av, branch_body(tb.label), z, tb.type, dom);
          if (bad(sub)) return sub;
          outs.push_back(std::get<Out>(std::move(sub)));
        }
        Consumed total;
        auto prems = reconcile_branches(outs, av, sp, total);
        if (auto* e = std::get_if<TypeError>(&prems)) return *e;
        auto j = judge(total);
        if (auto* e = std::get_if<TypeError>(&j)) return *e;
        return Out{node(RuleName::WithR, std::get<Judgment>(std::move(j)),
                        std::get<std::vector<DerivP>>(std::move(prems))),
                   std::move(total)};
      }
      auto found = lookup(p->chan);
      if (auto* e = std::get_if<TypeError>(&found)) return *e;
      HypUse h = unfold_hyp(*std::get<const CtxEntry*>(found));
      if (h.unfolded.type->k != TK::Plus)
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "case on " + p->chan + " requires a + typed session");
      std::set<std::string> tl, pl;
      for (const auto& b : h.unfolded.type->branches) tl.insert(b.label);
      for (const auto& b : p->branches) pl.insert(b.label);
      for (const auto& l : tl)
        if (!pl.count(l))
          return err(TypeError::Kind::LabelMismatch, sp,
                     "case on " + p->chan + " is missing branch " + l);
      // width: extra process branches are tolerated but must be well-scoped
      NameSet known = taken_names(ga, av, z);
      for (const auto& b : p->branches) {
        if (tl.count(b.label)) continue;
        for (const auto& n : free_names(b.body)) {
          if (!known.count(n))
            return err(TypeError::Kind::UnknownName, b.body ? b.body->span : sp,
                       "unknown session name " + n + " in unreachable branch " + b.label);
        }
      }
      std::vector<Out> outs;
      auto sorted = h.unfolded.type->branches;
      std::sort(sorted.begin(), sorted.end(),
                [](const TypeBranch& a, const TypeBranch& b) { return a.label < b.label; });
      for (const auto& tb : sorted) {
        Avail av2 = av;
        av2.put(CtxEntry{p->chan, tb.type, h.unfolded.dom, sp});
        R sub = go(om, ga, av2, branch_body(tb.label), z, goal, dom);
        if (bad(sub)) return sub;
        Out o = std::get<Out>(std::move(sub));
        if (!o.consumed.count(p->chan)) {
          auto settled = settle(std::move(o), CtxEntry{p->chan, tb.type, h.unfolded.dom, sp}, sp);
          if (auto* e = std::get_if<TypeError>(&settled)) return *e;
          o = std::get<Out>(std::move(settled));
        } else {
          o.consumed.erase(p->chan);
        }
        outs.push_back(std::move(o));
      }
      Consumed total;
      auto prems = reconcile_branches(outs, av, sp, total);
      if (auto* e = std::get_if<TypeError>(&prems)) return *e;
      total.insert(p->chan);
      auto j = judge(total);
      if (auto* e = std::get_if<TypeError>(&j)) return *e;
      return Out{wrap_herel(node(RuleName::PlusL, std::get<Judgment>(std::move(j)),
                                 std::get<std::vector<DerivP>>(std::move(prems))),
                            h),
                 std::move(total)};
    }

    case PK::Select: {
      auto pick = [&](const TypeP& t) -> const TypeBranch* {
        for (const auto& b : t->branches)
          if (b.label == p->label) return &b;
        return nullptr;
      };
      if (p->chan == z) {
        if (goal->k != TK::Plus)
          return err(TypeError::Kind::ShapeMismatch, sp,
                     "selection on " + z + " requires a + typed offer");
        const TypeBranch* tb = pick(goal);
        if (!tb)
          return err(TypeError::Kind::LabelMismatch, sp,
                     "label " + p->label + " is not offered by the type of " + z);
        R sub = go(om, ga, av, p->body, z, tb->type, dom);
        if (bad(sub)) return sub;
        Out o = std::get<Out>(std::move(sub));
        auto j1 = judge(o.consumed);
        if (auto* e = std::get_if<TypeError>(&j1)) return *e;
        Judgment narrow = std::get<Judgment>(std::move(j1));
        narrow.type = t_plus({*tb});
        DerivP d = node(RuleName::PlusR1, std::move(narrow), {o.d});
        if (goal->branches.size() > 1) {
          auto j2 = judge(o.consumed);
          if (auto* e = std::get_if<TypeError>(&j2)) return *e;
          d = node(RuleName::PlusR2, std::get<Judgment>(std::move(j2)), {d});
        }
        return Out{d, std::move(o.consumed)};
      }
      auto found = lookup(p->chan);
      if (auto* e = std::get_if<TypeError>(&found)) return *e;
      HypUse h = unfold_hyp(*std::get<const CtxEntry*>(found));
      if (h.unfolded.type->k != TK::With)
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "selection on " + p->chan + " requires a & typed session");
      const TypeBranch* tb = pick(h.unfolded.type);
      if (!tb)
        return err(TypeError::Kind::LabelMismatch, sp,
                   "label " + p->label + " is not offered by " + p->chan);
      Avail av2 = av;
      CtxEntry xe{p->chan, tb->type, h.unfolded.dom, sp};
      av2.put(xe);
      R sub = go(om, ga, av2, p->body, z, goal, dom);
      if (bad(sub)) return sub;
      Out o = std::get<Out>(std::move(sub));
      if (o.consumed.count(p->chan)) {
        o.consumed.erase(p->chan);
      } else {
        auto settled = settle(std::move(o), xe, sp);
        if (auto* e = std::get_if<TypeError>(&settled)) return *e;
        o = std::get<Out>(std::move(settled));
      }
      Consumed used = o.consumed;
      used.insert(p->chan);
      auto j1 = make_judgment(om, ga, av, used, p, z, goal, dom);
      if (auto* e = std::get_if<TypeError>(&j1)) return *e;
      Judgment narrow = std::get<Judgment>(j1);
      CtxEntry ne{p->chan, t_with({*tb}), h.unfolded.dom, sp};
      narrow.delta.put(ne);
      DerivP d = node(RuleName::WithL1, std::move(narrow), {o.d});
      if (h.unfolded.type->branches.size() > 1) {
        Judgment full = std::get<Judgment>(j1);
        full.delta.put(CtxEntry{p->chan, h.unfolded.type, h.unfolded.dom, sp});
        d = node(RuleName::WithL2, std::move(full), {d});
      }
      return Out{wrap_herel(d, h), std::move(used)};
    }

    case PK::MigrateSend: {
      if (p->chan != z)
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "migration offer must happen on the offered channel " + z);
      if (goal->k != TK::At)
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "migration on " + z + " requires an @ typed offer");
      if (!(goal->dom == p->dom))
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "migration target " + p->dom.name + " differs from the type's domain " +
                       goal->dom.name);
      if (!direct(om, dom, goal->dom))
        return err(TypeError::Kind::InaccessibleDomain, sp,
                   "domain " + goal->dom.name + " is not directly accessible from " + dom.name,
                   std::make_pair(dom, goal->dom));
      std::string y = p->arg;
      ProcP body = p->body;
      NameSet taken = taken_names(ga, av, z);
      if (taken.count(y)) {
        std::string y2 = fresh_name(y, taken);
        body = subst_name(body, y2, y);
        y = y2;
      }
      R sub = go(om, ga, av, body, y, goal->body, goal->dom);
      if (bad(sub)) return sub;
      Out o = std::get<Out>(std::move(sub));
      auto j = judge(o.consumed);
      if (auto* e = std::get_if<TypeError>(&j)) return *e;
      return Out{node(RuleName::AtR, std::get<Judgment>(std::move(j)), {o.d}),
                 std::move(o.consumed)};
    }

    case PK::MigrateRecv: {
      if (p->chan == z)
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "migration input cannot appear on the offered channel");
      auto found = lookup(p->chan);
      if (auto* e = std::get_if<TypeError>(&found)) return *e;
      HypUse h = unfold_hyp(*std::get<const CtxEntry*>(found));
      if (h.unfolded.type->k != TK::At)
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "migration input on " + p->chan + " requires an @ typed session");
      if (!(h.unfolded.type->dom == p->dom))
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "migration target " + p->dom.name + " differs from the type's domain " +
                       h.unfolded.type->dom.name);
      AccessEnv om2 = extend(om, h.unfolded.dom, h.unfolded.type->dom);
      std::string y = p->arg;
      ProcP body = p->body;
      NameSet taken = taken_names(ga, av, z);
      if (taken.count(y)) {
        std::string y2 = fresh_name(y, taken);
        body = subst_name(body, y2, y);
        y = y2;
      }
      Avail av2 = av;
      av2.erase(p->chan);
      CtxEntry ye{y, h.unfolded.type->body, h.unfolded.type->dom, sp};
      av2.put(ye);
      R sub = go(om2, ga, av2, body, z, goal, dom);
      if (bad(sub)) return sub;
      auto settled = settle(std::get<Out>(std::move(sub)), ye, sp);
      if (auto* e = std::get_if<TypeError>(&settled)) return *e;
      Out o = std::get<Out>(std::move(settled));
      o.consumed.insert(p->chan);
      auto j = judge(o.consumed);
      if (auto* e = std::get_if<TypeError>(&j)) return *e;
      return Out{wrap_herel(node(RuleName::AtL, std::get<Judgment>(std::move(j)), {o.d}), h),
                 std::move(o.consumed)};
    }

    case PK::DomSend: {
      if (p->chan == z) {
        if (goal->k != TK::Exists)
          return err(TypeError::Kind::ShapeMismatch, sp,
                     "domain output on " + z + " requires an ex typed offer");
        if (!direct(om, dom, p->dom))
          return err(TypeError::Kind::InaccessibleDomain, sp,
                     "domain " + p->dom.name + " is not directly accessible from " + dom.name,
                     std::make_pair(dom, p->dom));
        TypeP inst = subst_domain(goal->body, p->dom, goal->var);
        R sub = go(om, ga, av, p->body, z, inst, dom);
        if (bad(sub)) return sub;
        Out o = std::get<Out>(std::move(sub));
        auto j = judge(o.consumed);
        if (auto* e = std::get_if<TypeError>(&j)) return *e;
        return Out{node(RuleName::ExistsR, std::get<Judgment>(std::move(j)), {o.d}),
                   std::move(o.consumed)};
      }
      auto found = lookup(p->chan);
      if (auto* e = std::get_if<TypeError>(&found)) return *e;
      HypUse h = unfold_hyp(*std::get<const CtxEntry*>(found));
      if (h.unfolded.type->k != TK::Forall)
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "domain output on " + p->chan + " requires an all typed session");
      if (!direct(om, h.unfolded.dom, p->dom))
        return err(TypeError::Kind::InaccessibleDomain, sp,
                   "domain " + p->dom.name + " is not directly accessible from " +
                       h.unfolded.dom.name,
                   std::make_pair(h.unfolded.dom, p->dom));
      Avail av2 = av;
      CtxEntry xe{p->chan, subst_domain(h.unfolded.type->body, p->dom, h.unfolded.type->var),
                  h.unfolded.dom, sp};
      av2.put(xe);
      R sub = go(om, ga, av2, p->body, z, goal, dom);
      if (bad(sub)) return sub;
      Out o = std::get<Out>(std::move(sub));
      if (o.consumed.count(p->chan)) {
        o.consumed.erase(p->chan);
      } else {
        auto settled = settle(std::move(o), xe, sp);
        if (auto* e = std::get_if<TypeError>(&settled)) return *e;
        o = std::get<Out>(std::move(settled));
      }
      o.consumed.insert(p->chan);
      auto j = judge(o.consumed);
      if (auto* e = std::get_if<TypeError>(&j)) return *e;
      return Out{wrap_herel(node(RuleName::ForallL, std::get<Judgment>(std::move(j)), {o.d}),
                            h),
                 std::move(o.consumed)};
    }

    case PK::DomRecv: {
      if (p->chan == z) {
        if (goal->k != TK::Forall)
          return err(TypeError::Kind::ShapeMismatch, sp,
                     "domain input on " + z + " requires an all typed offer");
        std::string a = fresh_domvar(p->arg, om, ga, av, dom, goal, p->body);
        ProcP body = subst_domain(p->body, DomainTerm::v(a), p->arg);
        TypeP inst = subst_domain(goal->body, DomainTerm::v(a), goal->var);
        AccessEnv om2 = extend(om, dom, DomainTerm::v(a));
        R sub = go(om2, ga, av, body, z, inst, dom);
        if (bad(sub)) return sub;
        Out o = std::get<Out>(std::move(sub));
        auto j = judge(o.consumed);
        if (auto* e = std::get_if<TypeError>(&j)) return *e;
        return Out{node(RuleName::ForallR, std::get<Judgment>(std::move(j)), {o.d}),
                   std::move(o.consumed)};
      }
      auto found = lookup(p->chan);
      if (auto* e = std::get_if<TypeError>(&found)) return *e;
      HypUse h = unfold_hyp(*std::get<const CtxEntry*>(found));
      if (h.unfolded.type->k != TK::Exists)
        return err(TypeError::Kind::ShapeMismatch, sp,
                   "domain input on " + p->chan + " requires an ex typed session");
      std::string a = fresh_domvar(p->arg, om, ga, av, dom, goal, p->body);
      ProcP body = subst_domain(p->body, DomainTerm::v(a), p->arg);
      AccessEnv om2 = extend(om, h.unfolded.dom, DomainTerm::v(a));
      Avail av2 = av;
      CtxEntry xe{p->chan, subst_domain(h.unfolded.type->body, DomainTerm::v(a),
                                        h.unfolded.type->var),
                  h.unfolded.dom, sp};
      av2.put(xe);
      R sub = go(om2, ga, av2, body, z, goal, dom);
      if (bad(sub)) return sub;
      Out o = std::get<Out>(std::move(sub));
      if (o.consumed.count(p->chan)) {
        o.consumed.erase(p->chan);
      } else {
        auto settled = settle(std::move(o), xe, sp);
        if (auto* e = std::get_if<TypeError>(&settled)) return *e;
        o = std::get<Out>(std::move(settled));
      }
      o.consumed.insert(p->chan);
      auto j = judge(o.consumed);
      if (auto* e = std::get_if<TypeError>(&j)) return *e;
      return Out{wrap_herel(node(RuleName::ExistsL, std::get<Judgment>(std::move(j)), {o.d}),
                            h),
                 std::move(o.consumed)};
    }
  }
  return err(TypeError::Kind::ShapeMismatch, sp, "unsupported process form");
}

}  // namespace

bool wellformed(const Judgment& j) {
  return delta_accessible(j.omega, j.dom, j.delta);
}

CheckResult check(const Judgment& j) {
  // Name disjointness across the contexts and the offered channel.
  NameSet seen{j.offered};
  for (const auto& e : j.gamma) {
    if (!seen.insert(e.name).second)
      return err(TypeError::Kind::LinearityViolation, e.span,
                 "name " + e.name + " bound twice in the contexts");
  }
  for (const auto& e : j.delta) {
    if (!seen.insert(e.name).second)
      return err(TypeError::Kind::LinearityViolation, e.span,
                 "name " + e.name + " bound twice in the contexts");
  }

  // Well-formedness of the end sequent, reported with the failing pair.
  for (const auto& e : j.delta) {
    if (unit_after_heres(e.type, e.dom)) continue;
    if (!reaches(j.omega, j.dom, e.dom)) {
      return err(TypeError::Kind::InaccessibleDomain,
                 e.span.valid() ? e.span : (j.proc ? j.proc->span : Span{}),
                 "ill-formed sequent: domain " + e.dom.name + " of " + e.name +
                     " is not accessible from " + j.dom.name,
                 std::make_pair(j.dom, e.dom));
    }
  }

  Checker ck;
  Avail av;
  for (const auto& e : j.delta) av.entries.push_back(e);
  auto r = ck.go(j.omega, j.gamma, av, j.proc, j.offered, j.type, j.dom);
  if (bad(r)) return take_err(std::move(r));
  Out o = std::get<Out>(std::move(r));

  // Root reconciliation: leftovers must be discardable unit sessions.
  for (const auto& e : av.entries) {
    if (o.consumed.count(e.name)) continue;
    if (!unit_after_heres(e.type, e.dom))
      return err(TypeError::Kind::UnusedLinearResource, e.span,
                 "linear session " + e.name + " is never used");
    auto pushed = push_discard(o.d, e);
    if (!pushed)
      return err(TypeError::Kind::UnusedLinearResource, e.span,
                 "linear session " + e.name + " is never used");
    o.d = *pushed;
  }
  return o.d;
}

namespace {

NameSet delta_names(const Judgment& j) {
  NameSet out;
  for (const auto& e : j.delta) out.insert(e.name);
  return out;
}

void audit_node(const DerivP& d, std::vector<std::string>& problems) {
  if (!d) return;
  const Judgment& j = d->conclusion;
  auto fail = [&](const std::string& msg) {
    problems.push_back(std::string(rule_name(d->rule)) + ": " + msg);
  };
  if (!wellformed(j)) fail("conclusion not well-formed");

  NameSet mine = delta_names(j);
  auto prem_names = [&](size_t i) { return delta_names(d->premises[i]->conclusion); };

  // Per-rule bookkeeping: gains are resources this node consumes itself,
  // losses are binders a premise introduces.
  auto expect_eq = [&](const NameSet& a, const NameSet& b, const std::string& what) {
    if (a != b) fail(what);
  };

  switch (d->rule) {
    case RuleName::Id:
      if (mine.size() != 1) fail("id must consume exactly one hypothesis");
      break;
    case RuleName::OneR:
      if (!mine.empty()) fail("1R consumes no resources");
      break;
    case RuleName::OneL: {
      NameSet p = prem_names(0);
      if (mine.size() != p.size() + 1) fail("1L discards exactly one resource");
      for (const auto& n : p)
        if (!mine.count(n)) fail("1L premise resource missing from conclusion");
      break;
    }
    case RuleName::TensorR:
    case RuleName::LolliL:
    case RuleName::Cut: {
      if (d->premises.size() != 2) {
        fail("needs two premises");
        break;
      }
      NameSet a = prem_names(0);
      NameSet b = prem_names(1);
      // the name the right premise continues on (LolliL: x, Cut: fresh x)
      std::string xc;
      if (d->rule == RuleName::Cut) xc = d->premises[0]->conclusion.offered;
      for (const auto& n : a)
        if (b.count(n)) fail("resource " + n + " consumed in both premises");
      NameSet uni = a;
      for (const auto& n : b)
        if (n != xc) uni.insert(n);
      expect_eq(uni, mine, "conclusion resources differ from the premise split");
      break;
    }
    case RuleName::WithR:
    case RuleName::PlusL: {
      std::optional<NameSet> first;
      for (size_t i = 0; i < d->premises.size(); ++i) {
        NameSet s = prem_names(i);
        if (!first)
          first = s;
        else if (*first != s)
          fail("branches consume different linear subsets");
      }
      if (first && *first != mine) fail("branch resources differ from the conclusion");
      break;
    }
    case RuleName::BangR:
      if (!mine.empty()) fail("!R conclusion carries linear resources");
      if (!d->premises.empty() && !d->premises[0]->conclusion.delta.empty())
        fail("!R premise consumes linear resources");
      break;
    case RuleName::CutBang:
      if (d->premises.size() == 2) {
        if (!d->premises[0]->conclusion.delta.empty())
          fail("cut! replicated premise consumes linear resources");
        expect_eq(prem_names(1), mine, "cut! continuation resources differ");
      }
      break;
    case RuleName::BangL: {
      // x moves to Gamma: conclusion = premise + x
      NameSet p = prem_names(0);
      if (mine.size() != p.size() + 1) fail("!L consumes exactly the shared channel");
      break;
    }
    case RuleName::TensorL:
    case RuleName::AtL:
    case RuleName::Copy:
    case RuleName::LolliR: {
      // premise may add one bound name (and AtL trades x for y)
      NameSet p = prem_names(0);
      size_t extra = 0;
      for (const auto& n : p)
        if (!mine.count(n)) ++extra;
      size_t missing = 0;
      for (const auto& n : mine)
        if (!p.count(n)) ++missing;
      if (extra > 1) fail("premise introduces more than one binder");
      if (d->rule == RuleName::AtL && missing != 1) fail("@L must consume its subject");
      if ((d->rule == RuleName::TensorL || d->rule == RuleName::Copy ||
           d->rule == RuleName::LolliR) &&
          missing != 0)
        fail("conclusion resource missing from the premise");
      break;
    }
    default: {
      if (d->premises.size() == 1)
        expect_eq(prem_names(0), mine, "silent rule changed the linear context");
      break;
    }
  }

  for (const auto& prem : d->premises) audit_node(prem, problems);
}

}  // namespace

std::vector<std::string> audit_derivation(const DerivP& d) {
  std::vector<std::string> problems;
  audit_node(d, problems);
  return problems;
}

}  // namespace dst
