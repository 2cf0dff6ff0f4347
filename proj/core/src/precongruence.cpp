#include "dst/precongruence.hpp"

#include <set>

#include "dst/syntax.hpp"

namespace dst {

namespace {

using LK = LocalType::K;

void collect_terms(const LocalP& t, std::set<DomainTerm>& out) {
  if (!t) return;
  if (t->k == LK::At) out.insert(t->dom);
  for (const auto& b : t->branches) {
    if (b.payload && b.payload->k == Payload::K::Session) collect_terms(b.payload->session, out);
    collect_terms(b.cont, out);
  }
  collect_terms(t->body, out);
}

bool pc(const LocalP& l, const LocalP& r, int depth);

bool payload_pc(const Payload& a, const Payload& b, int depth) {
  if (a.k != b.k) return false;
  if (a.k == Payload::K::Base) return a.base == b.base;
  return pc(a.session, b.session, depth);
}

bool pc(const LocalP& l, const LocalP& r, int depth) {
  if (depth <= 0) return false;
  if (!l || !r) return false;
  if (local_eq(l, r)) return true;

  // congruence under matching binders
  if (l->k == r->k && (l->k == LK::Forall || l->k == LK::Exists || l->k == LK::Here)) {
    NameSet used = free_domain_vars(l->body);
    for (const auto& v : free_domain_vars(r->body)) used.insert(v);
    std::string c = fresh_name("pcv", used);
    if (pc(subst_domain(l->body, DomainTerm::v(c), l->var),
           subst_domain(r->body, DomainTerm::v(c), r->var), depth - 1))
      return true;
  }

  // silent here on the right: T <= here a.T when a does not occur
  if (r->k == LK::Here && !free_domain_vars(r->body).count(r->var)) {
    if (pc(l, r->body, depth - 1)) return true;
  }

  // here elimination on the left: here a.T <= T{w/a}
  if (l->k == LK::Here) {
    std::set<DomainTerm> cands;
    collect_terms(r, cands);
    collect_terms(l->body, cands);
    NameSet names;
    for (const auto& d : cands) names.insert(d.name);
    cands.insert(DomainTerm::c(fresh_name("pcw", names)));
    for (const auto& w : cands) {
      if (pc(subst_domain(l->body, w, l->var), r, depth - 1)) return true;
    }
    return false;
  }

  if (l->k != r->k) return false;
  switch (l->k) {
    case LK::Recv: {
      // width: the right may offer more; shared labels relate pointwise
      if (l->peer != r->peer) return false;
      for (const auto& lb : l->branches) {
        const LBranch* rb = nullptr;
        for (const auto& cand : r->branches)
          if (cand.label == lb.label) rb = &cand;
        if (!rb) return false;
        if (lb.payload.has_value() != rb->payload.has_value()) return false;
        if (lb.payload && !payload_pc(*lb.payload, *rb->payload, depth - 1)) return false;
        if (!pc(lb.cont, rb->cont, depth - 1)) return false;
      }
      return true;
    }
    case LK::Send: {
      if (l->peer != r->peer) return false;
      if (l->branches.size() != r->branches.size()) return false;
      for (const auto& lb : l->branches) {
        const LBranch* rb = nullptr;
        for (const auto& cand : r->branches)
          if (cand.label == lb.label) rb = &cand;
        if (!rb) return false;
        if (lb.payload.has_value() != rb->payload.has_value()) return false;
        if (lb.payload && !payload_pc(*lb.payload, *rb->payload, depth - 1)) return false;
        if (!pc(lb.cont, rb->cont, depth - 1)) return false;
      }
      return true;
    }
    case LK::At:
      return l->dom == r->dom && pc(l->body, r->body, depth - 1);
    default:
      return false;
  }
}

}  // namespace

bool precongruent(const LocalP& t1, const LocalP& t2) {
  int bound = static_cast<int>(size_of(t1) + size_of(t2)) + 8;
  return pc(t1, t2, bound);
}

}  // namespace dst
