#include "dst/access.hpp"

#include <deque>

#include "dst/syntax.hpp"

namespace dst {

namespace {

/// Single accessibility step: a hypothesis edge, read backwards as well
/// when the symmetry rule is enabled.
bool step(const AccessEnv& env, const DomainTerm& a, const DomainTerm& b) {
  if (env.has_edge(a, b)) return true;
  if (env.config.symmetric && env.has_edge(b, a)) return true;
  return false;
}

/// A path of one or more steps from a to b.
bool path_nonempty(const AccessEnv& env, const DomainTerm& a, const DomainTerm& b) {
  std::deque<DomainTerm> work{a};
  std::set<DomainTerm> seen;  // a itself is only visited via a step
  while (!work.empty()) {
    DomainTerm cur = work.front();
    work.pop_front();
    for (const auto& [x, y] : env.edges) {
      auto push = [&](const DomainTerm& nxt) {
        if (nxt == b) return true;
        if (seen.insert(nxt).second) work.push_back(nxt);
        return false;
      };
      if (x == cur && push(y)) return true;
      if (env.config.symmetric && y == cur && push(x)) return true;
    }
  }
  return false;
}

bool reach_by_steps(const AccessEnv& env, const DomainTerm& a, const DomainTerm& b) {
  if (a == b) return true;
  return path_nonempty(env, a, b);
}

bool type_is_unit(const TypeP& t, const DomainTerm& at) {
  TypeP cur = t;
  DomainTerm dom = at;
  // a unit session possibly wrapped in "here" binders, which only name the
  // current domain
  while (cur && cur->k == Type::K::Here) cur = subst_domain(cur->body, dom, cur->var);
  return cur && cur->k == Type::K::One;
}

}  // namespace

AccessEnv extend(const AccessEnv& env, const DomainTerm& a, const DomainTerm& b) {
  AccessEnv out = env;
  out.edges.insert({a, b});
  return out;
}

bool direct(const AccessEnv& env, const DomainTerm& a, const DomainTerm& b) {
  if (env.config.reflexive && a == b) return true;
  if (step(env, a, b)) return true;
  if (env.config.transitive) return path_nonempty(env, a, b);
  return false;
}

bool reaches(const AccessEnv& env, const DomainTerm& a, const DomainTerm& b) {
  // Reflexive-transitive regardless of the configuration; extra direct
  // steps contributed by the closure rules are already paths.
  return reach_by_steps(env, a, b);
}

bool delta_accessible(const AccessEnv& env, const DomainTerm& w, const LinearCtx& delta) {
  for (const auto& e : delta) {
    if (type_is_unit(e.type, e.dom)) continue;
    if (!reaches(env, w, e.dom)) return false;
  }
  return true;
}

std::set<DomainTerm> domains_of(const AccessEnv& env) {
  std::set<DomainTerm> out;
  for (const auto& [a, b] : env.edges) {
    out.insert(a);
    out.insert(b);
  }
  return out;
}

}  // namespace dst
