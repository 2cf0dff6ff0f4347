#pragma once

#include <set>
#include <utility>
#include <vector>

#include "dst/context.hpp"
#include "dst/domain.hpp"

namespace dst {

/// Which structural rules the direct accessibility judgment is closed
/// under.  All eight combinations are meaningful; the reflexive-transitive
/// closure `reaches` is insensitive to `reflexive`/`transitive`.
struct ClosureConfig {
  bool reflexive = false;
  bool transitive = false;
  bool symmetric = false;

  friend bool operator==(const ClosureConfig&, const ClosureConfig&) = default;
};

inline ClosureConfig equivalence_closure() { return {true, true, true}; }

/// Hypotheses w1 < w2 over domain terms, plus the closure configuration.
/// Variables are opaque nodes: membership is syntactic, no unification.
struct AccessEnv {
  std::set<std::pair<DomainTerm, DomainTerm>> edges;
  ClosureConfig config;

  bool has_edge(const DomainTerm& a, const DomainTerm& b) const {
    return edges.count({a, b}) != 0;
  }
};

/// New environment with the edge added; idempotent.
AccessEnv extend(const AccessEnv& env, const DomainTerm& a, const DomainTerm& b);

/// The judgment Omega |- w1 < w2: a single step of the accessibility
/// relation, closed on demand under the enabled closure rules.
bool direct(const AccessEnv& env, const DomainTerm& a, const DomainTerm& b);

/// The judgment Omega |- w1 <* w2: reflexive-transitive closure of direct,
/// always reflexive and transitive regardless of the configuration.
bool reaches(const AccessEnv& env, const DomainTerm& a, const DomainTerm& b);

/// Omega |- w <* Delta: every linear hypothesis still owing interaction is
/// reachable from w.  Assignments whose type is 1 (possibly under "here"
/// binders) are exempt: unit sessions are opaque values and may sit in any
/// domain.
bool delta_accessible(const AccessEnv& env, const DomainTerm& w, const LinearCtx& delta);

/// Every domain term mentioned by the hypotheses.
std::set<DomainTerm> domains_of(const AccessEnv& env);

}  // namespace dst
