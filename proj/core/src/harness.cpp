#include "dst/harness.hpp"

#include "dst/syntax.hpp"

namespace dst {

namespace {

/// Standing cuts of a state: the annotated restrictions of its spine.
std::vector<RestrictAnnot> standing_cuts(const ProcP& state) {
  std::vector<RestrictAnnot> out;
  ProcSpine s = spine_of(normalize(state));
  for (const auto& b : s.binders)
    if (b.annot) out.push_back(*b.annot);
  return out;
}

}  // namespace

MetaReport run_meta(const Judgment& root, size_t depth_bound) {
  MetaReport rep;

  auto root_res = check(root);
  rep.root_typed = ok(root_res);
  if (!rep.root_typed) {
    rep.failures.push_back("root judgment does not check: " + error(root_res).message);
    rep.preservation = rep.progress = rep.termination = rep.domain_preservation = false;
    return rep;
  }

  ReductionGraph g = reduction_graph(root.proc, depth_bound);
  rep.states = g.states.size();
  rep.edges = g.edges.size();
  rep.bound_exceeded = g.bound_exceeded;
  if (g.bound_exceeded) {
    rep.termination = false;
    rep.failures.push_back("reduction graph exceeded the depth bound");
  }
  if (g.has_cycle) {
    rep.termination = false;
    rep.failures.push_back("reduction graph has a cycle");
  }

  // the progress and liveness claims concern closed systems offering a
  // terminated session
  const bool closed = root.gamma.empty() && root.delta.empty() && root.type &&
                      root.type->k == Type::K::One;

  for (size_t i = 0; i < g.states.size(); ++i) {
    const ProcP& st = g.states[i];

    // preservation: the standing judgment re-checks at every node, with
    // the state reassociated into nested compositions first
    Judgment j = root;
    j.proc = structure_cuts(st);
    auto res = check(j);
    if (!ok(res)) {
      rep.preservation = false;
      rep.failures.push_back("state " + std::to_string(i) +
                             " does not re-check: " + error(res).message);
    }

    // progress: live closed states must reduce
    if (closed && is_live(st) && g.successors(i).empty() && !g.bound_exceeded) {
      rep.progress = false;
      rep.failures.push_back("state " + std::to_string(i) + " is live but stuck");
    }

    // termination: maximal states of closed systems must be non-live
    if (closed && g.successors(i).empty() && !g.bound_exceeded && is_live(st)) {
      rep.termination = false;
      rep.failures.push_back("maximal state " + std::to_string(i) + " is still live");
    }

    // domain preservation: every standing cut accessible from the root domain
    for (const auto& cut : standing_cuts(st)) {
      bool unit = false;
      {
        TypeP t = cut.type;
        DomainTerm d = cut.dom;
        while (t && t->k == Type::K::Here) t = subst_domain(t->body, d, t->var);
        unit = t && t->k == Type::K::One;
      }
      if (unit) continue;
      if (!reaches(root.omega, root.dom, cut.dom)) {
        rep.domain_preservation = false;
        rep.failures.push_back("state " + std::to_string(i) + ": cut at domain " +
                               cut.dom.name + " inaccessible from " + root.dom.name);
      }
    }
  }
  return rep;
}

}  // namespace dst
