#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dst/process.hpp"
#include "dst/syntax.hpp"

namespace dst {

/// Labels of the early labeled transition system.
struct ActionLabel {
  enum class K {
    Tau,
    In,         // x(y)       receive name y
    DomIn,      // x(w)       receive domain w
    ChoiceIn,   // x.l
    MigIn,      // x.y@w
    FreeOut,    // x!y
    BoundOut,   // x<(y)>     extrudes fresh y
    DomOut,     // x<w>
    SelOut,     // x[l]
    MigOut,     // x<<y@w>>   extrudes fresh y
  };

  K k = K::Tau;
  std::string subject;             // undefined for Tau
  std::string object;              // name payloads
  std::string label;               // choice labels
  DomainTerm dom;                  // domain payloads / migration targets

  static ActionLabel tau() { return {}; }
  bool is_tau() const { return k == K::Tau; }
};

std::string to_string(const ActionLabel& l);

/// All one-step reducts of P, distinct up to structural congruence.
/// Redex search runs on normalize(P); reduction is domain-agnostic (the
/// typing discipline, not the dynamics, rules out cross-domain talk).
/// Annotations on communicating restrictions are rewritten alongside so
/// that reducts of annotated systems can be re-checked.
std::vector<ProcP> reductions(const ProcP& p);

/// Probe sets for early-style input transitions.
struct ProbeSet {
  NameSet names;
  std::vector<DomainTerm> doms;
};

/// Default probes: free names / mentioned domains of P plus one fresh
/// witness of each sort.
ProbeSet default_probes(const ProcP& p);

std::vector<std::pair<ActionLabel, ProcP>> transitions(const ProcP& p);
std::vector<std::pair<ActionLabel, ProcP>> transitions(const ProcP& p, const ProbeSet& probes);

/// live(P): P is structurally congruent to (new ns)(pi.Q | R) with pi.Q a
/// non-replicated guarded process.
bool is_live(const ProcP& p);

/// Reassociates a normalized state into nested binary compositions: each
/// restriction wraps exactly the component groups its channel links, with
/// a terminated side synthesized when one endpoint has already finished.
/// States whose sharing graph is not a tree are returned unchanged.
ProcP structure_cuts(const ProcP& p);

enum class RunStrategy { DeterministicFirst, Random };

struct TraceStep {
  ProcP before;
  ActionLabel label;  // reductions are internal: always tau
  ProcP after;
};

struct Trace {
  std::vector<TraceStep> steps;
  ProcP final;
  bool terminal = false;        // no reduction enabled at `final`
  bool budget_exhausted = false;  // max_steps hit while still live
};

Trace run(const ProcP& p, size_t max_steps, RunStrategy strategy, uint64_t seed = 0);

/// BFS exploration of the reduction relation modulo struct_congruent.
struct ReductionGraph {
  std::vector<ProcP> states;                       // states[0] is the root
  std::vector<std::pair<size_t, size_t>> edges;    // state -> state
  bool bound_exceeded = false;
  bool has_cycle = false;

  std::vector<size_t> successors(size_t i) const {
    std::vector<size_t> out;
    for (auto& [a, b] : edges)
      if (a == i) out.push_back(b);
    return out;
  }
};

ReductionGraph reduction_graph(const ProcP& p, size_t depth_bound);

}  // namespace dst
