#pragma once

#include <string>
#include <vector>

#include "dst/dynamics.hpp"
#include "dst/typecheck.hpp"

namespace dst {

/// Result of running the metatheory harness over one standing judgment:
/// exhaustive reduction graph with re-checking (preservation), liveness
/// implies reducibility (progress), finite acyclic graphs with non-live
/// maximal states (termination), and reachable cut domains accessible from
/// the offered domain (domain preservation).
struct MetaReport {
  size_t states = 0;
  size_t edges = 0;
  bool root_typed = false;
  bool preservation = true;
  bool progress = true;
  bool termination = true;
  bool domain_preservation = true;
  bool bound_exceeded = false;
  std::vector<std::string> failures;

  bool all_ok() const {
    return root_typed && preservation && progress && termination &&
           domain_preservation && !bound_exceeded;
  }
};

MetaReport run_meta(const Judgment& root, size_t depth_bound = 64);

}  // namespace dst
