#pragma once

#include <string>
#include <vector>

#include "dst/medium.hpp"
#include "dst/mpst.hpp"
#include "dst/typecheck.hpp"

namespace dst::testing {

/// A closed, well-typed system with its standing judgment.
struct CorpusSystem {
  std::string name;
  Judgment judgment;
};

/// Hand-built binary systems: the web store family, the bank/store
/// composition, the modal axioms, and one drill per connective group.
std::vector<CorpusSystem> binary_systems();

/// Well-formed global protocols, including the middleware type and the
/// extended examples.
struct CorpusGlobal {
  std::string name;
  GlobalP g;
};
std::vector<CorpusGlobal> corpus_globals();

/// A hand-written reference orchestrator for the middleware protocol
/// over the default channel names; the generated medium must be
/// alpha-equal to it.
ProcP middleware_reference_medium();

/// Medium-based systems: every corpus global type composed with canonical
/// implementations (middleware twice, once per path).
std::vector<CorpusSystem> composed_systems();

/// binary_systems + composed_systems.
std::vector<CorpusSystem> corpus_systems();

}  // namespace dst::testing
