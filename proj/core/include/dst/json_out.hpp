#pragma once

#include "json.hpp"

#include "dst/dynamics.hpp"
#include "dst/harness.hpp"
#include "dst/typecheck.hpp"

namespace dst {

/// Stable derivation schema: {rule, sequent, premises}; sequents render in
/// surface syntax and re-parse.
nlohmann::json derivation_to_json(const DerivP& d);

/// Stable error schema: {errorKind, span, message}.
nlohmann::json error_to_json(const TypeError& e);

/// Structured AST mirror for machine consumers.
nlohmann::json process_to_json(const ProcP& p);

nlohmann::json trace_to_json(const Trace& t);
nlohmann::json graph_to_json(const ReductionGraph& g);
nlohmann::json meta_to_json(const MetaReport& m);

}  // namespace dst
