#pragma once

#include <string>

#include "dst/mpst.hpp"
#include "dst/process.hpp"
#include "dst/syntax.hpp"
#include "dst/typecheck.hpp"

namespace dst {

/// What the reader of the printed text will already know is a domain.
/// The printer inserts the explicit `$` domain marker only where the
/// classification of an identifier would otherwise be ambiguous, so
/// print/parse round-trips under the same symbol knowledge.
struct PrintContext {
  NameSet domain_consts;
  NameSet domain_vars;
};

std::string print(const TypeP& t);
std::string print(const ProcP& p, const PrintContext& ctx = {});
std::string print(const LocalP& t);
std::string print(const GlobalP& g);
std::string print(const DomainTerm& d);
std::string print(const Judgment& j);  // sequent in surface syntax

}  // namespace dst
