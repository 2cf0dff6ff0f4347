#pragma once

#include <string>
#include <vector>

#include "dst/typecheck.hpp"

namespace dst::testing {

/// One accepting and one rejecting judgment for a typing rule.
struct RuleCase {
  std::string rule;
  Judgment accept;
  Judgment reject;
};

std::vector<RuleCase> rule_suite();

/// The exR/@R/1R hand derivation of the domain-exchange example:
/// [w1 < w2] ; ; |- z<w2>. z<<y@w2>>. 0 :: z : ex a. @a 1 @ w1
Judgment exists_at_example();

}  // namespace dst::testing
