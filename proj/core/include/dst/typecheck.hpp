#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dst/access.hpp"
#include "dst/context.hpp"
#include "dst/process.hpp"

namespace dst {

/// The 26 rules of the system: identity, units, multiplicatives, additives
/// (split into their one-step forms), exponentials, the two cuts, and the
/// hybrid rules for @, the quantifiers, and "here".
enum class RuleName {
  Id,
  OneR,
  OneL,
  TensorR,
  TensorL,
  LolliR,
  LolliL,
  WithR,
  WithL1,
  WithL2,
  PlusR1,
  PlusR2,
  PlusL,
  BangR,
  BangL,
  Copy,
  Cut,
  CutBang,
  AtR,
  AtL,
  ForallR,
  ForallL,
  ExistsR,
  ExistsL,
  HereR,
  HereL,
};

const char* rule_name(RuleName r);

/// A sequent Omega ; Gamma ; Delta |- P :: offered : type [dom].
struct Judgment {
  AccessEnv omega;
  SharedCtx gamma;
  LinearCtx delta;
  ProcP proc;
  std::string offered;
  TypeP type;
  DomainTerm dom;
};

struct Derivation;
using DerivP = std::shared_ptr<const Derivation>;

struct Derivation {
  RuleName rule;
  Judgment conclusion;
  std::vector<DerivP> premises;
};

struct TypeError {
  enum class Kind {
    LabelMismatch,
    LinearityViolation,
    InaccessibleDomain,
    MissingAnnotation,
    UnusedLinearResource,
    ShapeMismatch,
    UnknownName,
  };

  Kind kind = Kind::ShapeMismatch;
  Span span;
  std::string message;
  /// For InaccessibleDomain: the pair (w1, w2) whose accessibility failed.
  std::optional<std::pair<DomainTerm, DomainTerm>> failing_pair;
};

const char* error_kind_name(TypeError::Kind k);

using CheckResult = std::variant<DerivP, TypeError>;

inline bool ok(const CheckResult& r) { return std::holds_alternative<DerivP>(r); }
inline const DerivP& deriv(const CheckResult& r) { return std::get<DerivP>(r); }
inline const TypeError& error(const CheckResult& r) { return std::get<TypeError>(r); }

/// Well-formedness of the sequent: every linear hypothesis accessible from
/// the offered domain (unit sessions exempt).
bool wellformed(const Judgment& j);

/// Decides Omega ; Gamma ; Delta |- P :: z : A [w] by syntax-directed
/// checking with lazy context splitting.  On success the returned
/// derivation's conclusion is `j`; on failure the outermost blocking error.
CheckResult check(const Judgment& j);

/// Structural audit of a produced derivation: context splitting is exact,
/// every node well-formed, choice branches agree on consumption, !R
/// premises consume nothing.  Returns problems found (empty = sound).
std::vector<std::string> audit_derivation(const DerivP& d);

}  // namespace dst
