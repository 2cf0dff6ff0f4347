#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>

#include "dst/mpst.hpp"
#include "dst/process.hpp"
#include "dst/typecheck.hpp"

namespace dst {

/// Channel and domain assignment for a medium: one indexed name and one
/// home domain per participant, pairwise distinct homes, plus the domain
/// and offered channel of the medium itself.
struct MediumConfig {
  std::map<Participant, std::string> name_map;
  std::map<Participant, DomainTerm> home_domains;
  DomainTerm medium_domain;
  std::string offered = "z";

  /// c_p / w_p per participant, medium at w_m.
  static MediumConfig defaults(const GlobalP& g);

  /// Empty when valid; otherwise the violated invariant.
  std::string validate(const GlobalP& g) const;
};

struct FuseError {
  std::string blocking;  // constructor that escaped the listed shapes
};

using FuseResult = std::variant<ProcP, FuseError>;

/// Process fusion: grafts Q at the terminated leaves of P through the
/// prefix classes of the definition; undefined elsewhere.
FuseResult fuse_proc(const ProcP& p, const ProcP& q);

inline bool ok(const FuseResult& r) { return std::holds_alternative<ProcP>(r); }
inline const ProcP& fused(const FuseResult& r) { return std::get<ProcP>(r); }

struct MediumError {
  std::string message;
};

using MediumResult = std::variant<ProcP, MediumError>;

/// M[[G]]: the orchestrator relaying every interaction of G over the
/// per-participant channels of `cfg`.  Payload-free labels elide the
/// receive/send/forward relay.
MediumResult medium(const GlobalP& g, const MediumConfig& cfg);

using JudgmentResult = std::variant<Judgment, MediumError>;

/// The compositional judgment for M[[G]]: Omega carries home -> medium
/// edges plus one edge per Move from each migrant's current domain to the
/// target, closed as an equivalence; Delta assigns each participant
/// channel the binary translation of its projection; the goal is
/// offered : 1 [medium domain].  The attached process is medium(G, cfg).
JudgmentResult medium_judgment(const GlobalP& g, const MediumConfig& cfg);

using VerifyResult = std::variant<DerivP, TypeError, MediumError>;

/// Runs the checker on the compositional judgment; acceptance is the
/// mechanized statement that well-formed global types have well-typed
/// mediums.
VerifyResult verify_medium(const GlobalP& g, const MediumConfig& cfg);

/// Witness check for the converse direction: each assigned binary type
/// must be the translation of a supplied local type that the projection
/// precedes under the pre-congruence.
bool check_medium_types(const GlobalP& g,
                        const std::map<Participant, TypeP>& assigned,
                        const std::map<Participant, LocalP>& witnesses);

/// Label chooser for canonical implementations: given the path of labels
/// selected so far and the available labels, pick one.
using LabelChooser =
    std::function<std::string(const std::vector<std::string>& path,
                              const std::vector<std::string>& labels)>;

LabelChooser first_label();
LabelChooser scripted_labels(std::vector<std::string> script);

/// A participant implementation derived from the projection: offers
/// exactly c_r : <<G|r>> [home(r)].  Requires base payloads on branches the
/// implementation sends (unit sessions are synthesized).
MediumResult canonical_impl(const GlobalP& g, const Participant& r, const MediumConfig& cfg,
                            const LabelChooser& choose);

struct ComposeError {
  Participant participant;  // empty when the failure is not per-participant
  TypeError error;
};

using ComposeResult = std::variant<ProcP, ComposeError, MediumError>;

/// Typeful composition (new c_p1)(impl_1 | ... (new c_pn)(impl_n | M)...),
/// with every restriction annotated for the checker.  Each implementation
/// is checked against its projection first; the composite checks as
/// offered : 1 [medium domain].
ComposeResult compose_system(const GlobalP& g, const MediumConfig& cfg,
                             const std::map<Participant, ProcP>& impls);

/// The root judgment a composed system satisfies (closed: empty contexts).
Judgment composed_judgment(const GlobalP& g, const MediumConfig& cfg, const ProcP& system);

/// Number of prefixes in a process (parallel and restriction excluded);
/// the medium is linear in G by construction.
size_t prefix_count(const ProcP& p);

}  // namespace dst
