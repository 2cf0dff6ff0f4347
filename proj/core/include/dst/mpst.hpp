#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dst/access.hpp"
#include "dst/domain.hpp"
#include "dst/type.hpp"

namespace dst {

using Participant = std::string;

struct LocalType;
using LocalP = std::shared_ptr<const LocalType>;

/// Message payloads: a base sort or a delegated session.
struct Payload {
  enum class K { Base, Session };
  K k = K::Base;
  std::string base;  // bool | nat | str | any declared sort
  LocalP session;

  static Payload b(std::string s) { return {K::Base, std::move(s), nullptr}; }
  static Payload s(LocalP t) { return {K::Session, "", std::move(t)}; }
};

struct GlobalType;
using GlobalP = std::shared_ptr<const GlobalType>;

struct GBranch {
  std::string label;
  std::optional<Payload> payload;
  GlobalP cont;
};

/// Global protocols:
///   G ::= end | p -> q { l<U>. G, ... } | move p [qs] to w { G1 } then { G2 }
struct GlobalType {
  enum class K { End, Comm, Move };
  K k = K::End;
  Participant from, to;        // Comm
  std::vector<GBranch> branches;
  Participant leader;          // Move
  std::vector<Participant> migrants;
  DomainTerm target;
  GlobalP sub, cont;           // Move: G1, G2
};

struct LBranch {
  std::string label;
  std::optional<Payload> payload;
  LocalP cont;
};

/// Local protocols, the per-participant views:
///   T ::= end | p?{...} | p!{...} | all a.T | ex a.T | @w T | here a.T
/// Send names the recipient, Recv the sender.  Exists carries an optional
/// migration target so canonical implementations can be derived; it is
/// ignored by equality and by the binary translation.
struct LocalType {
  enum class K { End, Recv, Send, Forall, Exists, At, Here };
  K k = K::End;
  Participant peer;            // Recv/Send
  std::vector<LBranch> branches;
  std::string var;             // Forall/Exists/Here binder
  DomainTerm dom;              // At
  LocalP body;
  std::optional<DomainTerm> move_target;  // Exists, when projected from a Move
};

GlobalP g_end();
GlobalP g_comm(Participant p, Participant q, std::vector<GBranch> bs);
GlobalP g_move(Participant p, std::vector<Participant> qs, DomainTerm w, GlobalP g1, GlobalP g2);

LocalP l_end();
LocalP l_recv(Participant p, std::vector<LBranch> bs);
LocalP l_send(Participant p, std::vector<LBranch> bs);
LocalP l_forall(std::string a, LocalP t);
LocalP l_exists(std::string a, LocalP t);
LocalP l_exists(std::string a, LocalP t, DomainTerm target);
LocalP l_at(DomainTerm w, LocalP t);
LocalP l_here(std::string a, LocalP t);

bool local_eq(const LocalP& a, const LocalP& b);  // up to binder renaming
bool payload_eq(const Payload& a, const Payload& b);
bool global_eq(const GlobalP& a, const GlobalP& b);

LocalP subst_domain(const LocalP& t, const DomainTerm& w, const std::string& a);
std::set<std::string> free_domain_vars(const LocalP& t);
size_t size_of(const LocalP& t);
size_t size_of(const GlobalP& g);

std::set<Participant> participants(const GlobalP& g);

/// The commutative partial merge: identical terminated/selection/hybrid
/// types, or branch-union on receives with recursive merge on shared
/// labels.  nullopt when undefined.
std::optional<LocalP> merge(const LocalP& a, const LocalP& b);
std::optional<Payload> merge(const Payload& a, const Payload& b);

/// Fusion T1 ⨝ T2: appends T2 at every terminated leaf of T1; undefined
/// outside the structural cases (End never occurs on the left of a
/// non-trivial position).
std::optional<LocalP> fuse_local(const LocalP& a, const LocalP& b);

struct ProjError {
  Participant role;
  std::string message;  // names the branch pair that failed to merge
};

using ProjResult = std::variant<LocalP, ProjError>;

/// Merge-based projection of G onto r.
ProjResult project(const GlobalP& g, const Participant& r);

inline bool ok(const ProjResult& r) { return std::holds_alternative<LocalP>(r); }
inline const LocalP& local(const ProjResult& r) { return std::get<LocalP>(r); }

struct WfReport {
  bool ok = true;
  std::vector<std::string> diagnostics;
};

/// Well-formedness: all projections defined, Move participant/accessibility
/// side conditions hold (condition (b) against the given home map and
/// accessibility environment), structural invariants respected.
WfReport well_formed(const GlobalP& g,
                     const std::map<Participant, DomainTerm>& homes,
                     const AccessEnv& env);

/// Projections only (no accessibility data needed).
WfReport projectable(const GlobalP& g);

/// The translation from local types to binary session types.
TypeP to_binary(const LocalP& t);
TypeP to_binary(const Payload& u);

}  // namespace dst
