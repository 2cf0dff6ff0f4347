#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dst/domain.hpp"
#include "dst/span.hpp"
#include "dst/type.hpp"

namespace dst {

struct Process;
using ProcP = std::shared_ptr<const Process>;

struct ProcBranch {
  std::string label;
  ProcP body;
};

/// Session type and domain annotation on a restriction; required by the
/// type checker for cut, ignored by the dynamics.
struct RestrictAnnot {
  TypeP type;
  DomainTerm dom;
};

/// Processes of the synchronous pi-calculus with labeled choice, domain
/// migration and domain communication.
///
/// Binders (scope = `body`): Restrict binds `chan`; Receive, ReplReceive,
/// BoundSend, MigrateSend and MigrateRecv bind `arg` (a name); DomRecv
/// binds `arg` (a domain variable).  `Send` is the free-output form;
/// `BoundSend` is the usual (new y) x<y> sugar.
struct Process {
  enum class K {
    Inaction,
    Par,
    Restrict,
    Send,
    BoundSend,
    Receive,
    ReplReceive,
    Forward,
    Branch,
    Select,
    MigrateSend,
    MigrateRecv,
    DomSend,
    DomRecv,
  };

  K k = K::Inaction;
  std::string chan;  // subject; Restrict: bound name; Forward: left endpoint
  std::string arg;   // payload / bound name / Forward right endpoint / DomRecv binder
  DomainTerm dom;    // MigrateSend/MigrateRecv/DomSend
  ProcP body;        // continuation (or Restrict body, Par left)
  ProcP rhs;         // Par right
  std::vector<ProcBranch> branches;  // Branch
  std::string label;                 // Select
  std::optional<RestrictAnnot> annot;  // Restrict
  Span span;

  Process() = default;
};

inline ProcP p_inaction() {
  static const ProcP zero = std::make_shared<Process>();
  return zero;
}

inline ProcP p_par(ProcP a, ProcP b) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::Par;
  p->body = std::move(a);
  p->rhs = std::move(b);
  return p;
}

inline ProcP p_restrict(std::string x, ProcP body) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::Restrict;
  p->chan = std::move(x);
  p->body = std::move(body);
  return p;
}

inline ProcP p_restrict(std::string x, RestrictAnnot annot, ProcP body) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::Restrict;
  p->chan = std::move(x);
  p->annot = std::move(annot);
  p->body = std::move(body);
  return p;
}

inline ProcP p_send(std::string x, std::string y, ProcP cont) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::Send;
  p->chan = std::move(x);
  p->arg = std::move(y);
  p->body = std::move(cont);
  return p;
}

inline ProcP p_bsend(std::string x, std::string y, ProcP cont) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::BoundSend;
  p->chan = std::move(x);
  p->arg = std::move(y);
  p->body = std::move(cont);
  return p;
}

inline ProcP p_recv(std::string x, std::string y, ProcP cont) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::Receive;
  p->chan = std::move(x);
  p->arg = std::move(y);
  p->body = std::move(cont);
  return p;
}

inline ProcP p_repl(std::string x, std::string y, ProcP cont) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::ReplReceive;
  p->chan = std::move(x);
  p->arg = std::move(y);
  p->body = std::move(cont);
  return p;
}

inline ProcP p_fwd(std::string x, std::string y) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::Forward;
  p->chan = std::move(x);
  p->arg = std::move(y);
  return p;
}

inline ProcP p_branch(std::string x, std::vector<ProcBranch> bs) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::Branch;
  p->chan = std::move(x);
  p->branches = std::move(bs);
  return p;
}

inline ProcP p_select(std::string x, std::string l, ProcP cont) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::Select;
  p->chan = std::move(x);
  p->label = std::move(l);
  p->body = std::move(cont);
  return p;
}

inline ProcP p_msend(std::string x, std::string y, DomainTerm w, ProcP cont) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::MigrateSend;
  p->chan = std::move(x);
  p->arg = std::move(y);
  p->dom = std::move(w);
  p->body = std::move(cont);
  return p;
}

inline ProcP p_mrecv(std::string x, std::string y, DomainTerm w, ProcP cont) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::MigrateRecv;
  p->chan = std::move(x);
  p->arg = std::move(y);
  p->dom = std::move(w);
  p->body = std::move(cont);
  return p;
}

inline ProcP p_dsend(std::string x, DomainTerm w, ProcP cont) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::DomSend;
  p->chan = std::move(x);
  p->dom = std::move(w);
  p->body = std::move(cont);
  return p;
}

inline ProcP p_drecv(std::string x, std::string a, ProcP cont) {
  auto p = std::make_shared<Process>();
  p->k = Process::K::DomRecv;
  p->chan = std::move(x);
  p->arg = std::move(a);
  p->body = std::move(cont);
  return p;
}

/// True for the guarded prefixes pi.Q of the liveness predicate: every
/// constructor that waits to perform an action, replication excluded.
inline bool is_prefix(Process::K k) {
  switch (k) {
    case Process::K::Send:
    case Process::K::BoundSend:
    case Process::K::Receive:
    case Process::K::Branch:
    case Process::K::Select:
    case Process::K::MigrateSend:
    case Process::K::MigrateRecv:
    case Process::K::DomSend:
    case Process::K::DomRecv:
      return true;
    default:
      return false;
  }
}

}  // namespace dst
