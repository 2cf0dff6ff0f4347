#pragma once

#include <compare>
#include <string>

namespace dst {

/// A domain term: either a concrete domain tag (w, ws, sec, ...) or a
/// domain variable (a, b, ...).  The two namespaces are disjoint; a term
/// knows which side it lives on.
struct DomainTerm {
  enum class Kind { Const, Var };

  Kind kind = Kind::Const;
  std::string name;

  static DomainTerm c(std::string n) { return {Kind::Const, std::move(n)}; }
  static DomainTerm v(std::string n) { return {Kind::Var, std::move(n)}; }

  bool is_const() const { return kind == Kind::Const; }
  bool is_var() const { return kind == Kind::Var; }

  friend bool operator==(const DomainTerm&, const DomainTerm&) = default;
  friend std::strong_ordering operator<=>(const DomainTerm& a, const DomainTerm& b) {
    if (a.kind != b.kind) return a.kind <=> b.kind;
    return a.name <=> b.name;
  }
};

inline std::string to_string(const DomainTerm& d) { return d.name; }

}  // namespace dst
