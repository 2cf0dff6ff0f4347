#pragma once

#include <functional>
#include <set>
#include <string>

#include "dst/process.hpp"
#include "dst/type.hpp"

namespace dst {

using NameSet = std::set<std::string>;

/// First unused variant of `base`: base, base', base'', base_1, base_2, ...
/// Purely deterministic; callers supply the avoid set.
std::string fresh_name(const std::string& base, const NameSet& avoid);

NameSet free_names(const ProcP& p);
NameSet free_domain_vars(const ProcP& p);
NameSet free_domain_vars(const TypeP& t);

/// Every domain constant mentioned anywhere in the term.
NameSet domain_consts(const ProcP& p);
NameSet domain_consts(const TypeP& t);

/// Capture-avoiding substitution of name `y` for free occurrences of `x`.
ProcP subst_name(const ProcP& p, const std::string& y, const std::string& x);

/// Capture-avoiding substitution of domain term `w` for the free domain
/// variable `a`.
ProcP subst_domain(const ProcP& p, const DomainTerm& w, const std::string& a);
TypeP subst_domain(const TypeP& t, const DomainTerm& w, const std::string& a);

/// Equality up to renaming of bound names and domain variables.  Branch
/// families are compared as label-indexed maps; restriction annotations
/// are ignored (they are checker metadata, not process structure).
bool alpha_eq(const ProcP& a, const ProcP& b);
bool alpha_eq(const TypeP& a, const TypeP& b);

/// Canonical representative of a tractable fragment of structural
/// congruence: parallel flattened with units dropped, dead restrictions
/// removed, restrictions extruded outward and ordered canonically,
/// forwarders oriented, branches label-sorted.  Idempotent.
ProcP normalize(const ProcP& p);

/// normalize-then-alpha-compare.  Sound for every axiom of the structural
/// congruence; complete only for the fragment the normalizer decides.
bool struct_congruent(const ProcP& a, const ProcP& b);

/// The spine of a normal form: restriction binders (with any annotations)
/// over a flat bag of parallel components.
struct ProcSpine {
  struct Binder {
    std::string name;
    std::optional<RestrictAnnot> annot;
  };
  std::vector<Binder> binders;
  std::vector<ProcP> comps;  // no Par / Restrict / Inaction at this level
};

/// Decompose an already-normalized process.  (Safe on any process, but the
/// components are only guaranteed flat for normal forms.)
ProcSpine spine_of(const ProcP& p);

/// Reassemble a spine; drops binders that no longer occur.
ProcP spine_to_proc(const ProcSpine& s);

}  // namespace dst
