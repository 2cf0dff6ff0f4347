#pragma once

#include "dst/mpst.hpp"

namespace dst {

/// Decides the least pre-congruence on local types generated by
/// merge-widening (T1 <= T1 ⊔ T2) and silent "here" introduction and
/// elimination.  Structural descent with bounded instantiation of the
/// here-elimination domain; semi-complete for exotic interleavings of the
/// axioms, exact on the shapes produced by projection and the checker.
bool precongruent(const LocalP& t1, const LocalP& t2);

}  // namespace dst
