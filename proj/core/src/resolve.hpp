#pragma once

#include <string>

#include "dst/process.hpp"

namespace dst::detail {

/// Evidence scans behind the resolution of the ambiguous input form
/// `x(a).P`: a definite use of `a` as a channel name, or an unshadowed
/// occurrence of `a` in a definite domain position.  Shared between the
/// parser (resolution) and the printer (marker placement) so both sides
/// agree.
bool name_evidence(const ProcP& p, const std::string& a);
bool dom_evidence(const ProcP& p, const std::string& a);

}  // namespace dst::detail
