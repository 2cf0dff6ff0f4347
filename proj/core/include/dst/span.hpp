#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dst {

/// Half-open region of a source file, 1-based line/column.
struct Span {
  uint32_t line = 0;
  uint32_t col = 0;
  uint32_t end_line = 0;
  uint32_t end_col = 0;

  bool valid() const { return line != 0; }
  friend bool operator==(const Span&, const Span&) = default;
};

inline std::string to_string(const Span& s) {
  if (!s.valid()) return "<builtin>";
  return std::to_string(s.line) + ":" + std::to_string(s.col);
}

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  Span span;
  std::string code;     // short stable identifier, e.g. "parse", "wf-merge"
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

inline std::string render(const Diagnostic& d) {
  const char* sev = d.severity == Severity::Error     ? "error"
                    : d.severity == Severity::Warning ? "warning"
                                                      : "note";
  std::string out = to_string(d.span);
  out += ": ";
  out += sev;
  if (!d.code.empty()) {
    out += " [" + d.code + "]";
  }
  out += ": " + d.message;
  return out;
}

}  // namespace dst
