#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dst/access.hpp"
#include "dst/mpst.hpp"
#include "dst/process.hpp"
#include "dst/span.hpp"
#include "dst/syntax.hpp"
#include "dst/typecheck.hpp"

namespace dst {

/// Names the parser should treat as domains when classifying the
/// ambiguous `x<t>.P` / `x(a).P` forms.  Domain constants come from
/// `domain`/`access` declarations; variables from binders in scope.
struct ParserSymbols {
  NameSet domain_consts;
  NameSet domain_vars;
  std::map<std::string, TypeP> type_aliases;
  std::map<std::string, LocalP> local_aliases;
};

struct CheckDirective {
  std::string proc_name;
  std::string offered;
  TypeP type;
  DomainTerm dom;
  SharedCtx gamma;
  LinearCtx delta;
  std::vector<std::pair<DomainTerm, DomainTerm>> extra_edges;
  Span span;
};

struct RunDirective { std::string proc_name; size_t steps = 64; Span span; };
struct GraphDirective { std::string proc_name; size_t depth = 64; Span span; };
struct ProjectDirective { std::string global_name; std::optional<Participant> role; Span span; };
struct WfDirective { std::string global_name; Span span; };
struct MediumDirective { std::string global_name; Span span; };
struct VerifyDirective { std::string global_name; Span span; };
struct ComposeDirective {
  std::string global_name;
  std::vector<std::pair<Participant, std::string>> impls;  // participant -> process name
  Span span;
};

struct ProcDef {
  std::vector<std::string> params;  // params[0] is the offered channel when composed
  ProcP body;
  Span span;
};

/// One parsed .dst file: closure config, accessibility declarations, named
/// definitions, and directives.
struct SourceUnit {
  ClosureConfig closure;
  std::vector<std::pair<DomainTerm, DomainTerm>> access_edges;
  NameSet domain_decls;
  std::vector<std::pair<std::string, TypeP>> types;
  std::vector<std::pair<std::string, LocalP>> locals;
  std::vector<std::pair<std::string, GlobalP>> globals;
  std::vector<std::pair<std::string, ProcDef>> processes;

  std::vector<CheckDirective> checks;
  std::vector<RunDirective> runs;
  std::vector<GraphDirective> graphs;
  std::vector<ProjectDirective> projects;
  std::vector<WfDirective> wfs;
  std::vector<MediumDirective> mediums;
  std::vector<VerifyDirective> verifies;
  std::vector<ComposeDirective> composes;

  AccessEnv access_env() const;
  ParserSymbols symbols() const;

  const TypeP* find_type(const std::string& n) const;
  const LocalP* find_local(const std::string& n) const;
  const GlobalP* find_global(const std::string& n) const;
  const ProcDef* find_process(const std::string& n) const;
};

using UnitResult = std::variant<SourceUnit, Diagnostics>;

UnitResult parse_unit(const std::string& text);
UnitResult parse_unit_file(const std::string& path);

std::variant<ProcP, Diagnostics> parse_process(const std::string& text,
                                               const ParserSymbols& sy = {});
std::variant<TypeP, Diagnostics> parse_type(const std::string& text,
                                            const ParserSymbols& sy = {});
std::variant<LocalP, Diagnostics> parse_local(const std::string& text,
                                              const ParserSymbols& sy = {});
std::variant<GlobalP, Diagnostics> parse_global(const std::string& text,
                                                const ParserSymbols& sy = {});

}  // namespace dst
