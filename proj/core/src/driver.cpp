#include "dst/driver.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "dst/harness.hpp"
#include "dst/json_out.hpp"
#include "dst/medium.hpp"
#include "dst/printer.hpp"
#include "dst/surface.hpp"
#include "dst/syntax.hpp"

namespace dst {

namespace {

using nlohmann::json;

struct Loaded {
  SourceUnit unit;
  PrintContext pctx;
};

std::optional<Loaded> load(const std::string& file, std::ostream& err) {
  auto res = parse_unit_file(file);
  if (auto* diags = std::get_if<Diagnostics>(&res)) {
    for (const auto& d : *diags) err << file << ":" << render(d) << "\n";
    return std::nullopt;
  }
  Loaded l{std::get<SourceUnit>(std::move(res)), {}};
  l.pctx.domain_consts = l.unit.symbols().domain_consts;
  return l;
}

json shell(const char* cmd) {
  json out;
  out["schema"] = 1;
  out["command"] = cmd;
  return out;
}

Judgment directive_judgment(const SourceUnit& unit, const CheckDirective& dir, const ProcP& proc) {
  Judgment j;
  j.omega = unit.access_env();
  for (const auto& e : dir.extra_edges) j.omega.edges.insert(e);
  j.gamma = dir.gamma;
  j.delta = dir.delta;
  j.proc = proc;
  j.offered = dir.offered;
  j.type = dir.type;
  j.dom = dir.dom;
  return j;
}

/// Home/medium assignment for the global-type subcommands: defaults, with
/// --homes / --medium-domain overrides.
std::variant<MediumConfig, std::string> config_for(const GlobalP& g, const DriverOptions& o) {
  MediumConfig cfg = MediumConfig::defaults(g);
  if (!o.homes.empty()) {
    std::stringstream ss(o.homes);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) return "malformed --homes entry: " + item;
      std::string p = item.substr(0, eq);
      if (!cfg.home_domains.count(p)) return "unknown participant in --homes: " + p;
      cfg.home_domains[p] = DomainTerm::c(item.substr(eq + 1));
    }
  }
  if (!o.medium_domain.empty()) cfg.medium_domain = DomainTerm::c(o.medium_domain);
  return cfg;
}

/// The global type a subcommand acts on: the --global flag, or the
/// file's unambiguous directive of the matching kind.
const GlobalP* pick_global(const Loaded& l, DriverOptions& o,
                           const std::vector<std::string>& directive_names, std::ostream& err) {
  if (o.global_name.empty()) {
    if (directive_names.size() == 1) {
      o.global_name = directive_names.front();
    } else if (directive_names.empty()) {
      err << "a --global NAME is required\n";
      return nullptr;
    } else {
      err << "several directives apply; pick one with --global\n";
      return nullptr;
    }
  }
  const GlobalP* g = l.unit.find_global(o.global_name);
  if (!g) err << "no global type named " << o.global_name << "\n";
  return g;
}

template <typename Dir>
std::vector<std::string> directive_globals(const std::vector<Dir>& dirs) {
  std::vector<std::string> out;
  for (const auto& d : dirs) out.push_back(d.global_name);
  return out;
}

int write_out(const DriverOptions& o, const std::string& text, std::ostream& out,
              std::ostream& err) {
  if (o.out_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(o.out_path);
  if (!f) {
    err << "cannot write " << o.out_path << "\n";
    return kExitUsage;
  }
  f << text;
  return kExitOk;
}

}  // namespace

int cmd_check(const std::string& file, const DriverOptions& o, std::ostream& out,
              std::ostream& err) {
  auto l = load(file, err);
  if (!l) return kExitUsage;
  if (l->unit.checks.empty()) {
    err << file << ": no check directives\n";
    return kExitUsage;
  }
  json report = shell("check");
  json items = json::array();
  bool all_ok = true;
  for (const auto& dir : l->unit.checks) {
    const ProcDef* def = l->unit.find_process(dir.proc_name);
    if (!def) {
      err << file << ":" << to_string(dir.span) << ": unknown process " << dir.proc_name << "\n";
      return kExitUsage;
    }
    Judgment j = directive_judgment(l->unit, dir, def->body);
    auto res = check(j);
    json item;
    item["process"] = dir.proc_name;
    item["ok"] = ok(res);
    if (ok(res)) {
      if (o.json) item["derivation"] = derivation_to_json(deriv(res));
      if (!o.json)
        out << (o.color ? "\033[32mok\033[0m: " : "ok: ") << dir.proc_name << " :: "
            << dir.offered << "\n";
    } else {
      all_ok = false;
      item["error"] = error_to_json(error(res));
      if (!o.json)
        out << (o.color ? "\033[31mfail\033[0m: " : "fail: ") << dir.proc_name << ": " << file
            << ":" << to_string(error(res).span)
            << ": " << error_kind_name(error(res).kind) << ": " << error(res).message << "\n";
    }
    items.push_back(std::move(item));
  }
  if (o.json) {
    report["checks"] = std::move(items);
    report["ok"] = all_ok;
    out << report.dump(2) << "\n";
  }
  return all_ok ? kExitOk : kExitFailure;
}

int cmd_run(const std::string& file, const DriverOptions& o, std::ostream& out,
            std::ostream& err) {
  auto l = load(file, err);
  if (!l) return kExitUsage;

  std::vector<std::pair<std::string, size_t>> targets;
  if (!o.proc.empty()) {
    targets.push_back({o.proc, o.steps});
  } else {
    for (const auto& dir : l->unit.runs) targets.push_back({dir.proc_name, dir.steps});
  }
  if (targets.empty()) {
    err << file << ": nothing to run (use --proc or add run directives)\n";
    return kExitUsage;
  }
  json report = shell("run");
  json items = json::array();
  for (const auto& [name, steps] : targets) {
    const ProcDef* def = l->unit.find_process(name);
    if (!def) {
      err << "unknown process " << name << "\n";
      return kExitUsage;
    }
    size_t budget = o.proc.empty() ? steps : o.steps;
    Trace tr = run(def->body, budget,
                   o.random_strategy ? RunStrategy::Random : RunStrategy::DeterministicFirst,
                   o.seed);
    if (o.json) {
      json item = trace_to_json(tr);
      item["process"] = name;
      items.push_back(std::move(item));
    } else {
      out << "run " << name << ": " << tr.steps.size() << " steps, "
          << (tr.terminal ? "terminal" : "budget exhausted") << "\n";
      size_t i = 0;
      for (const auto& s : tr.steps) out << "  [" << i++ << "] " << print(s.after, l->pctx) << "\n";
    }
  }
  if (o.json) {
    report["runs"] = std::move(items);
    out << report.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_graph(const std::string& file, const DriverOptions& o, std::ostream& out,
              std::ostream& err) {
  auto l = load(file, err);
  if (!l) return kExitUsage;
  std::vector<std::pair<std::string, size_t>> targets;
  if (!o.proc.empty()) {
    targets.push_back({o.proc, o.depth});
  } else {
    for (const auto& dir : l->unit.graphs) targets.push_back({dir.proc_name, dir.depth});
  }
  if (targets.empty()) {
    err << file << ": nothing to explore (use --proc or add graph directives)\n";
    return kExitUsage;
  }
  json report = shell("graph");
  json items = json::array();
  for (const auto& [name, depth] : targets) {
    const ProcDef* def = l->unit.find_process(name);
    if (!def) {
      err << "unknown process " << name << "\n";
      return kExitUsage;
    }
    ReductionGraph g = reduction_graph(def->body, depth);
    if (o.json) {
      json item = graph_to_json(g);
      item["process"] = name;
      items.push_back(std::move(item));
    } else {
      out << "graph " << name << ": " << g.states.size() << " states, " << g.edges.size()
          << " edges" << (g.has_cycle ? ", cyclic" : ", acyclic")
          << (g.bound_exceeded ? ", bound exceeded" : "") << "\n";
    }
  }
  if (o.json) {
    report["graphs"] = std::move(items);
    out << report.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_project(const std::string& file, const DriverOptions& o0, std::ostream& out,
                std::ostream& err) {
  auto l = load(file, err);
  if (!l) return kExitUsage;
  DriverOptions o = o0;
  const GlobalP* g = pick_global(*l, o, directive_globals(l->unit.projects), err);
  if (!g) return kExitUsage;

  std::vector<Participant> roles;
  if (!o.role.empty()) {
    roles.push_back(o.role);
  } else {
    auto ps = participants(*g);
    roles.assign(ps.begin(), ps.end());
  }

  json report = shell("project");
  json items = json::array();
  bool all_ok = true;
  for (const auto& r : roles) {
    auto pr = project(*g, r);
    if (ok(pr)) {
      if (o.json)
        items.push_back({{"role", r}, {"local", print(local(pr))}});
      else
        out << r << ": " << print(local(pr)) << "\n";
    } else {
      all_ok = false;
      if (o.json)
        items.push_back({{"role", r}, {"error", std::get<ProjError>(pr).message}});
      else
        out << r << ": undefined: " << std::get<ProjError>(pr).message << "\n";
    }
  }
  if (o.json) {
    report["projections"] = std::move(items);
    report["ok"] = all_ok;
    out << report.dump(2) << "\n";
  }
  return all_ok ? kExitOk : kExitFailure;
}

int cmd_wf(const std::string& file, const DriverOptions& o0, std::ostream& out,
           std::ostream& err) {
  auto l = load(file, err);
  if (!l) return kExitUsage;
  DriverOptions o = o0;
  const GlobalP* g = pick_global(*l, o, directive_globals(l->unit.wfs), err);
  if (!g) return kExitUsage;

  auto cfg0 = config_for(*g, o);
  if (auto* msg = std::get_if<std::string>(&cfg0)) {
    err << *msg << "\n";
    return kExitUsage;
  }
  const MediumConfig& cfg = std::get<MediumConfig>(cfg0);

  // accessibility: the file's declarations plus one edge per migration,
  // so condition (b) reflects the declared structure when present
  AccessEnv env = l->unit.access_env();
  auto jr = medium_judgment(*g, cfg);
  if (std::holds_alternative<Judgment>(jr))
    env.edges.insert(std::get<Judgment>(jr).omega.edges.begin(),
                     std::get<Judgment>(jr).omega.edges.end());

  WfReport rep = well_formed(*g, cfg.home_domains, env);
  if (o.json) {
    json report = shell("wf");
    report["ok"] = rep.ok;
    report["diagnostics"] = rep.diagnostics;
    out << report.dump(2) << "\n";
  } else {
    out << o.global_name << ": " << (rep.ok ? "well-formed" : "not well-formed") << "\n";
    for (const auto& d : rep.diagnostics) out << "  " << d << "\n";
  }
  return rep.ok ? kExitOk : kExitFailure;
}

int cmd_medium(const std::string& file, const DriverOptions& o0, std::ostream& out,
               std::ostream& err) {
  auto l = load(file, err);
  if (!l) return kExitUsage;
  DriverOptions o = o0;
  const GlobalP* g = pick_global(*l, o, directive_globals(l->unit.mediums), err);
  if (!g) return kExitUsage;

  auto cfg0 = config_for(*g, o);
  if (auto* msg = std::get_if<std::string>(&cfg0)) {
    err << *msg << "\n";
    return kExitUsage;
  }
  auto m = medium(*g, std::get<MediumConfig>(cfg0));
  if (!std::holds_alternative<ProcP>(m)) {
    err << std::get<MediumError>(m).message << "\n";
    return kExitFailure;
  }
  PrintContext ctx = l->pctx;
  for (const auto& [p, d] : std::get<MediumConfig>(cfg0).home_domains)
    ctx.domain_consts.insert(d.name);
  ctx.domain_consts.insert(std::get<MediumConfig>(cfg0).medium_domain.name);
  if (o.json) {
    json report = shell("medium");
    report["global"] = o.global_name;
    report["medium"] = print(std::get<ProcP>(m), ctx);
    report["ast"] = process_to_json(std::get<ProcP>(m));
    return write_out(o, report.dump(2) + "\n", out, err);
  }
  return write_out(o, print(std::get<ProcP>(m), ctx) + "\n", out, err);
}

int cmd_verify_medium(const std::string& file, const DriverOptions& o0, std::ostream& out,
                      std::ostream& err) {
  auto l = load(file, err);
  if (!l) return kExitUsage;
  DriverOptions o = o0;
  const GlobalP* g = pick_global(*l, o, directive_globals(l->unit.verifies), err);
  if (!g) return kExitUsage;

  auto cfg0 = config_for(*g, o);
  if (auto* msg = std::get_if<std::string>(&cfg0)) {
    err << *msg << "\n";
    return kExitUsage;
  }
  auto res = verify_medium(*g, std::get<MediumConfig>(cfg0));
  json report = shell("verify-medium");
  report["global"] = o.global_name;
  if (std::holds_alternative<DerivP>(res)) {
    report["ok"] = true;
    if (o.json)
      out << report.dump(2) << "\n";
    else
      out << o.global_name << ": medium is well-typed\n";
    return kExitOk;
  }
  report["ok"] = false;
  if (std::holds_alternative<TypeError>(res)) {
    report["error"] = error_to_json(std::get<TypeError>(res));
    if (!o.json)
      out << o.global_name << ": medium fails to check: " << std::get<TypeError>(res).message
          << "\n";
  } else {
    report["error"] = std::get<MediumError>(res).message;
    if (!o.json) out << o.global_name << ": " << std::get<MediumError>(res).message << "\n";
  }
  if (o.json) out << report.dump(2) << "\n";
  return kExitFailure;
}

int cmd_compose(const std::string& file, const DriverOptions& o0, std::ostream& out,
                std::ostream& err) {
  auto l = load(file, err);
  if (!l) return kExitUsage;
  DriverOptions o = o0;
  const GlobalP* g = pick_global(*l, o, directive_globals(l->unit.composes), err);
  if (!g) return kExitUsage;

  auto cfg0 = config_for(*g, o);
  if (auto* msg = std::get_if<std::string>(&cfg0)) {
    err << *msg << "\n";
    return kExitUsage;
  }
  const MediumConfig& cfg = std::get<MediumConfig>(cfg0);

  std::map<Participant, ProcP> impls;
  std::string spec = o.impls;
  if (spec.empty()) {
    // fall back to a compose directive for this global type
    for (const auto& dir : l->unit.composes) {
      if (dir.global_name != o.global_name) continue;
      for (const auto& [p, procname] : dir.impls) {
        const ProcDef* def = l->unit.find_process(procname);
        if (!def) {
          err << "unknown process " << procname << "\n";
          return kExitUsage;
        }
        ProcP body = def->body;
        if (!def->params.empty()) body = subst_name(body, cfg.name_map.at(p), def->params[0]);
        impls[p] = body;
      }
    }
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) {
        err << "malformed --impls entry: " << item << "\n";
        return kExitUsage;
      }
      std::string p = item.substr(0, eq);
      std::string procname = item.substr(eq + 1);
      const ProcDef* def = l->unit.find_process(procname);
      if (!def) {
        err << "unknown process " << procname << "\n";
        return kExitUsage;
      }
      if (!cfg.name_map.count(p)) {
        err << "unknown participant " << p << "\n";
        return kExitUsage;
      }
      ProcP body = def->body;
      if (!def->params.empty()) body = subst_name(body, cfg.name_map.at(p), def->params[0]);
      impls[p] = body;
    }
  }

  auto res = compose_system(*g, cfg, impls);
  json report = shell("compose");
  report["global"] = o.global_name;
  if (std::holds_alternative<ProcP>(res)) {
    PrintContext ctx = l->pctx;
    for (const auto& [p, d] : cfg.home_domains) ctx.domain_consts.insert(d.name);
    ctx.domain_consts.insert(cfg.medium_domain.name);
    std::string text = print(std::get<ProcP>(res), ctx) + "\n";
    if (o.json) {
      report["ok"] = true;
      report["system"] = print(std::get<ProcP>(res), ctx);
      report["ast"] = process_to_json(std::get<ProcP>(res));
      out << report.dump(2) << "\n";
      return kExitOk;
    }
    return write_out(o, text, out, err);
  }
  if (std::holds_alternative<ComposeError>(res)) {
    const auto& ce = std::get<ComposeError>(res);
    std::string who = ce.participant.empty() ? "composed system" : ce.participant;
    if (o.json) {
      report["ok"] = false;
      report["participant"] = ce.participant;
      report["error"] = error_to_json(ce.error);
      out << report.dump(2) << "\n";
    } else {
      err << who << ": " << error_kind_name(ce.error.kind) << ": " << ce.error.message << "\n";
    }
    return kExitFailure;
  }
  err << std::get<MediumError>(res).message << "\n";
  return kExitFailure;
}

int cmd_meta(const std::string& file, const DriverOptions& o, std::ostream& out,
             std::ostream& err) {
  auto l = load(file, err);
  if (!l) return kExitUsage;
  if (l->unit.checks.empty()) {
    err << file << ": no check directives to drive the harness\n";
    return kExitUsage;
  }
  json report = shell("meta");
  json items = json::array();
  bool all_ok = true;
  for (const auto& dir : l->unit.checks) {
    const ProcDef* def = l->unit.find_process(dir.proc_name);
    if (!def) {
      err << "unknown process " << dir.proc_name << "\n";
      return kExitUsage;
    }
    Judgment j = directive_judgment(l->unit, dir, def->body);
    MetaReport rep = run_meta(j, o.depth);
    all_ok = all_ok && rep.all_ok();
    if (o.json) {
      json item = meta_to_json(rep);
      item["process"] = dir.proc_name;
      items.push_back(std::move(item));
    } else {
      out << dir.proc_name << ": states=" << rep.states << " edges=" << rep.edges
          << " preservation=" << (rep.preservation ? "ok" : "FAIL")
          << " progress=" << (rep.progress ? "ok" : "FAIL")
          << " termination=" << (rep.termination ? "ok" : "FAIL")
          << " domains=" << (rep.domain_preservation ? "ok" : "FAIL") << "\n";
      for (const auto& f : rep.failures) out << "  " << f << "\n";
    }
  }
  if (o.json) {
    report["judgments"] = std::move(items);
    report["ok"] = all_ok;
    out << report.dump(2) << "\n";
  }
  return all_ok ? kExitOk : kExitFailure;
}

}  // namespace dst
