#include "dst/json_out.hpp"

#include "dst/printer.hpp"

namespace dst {

using nlohmann::json;

json derivation_to_json(const DerivP& d) {
  json out;
  out["rule"] = rule_name(d->rule);
  out["sequent"] = print(d->conclusion);
  json prems = json::array();
  for (const auto& p : d->premises) prems.push_back(derivation_to_json(p));
  out["premises"] = std::move(prems);
  return out;
}

json error_to_json(const TypeError& e) {
  json out;
  out["errorKind"] = error_kind_name(e.kind);
  out["span"] = {{"line", e.span.line}, {"col", e.span.col}};
  out["message"] = e.message;
  if (e.failing_pair) {
    out["from"] = e.failing_pair->first.name;
    out["to"] = e.failing_pair->second.name;
  }
  return out;
}

json process_to_json(const ProcP& p) {
  json out;
  using K = Process::K;
  auto kind = [&](const char* k) { out["kind"] = k; };
  if (!p) return nullptr;
  switch (p->k) {
    case K::Inaction: kind("inaction"); break;
    case K::Par:
      kind("par");
      out["left"] = process_to_json(p->body);
      out["right"] = process_to_json(p->rhs);
      return out;
    case K::Restrict:
      kind("new");
      out["name"] = p->chan;
      if (p->annot) {
        out["type"] = print(p->annot->type);
        out["domain"] = p->annot->dom.name;
      }
      break;
    case K::Send: kind("send"); break;
    case K::BoundSend: kind("boundSend"); break;
    case K::Receive: kind("receive"); break;
    case K::ReplReceive: kind("replReceive"); break;
    case K::Forward:
      kind("forward");
      out["left"] = p->chan;
      out["right"] = p->arg;
      return out;
    case K::Branch: {
      kind("case");
      out["channel"] = p->chan;
      json bs = json::array();
      for (const auto& b : p->branches)
        bs.push_back({{"label", b.label}, {"body", process_to_json(b.body)}});
      out["branches"] = std::move(bs);
      return out;
    }
    case K::Select:
      kind("select");
      out["channel"] = p->chan;
      out["label"] = p->label;
      break;
    case K::MigrateSend: kind("migrateSend"); break;
    case K::MigrateRecv: kind("migrateRecv"); break;
    case K::DomSend: kind("domainSend"); break;
    case K::DomRecv: kind("domainRecv"); break;
  }
  if (p->k != K::Inaction && p->k != K::Restrict && p->k != K::Select) {
    if (!p->chan.empty()) out["channel"] = p->chan;
    if (!p->arg.empty()) out["object"] = p->arg;
    if (!p->dom.name.empty()) out["domain"] = p->dom.name;
  }
  if (p->body) out["body"] = process_to_json(p->body);
  return out;
}

json trace_to_json(const Trace& t) {
  json out;
  json steps = json::array();
  size_t i = 0;
  for (const auto& s : t.steps) {
    steps.push_back({{"step", i++},
                     {"label", to_string(s.label)},
                     {"state", print(s.after)}});
  }
  out["initial"] = t.steps.empty() ? print(t.final) : print(t.steps.front().before);
  out["steps"] = std::move(steps);
  out["final"] = print(t.final);
  out["terminal"] = t.terminal;
  out["budgetExhausted"] = t.budget_exhausted;
  return out;
}

json graph_to_json(const ReductionGraph& g) {
  json out;
  json states = json::array();
  for (const auto& s : g.states) states.push_back(print(s));
  out["states"] = std::move(states);
  json edges = json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  out["edges"] = std::move(edges);
  out["boundExceeded"] = g.bound_exceeded;
  out["hasCycle"] = g.has_cycle;
  return out;
}

json meta_to_json(const MetaReport& m) {
  json out;
  out["states"] = m.states;
  out["edges"] = m.edges;
  out["rootTyped"] = m.root_typed;
  out["preservation"] = m.preservation;
  out["progress"] = m.progress;
  out["termination"] = m.termination;
  out["domainPreservation"] = m.domain_preservation;
  out["boundExceeded"] = m.bound_exceeded;
  out["failures"] = m.failures;
  return out;
}

}  // namespace dst
