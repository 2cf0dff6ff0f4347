#include <algorithm>

#include "dst/dynamics.hpp"

namespace dst {

namespace {

using K = Process::K;
using LK = ActionLabel::K;

struct Scope {
  std::vector<ProcSpine::Binder> binders;
  std::vector<ProcP> comps;

  bool bound(const std::string& n) const {
    for (const auto& b : binders)
      if (b.name == n) return true;
    return false;
  }
};

Scope scope_of(const ProcP& p) {
  ProcSpine s = spine_of(normalize(p));
  return Scope{std::move(s.binders), std::move(s.comps)};
}

ProcP rebuild(const Scope& sc, const std::vector<ProcP>& comps,
              const std::vector<ProcSpine::Binder>& extra = {},
              const std::string& drop = "") {
  ProcSpine s;
  for (const auto& b : sc.binders)
    if (b.name != drop) s.binders.push_back(b);
  for (const auto& b : extra) s.binders.push_back(b);
  for (const auto& c : comps)
    if (c && c->k != K::Inaction) s.comps.push_back(c);
  return spine_to_proc(s);
}

/// The immediate actions of one parallel component, before scoping.
struct Step {
  ActionLabel label;
  ProcP residual;       // this component's continuation
  bool keep_server = false;  // replication: the component itself survives
};

std::vector<Step> component_steps(const ProcP& c, const ProbeSet& probes, const NameSet& avoid) {
  std::vector<Step> out;
  switch (c->k) {
    case K::Send:
      out.push_back({{LK::FreeOut, c->chan, c->arg, "", {}}, c->body});
      break;
    case K::BoundSend: {
      std::string y = fresh_name(c->arg, avoid);
      out.push_back({{LK::BoundOut, c->chan, y, "", {}}, subst_name(c->body, y, c->arg)});
      break;
    }
    case K::Receive:
      for (const auto& n : probes.names)
        out.push_back({{LK::In, c->chan, n, "", {}}, subst_name(c->body, n, c->arg)});
      break;
    case K::ReplReceive:
      for (const auto& n : probes.names)
        out.push_back({{LK::In, c->chan, n, "", {}}, subst_name(c->body, n, c->arg), true});
      break;
    case K::Select:
      out.push_back({{LK::SelOut, c->chan, "", c->label, {}}, c->body});
      break;
    case K::Branch:
      for (const auto& b : c->branches)
        out.push_back({{LK::ChoiceIn, c->chan, "", b.label, {}}, b.body});
      break;
    case K::MigrateSend: {
      std::string y = fresh_name(c->arg, avoid);
      out.push_back({{LK::MigOut, c->chan, y, "", c->dom}, subst_name(c->body, y, c->arg)});
      break;
    }
    case K::MigrateRecv:
      for (const auto& n : probes.names) {
        std::vector<DomainTerm> doms = probes.doms;
        if (std::find(doms.begin(), doms.end(), c->dom) == doms.end()) doms.push_back(c->dom);
        for (const auto& w : doms)
          out.push_back({{LK::MigIn, c->chan, n, "", w}, subst_name(c->body, n, c->arg)});
      }
      break;
    case K::DomSend:
      out.push_back({{LK::DomOut, c->chan, "", "", c->dom}, c->body});
      break;
    case K::DomRecv:
      for (const auto& w : probes.doms)
        out.push_back({{LK::DomIn, c->chan, "", "", w}, subst_domain(c->body, w, c->arg)});
      break;
    default:
      break;
  }
  return out;
}

}  // namespace

std::string to_string(const ActionLabel& l) {
  switch (l.k) {
    case LK::Tau: return "tau";
    case LK::In: return l.subject + "(" + l.object + ")";
    case LK::DomIn: return l.subject + "(" + l.dom.name + ")";
    case LK::ChoiceIn: return l.subject + "." + l.label;
    case LK::MigIn: return l.subject + "." + l.object + "@" + l.dom.name;
    case LK::FreeOut: return l.subject + "!" + l.object;
    case LK::BoundOut: return l.subject + "<(" + l.object + ")>";
    case LK::DomOut: return l.subject + "<" + l.dom.name + ">";
    case LK::SelOut: return l.subject + "[" + l.label + "]";
    case LK::MigOut: return l.subject + "<<" + l.object + "@" + l.dom.name + ">>";
  }
  return "?";
}

ProbeSet default_probes(const ProcP& p) {
  ProbeSet ps;
  ps.names = free_names(p);
  ps.names.insert(fresh_name("pn", ps.names));
  std::set<DomainTerm> ds;
  for (const auto& c : domain_consts(p)) ds.insert(DomainTerm::c(c));
  for (const auto& v : free_domain_vars(p)) ds.insert(DomainTerm::v(v));
  NameSet dnames;
  for (const auto& d : ds) dnames.insert(d.name);
  ds.insert(DomainTerm::c(fresh_name("pw", dnames)));
  ps.doms.assign(ds.begin(), ds.end());
  return ps;
}

std::vector<std::pair<ActionLabel, ProcP>> transitions(const ProcP& p) {
  return transitions(p, default_probes(p));
}

std::vector<std::pair<ActionLabel, ProcP>> transitions(const ProcP& p, const ProbeSet& probes) {
  Scope sc = scope_of(p);
  std::vector<std::pair<ActionLabel, ProcP>> out;

  NameSet avoid;
  for (const auto& b : sc.binders) avoid.insert(b.name);
  for (const auto& c : sc.comps)
    for (const auto& n : free_names(c)) avoid.insert(n);
  for (const auto& n : probes.names) avoid.insert(n);

  auto push = [&](const ActionLabel& l, const ProcP& q) {
    for (const auto& [l0, q0] : out) {
      if (l0.k == l.k && l0.subject == l.subject && l0.object == l.object &&
          l0.label == l.label && l0.dom == l.dom && struct_congruent(q0, q))
        return;
    }
    out.push_back({l, q});
  };

  const size_t n = sc.comps.size();
  std::vector<std::vector<Step>> steps(n);
  for (size_t i = 0; i < n; ++i) steps[i] = component_steps(sc.comps[i], probes, avoid);

  // visible actions: subject free; free output of a restricted object opens
  for (size_t i = 0; i < n; ++i) {
    for (const auto& st : steps[i]) {
      if (sc.bound(st.label.subject)) continue;
      ActionLabel l = st.label;
      std::string drop;
      if (l.k == LK::FreeOut && sc.bound(l.object)) {
        l.k = LK::BoundOut;  // open
        drop = l.object;
      }
      // inputs may not capture restricted names
      if ((l.k == LK::In || l.k == LK::MigIn) && sc.bound(l.object)) continue;
      std::vector<ProcP> comps = sc.comps;
      comps[i] = st.residual;
      if (st.keep_server) comps.push_back(sc.comps[i]);
      push(l, rebuild(sc, comps, {}, drop));
    }
  }

  // forwarder elimination is a tau step
  for (size_t i = 0; i < n; ++i) {
    const ProcP& c = sc.comps[i];
    if (c->k != K::Forward) continue;
    for (const std::string& end : {c->chan, c->arg}) {
      if (!sc.bound(end)) continue;
      const std::string other = (end == c->chan) ? c->arg : c->chan;
      std::vector<ProcP> comps;
      for (size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        comps.push_back(subst_name(sc.comps[k], other, end));
      }
      push(ActionLabel::tau(), rebuild(sc, comps, {}, end));
    }
  }

  // synchronization: com (free), close (bound output / migration); the
  // early input is instantiated with exactly the emitted object
  for (size_t i = 0; i < n; ++i) {
    for (const auto& so : steps[i]) {
      if (so.label.k != LK::FreeOut && so.label.k != LK::BoundOut &&
          so.label.k != LK::SelOut && so.label.k != LK::DomOut && so.label.k != LK::MigOut)
        continue;
      for (size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const ProcP& rc = sc.comps[j];
        if (rc->chan != so.label.subject) continue;

        ProcP in_residual;
        bool keep_server = false;
        switch (so.label.k) {
          case LK::FreeOut:
          case LK::BoundOut:
            if (rc->k == K::Receive || rc->k == K::ReplReceive) {
              in_residual = subst_name(rc->body, so.label.object, rc->arg);
              keep_server = rc->k == K::ReplReceive;
            }
            break;
          case LK::MigOut:
            if (rc->k == K::MigrateRecv)
              in_residual = subst_name(rc->body, so.label.object, rc->arg);
            break;
          case LK::DomOut:
            if (rc->k == K::DomRecv)
              in_residual = subst_domain(rc->body, so.label.dom, rc->arg);
            break;
          case LK::SelOut:
            if (rc->k == K::Branch)
              for (const auto& b : rc->branches)
                if (b.label == so.label.label) in_residual = b.body;
            break;
          default:
            break;
        }
        if (!in_residual) continue;

        std::vector<ProcP> comps = sc.comps;
        comps[i] = so.residual;
        comps[j] = in_residual;
        if (keep_server) comps.push_back(sc.comps[j]);
        std::vector<ProcSpine::Binder> extra;
        if (so.label.k == LK::BoundOut || so.label.k == LK::MigOut)
          extra.push_back({so.label.object, std::nullopt});
        push(ActionLabel::tau(), rebuild(sc, comps, extra));
      }
    }
  }

  return out;
}

}  // namespace dst
