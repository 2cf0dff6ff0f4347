#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "dst/syntax.hpp"

namespace dst {

namespace {

// Levels for bound names / domain variables so comparisons are invariant
// under renaming.  Free identifiers compare as themselves.
struct NEnv {
  std::map<std::string, int> names;
  std::map<std::string, int> doms;
  int next = 0;
};

void kp_name(std::ostream& os, const NEnv& env, const std::string& n) {
  auto it = env.names.find(n);
  if (it != env.names.end())
    os << "b" << it->second;
  else
    os << "f:" << n;
}

void kp_dom(std::ostream& os, const NEnv& env, const DomainTerm& d) {
  if (d.is_var()) {
    auto it = env.doms.find(d.name);
    if (it != env.doms.end()) {
      os << "d" << it->second;
      return;
    }
    os << "v:" << d.name;
    return;
  }
  os << "w:" << d.name;
}

/// Canonical key of a process under an environment: a total order on
/// alpha-classes (annotations and spans excluded).
void kp(std::ostream& os, NEnv env, const ProcP& p);

void kp_under_name(std::ostream& os, NEnv env, const std::string& binder, const ProcP& body) {
  env.names[binder] = env.next++;
  kp(os, env, body);
}

void kp(std::ostream& os, NEnv env, const ProcP& p) {
  using K = Process::K;
  if (!p) {
    os << "_";
    return;
  }
  switch (p->k) {
    case K::Inaction:
      os << "0";
      return;
    case K::Par:
      os << "(";
      kp(os, env, p->body);
      os << "|";
      kp(os, env, p->rhs);
      os << ")";
      return;
    case K::Restrict: {
      os << "nu(";
      env.names[p->chan] = env.next++;
      kp(os, env, p->body);
      os << ")";
      return;
    }
    case K::Send:
      os << "snd(";
      kp_name(os, env, p->chan);
      os << ",";
      kp_name(os, env, p->arg);
      os << ").";
      kp(os, env, p->body);
      return;
    case K::BoundSend:
      os << "bsnd(";
      kp_name(os, env, p->chan);
      os << ").";
      kp_under_name(os, env, p->arg, p->body);
      return;
    case K::Receive:
      os << "rcv(";
      kp_name(os, env, p->chan);
      os << ").";
      kp_under_name(os, env, p->arg, p->body);
      return;
    case K::ReplReceive:
      os << "repl(";
      kp_name(os, env, p->chan);
      os << ").";
      kp_under_name(os, env, p->arg, p->body);
      return;
    case K::Forward:
      os << "fwd(";
      kp_name(os, env, p->chan);
      os << ",";
      kp_name(os, env, p->arg);
      os << ")";
      return;
    case K::Branch: {
      os << "case(";
      kp_name(os, env, p->chan);
      os << "){";
      for (const auto& b : p->branches) {
        os << b.label << ":";
        kp(os, env, b.body);
        os << ",";
      }
      os << "}";
      return;
    }
    case K::Select:
      os << "sel(";
      kp_name(os, env, p->chan);
      os << "," << p->label << ").";
      kp(os, env, p->body);
      return;
    case K::MigrateSend:
      os << "msnd(";
      kp_name(os, env, p->chan);
      os << "@";
      kp_dom(os, env, p->dom);
      os << ").";
      kp_under_name(os, env, p->arg, p->body);
      return;
    case K::MigrateRecv:
      os << "mrcv(";
      kp_name(os, env, p->chan);
      os << "@";
      kp_dom(os, env, p->dom);
      os << ").";
      kp_under_name(os, env, p->arg, p->body);
      return;
    case K::DomSend:
      os << "dsnd(";
      kp_name(os, env, p->chan);
      os << ",";
      kp_dom(os, env, p->dom);
      os << ").";
      kp(os, env, p->body);
      return;
    case K::DomRecv: {
      os << "drcv(";
      kp_name(os, env, p->chan);
      os << ").";
      env.doms[p->arg] = env.next++;
      kp(os, env, p->body);
      return;
    }
  }
}

std::string key_of(const NEnv& env, const ProcP& p) {
  std::ostringstream os;
  kp(os, env, p);
  return os.str();
}

std::string key_of_name(const NEnv& env, const std::string& n) {
  std::ostringstream os;
  kp_name(os, env, n);
  return os.str();
}

struct Binder {
  std::string name;
  std::optional<RestrictAnnot> annot;
};

ProcP norm(const ProcP& p, const NEnv& env);

/// Normalize a non-Par/non-Restrict component: recurse into continuations,
/// sort branch families.
ProcP comp_norm(const ProcP& p, const NEnv& env) {
  using K = Process::K;
  auto copy = std::make_shared<Process>(*p);
  switch (p->k) {
    case K::Inaction:
    case K::Forward:
      return p;
    case K::Send:
    case K::Select:
    case K::DomSend:
      copy->body = norm(p->body, env);
      return copy;
    case K::BoundSend:
    case K::Receive:
    case K::ReplReceive:
    case K::MigrateSend:
    case K::MigrateRecv: {
      NEnv e = env;
      e.names[p->arg] = e.next++;
      copy->body = norm(p->body, e);
      return copy;
    }
    case K::DomRecv: {
      NEnv e = env;
      e.doms[p->arg] = e.next++;
      copy->body = norm(p->body, e);
      return copy;
    }
    case K::Branch: {
      std::vector<ProcBranch> bs;
      bs.reserve(p->branches.size());
      for (const auto& b : p->branches) bs.push_back({b.label, norm(b.body, env)});
      std::sort(bs.begin(), bs.end(),
                [](const ProcBranch& a, const ProcBranch& b) { return a.label < b.label; });
      copy->branches = std::move(bs);
      return copy;
    }
    default:
      return p;  // Par/Restrict never reach here
  }
}

/// Flatten the Par/Restrict spine.  Restriction binders are renamed when
/// they collide with anything already visible so they can be lifted over
/// their siblings.
void collect(const ProcP& p, std::vector<Binder>& binders, std::vector<ProcP>& comps,
             NameSet& avoid) {
  if (!p) return;
  using K = Process::K;
  switch (p->k) {
    case K::Inaction:
      return;
    case K::Par:
      collect(p->body, binders, comps, avoid);
      collect(p->rhs, binders, comps, avoid);
      return;
    case K::Restrict: {
      std::string x = p->chan;
      ProcP body = p->body;
      if (avoid.count(x)) {
        std::string x2 = fresh_name(x, avoid);
        body = subst_name(body, x2, x);
        x = x2;
      }
      avoid.insert(x);
      binders.push_back({x, p->annot});
      collect(body, binders, comps, avoid);
      return;
    }
    default:
      comps.push_back(p);
      return;
  }
}

/// Preorder position of the first free occurrence of `n` in `p`, or -1.
/// Position counting visits every node in a name-independent order so that
/// positions of distinct binders are comparable.
struct OccFinder {
  const std::string& n;
  int pos = 0;
  int found = -1;

  void visit(const ProcP& p, int shadowed) {
    if (!p || found >= 0) return;
    using K = Process::K;
    ++pos;
    auto hit = [&](const std::string& m) {
      if (found < 0 && shadowed == 0 && m == n) found = pos;
    };
    switch (p->k) {
      case K::Inaction:
        return;
      case K::Par:
        visit(p->body, shadowed);
        visit(p->rhs, shadowed);
        return;
      case K::Restrict:
        visit(p->body, shadowed + (p->chan == n ? 1 : 0));
        return;
      case K::Send:
        hit(p->chan);
        hit(p->arg);
        visit(p->body, shadowed);
        return;
      case K::Forward:
        hit(p->chan);
        hit(p->arg);
        return;
      case K::BoundSend:
      case K::Receive:
      case K::ReplReceive:
      case K::MigrateSend:
      case K::MigrateRecv:
        hit(p->chan);
        visit(p->body, shadowed + (p->arg == n ? 1 : 0));
        return;
      case K::Branch:
        hit(p->chan);
        for (const auto& b : p->branches) visit(b.body, shadowed);
        return;
      default:
        hit(p->chan);
        visit(p->body, shadowed);
        return;
    }
  }
};

int first_occurrence(const ProcP& p, const std::string& n) {
  OccFinder f{n};
  f.visit(p, 0);
  return f.found;
}

ProcP rebuild(const std::vector<Binder>& binders, const std::vector<ProcP>& comps) {
  ProcP body;
  if (comps.empty()) {
    body = p_inaction();
  } else {
    body = comps.back();
    for (size_t i = comps.size() - 1; i-- > 0;) body = p_par(comps[i], body);
  }
  for (size_t i = binders.size(); i-- > 0;) {
    if (binders[i].annot)
      body = p_restrict(binders[i].name, *binders[i].annot, body);
    else
      body = p_restrict(binders[i].name, body);
  }
  return body;
}

ProcP norm(const ProcP& p, const NEnv& outer) {
  std::vector<Binder> binders;
  std::vector<ProcP> comps_raw;
  NameSet avoid = free_names(p);
  for (const auto& [n, lvl] : outer.names) avoid.insert(n);
  collect(p, binders, comps_raw, avoid);

  std::vector<std::string> seen_states;
  std::vector<Binder> best_binders;
  std::vector<ProcP> best_comps;
  std::string best_state;

  for (int iter = 0; iter < 8; ++iter) {
    NEnv env = outer;
    for (const auto& b : binders) env.names[b.name] = env.next++;

    // Normalize components under the current binder order; drop vanished
    // units and orient forwarders by canonical endpoint key.
    std::vector<ProcP> comps;
    comps.reserve(comps_raw.size());
    for (const auto& c : comps_raw) {
      ProcP n = comp_norm(c, env);
      if (n->k == Process::K::Inaction) continue;
      if (n->k == Process::K::Forward &&
          key_of_name(env, n->arg) < key_of_name(env, n->chan)) {
        n = p_fwd(n->arg, n->chan);
      }
      comps.push_back(n);
    }

    std::vector<std::pair<std::string, ProcP>> keyed;
    keyed.reserve(comps.size());
    for (const auto& c : comps) keyed.push_back({key_of(env, c), c});
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    comps.clear();
    std::string state;
    for (auto& [k, c] : keyed) {
      comps.push_back(c);
      state += k;
      state += ';';
    }

    // Drop binders that no longer occur.
    std::vector<Binder> live;
    for (const auto& b : binders) {
      bool used = false;
      for (const auto& c : comps)
        if (free_names(c).count(b.name)) {
          used = true;
          break;
        }
      if (used) live.push_back(b);
    }

    // Reorder binders by first free occurrence across the sorted bag.
    struct Pos {
      size_t comp;
      int at;
      size_t old;
    };
    std::vector<std::pair<Pos, Binder>> order;
    for (size_t bi = 0; bi < live.size(); ++bi) {
      Pos pos{comps.size(), -1, bi};
      for (size_t ci = 0; ci < comps.size(); ++ci) {
        int at = first_occurrence(comps[ci], live[bi].name);
        if (at >= 0) {
          pos = Pos{ci, at, bi};
          break;
        }
      }
      order.push_back({pos, live[bi]});
    }
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      if (a.first.comp != b.first.comp) return a.first.comp < b.first.comp;
      if (a.first.at != b.first.at) return a.first.at < b.first.at;
      return a.first.old < b.first.old;
    });
    std::vector<Binder> reordered;
    reordered.reserve(order.size());
    for (auto& [pos, b] : order) reordered.push_back(b);

    bool same_order = reordered.size() == binders.size();
    if (same_order)
      for (size_t i = 0; i < reordered.size(); ++i)
        if (reordered[i].name != binders[i].name) {
          same_order = false;
          break;
        }

    if (best_state.empty() || state < best_state) {
      best_state = state;
      best_binders = reordered;
      best_comps = comps;
    }

    if (same_order) {
      return rebuild(reordered, comps);
    }
    for (const auto& s : seen_states)
      if (s == state) {
        // Oscillation between symmetric layouts: settle on the least state.
        return rebuild(best_binders, best_comps);
      }
    seen_states.push_back(state);
    binders = reordered;
    comps_raw = comps;
  }
  return rebuild(best_binders, best_comps);
}

}  // namespace

ProcP normalize(const ProcP& p) {
  NEnv env;
  return norm(p, env);
}

bool struct_congruent(const ProcP& a, const ProcP& b) {
  return alpha_eq(normalize(a), normalize(b));
}

ProcSpine spine_of(const ProcP& p) {
  ProcSpine s;
  ProcP cur = p;
  while (cur && cur->k == Process::K::Restrict) {
    s.binders.push_back({cur->chan, cur->annot});
    cur = cur->body;
  }
  // flatten the Par tree
  std::vector<ProcP> stack{cur};
  while (!stack.empty()) {
    ProcP q = stack.back();
    stack.pop_back();
    if (!q || q->k == Process::K::Inaction) continue;
    if (q->k == Process::K::Par) {
      stack.push_back(q->rhs);
      stack.push_back(q->body);
      continue;
    }
    s.comps.push_back(q);
  }
  return s;
}

ProcP spine_to_proc(const ProcSpine& s) {
  ProcP body;
  if (s.comps.empty()) {
    body = p_inaction();
  } else {
    body = s.comps.back();
    for (size_t i = s.comps.size() - 1; i-- > 0;) body = p_par(s.comps[i], body);
  }
  for (size_t i = s.binders.size(); i-- > 0;) {
    if (!free_names(body).count(s.binders[i].name)) continue;
    if (s.binders[i].annot)
      body = p_restrict(s.binders[i].name, *s.binders[i].annot, body);
    else
      body = p_restrict(s.binders[i].name, body);
  }
  return body;
}

}  // namespace dst
