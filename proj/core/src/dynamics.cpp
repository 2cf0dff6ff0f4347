#include <algorithm>
#include <random>

#include "dst/dynamics.hpp"

namespace dst {

namespace {

using K = Process::K;

/// Strip "here" binders from an annotation type at its current domain.
TypeP peel_heres(TypeP t, const DomainTerm& dom) {
  while (t && t->k == Type::K::Here) t = subst_domain(t->body, dom, t->var);
  return t;
}

/// Annotation for the channel after one communication step of the given
/// shape; nullopt drops the annotation (shape disagreed, untyped term).
std::optional<RestrictAnnot> step_annot(const std::optional<RestrictAnnot>& a, K sender) {
  if (!a) return std::nullopt;
  TypeP t = peel_heres(a->type, a->dom);
  if (!t) return std::nullopt;
  using TK = Type::K;
  switch (sender) {
    case K::Send:
    case K::BoundSend:
      if (t->k == TK::Tensor || t->k == TK::Lolli) return RestrictAnnot{t->body, a->dom};
      if (t->k == TK::Bang) return a;  // copies leave the server type alone
      return std::nullopt;
    case K::DomSend:
      return std::nullopt;  // caller substitutes; handled separately
    default:
      return std::nullopt;
  }
}

/// Annotation for the payload of a communication on a channel annotated
/// with `a`.
std::optional<RestrictAnnot> payload_annot(const std::optional<RestrictAnnot>& a) {
  if (!a) return std::nullopt;
  TypeP t = peel_heres(a->type, a->dom);
  if (!t) return std::nullopt;
  using TK = Type::K;
  if (t->k == TK::Tensor || t->k == TK::Lolli || t->k == TK::Bang)
    return RestrictAnnot{t->k == TK::Bang ? t->body : t->left, a->dom};
  return std::nullopt;
}

struct Scope {
  std::vector<ProcSpine::Binder> binders;
  std::vector<ProcP> comps;

  int binder_index(const std::string& n) const {
    for (size_t i = 0; i < binders.size(); ++i)
      if (binders[i].name == n) return static_cast<int>(i);
    return -1;
  }
};

Scope scope_of(const ProcP& p) {
  ProcSpine s = spine_of(normalize(p));
  return Scope{std::move(s.binders), std::move(s.comps)};
}

ProcP rebuild(const Scope& sc, const std::vector<ProcP>& comps) {
  ProcSpine s;
  s.binders = sc.binders;
  s.comps.clear();
  for (const auto& c : comps)
    if (c && c->k != K::Inaction) s.comps.push_back(c);
  return spine_to_proc(s);
}

NameSet all_names(const Scope& sc) {
  NameSet out;
  for (const auto& b : sc.binders) out.insert(b.name);
  for (const auto& c : sc.comps)
    for (const auto& n : free_names(c)) out.insert(n);
  return out;
}

/// One reduct: components i (sender side) and j (receiver side) replaced
/// by the contractum, the rest untouched, binders/annotations adjusted.
struct Mk {
  const Scope& sc;
  std::vector<ProcP> out;

  explicit Mk(const Scope& s) : sc(s), out(s.comps) {}

  ProcP finish(std::vector<ProcSpine::Binder> extra = {}) {
    Scope sc2 = sc;
    for (auto& b : extra) sc2.binders.push_back(std::move(b));
    return rebuild(sc2, out);
  }
};

void annotate_channel(Scope& sc, const std::string& chan,
                      const std::optional<RestrictAnnot>& a) {
  int bi = sc.binder_index(chan);
  if (bi >= 0) sc.binders[static_cast<size_t>(bi)].annot = a;
}

std::optional<RestrictAnnot> channel_annot(const Scope& sc, const std::string& chan) {
  int bi = sc.binder_index(chan);
  if (bi >= 0) return sc.binders[static_cast<size_t>(bi)].annot;
  return std::nullopt;
}

void push_distinct(std::vector<ProcP>& acc, const ProcP& q) {
  for (const auto& seen : acc)
    if (struct_congruent(seen, q)) return;
  acc.push_back(q);
}

}  // namespace

std::vector<ProcP> reductions(const ProcP& p) {
  Scope sc = scope_of(p);
  std::vector<ProcP> acc;
  NameSet names = all_names(sc);

  const size_t n = sc.comps.size();
  for (size_t i = 0; i < n; ++i) {
    const ProcP& a = sc.comps[i];

    // forwarder elimination against a restricted endpoint
    if (a->k == K::Forward) {
      for (const std::string& end : {a->chan, a->arg}) {
        int bi = sc.binder_index(end);
        if (bi < 0) continue;
        const std::string other = (end == a->chan) ? a->arg : a->chan;
        Scope sc2 = sc;
        sc2.binders.erase(sc2.binders.begin() + bi);
        std::vector<ProcP> comps;
        for (size_t k = 0; k < n; ++k) {
          if (k == i) continue;
          comps.push_back(subst_name(sc.comps[k], other, end));
        }
        push_distinct(acc, rebuild(sc2, comps));
      }
    }

    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const ProcP& b = sc.comps[j];
      if (a->chan != b->chan) continue;
      const std::string& x = a->chan;

      // name communication (free or bound output against input/replication)
      if ((a->k == K::Send || a->k == K::BoundSend) &&
          (b->k == K::Receive || b->k == K::ReplReceive)) {
        Scope sc2 = sc;
        auto chan_a = channel_annot(sc2, x);
        std::optional<RestrictAnnot> fresh_annot;
        if (b->k == K::ReplReceive) {
          // a copy: the spawned session carries the shared channel's
          // underlying type; the server channel is unchanged
          if (chan_a) {
            TypeP t = peel_heres(chan_a->type, chan_a->dom);
            fresh_annot = RestrictAnnot{t && t->k == Type::K::Bang ? t->body : chan_a->type,
                                        chan_a->dom};
          }
        } else {
          fresh_annot = payload_annot(chan_a);
          annotate_channel(sc2, x, step_annot(chan_a, K::Send));
        }
        Mk mk(sc2);
        if (a->k == K::Send) {
          mk.out[i] = a->body;
          mk.out[j] = subst_name(b->body, a->arg, b->arg);
          if (b->k == K::ReplReceive) mk.out.push_back(b);
          push_distinct(acc, mk.finish());
        } else {
          std::string y = fresh_name(a->arg, names);
          mk.out[i] = subst_name(a->body, y, a->arg);
          mk.out[j] = subst_name(b->body, y, b->arg);
          if (b->k == K::ReplReceive) mk.out.push_back(b);
          push_distinct(acc, mk.finish({{y, fresh_annot}}));
        }
      }

      // migration: x<<y@w>>.P | x((z@w')).Q -> (new y)(P | Q{y/z})
      if (a->k == K::MigrateSend && b->k == K::MigrateRecv) {
        Scope sc2 = sc;
        auto chan_a = channel_annot(sc2, x);
        std::optional<RestrictAnnot> moved;
        if (chan_a) {
          TypeP t = peel_heres(chan_a->type, chan_a->dom);
          if (t && t->k == Type::K::At) moved = RestrictAnnot{t->body, t->dom};
        }
        annotate_channel(sc2, x, std::nullopt);  // x is spent
        Mk mk(sc2);
        std::string y = fresh_name(a->arg, names);
        mk.out[i] = subst_name(a->body, y, a->arg);
        mk.out[j] = subst_name(b->body, y, b->arg);
        push_distinct(acc, mk.finish({{y, moved}}));
      }

      // domain communication: x<w>.P | x(al).Q -> P | Q{w/al}
      if (a->k == K::DomSend && b->k == K::DomRecv) {
        Scope sc2 = sc;
        auto chan_a = channel_annot(sc2, x);
        if (chan_a) {
          TypeP t = peel_heres(chan_a->type, chan_a->dom);
          if (t && (t->k == Type::K::Exists || t->k == Type::K::Forall))
            annotate_channel(sc2, x,
                             RestrictAnnot{subst_domain(t->body, a->dom, t->var), chan_a->dom});
          else
            annotate_channel(sc2, x, std::nullopt);
        }
        Mk mk(sc2);
        mk.out[i] = a->body;
        mk.out[j] = subst_domain(b->body, a->dom, b->arg);
        push_distinct(acc, mk.finish());
      }

      // labeled choice: x[l];P | case x { ... } -> P | Q_l
      if (a->k == K::Select && b->k == K::Branch) {
        const ProcP* taken = nullptr;
        for (const auto& br : b->branches)
          if (br.label == a->label) taken = &br.body;
        if (taken) {
          Scope sc2 = sc;
          auto chan_a = channel_annot(sc2, x);
          if (chan_a) {
            TypeP t = peel_heres(chan_a->type, chan_a->dom);
            const TypeBranch* tb = nullptr;
            if (t && (t->k == Type::K::Plus || t->k == Type::K::With))
              for (const auto& cand : t->branches)
                if (cand.label == a->label) tb = &cand;
            if (tb)
              annotate_channel(sc2, x, RestrictAnnot{tb->type, chan_a->dom});
            else
              annotate_channel(sc2, x, std::nullopt);
          }
          Mk mk(sc2);
          mk.out[i] = a->body;
          mk.out[j] = *taken;
          push_distinct(acc, mk.finish());
        }
      }
    }
  }
  return acc;
}

namespace {

ProcP par_chain(const std::vector<ProcP>& comps) {
  if (comps.empty()) return p_inaction();
  ProcP acc = comps.back();
  for (size_t i = comps.size() - 1; i-- > 0;) acc = p_par(comps[i], acc);
  return acc;
}

std::optional<ProcP> structure_rec(std::vector<ProcSpine::Binder> binders,
                                   std::vector<ProcP> comps) {
  // drop dead binders
  for (size_t i = 0; i < binders.size();) {
    bool used = false;
    for (const auto& c : comps) used = used || free_names(c).count(binders[i].name);
    if (used)
      ++i;
    else
      binders.erase(binders.begin() + static_cast<long>(i));
  }
  if (binders.empty()) {
    if (comps.size() > 1) return std::nullopt;  // bare parallel: untypable anyway
    return par_chain(comps);
  }

  const auto target = binders.front();
  std::vector<ProcSpine::Binder> others(binders.begin() + 1, binders.end());

  // union components through the remaining binders
  std::vector<size_t> parent(comps.size());
  for (size_t i = 0; i < comps.size(); ++i) parent[i] = i;
  std::function<size_t(size_t)> find = [&](size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  std::vector<NameSet> frees;
  frees.reserve(comps.size());
  for (const auto& c : comps) frees.push_back(free_names(c));
  for (const auto& b : others) {
    int first = -1;
    for (size_t i = 0; i < comps.size(); ++i) {
      if (!frees[i].count(b.name)) continue;
      if (first < 0)
        first = static_cast<int>(i);
      else
        parent[find(static_cast<size_t>(first))] = find(i);
    }
  }

  std::vector<size_t> with_x;
  for (size_t i = 0; i < comps.size(); ++i)
    if (frees[i].count(target.name)) with_x.push_back(i);
  if (with_x.size() > 2) return std::nullopt;
  if (with_x.size() == 2 && find(with_x[0]) == find(with_x[1]))
    return std::nullopt;  // cycle through other channels

  std::vector<ProcP> side_a, side_b;
  std::vector<bool> in_a(comps.size(), false);
  if (!with_x.empty()) {
    size_t root = find(with_x[0]);
    for (size_t i = 0; i < comps.size(); ++i) in_a[i] = find(i) == root;
  }
  for (size_t i = 0; i < comps.size(); ++i)
    (in_a[i] ? side_a : side_b).push_back(comps[i]);

  std::vector<ProcSpine::Binder> binders_a, binders_b;
  for (const auto& b : others) {
    bool a = false, bb = false;
    for (size_t i = 0; i < comps.size(); ++i) {
      if (!frees[i].count(b.name)) continue;
      (in_a[i] ? a : bb) = true;
    }
    if (a && bb) return std::nullopt;  // binder spans the cut
    (a ? binders_a : binders_b).push_back(b);
  }

  auto pa = structure_rec(std::move(binders_a), std::move(side_a));
  auto pb = structure_rec(std::move(binders_b), std::move(side_b));
  if (!pa || !pb) return std::nullopt;
  ProcP body = p_par(*pa, *pb);
  if (target.annot) return ProcP(p_restrict(target.name, *target.annot, body));
  return ProcP(p_restrict(target.name, body));
}

}  // namespace

ProcP structure_cuts(const ProcP& p) {
  ProcSpine s = spine_of(normalize(p));
  auto res = structure_rec(s.binders, s.comps);
  return res ? *res : p;
}

bool is_live(const ProcP& p) {
  Scope sc = scope_of(p);
  for (const auto& c : sc.comps)
    if (is_prefix(c->k)) return true;
  return false;
}

Trace run(const ProcP& p, size_t max_steps, RunStrategy strategy, uint64_t seed) {
  Trace tr;
  std::mt19937_64 rng(seed);
  ProcP cur = normalize(p);
  for (size_t i = 0; i < max_steps; ++i) {
    auto nexts = reductions(cur);
    if (nexts.empty()) break;
    size_t pick = 0;
    if (strategy == RunStrategy::Random && nexts.size() > 1)
      pick = std::uniform_int_distribution<size_t>(0, nexts.size() - 1)(rng);
    ProcP nxt = normalize(nexts[pick]);
    tr.steps.push_back({cur, ActionLabel::tau(), nxt});
    cur = nxt;
  }
  tr.final = cur;
  tr.terminal = reductions(cur).empty();
  tr.budget_exhausted = !tr.terminal;
  return tr;
}

ReductionGraph reduction_graph(const ProcP& p, size_t depth_bound) {
  ReductionGraph g;
  g.states.push_back(normalize(p));
  std::vector<size_t> depth{0};

  auto find_state = [&](const ProcP& q) -> int {
    for (size_t i = 0; i < g.states.size(); ++i)
      if (alpha_eq(g.states[i], q)) return static_cast<int>(i);
    return -1;
  };

  for (size_t i = 0; i < g.states.size(); ++i) {
    if (depth[i] >= depth_bound) {
      if (!reductions(g.states[i]).empty()) g.bound_exceeded = true;
      continue;
    }
    for (const auto& q0 : reductions(g.states[i])) {
      ProcP q = normalize(q0);
      int at = find_state(q);
      if (at < 0) {
        g.states.push_back(q);
        depth.push_back(depth[i] + 1);
        at = static_cast<int>(g.states.size() - 1);
      }
      g.edges.push_back({i, static_cast<size_t>(at)});
    }
  }

  // cycle detection on the quotient graph
  enum { White, Grey, Black };
  std::vector<int> color(g.states.size(), White);
  std::vector<std::vector<size_t>> adj(g.states.size());
  for (auto& [a, b] : g.edges) adj[a].push_back(b);
  std::vector<std::pair<size_t, size_t>> stack;
  for (size_t s = 0; s < g.states.size() && !g.has_cycle; ++s) {
    if (color[s] != White) continue;
    stack.push_back({s, 0});
    color[s] = Grey;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < adj[v].size()) {
        size_t w = adj[v][idx++];
        if (color[w] == Grey) {
          g.has_cycle = true;
          break;
        }
        if (color[w] == White) {
          color[w] = Grey;
          stack.push_back({w, 0});
        }
      } else {
        color[v] = Black;
        stack.pop_back();
      }
    }
    stack.clear();
  }
  return g;
}

}  // namespace dst
