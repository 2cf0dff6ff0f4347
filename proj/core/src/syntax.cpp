#include "dst/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace dst {

std::string fresh_name(const std::string& base, const NameSet& avoid) {
  if (!avoid.count(base)) return base;
  std::string primed = base + "'";
  if (!avoid.count(primed)) return primed;
  primed += "'";
  if (!avoid.count(primed)) return primed;
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

namespace {

void free_names_rec(const ProcP& p, NameSet& bound, NameSet& out) {
  if (!p) return;
  auto see = [&](const std::string& n) {
    if (!n.empty() && !bound.count(n)) out.insert(n);
  };
  using K = Process::K;
  switch (p->k) {
    case K::Inaction:
      return;
    case K::Par:
      free_names_rec(p->body, bound, out);
      free_names_rec(p->rhs, bound, out);
      return;
    case K::Restrict: {
      bool fresh = bound.insert(p->chan).second;
      free_names_rec(p->body, bound, out);
      if (fresh) bound.erase(p->chan);
      return;
    }
    case K::Send:
      see(p->chan);
      see(p->arg);
      free_names_rec(p->body, bound, out);
      return;
    case K::Forward:
      see(p->chan);
      see(p->arg);
      return;
    case K::BoundSend:
    case K::Receive:
    case K::ReplReceive:
    case K::MigrateSend:
    case K::MigrateRecv: {
      see(p->chan);
      bool fresh = bound.insert(p->arg).second;
      free_names_rec(p->body, bound, out);
      if (fresh) bound.erase(p->arg);
      return;
    }
    case K::Branch:
      see(p->chan);
      for (const auto& b : p->branches) free_names_rec(b.body, bound, out);
      return;
    case K::Select:
      see(p->chan);
      free_names_rec(p->body, bound, out);
      return;
    case K::DomSend:
      see(p->chan);
      free_names_rec(p->body, bound, out);
      return;
    case K::DomRecv:
      // binds a domain variable, not a name
      see(p->chan);
      free_names_rec(p->body, bound, out);
      return;
  }
}

void fdv_type_rec(const TypeP& t, NameSet& bound, NameSet& out) {
  if (!t) return;
  using K = Type::K;
  switch (t->k) {
    case K::One:
      return;
    case K::Tensor:
    case K::Lolli:
      fdv_type_rec(t->left, bound, out);
      fdv_type_rec(t->body, bound, out);
      return;
    case K::With:
    case K::Plus:
      for (const auto& b : t->branches) fdv_type_rec(b.type, bound, out);
      return;
    case K::Bang:
      fdv_type_rec(t->body, bound, out);
      return;
    case K::At:
      if (t->dom.is_var() && !bound.count(t->dom.name)) out.insert(t->dom.name);
      fdv_type_rec(t->body, bound, out);
      return;
    case K::Forall:
    case K::Exists:
    case K::Here: {
      bool fresh = bound.insert(t->var).second;
      fdv_type_rec(t->body, bound, out);
      if (fresh) bound.erase(t->var);
      return;
    }
  }
}

void fdv_proc_rec(const ProcP& p, NameSet& bound, NameSet& out) {
  if (!p) return;
  auto see_dom = [&](const DomainTerm& d) {
    if (d.is_var() && !bound.count(d.name)) out.insert(d.name);
  };
  using K = Process::K;
  switch (p->k) {
    case K::Inaction:
    case K::Forward:
      return;
    case K::Par:
      fdv_proc_rec(p->body, bound, out);
      fdv_proc_rec(p->rhs, bound, out);
      return;
    case K::Restrict:
      if (p->annot) {
        fdv_type_rec(p->annot->type, bound, out);
        see_dom(p->annot->dom);
      }
      fdv_proc_rec(p->body, bound, out);
      return;
    case K::MigrateSend:
    case K::MigrateRecv:
    case K::DomSend:
      see_dom(p->dom);
      fdv_proc_rec(p->body, bound, out);
      return;
    case K::DomRecv: {
      bool fresh = bound.insert(p->arg).second;
      fdv_proc_rec(p->body, bound, out);
      if (fresh) bound.erase(p->arg);
      return;
    }
    case K::Branch:
      for (const auto& b : p->branches) fdv_proc_rec(b.body, bound, out);
      return;
    default:
      fdv_proc_rec(p->body, bound, out);
      return;
  }
}

void dc_type_rec(const TypeP& t, NameSet& out) {
  if (!t) return;
  if (t->k == Type::K::At && t->dom.is_const()) out.insert(t->dom.name);
  dc_type_rec(t->left, out);
  dc_type_rec(t->body, out);
  for (const auto& b : t->branches) dc_type_rec(b.type, out);
}

void dc_proc_rec(const ProcP& p, NameSet& out) {
  if (!p) return;
  using K = Process::K;
  if (p->k == K::MigrateSend || p->k == K::MigrateRecv || p->k == K::DomSend) {
    if (p->dom.is_const()) out.insert(p->dom.name);
  }
  if (p->k == K::Restrict && p->annot) {
    dc_type_rec(p->annot->type, out);
    if (p->annot->dom.is_const()) out.insert(p->annot->dom.name);
  }
  dc_proc_rec(p->body, out);
  dc_proc_rec(p->rhs, out);
  for (const auto& b : p->branches) dc_proc_rec(b.body, out);
}

ProcP clone_with(const Process& src, const std::function<void(Process&)>& edit) {
  auto p = std::make_shared<Process>(src);
  edit(*p);
  return p;
}

/// Shared engine for name substitution {y/x}.
ProcP subst_name_rec(const ProcP& p, const std::string& y, const std::string& x) {
  if (!p) return p;
  using K = Process::K;
  auto sub = [&](const std::string& n) { return n == x ? y : n; };

  // A binder of name `b` over `body`: stop if it shadows x, rename if it
  // would capture y.
  auto under_binder = [&](const std::string& b, const ProcP& body,
                          const std::function<ProcP(const std::string&, const ProcP&)>& rebuild) {
    if (b == x) return rebuild(b, body);
    if (b == y) {
      NameSet avoid = free_names(body);
      avoid.insert(y);
      avoid.insert(x);
      std::string b2 = fresh_name(b, avoid);
      ProcP renamed = subst_name_rec(body, b2, b);
      return rebuild(b2, subst_name_rec(renamed, y, x));
    }
    return rebuild(b, subst_name_rec(body, y, x));
  };

  switch (p->k) {
    case K::Inaction:
      return p;
    case K::Par:
      return clone_with(*p, [&](Process& q) {
        q.body = subst_name_rec(p->body, y, x);
        q.rhs = subst_name_rec(p->rhs, y, x);
      });
    case K::Restrict:
      return under_binder(p->chan, p->body, [&](const std::string& b, const ProcP& body) {
        return clone_with(*p, [&](Process& q) {
          q.chan = b;
          q.body = body;
        });
      });
    case K::Send:
      return clone_with(*p, [&](Process& q) {
        q.chan = sub(p->chan);
        q.arg = sub(p->arg);
        q.body = subst_name_rec(p->body, y, x);
      });
    case K::Forward:
      return clone_with(*p, [&](Process& q) {
        q.chan = sub(p->chan);
        q.arg = sub(p->arg);
      });
    case K::BoundSend:
    case K::Receive:
    case K::ReplReceive:
    case K::MigrateSend:
    case K::MigrateRecv:
      return under_binder(p->arg, p->body, [&](const std::string& b, const ProcP& body) {
        return clone_with(*p, [&](Process& q) {
          q.chan = sub(p->chan);
          q.arg = b;
          q.body = body;
        });
      });
    case K::Branch: {
      std::vector<ProcBranch> bs;
      bs.reserve(p->branches.size());
      for (const auto& b : p->branches) bs.push_back({b.label, subst_name_rec(b.body, y, x)});
      return clone_with(*p, [&](Process& q) {
        q.chan = sub(p->chan);
        q.branches = std::move(bs);
      });
    }
    case K::Select:
    case K::DomSend:
      return clone_with(*p, [&](Process& q) {
        q.chan = sub(p->chan);
        q.body = subst_name_rec(p->body, y, x);
      });
    case K::DomRecv:
      // binder is a domain variable; names pass through freely
      return clone_with(*p, [&](Process& q) {
        q.chan = sub(p->chan);
        q.body = subst_name_rec(p->body, y, x);
      });
  }
  return p;
}

TypeP subst_domain_type(const TypeP& t, const DomainTerm& w, const std::string& a) {
  if (!t) return t;
  using K = Type::K;
  auto subd = [&](const DomainTerm& d) { return (d.is_var() && d.name == a) ? w : d; };
  switch (t->k) {
    case K::One:
      return t;
    case K::Tensor:
      return t_tensor(subst_domain_type(t->left, w, a), subst_domain_type(t->body, w, a));
    case K::Lolli:
      return t_lolli(subst_domain_type(t->left, w, a), subst_domain_type(t->body, w, a));
    case K::With:
    case K::Plus: {
      std::vector<TypeBranch> bs;
      bs.reserve(t->branches.size());
      for (const auto& b : t->branches) bs.push_back({b.label, subst_domain_type(b.type, w, a)});
      return t->k == K::With ? t_with(std::move(bs)) : t_plus(std::move(bs));
    }
    case K::Bang:
      return t_bang(subst_domain_type(t->body, w, a));
    case K::At:
      return t_at(subd(t->dom), subst_domain_type(t->body, w, a));
    case K::Forall:
    case K::Exists:
    case K::Here: {
      if (t->var == a) return t;  // shadowed
      std::string v = t->var;
      TypeP body = t->body;
      if (w.is_var() && w.name == v) {
        NameSet avoid = free_domain_vars(body);
        avoid.insert(w.name);
        avoid.insert(a);
        v = fresh_name(v, avoid);
        body = subst_domain_type(body, DomainTerm::v(v), t->var);
      }
      body = subst_domain_type(body, w, a);
      if (t->k == K::Forall) return t_forall(v, body);
      if (t->k == K::Exists) return t_exists(v, body);
      return t_here(v, body);
    }
  }
  return t;
}

ProcP subst_domain_proc(const ProcP& p, const DomainTerm& w, const std::string& a) {
  if (!p) return p;
  using K = Process::K;
  auto subd = [&](const DomainTerm& d) { return (d.is_var() && d.name == a) ? w : d; };
  switch (p->k) {
    case K::Inaction:
    case K::Forward:
      return p;
    case K::Par:
      return p_par(subst_domain_proc(p->body, w, a), subst_domain_proc(p->rhs, w, a));
    case K::Restrict: {
      return clone_with(*p, [&](Process& q) {
        if (p->annot)
          q.annot = RestrictAnnot{subst_domain_type(p->annot->type, w, a), subd(p->annot->dom)};
        q.body = subst_domain_proc(p->body, w, a);
      });
    }
    case K::Branch: {
      std::vector<ProcBranch> bs;
      bs.reserve(p->branches.size());
      for (const auto& b : p->branches) bs.push_back({b.label, subst_domain_proc(b.body, w, a)});
      return clone_with(*p, [&](Process& q) { q.branches = std::move(bs); });
    }
    case K::DomRecv: {
      if (p->arg == a) return p;  // shadowed
      std::string v = p->arg;
      ProcP body = p->body;
      if (w.is_var() && w.name == v) {
        NameSet avoid = free_domain_vars(body);
        avoid.insert(w.name);
        avoid.insert(a);
        v = fresh_name(v, avoid);
        body = subst_domain_proc(body, DomainTerm::v(v), p->arg);
      }
      body = subst_domain_proc(body, w, a);
      return clone_with(*p, [&](Process& q) {
        q.arg = v;
        q.body = body;
      });
    }
    default:
      return clone_with(*p, [&](Process& q) {
        q.dom = subd(p->dom);
        q.body = subst_domain_proc(p->body, w, a);
      });
  }
}

/// Two-sided binder environments for alpha comparison.  Names and domain
/// variables live in separate namespaces.
struct AlphaEnv {
  std::map<std::string, int> left, right;
  int next = 0;

  void bind(const std::string& l, const std::string& r, AlphaEnv& saved) {
    saved.left[l] = left.count(l) ? left[l] : -1;
    saved.right[r] = right.count(r) ? right[r] : -1;
    left[l] = next;
    right[r] = next;
    ++next;
  }
};

struct AlphaCmp {
  AlphaEnv names;
  AlphaEnv doms;

  bool name_eq(const std::string& a, const std::string& b) {
    auto ia = names.left.find(a);
    auto ib = names.right.find(b);
    bool ba = ia != names.left.end() && ia->second >= 0;
    bool bb = ib != names.right.end() && ib->second >= 0;
    if (ba != bb) return false;
    if (ba) return ia->second == ib->second;
    return a == b;  // both free
  }

  bool dom_eq(const DomainTerm& a, const DomainTerm& b) {
    if (a.kind != b.kind) return false;
    if (a.is_const()) return a.name == b.name;
    auto ia = doms.left.find(a.name);
    auto ib = doms.right.find(b.name);
    bool ba = ia != doms.left.end() && ia->second >= 0;
    bool bb = ib != doms.right.end() && ib->second >= 0;
    if (ba != bb) return false;
    if (ba) return ia->second == ib->second;
    return a.name == b.name;
  }

  template <typename F>
  bool under_name(const std::string& l, const std::string& r, F body) {
    auto saved_left = names.left;
    auto saved_right = names.right;
    int saved_next = names.next;
    names.left[l] = names.next;
    names.right[r] = names.next;
    ++names.next;
    bool res = body();
    names.left = std::move(saved_left);
    names.right = std::move(saved_right);
    names.next = saved_next;
    return res;
  }

  template <typename F>
  bool under_dom(const std::string& l, const std::string& r, F body) {
    auto saved_left = doms.left;
    auto saved_right = doms.right;
    int saved_next = doms.next;
    doms.left[l] = doms.next;
    doms.right[r] = doms.next;
    ++doms.next;
    bool res = body();
    doms.left = std::move(saved_left);
    doms.right = std::move(saved_right);
    doms.next = saved_next;
    return res;
  }

  bool type_eq(const TypeP& a, const TypeP& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->k != b->k) return false;
    using K = Type::K;
    switch (a->k) {
      case K::One:
        return true;
      case K::Tensor:
      case K::Lolli:
        return type_eq(a->left, b->left) && type_eq(a->body, b->body);
      case K::With:
      case K::Plus: {
        if (a->branches.size() != b->branches.size()) return false;
        auto sa = a->branches;
        auto sb = b->branches;
        auto by_label = [](const TypeBranch& x, const TypeBranch& y) { return x.label < y.label; };
        std::sort(sa.begin(), sa.end(), by_label);
        std::sort(sb.begin(), sb.end(), by_label);
        for (size_t i = 0; i < sa.size(); ++i) {
          if (sa[i].label != sb[i].label) return false;
          if (!type_eq(sa[i].type, sb[i].type)) return false;
        }
        return true;
      }
      case K::Bang:
        return type_eq(a->body, b->body);
      case K::At:
        return dom_eq(a->dom, b->dom) && type_eq(a->body, b->body);
      case K::Forall:
      case K::Exists:
      case K::Here:
        return under_dom(a->var, b->var, [&] { return type_eq(a->body, b->body); });
    }
    return false;
  }

  bool proc_eq(const ProcP& a, const ProcP& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->k != b->k) return false;
    using K = Process::K;
    switch (a->k) {
      case K::Inaction:
        return true;
      case K::Par:
        return proc_eq(a->body, b->body) && proc_eq(a->rhs, b->rhs);
      case K::Restrict:
        // annotations are checker metadata: not compared
        return under_name(a->chan, b->chan, [&] { return proc_eq(a->body, b->body); });
      case K::Send:
        return name_eq(a->chan, b->chan) && name_eq(a->arg, b->arg) && proc_eq(a->body, b->body);
      case K::Forward:
        return name_eq(a->chan, b->chan) && name_eq(a->arg, b->arg);
      case K::BoundSend:
      case K::Receive:
      case K::ReplReceive:
        return name_eq(a->chan, b->chan) &&
               under_name(a->arg, b->arg, [&] { return proc_eq(a->body, b->body); });
      case K::MigrateSend:
      case K::MigrateRecv:
        return name_eq(a->chan, b->chan) && dom_eq(a->dom, b->dom) &&
               under_name(a->arg, b->arg, [&] { return proc_eq(a->body, b->body); });
      case K::Branch: {
        if (!name_eq(a->chan, b->chan)) return false;
        if (a->branches.size() != b->branches.size()) return false;
        auto sa = a->branches;
        auto sb = b->branches;
        auto by_label = [](const ProcBranch& x, const ProcBranch& y) { return x.label < y.label; };
        std::sort(sa.begin(), sa.end(), by_label);
        std::sort(sb.begin(), sb.end(), by_label);
        for (size_t i = 0; i < sa.size(); ++i) {
          if (sa[i].label != sb[i].label) return false;
          if (!proc_eq(sa[i].body, sb[i].body)) return false;
        }
        return true;
      }
      case K::Select:
        return name_eq(a->chan, b->chan) && a->label == b->label && proc_eq(a->body, b->body);
      case K::DomSend:
        return name_eq(a->chan, b->chan) && dom_eq(a->dom, b->dom) && proc_eq(a->body, b->body);
      case K::DomRecv:
        return name_eq(a->chan, b->chan) &&
               under_dom(a->arg, b->arg, [&] { return proc_eq(a->body, b->body); });
    }
    return false;
  }
};

}  // namespace

NameSet free_names(const ProcP& p) {
  NameSet bound, out;
  free_names_rec(p, bound, out);
  return out;
}

NameSet free_domain_vars(const ProcP& p) {
  NameSet bound, out;
  fdv_proc_rec(p, bound, out);
  return out;
}

NameSet free_domain_vars(const TypeP& t) {
  NameSet bound, out;
  fdv_type_rec(t, bound, out);
  return out;
}

NameSet domain_consts(const ProcP& p) {
  NameSet out;
  dc_proc_rec(p, out);
  return out;
}

NameSet domain_consts(const TypeP& t) {
  NameSet out;
  dc_type_rec(t, out);
  return out;
}

ProcP subst_name(const ProcP& p, const std::string& y, const std::string& x) {
  if (x == y) return p;
  return subst_name_rec(p, y, x);
}

ProcP subst_domain(const ProcP& p, const DomainTerm& w, const std::string& a) {
  if (w.is_var() && w.name == a) return p;
  return subst_domain_proc(p, w, a);
}

TypeP subst_domain(const TypeP& t, const DomainTerm& w, const std::string& a) {
  if (w.is_var() && w.name == a) return t;
  return subst_domain_type(t, w, a);
}

bool alpha_eq(const ProcP& a, const ProcP& b) {
  AlphaCmp cmp;
  return cmp.proc_eq(a, b);
}

bool alpha_eq(const TypeP& a, const TypeP& b) {
  AlphaCmp cmp;
  return cmp.type_eq(a, b);
}

}  // namespace dst
