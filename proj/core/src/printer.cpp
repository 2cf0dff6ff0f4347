#include "dst/printer.hpp"

#include <sstream>

#include "dst/syntax.hpp"
#include "resolve.hpp"

namespace dst {

namespace {

// Levels: 0 = -o, 1 = *, 2 = prefix/atom.  Quantifier bodies extend
// maximally right, so a quantifier is itself level 0.
int type_level(const TypeP& t) {
  switch (t->k) {
    case Type::K::Lolli:
    case Type::K::Forall:
    case Type::K::Exists:
    case Type::K::Here:
      return 0;
    case Type::K::Tensor:
      return 1;
    default:
      return 2;
  }
}

struct TypePrinter {

  std::string go(const TypeP& t, int min_level) {
    if (type_level(t) < min_level) return "(" + go(t, 0) + ")";
    switch (t->k) {
      case Type::K::One:
        return "1";
      case Type::K::Lolli:
        return go(t->left, 1) + " -o " + go(t->body, 0);
      case Type::K::Tensor:
        return go(t->left, 2) + " * " + go(t->body, 1);
      case Type::K::Bang:
        return "!" + go(t->body, 2);
      case Type::K::At:
        return "@" + t->dom.name + " " + go(t->body, 2);
      case Type::K::With:
      case Type::K::Plus: {
        std::string out = t->k == Type::K::With ? "&{ " : "+{ ";
        bool first = true;
        for (const auto& b : t->branches) {
          if (!first) out += ", ";
          first = false;
          out += b.label + ": " + go(b.type, 0);
        }
        return out + " }";
      }
      case Type::K::Forall:
      case Type::K::Exists:
      case Type::K::Here: {
        std::string kw = t->k == Type::K::Forall ? "all" : t->k == Type::K::Exists ? "ex" : "here";
        std::string v = t->var;
        TypeP body = t->body;
        if (domain_consts(body).count(v)) {
          NameSet avoid = domain_consts(body);
          for (const auto& x : free_domain_vars(body)) avoid.insert(x);
          std::string v2 = fresh_name(v, avoid);
          body = subst_domain(body, DomainTerm::v(v2), v);
          v = v2;
        }
        std::string out = kw + " " + v + ". " + go(body, 0);
        return out;
      }
    }
    return "?";
  }
};

struct ProcPrinter {
  NameSet dom_consts;
  NameSet dom_vars;

  bool known_domain(const std::string& n) const {
    return dom_consts.count(n) || dom_vars.count(n);
  }

  std::string type(const TypeP& t) {
    TypePrinter tp;
    return tp.go(t, 0);
  }

  std::string atom(const ProcP& p) {
    if (p->k == Process::K::Par) return "(" + go(p) + ")";
    return go(p);
  }

  /// Rename a name binder when its surface form would re-read as a domain.
  std::pair<std::string, ProcP> safe_name_binder(const std::string& y, const ProcP& body) {
    bool clash = known_domain(y);
    if (!clash) {
      // a constant named y in a definite domain position inside would make
      // the ambiguous input form resolve wrongly
      clash = domain_consts(body).count(y) || free_domain_vars(body).count(y);
    }
    if (!clash) return {y, body};
    NameSet avoid = free_names(body);
    for (const auto& d : dom_consts) avoid.insert(d);
    for (const auto& d : dom_vars) avoid.insert(d);
    for (const auto& d : domain_consts(body)) avoid.insert(d);
    for (const auto& d : free_domain_vars(body)) avoid.insert(d);
    std::string y2 = fresh_name(y, avoid);
    return {y2, subst_name(body, y2, y)};
  }

  std::pair<std::string, ProcP> safe_dom_binder(const std::string& a, const ProcP& body) {
    bool clash = free_names(body).count(a) || domain_consts(body).count(a);
    if (!clash) return {a, body};
    NameSet avoid = free_names(body);
    for (const auto& d : domain_consts(body)) avoid.insert(d);
    for (const auto& d : free_domain_vars(body)) avoid.insert(d);
    std::string a2 = fresh_name(a, avoid);
    return {a2, subst_domain(body, DomainTerm::v(a2), a)};
  }

  std::string go(const ProcP& p) {
    using K = Process::K;
    switch (p->k) {
      case K::Inaction:
        return "0";
      case K::Par:
        return go(p->body) + " | " + atom(p->rhs);
      case K::Restrict: {
        // share form for replicated offers
        if (p->annot && p->body && p->body->k == K::Par && p->body->body &&
            p->body->body->k == K::ReplReceive && p->body->body->chan == p->chan) {
          const ProcP& srv = p->body->body;
          return "share " + p->chan + " : " + type(p->annot->type) + " @ " +
                 p->annot->dom.name + " = " + srv->arg + ". " + atom(srv->body) + " in " +
                 atom(p->body->rhs);
        }
        std::string out = "new " + p->chan;
        if (p->annot) out += " : " + type(p->annot->type) + " @ " + p->annot->dom.name;
        out += " in " + atom(p->body);
        return out;
      }
      case K::Send:
        return p->chan + "!" + p->arg + "." + atom(p->body);
      case K::BoundSend: {
        auto [y, body] = safe_name_binder(p->arg, p->body);
        return p->chan + "<" + y + ">." + atom(body);
      }
      case K::Receive: {
        auto [y, body] = safe_name_binder(p->arg, p->body);
        return p->chan + "(" + y + ")." + atom(body);
      }
      case K::ReplReceive:
        return "!" + p->chan + "(" + p->arg + ")." + atom(p->body);
      case K::Forward:
        return "fwd " + p->chan + " " + p->arg;
      case K::Branch: {
        std::string out = "case " + p->chan + " { ";
        bool first = true;
        for (const auto& b : p->branches) {
          if (!first) out += ", ";
          first = false;
          out += b.label + ": " + atom(b.body);
        }
        return out + " }";
      }
      case K::Select:
        return p->chan + "[" + p->label + "];" + atom(p->body);
      case K::MigrateSend: {
        auto [y, body] = safe_name_binder(p->arg, p->body);
        return p->chan + "<<" + y + "@" + p->dom.name + ">>." + atom(body);
      }
      case K::MigrateRecv: {
        auto [y, body] = safe_name_binder(p->arg, p->body);
        return p->chan + "((" + y + "@" + p->dom.name + "))." + atom(body);
      }
      case K::DomSend: {
        bool bare = p->dom.is_var() ? dom_vars.count(p->dom.name) > 0
                                    : dom_consts.count(p->dom.name) > 0;
        std::string d = (bare ? "" : "$") + p->dom.name;
        return p->chan + "<" + d + ">." + atom(p->body);
      }
      case K::DomRecv: {
        auto [a, body] = safe_dom_binder(p->arg, p->body);
        dom_vars.insert(a);
        bool bare = detail::dom_evidence(body, a) && !detail::name_evidence(body, a);
        std::string out = p->chan + "(" + (bare ? "" : "$") + a + ")." + atom(body);
        dom_vars.erase(a);
        return out;
      }
    }
    return "?";
  }

};


}  // namespace

std::string print(const TypeP& t) {
  TypePrinter tp;
  return tp.go(t, 0);
}

std::string print(const DomainTerm& d) { return d.name; }

std::string print(const ProcP& p, const PrintContext& ctx) {
  ProcPrinter pp;
  pp.dom_consts = ctx.domain_consts;
  pp.dom_vars = ctx.domain_vars;
  return pp.go(p);
}

std::string print(const LocalP& t) {
  using LK = LocalType::K;
  switch (t->k) {
    case LK::End:
      return "end";
    case LK::Recv:
    case LK::Send: {
      std::string out = t->peer + (t->k == LK::Recv ? "?{ " : "!{ ");
      bool first = true;
      for (const auto& b : t->branches) {
        if (!first) out += ", ";
        first = false;
        out += b.label;
        if (b.payload) {
          if (b.payload->k == Payload::K::Base)
            out += "<" + b.payload->base + ">";
          else
            out += "<(" + print(b.payload->session) + ")>";
        }
        out += ". " + print(b.cont);
      }
      return out + " }";
    }
    case LK::Forall:
      return "all " + t->var + ". " + print(t->body);
    case LK::Exists:
      return "ex " + t->var + ". " + print(t->body);
    case LK::At:
      return "@" + t->dom.name + " (" + print(t->body) + ")";
    case LK::Here:
      return "here " + t->var + ". " + print(t->body);
  }
  return "?";
}

std::string print(const GlobalP& g) {
  switch (g->k) {
    case GlobalType::K::End:
      return "end";
    case GlobalType::K::Comm: {
      std::string out = g->from + " -> " + g->to + " { ";
      bool first = true;
      for (const auto& b : g->branches) {
        if (!first) out += ", ";
        first = false;
        out += b.label;
        if (b.payload) {
          if (b.payload->k == Payload::K::Base)
            out += "<" + b.payload->base + ">";
          else
            out += "<(" + print(b.payload->session) + ")>";
        }
        out += ". " + print(b.cont);
      }
      return out + " }";
    }
    case GlobalType::K::Move: {
      std::string out = "move " + g->leader + " [";
      bool first = true;
      for (const auto& q : g->migrants) {
        if (!first) out += ", ";
        first = false;
        out += q;
      }
      out += "] to " + g->target.name + " { " + print(g->sub) + " } then { " + print(g->cont) +
             " }";
      return out;
    }
  }
  return "?";
}

std::string print(const Judgment& j) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& [a, b] : j.omega.edges) {
    if (!first) os << ", ";
    first = false;
    os << a.name << " < " << b.name;
  }
  os << "]";
  if (j.omega.config.reflexive || j.omega.config.transitive || j.omega.config.symmetric) {
    os << " closure{";
    if (j.omega.config.reflexive) os << " reflexive";
    if (j.omega.config.transitive) os << " transitive";
    if (j.omega.config.symmetric) os << " symmetric";
    os << " }";
  }
  PrintContext ctx;
  for (const auto& d : domains_of(j.omega)) {
    if (d.is_const())
      ctx.domain_consts.insert(d.name);
    else
      ctx.domain_vars.insert(d.name);
  }
  auto ctx_str = [&](const Ctx& c) {
    std::string out = "[";
    bool f = true;
    for (const auto& e : c) {
      if (!f) out += ", ";
      f = false;
      out += e.name + " : " + print(e.type) + " @ " + e.dom.name;
    }
    return out + "]";
  };
  os << " ; " << ctx_str(j.gamma) << " ; " << ctx_str(j.delta);
  os << " |- " << print(j.proc, ctx) << " :: " << j.offered << " : " << print(j.type) << " @ "
     << j.dom.name;
  return os.str();
}

}  // namespace dst
