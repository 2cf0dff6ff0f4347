#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "dst/surface.hpp"
#include "dst/syntax.hpp"
#include "lexer.hpp"
#include "resolve.hpp"

namespace dst {

AccessEnv SourceUnit::access_env() const {
  AccessEnv env;
  env.config = closure;
  for (const auto& e : access_edges) env.edges.insert(e);
  return env;
}

ParserSymbols SourceUnit::symbols() const {
  ParserSymbols sy;
  sy.domain_consts = domain_decls;
  for (const auto& [a, b] : access_edges) {
    sy.domain_consts.insert(a.name);
    sy.domain_consts.insert(b.name);
  }
  for (const auto& [n, t] : types) sy.type_aliases[n] = t;
  for (const auto& [n, t] : locals) sy.local_aliases[n] = t;
  return sy;
}

const TypeP* SourceUnit::find_type(const std::string& n) const {
  for (const auto& [name, t] : types)
    if (name == n) return &t;
  return nullptr;
}
const LocalP* SourceUnit::find_local(const std::string& n) const {
  for (const auto& [name, t] : locals)
    if (name == n) return &t;
  return nullptr;
}
const GlobalP* SourceUnit::find_global(const std::string& n) const {
  for (const auto& [name, g] : globals)
    if (name == n) return &g;
  return nullptr;
}
const ProcDef* SourceUnit::find_process(const std::string& n) const {
  for (const auto& [name, d] : processes)
    if (name == n) return &d;
  return nullptr;
}

namespace detail {

/// Unshadowed use of `a` in a definite name position (subject, forwarder
/// endpoint, free-output payload).
bool name_evidence(const ProcP& p, const std::string& a) {
  if (!p) return false;
  using K = Process::K;
  auto binder_shadows = [&](const std::string& b) { return b == a; };
  switch (p->k) {
    case K::Inaction:
      return false;
    case K::Par:
      return name_evidence(p->body, a) || name_evidence(p->rhs, a);
    case K::Restrict:
      if (binder_shadows(p->chan)) return false;
      return name_evidence(p->body, a);
    case K::Forward:
      return p->chan == a || p->arg == a;
    case K::Send:
      if (p->chan == a || p->arg == a) return true;
      return name_evidence(p->body, a);
    case K::BoundSend:
      // under the domain reading this is a domain output of `a`, not a
      // binder, so it neither shadows nor witnesses a name use
      if (p->chan == a) return true;
      return name_evidence(p->body, a);
    case K::Receive:
    case K::ReplReceive:
    case K::MigrateSend:
    case K::MigrateRecv:
      if (p->chan == a) return true;
      if (binder_shadows(p->arg)) return false;
      return name_evidence(p->body, a);
    case K::Branch: {
      if (p->chan == a) return true;
      for (const auto& b : p->branches)
        if (name_evidence(b.body, a)) return true;
      return false;
    }
    case K::DomRecv:
      if (p->chan == a) return true;
      if (binder_shadows(p->arg)) return false;
      return name_evidence(p->body, a);
    default:
      if (p->chan == a) return true;
      return name_evidence(p->body, a);
  }
}

bool dom_in_type(const TypeP& t, const std::string& a) {
  if (!t) return false;
  if (t->k == Type::K::At && t->dom.name == a) return true;
  if ((t->k == Type::K::Forall || t->k == Type::K::Exists || t->k == Type::K::Here) &&
      t->var == a)
    return false;
  if (dom_in_type(t->left, a) || dom_in_type(t->body, a)) return true;
  for (const auto& b : t->branches)
    if (dom_in_type(b.type, a)) return true;
  return false;
}

/// Unshadowed occurrence of `a` in a definite domain position.
bool dom_evidence(const ProcP& p, const std::string& a) {
  if (!p) return false;
  using K = Process::K;
  switch (p->k) {
    case K::Inaction:
    case K::Forward:
      return false;
    case K::Par:
      return dom_evidence(p->body, a) || dom_evidence(p->rhs, a);
    case K::Restrict:
      if (p->chan == a) return false;
      if (p->annot && (p->annot->dom.name == a || dom_in_type(p->annot->type, a))) return true;
      return dom_evidence(p->body, a);
    case K::MigrateSend:
    case K::MigrateRecv:
      if (p->dom.name == a) return true;
      if (p->arg == a) return false;
      return dom_evidence(p->body, a);
    case K::DomSend:
      if (p->dom.name == a) return true;
      return dom_evidence(p->body, a);
    case K::DomRecv:
      if (p->arg == a) return false;
      return dom_evidence(p->body, a);
    case K::Branch: {
      for (const auto& b : p->branches)
        if (dom_evidence(b.body, a)) return true;
      return false;
    }
    case K::BoundSend:
      return dom_evidence(p->body, a);
    case K::Receive:
    case K::ReplReceive:
      if (p->arg == a) return false;
      return dom_evidence(p->body, a);
    default:
      return dom_evidence(p->body, a);
  }
}

}  // namespace detail

namespace {

struct ParseFail {};



TypeP type_to_domvar(const TypeP& t, const std::string& a) {
  if (!t) return t;
  using K = Type::K;
  switch (t->k) {
    case K::One:
      return t;
    case K::Tensor:
      return t_tensor(type_to_domvar(t->left, a), type_to_domvar(t->body, a));
    case K::Lolli:
      return t_lolli(type_to_domvar(t->left, a), type_to_domvar(t->body, a));
    case K::With:
    case K::Plus: {
      std::vector<TypeBranch> bs;
      for (const auto& b : t->branches) bs.push_back({b.label, type_to_domvar(b.type, a)});
      return t->k == K::With ? t_with(std::move(bs)) : t_plus(std::move(bs));
    }
    case K::Bang:
      return t_bang(type_to_domvar(t->body, a));
    case K::At: {
      DomainTerm d = t->dom;
      if (d.name == a) d = DomainTerm::v(a);
      return t_at(d, type_to_domvar(t->body, a));
    }
    case K::Forall:
    case K::Exists:
    case K::Here: {
      if (t->var == a) return t;
      auto copy = std::make_shared<Type>(*t);
      copy->body = type_to_domvar(t->body, a);
      return copy;
    }
  }
  return t;
}

/// After deciding that receive binder `a` is a domain variable: flip
/// constants named `a` in domain positions to the variable and reread
/// ambiguous bound outputs as domain outputs.
ProcP to_domvar(const ProcP& p, const std::string& a) {
  if (!p) return p;
  using K = Process::K;
  switch (p->k) {
    case K::Inaction:
    case K::Forward:
      return p;
    case K::Par:
      return p_par(to_domvar(p->body, a), to_domvar(p->rhs, a));
    case K::Restrict: {
      if (p->chan == a) return p;
      auto copy = std::make_shared<Process>(*p);
      if (copy->annot && copy->annot->dom.name == a)
        copy->annot->dom = DomainTerm::v(a);
      if (copy->annot) copy->annot->type = type_to_domvar(copy->annot->type, a);
      copy->body = to_domvar(p->body, a);
      return copy;
    }
    case K::BoundSend: {
      if (p->arg == a) {
        // ambiguous output of `a`: the domain reading wins
        return p_dsend(p->chan, DomainTerm::v(a), to_domvar(p->body, a));
      }
      auto copy = std::make_shared<Process>(*p);
      copy->body = to_domvar(p->body, a);
      return copy;
    }
    case K::Receive:
    case K::ReplReceive: {
      if (p->arg == a) return p;  // shadow
      auto copy = std::make_shared<Process>(*p);
      copy->body = to_domvar(p->body, a);
      return copy;
    }
    case K::MigrateSend:
    case K::MigrateRecv: {
      auto copy = std::make_shared<Process>(*p);
      if (copy->dom.name == a) copy->dom = DomainTerm::v(a);
      if (p->arg != a) copy->body = to_domvar(p->body, a);
      return copy;
    }
    case K::DomSend: {
      auto copy = std::make_shared<Process>(*p);
      if (copy->dom.name == a) copy->dom = DomainTerm::v(a);
      copy->body = to_domvar(p->body, a);
      return copy;
    }
    case K::DomRecv: {
      if (p->arg == a) return p;
      auto copy = std::make_shared<Process>(*p);
      copy->body = to_domvar(p->body, a);
      return copy;
    }
    case K::Branch: {
      std::vector<ProcBranch> bs;
      for (const auto& b : p->branches) bs.push_back({b.label, to_domvar(b.body, a)});
      auto copy = std::make_shared<Process>(*p);
      copy->branches = std::move(bs);
      return copy;
    }
    default: {
      auto copy = std::make_shared<Process>(*p);
      copy->body = to_domvar(p->body, a);
      return copy;
    }
  }
}

struct Parser {
  std::vector<Token> toks;
  size_t at = 0;
  Diagnostics diags;

  NameSet dom_consts;
  std::vector<std::string> dom_vars;
  std::map<std::string, TypeP> type_aliases;
  std::map<std::string, LocalP> local_aliases;
  std::map<std::string, GlobalP> global_aliases;
  const std::vector<std::pair<std::string, ProcDef>>* proc_defs = nullptr;

  const Token& peek(size_t k = 0) const {
    size_t i = at + k;
    if (i >= toks.size()) i = toks.size() - 1;
    return toks[i];
  }
  bool is(Tok t, size_t k = 0) const { return peek(k).kind == t; }
  Token take() { return toks[at == toks.size() - 1 ? at : at++]; }
  bool accept(Tok t) {
    if (is(t)) {
      take();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const Span& sp, const std::string& msg) {
    diags.push_back({Severity::Error, sp, "parse", msg});
    throw ParseFail{};
  }

  Token expect(Tok t, const std::string& what) {
    if (!is(t))
      fail(peek().span, "expected " + std::string(token_name(t)) + " " + what + ", found " +
                            (peek().text.empty() ? token_name(peek().kind) : "'" + peek().text + "'"));
    return take();
  }

  std::string ident(const std::string& what) { return expect(Tok::Ident, what).text; }

  bool dom_var_in_scope(const std::string& n) const {
    return std::find(dom_vars.begin(), dom_vars.end(), n) != dom_vars.end();
  }

  DomainTerm domain_term() {
    if (accept(Tok::Dollar)) {
      std::string n = ident("after '$'");
      return dom_var_in_scope(n) ? DomainTerm::v(n) : DomainTerm::c(n);
    }
    std::string n = ident("as a domain");
    if (dom_var_in_scope(n)) return DomainTerm::v(n);
    return DomainTerm::c(n);
  }

  // ---- binary types ----

  TypeP type_prefix() {
    if (accept(Tok::One)) return t_one();
    if (accept(Tok::Bang)) return t_bang(type_prefix());
    if (accept(Tok::At)) {
      DomainTerm d = domain_term();
      return t_at(d, type_prefix());
    }
    if (is(Tok::KwAll) || is(Tok::KwEx) || is(Tok::KwHere)) {
      Tok k = take().kind;
      std::string v = ident("as a domain variable");
      expect(Tok::Dot, "after the binder");
      dom_vars.push_back(v);
      TypeP body = type_expr();
      dom_vars.pop_back();
      if (k == Tok::KwAll) return t_forall(v, body);
      if (k == Tok::KwEx) return t_exists(v, body);
      return t_here(v, body);
    }
    if (is(Tok::Amp) || is(Tok::Plus)) {
      Tok k = take().kind;
      expect(Tok::LBrace, "opening the branch list");
      std::vector<TypeBranch> bs;
      if (!is(Tok::RBrace)) {
        do {
          std::string l = ident("as a label");
          expect(Tok::Colon, "after the label");
          bs.push_back({l, type_expr()});
        } while (accept(Tok::Comma));
      }
      expect(Tok::RBrace, "closing the branch list");
      for (size_t i = 0; i < bs.size(); ++i)
        for (size_t j = i + 1; j < bs.size(); ++j)
          if (bs[i].label == bs[j].label) fail(peek().span, "duplicate label " + bs[i].label);
      if (bs.empty()) fail(peek().span, "branch types need at least one label");
      return k == Tok::Amp ? t_with(std::move(bs)) : t_plus(std::move(bs));
    }
    if (accept(Tok::LParen)) {
      TypeP t = type_expr();
      expect(Tok::RParen, "closing the type");
      return t;
    }
    if (is(Tok::Ident)) {
      Token t = take();
      auto it = type_aliases.find(t.text);
      if (it == type_aliases.end()) fail(t.span, "unknown type name " + t.text);
      return it->second;
    }
    fail(peek().span, "expected a session type");
  }

  TypeP type_tensor() {
    TypeP l = type_prefix();
    if (accept(Tok::Star)) return t_tensor(l, type_tensor());
    return l;
  }

  TypeP type_expr() {
    TypeP l = type_tensor();
    if (accept(Tok::Lolli)) return t_lolli(l, type_expr());
    return l;
  }

  // ---- local types ----

  std::optional<Payload> payload_opt() {
    if (!accept(Tok::Lt)) return std::nullopt;
    Payload pl = Payload::b("nat");
    if (is(Tok::Ident) && is(Tok::Gt, 1)) {
      std::string n = take().text;
      auto it = local_aliases.find(n);
      if (it != local_aliases.end())
        pl = Payload::s(it->second);
      else
        pl = Payload::b(n);
    } else {
      pl = Payload::s(local_type());
    }
    expect(Tok::Gt, "closing the payload");
    return pl;
  }

  std::vector<LBranch> local_branches() {
    expect(Tok::LBrace, "opening the branch list");
    std::vector<LBranch> bs;
    if (!is(Tok::RBrace)) {
      do {
        std::string l = ident("as a label");
        auto pl = payload_opt();
        expect(Tok::Dot, "after the label");
        bs.push_back({l, pl, local_type()});
      } while (accept(Tok::Comma));
    }
    expect(Tok::RBrace, "closing the branch list");
    return bs;
  }

  LocalP local_type() {
    if (accept(Tok::KwEnd)) return l_end();
    if (accept(Tok::At)) {
      DomainTerm d = domain_term();
      return l_at(d, local_type());
    }
    if (is(Tok::KwAll) || is(Tok::KwEx) || is(Tok::KwHere)) {
      Tok k = take().kind;
      std::string v = ident("as a domain variable");
      expect(Tok::Dot, "after the binder");
      dom_vars.push_back(v);
      LocalP body = local_type();
      dom_vars.pop_back();
      if (k == Tok::KwAll) return l_forall(v, body);
      if (k == Tok::KwEx) return l_exists(v, body);
      return l_here(v, body);
    }
    if (accept(Tok::LParen)) {
      LocalP t = local_type();
      expect(Tok::RParen, "closing the local type");
      return t;
    }
    if (is(Tok::Ident)) {
      if (is(Tok::Question, 1) || is(Tok::Bang, 1)) {
        std::string p = take().text;
        bool recv = take().kind == Tok::Question;
        auto bs = local_branches();
        return recv ? l_recv(p, std::move(bs)) : l_send(p, std::move(bs));
      }
      Token t = take();
      auto it = local_aliases.find(t.text);
      if (it == local_aliases.end()) fail(t.span, "unknown local type name " + t.text);
      return it->second;
    }
    fail(peek().span, "expected a local type");
  }

  // ---- global types ----

  GlobalP global_type() {
    if (accept(Tok::KwEnd)) return g_end();
    if (accept(Tok::KwMove)) {
      std::string p = ident("as the migration leader");
      expect(Tok::LBracket, "opening the migrant list");
      std::vector<Participant> qs;
      if (!is(Tok::RBracket)) {
        do qs.push_back(ident("as a migrant"));
        while (accept(Tok::Comma));
      }
      expect(Tok::RBracket, "closing the migrant list");
      expect(Tok::KwTo, "before the target domain");
      DomainTerm w = domain_term();
      dom_consts.insert(w.name);
      expect(Tok::LBrace, "opening the sub-protocol");
      GlobalP g1 = global_type();
      expect(Tok::RBrace, "closing the sub-protocol");
      expect(Tok::KwThen, "before the continuation");
      expect(Tok::LBrace, "opening the continuation");
      GlobalP g2 = global_type();
      expect(Tok::RBrace, "closing the continuation");
      return g_move(p, std::move(qs), w, g1, g2);
    }
    if (is(Tok::Ident)) {
      if (is(Tok::Arrow, 1)) {
        std::string p = take().text;
        take();  // ->
        std::string q = ident("as the receiver");
        expect(Tok::LBrace, "opening the branch list");
        std::vector<GBranch> bs;
        if (!is(Tok::RBrace)) {
          do {
            std::string l = ident("as a label");
            auto pl = payload_opt();
            expect(Tok::Dot, "after the label");
            bs.push_back({l, pl, global_type()});
          } while (accept(Tok::Comma));
        }
        expect(Tok::RBrace, "closing the branch list");
        return g_comm(p, q, std::move(bs));
      }
      Token t = take();
      auto it = global_aliases.find(t.text);
      if (it == global_aliases.end()) fail(t.span, "unknown global type name " + t.text);
      return it->second;
    }
    fail(peek().span, "expected a global type");
  }

  // ---- processes ----

  ProcP set_span(ProcP p, const Span& sp) {
    auto copy = std::make_shared<Process>(*p);
    copy->span = sp;
    return copy;
  }

  ProcP proc_expr() {
    ProcP l = proc_atom();
    while (accept(Tok::Bar)) {
      ProcP r = proc_atom();
      l = p_par(l, r);
    }
    return l;
  }

  ProcP proc_atom() {
    Span sp = peek().span;
    if (is(Tok::Number) && peek().text == "0") {
      take();
      return p_inaction();
    }
    if (accept(Tok::LParen)) {
      ProcP p = proc_expr();
      expect(Tok::RParen, "closing the process");
      return p;
    }
    if (accept(Tok::KwFwd)) {
      std::string x = ident("as a forwarder endpoint");
      std::string y = ident("as a forwarder endpoint");
      return set_span(p_fwd(x, y), sp);
    }
    if (accept(Tok::KwNew)) {
      std::string x = ident("as the restricted name");
      std::optional<RestrictAnnot> annot;
      if (accept(Tok::Colon)) {
        TypeP t = type_expr();
        expect(Tok::At, "before the cut domain");
        DomainTerm d = domain_term();
        annot = RestrictAnnot{t, d};
      }
      expect(Tok::KwIn, "before the scope of new");
      ProcP body = proc_atom();
      ProcP r = annot ? p_restrict(x, *annot, body) : p_restrict(x, body);
      return set_span(r, sp);
    }
    if (accept(Tok::KwShare)) {
      std::string u = ident("as the shared name");
      expect(Tok::Colon, "before the shared type");
      TypeP t = type_expr();
      expect(Tok::At, "before the shared domain");
      DomainTerm d = domain_term();
      expect(Tok::Eq, "before the server body");
      std::string x = ident("as the server's session parameter");
      expect(Tok::Dot, "after the session parameter");
      ProcP body = proc_atom();
      expect(Tok::KwIn, "before the client scope");
      ProcP client = proc_atom();
      return set_span(p_restrict(u, RestrictAnnot{t, d}, p_par(p_repl(u, x, body), client)),
                      sp);
    }
    if (accept(Tok::KwCase)) {
      std::string x = ident("as the case subject");
      expect(Tok::LBrace, "opening the branches");
      std::vector<ProcBranch> bs;
      if (!is(Tok::RBrace)) {
        do {
          std::string l = ident("as a label");
          expect(Tok::Colon, "after the label");
          bs.push_back({l, proc_atom()});
        } while (accept(Tok::Comma));
      }
      expect(Tok::RBrace, "closing the branches");
      return set_span(p_branch(x, std::move(bs)), sp);
    }
    if (accept(Tok::Bang)) {
      std::string x = ident("as the replicated subject");
      expect(Tok::LParen, "opening the input");
      std::string y = ident("as the bound name");
      expect(Tok::RParen, "closing the input");
      expect(Tok::Dot, "after the replicated input");
      return set_span(p_repl(x, y, proc_atom()), sp);
    }
    if (is(Tok::Ident)) {
      // a reference to a defined process, possibly with arguments
      const ProcDef* def = nullptr;
      if (proc_defs) {
        for (const auto& [n, d] : *proc_defs)
          if (n == peek().text) def = &d;
      }
      bool call_args = is(Tok::LParen, 1) && is(Tok::Ident, 2) &&
                       (is(Tok::Comma, 3) || (is(Tok::RParen, 3) && !is(Tok::Dot, 4)));
      if (def && (call_args || !(is(Tok::Bang, 1) || is(Tok::LBracket, 1) ||
                                 is(Tok::LtLt, 1) || is(Tok::Lt, 1) || is(Tok::LParen, 1)))) {
        Token name = take();
        std::vector<std::string> args;
        if (call_args) {
          take();  // (
          do args.push_back(ident("as an argument"));
          while (accept(Tok::Comma));
          expect(Tok::RParen, "closing the arguments");
        }
        if (args.size() > def->params.size())
          fail(name.span, "process " + name.text + " takes at most " +
                              std::to_string(def->params.size()) + " arguments");
        ProcP body = def->body;
        // rename formals to fresh temporaries first so the substitution
        // is simultaneous
        NameSet avoid = free_names(body);
        for (const auto& a : args) avoid.insert(a);
        std::vector<std::string> temps;
        for (size_t i = 0; i < args.size(); ++i) {
          std::string t = fresh_name("arg_tmp", avoid);
          avoid.insert(t);
          temps.push_back(t);
          body = subst_name(body, t, def->params[i]);
        }
        for (size_t i = 0; i < args.size(); ++i) body = subst_name(body, args[i], temps[i]);
        return body;
      }
      std::string x = take().text;
      if (accept(Tok::Bang)) {
        std::string y = ident("as the sent name");
        expect(Tok::Dot, "after the output");
        return set_span(p_send(x, y, proc_atom()), sp);
      }
      if (accept(Tok::LBracket)) {
        std::string l = ident("as the selected label");
        expect(Tok::RBracket, "closing the selection");
        expect(Tok::Semi, "after the selection");
        return set_span(p_select(x, l, proc_atom()), sp);
      }
      if (accept(Tok::LtLt)) {
        std::string y = ident("as the migrating name");
        expect(Tok::At, "before the migration target");
        DomainTerm d = domain_term();
        expect(Tok::GtGt, "closing the migration");
        expect(Tok::Dot, "after the migration");
        return set_span(p_msend(x, y, d, proc_atom()), sp);
      }
      if (accept(Tok::Lt)) {
        if (is(Tok::Dollar)) {
          DomainTerm d = domain_term();
          expect(Tok::Gt, "closing the domain output");
          expect(Tok::Dot, "after the domain output");
          return set_span(p_dsend(x, d, proc_atom()), sp);
        }
        std::string t = ident("as the output");
        expect(Tok::Gt, "closing the output");
        expect(Tok::Dot, "after the output");
        if (dom_var_in_scope(t)) {
          return set_span(p_dsend(x, DomainTerm::v(t), proc_atom()), sp);
        }
        if (dom_consts.count(t)) {
          return set_span(p_dsend(x, DomainTerm::c(t), proc_atom()), sp);
        }
        return set_span(p_bsend(x, t, proc_atom()), sp);
      }
      if (is(Tok::LParen) && is(Tok::LParen, 1)) {
        take();
        take();
        std::string y = ident("as the migrating name");
        expect(Tok::At, "before the migration target");
        DomainTerm d = domain_term();
        expect(Tok::RParen, "closing the migration input");
        expect(Tok::RParen, "closing the migration input");
        expect(Tok::Dot, "after the migration input");
        return set_span(p_mrecv(x, y, d, proc_atom()), sp);
      }
      if (accept(Tok::LParen)) {
        if (accept(Tok::Dollar)) {
          std::string a = ident("as the domain variable");
          expect(Tok::RParen, "closing the domain input");
          expect(Tok::Dot, "after the domain input");
          dom_vars.push_back(a);
          ProcP body = proc_atom();
          dom_vars.pop_back();
          return set_span(p_drecv(x, a, body), sp);
        }
        std::string a = ident("as the bound name");
        expect(Tok::RParen, "closing the input");
        expect(Tok::Dot, "after the input");
        // Ambiguous input form: parse the body under the name reading,
        // then promote to a domain input when the binder occurs only in
        // definite domain positions.
        ProcP body = proc_atom();
        if (!detail::name_evidence(body, a) && detail::dom_evidence(body, a)) {
          return set_span(p_drecv(x, a, to_domvar(body, a)), sp);
        }
        return set_span(p_recv(x, a, body), sp);
      }
      fail(peek().span, "expected a process action after " + x);
    }
    fail(peek().span, "expected a process");
  }

  // ---- declarations ----

  void sync() {
    while (!is(Tok::Eof) && !accept(Tok::Semi)) take();
  }

  void parse_ctx(Ctx& ctx) {
    expect(Tok::LBracket, "opening the context");
    if (!is(Tok::RBracket)) {
      do {
        Token n = expect(Tok::Ident, "as a context name");
        expect(Tok::Colon, "after the name");
        TypeP t = type_expr();
        expect(Tok::At, "before the domain");
        DomainTerm d = domain_term();
        ctx.put(CtxEntry{n.text, t, d, n.span});
      } while (accept(Tok::Comma));
    }
    expect(Tok::RBracket, "closing the context");
  }

  void parse_decl(SourceUnit& unit) {
    Span sp = peek().span;
    if (accept(Tok::KwClosure)) {
      while (!is(Tok::Semi) && !is(Tok::Eof)) {
        if (accept(Tok::KwReflexive)) unit.closure.reflexive = true;
        else if (accept(Tok::KwTransitive)) unit.closure.transitive = true;
        else if (accept(Tok::KwSymmetric)) unit.closure.symmetric = true;
        else fail(peek().span, "expected reflexive, transitive or symmetric");
      }
      expect(Tok::Semi, "after the closure declaration");
      return;
    }
    if (accept(Tok::KwAccess)) {
      std::string a = ident("as a domain");
      expect(Tok::Lt, "between the domains");
      std::string b = ident("as a domain");
      expect(Tok::Semi, "after the access declaration");
      dom_consts.insert(a);
      dom_consts.insert(b);
      unit.domain_decls.insert(a);
      unit.domain_decls.insert(b);
      unit.access_edges.push_back({DomainTerm::c(a), DomainTerm::c(b)});
      return;
    }
    if (accept(Tok::KwDomain)) {
      while (is(Tok::Ident)) {
        std::string d = take().text;
        dom_consts.insert(d);
        unit.domain_decls.insert(d);
      }
      expect(Tok::Semi, "after the domain declaration");
      return;
    }
    if (accept(Tok::KwType)) {
      Token n = expect(Tok::Ident, "as the type name");
      expect(Tok::Eq, "after the type name");
      TypeP t = type_expr();
      expect(Tok::Semi, "after the type definition");
      if (type_aliases.count(n.text)) fail(n.span, "type " + n.text + " defined twice");
      type_aliases[n.text] = t;
      unit.types.push_back({n.text, t});
      return;
    }
    if (accept(Tok::KwLocal)) {
      Token n = expect(Tok::Ident, "as the local type name");
      expect(Tok::Eq, "after the name");
      LocalP t = local_type();
      expect(Tok::Semi, "after the local type definition");
      if (local_aliases.count(n.text)) fail(n.span, "local type " + n.text + " defined twice");
      local_aliases[n.text] = t;
      unit.locals.push_back({n.text, t});
      return;
    }
    if (accept(Tok::KwGlobal)) {
      Token n = expect(Tok::Ident, "as the global type name");
      expect(Tok::Eq, "after the name");
      GlobalP g = global_type();
      expect(Tok::Semi, "after the global type definition");
      if (global_aliases.count(n.text)) fail(n.span, "global type " + n.text + " defined twice");
      global_aliases[n.text] = g;
      unit.globals.push_back({n.text, g});
      return;
    }
    if (accept(Tok::KwProcess)) {
      Token n = expect(Tok::Ident, "as the process name");
      expect(Tok::LParen, "opening the parameter list");
      std::vector<std::string> params;
      if (!is(Tok::RParen)) {
        do params.push_back(ident("as a parameter"));
        while (accept(Tok::Comma));
      }
      expect(Tok::RParen, "closing the parameter list");
      expect(Tok::Eq, "before the process body");
      ProcP body = proc_expr();
      expect(Tok::Semi, "after the process definition");
      if (unit.find_process(n.text)) fail(n.span, "process " + n.text + " defined twice");
      unit.processes.push_back({n.text, ProcDef{std::move(params), body, n.span}});
      return;
    }
    if (accept(Tok::KwCheck)) {
      CheckDirective dir;
      dir.span = sp;
      dir.proc_name = ident("as the process to check");
      expect(Tok::ColonColon, "before the offered session");
      dir.offered = ident("as the offered channel");
      expect(Tok::Colon, "before the offered type");
      dir.type = type_expr();
      expect(Tok::At, "before the offered domain");
      dir.dom = domain_term();
      if (accept(Tok::KwUnder)) {
        parse_ctx(dir.gamma);
        expect(Tok::Semi, "between the shared and linear contexts");
        parse_ctx(dir.delta);
      }
      if (accept(Tok::KwWith)) {
        expect(Tok::LBracket, "opening the accessibility hypotheses");
        if (!is(Tok::RBracket)) {
          do {
            DomainTerm a = domain_term();
            expect(Tok::Lt, "between the domains");
            DomainTerm b = domain_term();
            dir.extra_edges.push_back({a, b});
          } while (accept(Tok::Comma));
        }
        expect(Tok::RBracket, "closing the accessibility hypotheses");
      }
      expect(Tok::Semi, "after the check directive");
      unit.checks.push_back(std::move(dir));
      return;
    }
    if (accept(Tok::KwRun)) {
      RunDirective dir;
      dir.span = sp;
      dir.proc_name = ident("as the process to run");
      if (is(Tok::Number)) dir.steps = static_cast<size_t>(std::stoul(take().text));
      expect(Tok::Semi, "after the run directive");
      unit.runs.push_back(std::move(dir));
      return;
    }
    if (accept(Tok::KwGraph)) {
      GraphDirective dir;
      dir.span = sp;
      dir.proc_name = ident("as the process to explore");
      if (is(Tok::Number)) dir.depth = static_cast<size_t>(std::stoul(take().text));
      expect(Tok::Semi, "after the graph directive");
      unit.graphs.push_back(std::move(dir));
      return;
    }
    if (accept(Tok::KwProject)) {
      ProjectDirective dir;
      dir.span = sp;
      dir.global_name = ident("as the global type");
      if (is(Tok::Ident)) dir.role = take().text;
      expect(Tok::Semi, "after the project directive");
      unit.projects.push_back(std::move(dir));
      return;
    }
    if (accept(Tok::KwWf)) {
      WfDirective dir{ident("as the global type"), sp};
      expect(Tok::Semi, "after the wf directive");
      unit.wfs.push_back(std::move(dir));
      return;
    }
    if (accept(Tok::KwMedium)) {
      MediumDirective dir{ident("as the global type"), sp};
      expect(Tok::Semi, "after the medium directive");
      unit.mediums.push_back(std::move(dir));
      return;
    }
    if (accept(Tok::KwVerify)) {
      VerifyDirective dir{ident("as the global type"), sp};
      expect(Tok::Semi, "after the verify directive");
      unit.verifies.push_back(std::move(dir));
      return;
    }
    if (accept(Tok::KwCompose)) {
      ComposeDirective dir;
      dir.span = sp;
      dir.global_name = ident("as the global type");
      expect(Tok::LBrace, "opening the implementation list");
      if (!is(Tok::RBrace)) {
        do {
          std::string p = ident("as a participant");
          expect(Tok::Eq, "after the participant");
          std::string proc = ident("as the implementing process");
          dir.impls.push_back({p, proc});
        } while (accept(Tok::Comma));
      }
      expect(Tok::RBrace, "closing the implementation list");
      expect(Tok::Semi, "after the compose directive");
      unit.composes.push_back(std::move(dir));
      return;
    }
    fail(sp, "expected a declaration or directive");
  }

  SourceUnit unit() {
    SourceUnit u;
    proc_defs = &u.processes;
    while (!is(Tok::Eof)) {
      try {
        parse_decl(u);
      } catch (ParseFail&) {
        sync();
      }
    }
    return u;
  }
};

Parser make_parser(const std::string& text, const ParserSymbols& sy, Diagnostics& diags) {
  // (definitions owned by the caller)
  Parser p;
  p.toks = lex(text, diags);
  p.dom_consts = sy.domain_consts;
  for (const auto& v : sy.domain_vars) p.dom_vars.push_back(v);
  p.type_aliases = sy.type_aliases;
  p.local_aliases = sy.local_aliases;
  return p;
}

}  // namespace

UnitResult parse_unit(const std::string& text) {
  Diagnostics diags;
  Parser p = make_parser(text, {}, diags);
  p.diags = std::move(diags);
  SourceUnit u = p.unit();
  if (!p.diags.empty()) return p.diags;
  return u;
}

UnitResult parse_unit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return Diagnostics{{Severity::Error, Span{}, "io", "cannot open " + path}};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_unit(ss.str());
}

template <typename T, typename F>
static std::variant<T, Diagnostics> parse_one(const std::string& text, const ParserSymbols& sy,
                                              F f) {
  Diagnostics diags;
  Parser p = make_parser(text, sy, diags);
  p.diags = std::move(diags);
  try {
    T result = f(p);
    if (!p.is(Tok::Eof)) p.fail(p.peek().span, "trailing input");
    if (!p.diags.empty()) return p.diags;
    return result;
  } catch (ParseFail&) {
    return p.diags;
  }
}

std::variant<ProcP, Diagnostics> parse_process(const std::string& text, const ParserSymbols& sy) {
  return parse_one<ProcP>(text, sy, [](Parser& p) { return p.proc_expr(); });
}

std::variant<TypeP, Diagnostics> parse_type(const std::string& text, const ParserSymbols& sy) {
  return parse_one<TypeP>(text, sy, [](Parser& p) { return p.type_expr(); });
}

std::variant<LocalP, Diagnostics> parse_local(const std::string& text, const ParserSymbols& sy) {
  return parse_one<LocalP>(text, sy, [](Parser& p) { return p.local_type(); });
}

std::variant<GlobalP, Diagnostics> parse_global(const std::string& text, const ParserSymbols& sy) {
  return parse_one<GlobalP>(text, sy, [](Parser& p) { return p.global_type(); });
}

}  // namespace dst
