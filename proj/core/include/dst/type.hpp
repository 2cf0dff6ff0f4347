#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dst/domain.hpp"

namespace dst {

struct Type;
using TypeP = std::shared_ptr<const Type>;

struct TypeBranch {
  std::string label;
  TypeP type;
};

/// Binary session types.
///
///   A ::= 1 | A * B | A -o B | &{l:A,...} | +{l:A,...} | !A
///       | @w A | all a.A | ex a.A | here a.A
///
/// `Forall`/`Exists`/`Here` bind a domain variable in `body`.
struct Type {
  enum class K { One, Tensor, Lolli, With, Plus, Bang, At, Forall, Exists, Here };

  K k = K::One;
  TypeP left;    // Tensor/Lolli: left operand
  TypeP body;    // Tensor/Lolli: right operand; Bang/At/Forall/Exists/Here: body
  std::vector<TypeBranch> branches;  // With/Plus
  DomainTerm dom;                    // At
  std::string var;                   // Forall/Exists/Here binder

  Type() = default;
};

inline TypeP t_one() {
  static const TypeP one = std::make_shared<Type>();
  return one;
}

inline TypeP t_tensor(TypeP a, TypeP b) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Tensor;
  t->left = std::move(a);
  t->body = std::move(b);
  return t;
}

inline TypeP t_lolli(TypeP a, TypeP b) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Lolli;
  t->left = std::move(a);
  t->body = std::move(b);
  return t;
}

inline TypeP t_with(std::vector<TypeBranch> bs) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::With;
  t->branches = std::move(bs);
  return t;
}

inline TypeP t_plus(std::vector<TypeBranch> bs) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Plus;
  t->branches = std::move(bs);
  return t;
}

inline TypeP t_bang(TypeP a) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Bang;
  t->body = std::move(a);
  return t;
}

inline TypeP t_at(DomainTerm w, TypeP a) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::At;
  t->dom = std::move(w);
  t->body = std::move(a);
  return t;
}

inline TypeP t_forall(std::string v, TypeP a) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Forall;
  t->var = std::move(v);
  t->body = std::move(a);
  return t;
}

inline TypeP t_exists(std::string v, TypeP a) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Exists;
  t->var = std::move(v);
  t->body = std::move(a);
  return t;
}

inline TypeP t_here(std::string v, TypeP a) {
  auto t = std::make_shared<Type>();
  t->k = Type::K::Here;
  t->var = std::move(v);
  t->body = std::move(a);
  return t;
}

}  // namespace dst
