#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dst/domain.hpp"
#include "dst/span.hpp"
#include "dst/type.hpp"

namespace dst {

struct CtxEntry {
  std::string name;
  TypeP type;
  DomainTerm dom;
  Span span;
};

/// An ordered map from channel names to typed assignments x:A[w].
/// Used both for the linear context (Delta) and the unrestricted one
/// (Gamma); the structural discipline lives in the checker, not here.
class Ctx {
 public:
  Ctx() = default;

  bool contains(const std::string& n) const { return find(n) != nullptr; }

  const CtxEntry* find(const std::string& n) const {
    for (const auto& e : entries_)
      if (e.name == n) return &e;
    return nullptr;
  }

  /// Adds or replaces the assignment for `e.name`.
  void put(CtxEntry e) {
    for (auto& old : entries_) {
      if (old.name == e.name) {
        old = std::move(e);
        return;
      }
    }
    entries_.push_back(std::move(e));
  }

  void erase(const std::string& n) {
    for (size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].name == n) {
        entries_.erase(entries_.begin() + static_cast<long>(i));
        return;
      }
    }
  }

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  const std::vector<CtxEntry>& entries() const { return entries_; }

 private:
  std::vector<CtxEntry> entries_;
};

using LinearCtx = Ctx;
using SharedCtx = Ctx;

}  // namespace dst
