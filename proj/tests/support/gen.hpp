#pragma once

#include <random>
#include <string>
#include <vector>

#include "dst/mpst.hpp"
#include "dst/process.hpp"
#include "dst/syntax.hpp"

namespace dst::testing {

/// Deterministic term generators for the property suites.
struct Gen {
  std::mt19937_64 rng;

  explicit Gen(uint64_t seed) : rng(seed) {}

  size_t pick(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); }
  bool coin() { return pick(2) == 0; }

  std::string name() {
    static const char* pool[] = {"x", "y", "z", "u", "v", "k", "m", "n"};
    return pool[pick(8)];
  }
  std::string label() {
    static const char* pool[] = {"a", "b", "c", "d"};
    return pool[pick(4)];
  }
  DomainTerm dom() {
    static const char* consts[] = {"w1", "w2", "w3"};
    if (pick(4) == 0) return DomainTerm::v(pick(2) == 0 ? "da" : "db");
    return DomainTerm::c(consts[pick(3)]);
  }
  DomainTerm dom_const() {
    static const char* consts[] = {"w1", "w2", "w3"};
    return DomainTerm::c(consts[pick(3)]);
  }

  ProcP process(int budget) {
    if (budget <= 1) {
      switch (pick(3)) {
        case 0: return p_inaction();
        case 1: return p_fwd(name(), name());
        default: return p_send(name(), name(), p_inaction());
      }
    }
    switch (pick(12)) {
      case 0: return p_inaction();
      case 1: return p_fwd(name(), name());
      case 2: return p_par(process(budget / 2), process(budget / 2));
      case 3: return p_restrict(name(), process(budget - 1));
      case 4: return p_send(name(), name(), process(budget - 1));
      case 5: return p_bsend(name(), name(), process(budget - 1));
      case 6: return p_recv(name(), name(), process(budget - 1));
      case 7: {
        std::vector<ProcBranch> bs;
        std::string l1 = label();
        bs.push_back({l1, process(budget / 2)});
        std::string l2 = label();
        if (l2 != l1) bs.push_back({l2, process(budget / 2)});
        return p_branch(name(), std::move(bs));
      }
      case 8: return p_select(name(), label(), process(budget - 1));
      case 9: return coin() ? p_msend(name(), name(), dom(), process(budget - 1))
                            : p_mrecv(name(), name(), dom(), process(budget - 1));
      case 10: return coin() ? p_dsend(name(), dom(), process(budget - 1))
                             : p_drecv(name(), pick(2) == 0 ? "da" : "db", process(budget - 1));
      default: return p_repl(name(), name(), process(budget - 1));
    }
  }

  TypeP type(int budget) {
    if (budget <= 1) return t_one();
    switch (pick(9)) {
      case 0: return t_one();
      case 1: return t_tensor(type(budget / 2), type(budget / 2));
      case 2: return t_lolli(type(budget / 2), type(budget / 2));
      case 3: {
        std::vector<TypeBranch> bs;
        std::string l1 = label();
        bs.push_back({l1, type(budget / 2)});
        std::string l2 = label();
        if (l2 != l1) bs.push_back({l2, type(budget / 2)});
        return coin() ? t_with(std::move(bs)) : t_plus(std::move(bs));
      }
      case 4: return t_bang(type(budget - 1));
      case 5: return t_at(dom(), type(budget - 1));
      case 6: return t_forall(coin() ? "da" : "db", type(budget - 1));
      case 7: return t_exists(coin() ? "da" : "db", type(budget - 1));
      default: return t_here(coin() ? "da" : "db", type(budget - 1));
    }
  }

  Payload payload(int budget) {
    if (budget <= 1 || pick(3) != 0) {
      static const char* bases[] = {"nat", "bool", "str"};
      return Payload::b(bases[pick(3)]);
    }
    return Payload::s(local(budget / 2));
  }

  Participant participant() {
    static const char* pool[] = {"p", "q", "r", "s"};
    return pool[pick(4)];
  }

  /// Parallel soup over a small channel pool with complementary prefixes;
  /// reliably exercises synchronization.
  ProcP redexy(int budget) {
    static const char* chans[] = {"x", "y", "k"};
    int n = 2 + static_cast<int>(pick(3));
    // seed one complementary pair so a redex is likely
    ProcP acc;
    {
      std::string c = chans[pick(3)];
      switch (pick(4)) {
        case 0:
          acc = p_par(p_send(c, name(), p_inaction()), p_recv(c, name(), process(budget / 3)));
          break;
        case 1:
          acc = p_par(p_select(c, "a", process(budget / 3)),
                      p_branch(c, {{"a", p_inaction()}, {"b", p_inaction()}}));
          break;
        case 2:
          acc = p_par(p_dsend(c, dom_const(), p_inaction()), p_drecv(c, "da", process(budget / 3)));
          break;
        default:
          acc = p_par(p_msend(c, name(), dom_const(), p_inaction()),
                      p_mrecv(c, name(), dom_const(), process(budget / 3)));
          break;
      }
    }
    for (int i = 0; i < n; ++i) {
      std::string c = chans[pick(3)];
      ProcP cont = budget > 2 ? process(budget / 2) : ProcP(p_inaction());
      ProcP comp;
      switch (pick(10)) {
        case 0: comp = p_send(c, name(), cont); break;
        case 1: comp = p_bsend(c, name(), cont); break;
        case 2: comp = p_recv(c, name(), cont); break;
        case 3: comp = p_repl(c, name(), cont); break;
        case 4: comp = p_select(c, label(), cont); break;
        case 5: {
          std::vector<ProcBranch> bs;
          bs.push_back({"a", cont});
          bs.push_back({"b", p_inaction()});
          comp = p_branch(c, std::move(bs));
          break;
        }
        case 6: comp = p_dsend(c, dom_const(), cont); break;
        case 7: comp = p_drecv(c, "da", cont); break;
        case 8: comp = coin() ? p_msend(c, name(), dom_const(), cont)
                              : p_mrecv(c, name(), dom_const(), cont);
        break;
        default: comp = p_fwd(c, name()); break;
      }
      acc = p_par(acc, comp);
    }
    if (coin()) acc = p_restrict(chans[pick(3)], acc);
    return acc;
  }

  LocalP local(int budget) {
    if (budget <= 1) return l_end();
    switch (pick(8)) {
      case 0: return l_end();
      case 1:
      case 2: {
        std::vector<LBranch> bs;
        std::string l1 = label();
        bs.push_back({l1, coin() ? std::optional<Payload>(payload(budget / 2)) : std::nullopt,
                      local(budget / 2)});
        std::string l2 = label();
        if (l2 != l1)
          bs.push_back({l2, coin() ? std::optional<Payload>(payload(budget / 2)) : std::nullopt,
                        local(budget / 2)});
        return pick(2) == 0 ? l_recv(participant(), std::move(bs))
                            : l_send(participant(), std::move(bs));
      }
      case 3: return l_forall(coin() ? "da" : "db", local(budget - 1));
      case 4: return l_exists(coin() ? "da" : "db", local(budget - 1));
      case 5: return l_at(dom(), local(budget - 1));
      case 6: return l_here(coin() ? "da" : "db", local(budget - 1));
      default: return l_end();
    }
  }
};

}  // namespace dst::testing
