#pragma once

// CNF representation, Tseitin encoding of netlists, and a small complete
// CDCL satisfiability solver (two watched literals, first-UIP clause
// learning, non-chronological backtracking).
//
// The solver is deliberately boring: decisions always pick the lowest
// unassigned variable and try false first, there are no restarts and no
// activity heuristics, so identical inputs give identical outcomes and
// identical models on every platform. Instance sizes in this toolkit are
// pairwise constraints over desk-scale netlists; completeness and
// reproducibility matter, raw speed does not. A per-call decision budget
// bounds runaway queries and surfaces as a distinct outcome instead of an
// error, so callers can treat "too hard" conservatively.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "netlist.hpp"

namespace raregate {

// Clauses hold DIMACS-style literals: +v / -v with v in 1..num_vars.
struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

enum class SolveStatus { Sat, Unsat, BudgetExceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::Unsat;
  std::vector<std::uint8_t> model;  // 1-indexed by variable; valid when Sat
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t propagations = 0;
};

inline constexpr std::uint64_t default_decision_budget = 10'000'000;

namespace detail {

// Internal literal encoding: variable v -> positive literal 2v, negative
// literal 2v+1.
class CdclSolver {
 public:
  CdclSolver(const Cnf& cnf, const std::vector<int>& assumptions,
             std::uint64_t budget)
      : nvars_(cnf.num_vars), budget_(budget) {
    value_.assign(nvars_ + 1, 0);
    level_.assign(nvars_ + 1, 0);
    reason_.assign(nvars_ + 1, -1);
    seen_.assign(nvars_ + 1, 0);
    watches_.assign(2 * nvars_ + 2, {});
    for (const auto& c : cnf.clauses) add_clause(c);
    // Assumptions behave exactly like unit clauses in this fresh instance.
    for (int a : assumptions) add_clause({a});
  }

  SolveResult run() {
    SolveResult res;
    auto finish = [&](SolveStatus s) {
      res.status = s;
      res.decisions = decisions_;
      res.conflicts = conflicts_;
      res.propagations = propagations_;
      return res;
    };
    if (!ok_) return finish(SolveStatus::Unsat);
    if (propagate() != -1) return finish(SolveStatus::Unsat);
    while (true) {
      int v = next_unassigned();
      if (v == 0) {
        res.model.assign(nvars_ + 1, 0);
        for (int u = 1; u <= nvars_; ++u) res.model[u] = value_[u] == 1;
        return finish(SolveStatus::Sat);
      }
      if (++decisions_ > budget_) return finish(SolveStatus::BudgetExceeded);
      trail_lim_.push_back(trail_.size());
      enqueue(2u * v + 1, -1);  // try false first
      int confl;
      while ((confl = propagate()) != -1) {
        ++conflicts_;
        if (current_level() == 0) return finish(SolveStatus::Unsat);
        std::vector<std::uint32_t> learned;
        int back_level = analyze(confl, learned);
        backtrack(back_level);
        if (learned.size() == 1) {
          enqueue(learned[0], -1);
        } else {
          int ci = static_cast<int>(clauses_.size());
          watches_[learned[0]].push_back(ci);
          watches_[learned[1]].push_back(ci);
          clauses_.push_back(learned);
          enqueue(learned[0], ci);
        }
      }
    }
  }

 private:
  static int var(std::uint32_t lit) { return static_cast<int>(lit >> 1); }
  bool is_true(std::uint32_t lit) const {
    return value_[var(lit)] == ((lit & 1) ? -1 : 1);
  }
  bool is_false(std::uint32_t lit) const {
    return value_[var(lit)] == ((lit & 1) ? 1 : -1);
  }
  bool unassigned(std::uint32_t lit) const { return value_[var(lit)] == 0; }
  int current_level() const { return static_cast<int>(trail_lim_.size()); }

  void add_clause(const std::vector<int>& dimacs) {
    std::vector<std::uint32_t> c;
    for (int l : dimacs) {
      if (l == 0 || l > nvars_ || l < -nvars_)
        throw ValidationError("literal " + std::to_string(l) +
                              " outside 1.." + std::to_string(nvars_));
      c.push_back(l > 0 ? 2u * l : 2u * (-l) + 1);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if ((c[i] ^ c[i + 1]) == 1u) return;  // tautology x | !x
    if (c.empty()) {
      ok_ = false;
      return;
    }
    if (c.size() == 1) {
      if (is_false(c[0])) ok_ = false;
      else if (unassigned(c[0])) enqueue(c[0], -1);
      return;
    }
    int ci = static_cast<int>(clauses_.size());
    watches_[c[0]].push_back(ci);
    watches_[c[1]].push_back(ci);
    clauses_.push_back(std::move(c));
  }

  void enqueue(std::uint32_t lit, int reason) {
    int v = var(lit);
    value_[v] = (lit & 1) ? -1 : 1;
    level_[v] = current_level();
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  // Two-watched-literal unit propagation. Returns a conflicting clause index
  // or -1. Watches of a falsified literal are visited in insertion order.
  int propagate() {
    while (qhead_ < trail_.size()) {
      std::uint32_t lit = trail_[qhead_++];
      ++propagations_;
      std::uint32_t flit = lit ^ 1u;  // literal that just became false
      auto& ws = watches_[flit];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        int ci = ws[i++];
        auto& c = clauses_[ci];
        if (c[0] == flit) std::swap(c[0], c[1]);
        if (is_true(c[0])) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (!is_false(c[k])) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (is_false(c[0])) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      ws.resize(j);
    }
    return -1;
  }

  // First-UIP conflict analysis. Returns the backjump level and fills
  // `learned` with the asserting clause, asserting literal first and a
  // literal of the backjump level second.
  int analyze(int confl, std::vector<std::uint32_t>& learned) {
    learned.clear();
    learned.push_back(0);  // slot for the asserting literal
    int counter = 0;
    std::uint32_t p = 0;
    bool first = true;
    std::size_t idx = trail_.size();
    while (true) {
      const auto& c = clauses_[confl];
      for (std::size_t k = first ? 0 : 1; k < c.size(); ++k) {
        std::uint32_t q = c[k];
        int v = var(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          if (level_[v] == current_level())
            ++counter;
          else
            learned.push_back(q);
        }
      }
      first = false;
      while (!seen_[var(trail_[idx - 1])]) --idx;
      p = trail_[--idx];
      seen_[var(p)] = 0;
      if (--counter == 0) break;
      confl = reason_[var(p)];
    }
    learned[0] = p ^ 1u;
    for (std::uint32_t q : learned)
      if (q) seen_[var(q)] = 0;
    if (learned.size() == 1) return 0;
    // Highest level among the remaining literals becomes the backjump level;
    // keep one of its literals in the second watch slot.
    std::size_t best = 1;
    for (std::size_t k = 2; k < learned.size(); ++k)
      if (level_[var(learned[k])] > level_[var(learned[best])]) best = k;
    std::swap(learned[1], learned[best]);
    return level_[var(learned[1])];
  }

  void backtrack(int to_level) {
    while (current_level() > to_level) {
      std::size_t mark = trail_lim_.back();
      trail_lim_.pop_back();
      while (trail_.size() > mark) {
        value_[var(trail_.back())] = 0;
        trail_.pop_back();
      }
    }
    qhead_ = trail_.size();
  }

  int next_unassigned() const {
    for (int v = 1; v <= nvars_; ++v)
      if (value_[v] == 0) return v;
    return 0;
  }

  int nvars_;
  std::uint64_t budget_;
  bool ok_ = true;
  std::vector<std::vector<std::uint32_t>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<std::int8_t> value_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<char> seen_;
  std::vector<std::uint32_t> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::uint64_t decisions_ = 0;
  std::uint64_t conflicts_ = 0;
  std::uint64_t propagations_ = 0;
};

}  // namespace detail

// Complete and deterministic; UNSAT is a result, not an error. Assumptions
// are extra unit clauses for this call only.
inline SolveResult solve(const Cnf& cnf, const std::vector<int>& assumptions = {},
                         std::uint64_t decision_budget = default_decision_budget) {
  detail::CdclSolver s(cnf, assumptions, decision_budget);
  return s.run();
}

struct VarMap {
  std::vector<int> var_of;     // NetId -> variable (1-based)
  std::vector<NetId> net_of;   // variable-1 -> NetId
};

// One variable per net (variable = net id + 1); per-gate clauses enforce
// exact gate semantics, with complemented fan-ins folded into literal
// polarity.
inline std::pair<Cnf, VarMap> tseitin(const Netlist& n) {
  VarMap vm;
  vm.var_of.resize(n.num_nets());
  vm.net_of.resize(n.num_nets());
  for (NetId id = 0; id < n.num_nets(); ++id) {
    vm.var_of[id] = static_cast<int>(id) + 1;
    vm.net_of[id] = id;
  }
  Cnf cnf;
  cnf.num_vars = static_cast<int>(n.num_nets());
  auto add = [&](std::vector<int> c) { cnf.clauses.push_back(std::move(c)); };
  for (const Gate& g : n.gates()) {
    int z = vm.var_of[g.output];
    std::vector<int> lits(g.fanin.size());
    for (std::size_t j = 0; j < g.fanin.size(); ++j) {
      int v = vm.var_of[g.fanin[j]];
      lits[j] = (g.neg_mask >> j) & 1u ? -v : v;
    }
    switch (g.kind) {
      case GateKind::And:
      case GateKind::Nand: {
        // z <-> AND(lits), with z negated for NAND.
        int zz = g.kind == GateKind::And ? z : -z;
        std::vector<int> all{zz};
        for (int l : lits) {
          add({-zz, l});
          all.push_back(-l);
        }
        add(std::move(all));
        break;
      }
      case GateKind::Or:
      case GateKind::Nor: {
        int zz = g.kind == GateKind::Or ? z : -z;
        std::vector<int> all{-zz};
        for (int l : lits) {
          add({zz, -l});
          all.push_back(l);
        }
        add(std::move(all));
        break;
      }
      case GateKind::Xor:
      case GateKind::Xnor: {
        int zz = g.kind == GateKind::Xor ? z : -z;
        int a = lits[0], b = lits[1];
        add({-zz, a, b});
        add({-zz, -a, -b});
        add({zz, -a, b});
        add({zz, a, -b});
        break;
      }
      case GateKind::Not:
      case GateKind::Buf: {
        int a = g.kind == GateKind::Not ? -lits[0] : lits[0];
        add({-z, a});
        add({z, -a});
        break;
      }
    }
  }
  return {std::move(cnf), std::move(vm)};
}

struct AssignOutcome {
  SolveStatus status = SolveStatus::Unsat;
  TestVector vector;  // primary-input values, valid when status is Sat
};

// Decides whether the given net values can occur together under some
// primary-input assignment, and produces such an assignment when they can.
// A satisfying model is re-checked against circuit evaluation before it is
// returned, so a Sat outcome always carries a genuinely witnessing vector.
inline AssignOutcome check_assignable(
    const Netlist& n, const std::vector<std::pair<NetId, int>>& constraints,
    std::uint64_t decision_budget = default_decision_budget) {
  auto [cnf, vm] = tseitin(n);
  std::vector<int> assumptions;
  for (const auto& [net, bit] : constraints) {
    if (net >= n.num_nets())
      throw ValidationError("constraint on unknown net id " +
                            std::to_string(net));
    if (bit != 0 && bit != 1)
      throw ValidationError("constraint value must be 0 or 1");
    assumptions.push_back(bit ? vm.var_of[net] : -vm.var_of[net]);
  }
  SolveResult res = solve(cnf, assumptions, decision_budget);
  if (res.status != SolveStatus::Sat) return {res.status, {}};
  TestVector v(n.num_inputs());
  for (std::size_t i = 0; i < n.inputs().size(); ++i)
    v[i] = res.model[vm.var_of[n.inputs()[i]]];
  auto vals = evaluate(n, v);
  for (const auto& [net, bit] : constraints)
    if (vals[net] != bit)
      throw InternalError("solver model does not satisfy constraint on net '" +
                          n.net_name(net) + "'");
  return {SolveStatus::Sat, std::move(v)};
}

inline std::string dimacs(const Cnf& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.num_vars) + " " +
                    std::to_string(cnf.clauses.size()) + "\n";
  for (const auto& c : cnf.clauses) {
    for (int l : c) {
      out += std::to_string(l);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

}  // namespace raregate
