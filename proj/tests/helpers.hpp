#pragma once

// Shared fixtures and generators for the test suites: the c17 benchmark text,
// seeded random circuit/expression generators, a brute-force CNF oracle, and
// an exhaustive netlist equivalence check.

#include <cstdint>
#include <string>
#include <vector>

#include "raregate/adders.hpp"
#include "raregate/bench.hpp"
#include "raregate/bitsim.hpp"
#include "raregate/expr.hpp"
#include "raregate/netlist.hpp"
#include "raregate/rng.hpp"
#include "raregate/sat.hpp"

namespace testutil {

using namespace raregate;

// ISCAS-85 c17: 5 inputs, 2 outputs, 6 NAND gates.
inline const char* c17_text() {
  return "# c17\n"
         "INPUT(1)\n"
         "INPUT(2)\n"
         "INPUT(3)\n"
         "INPUT(6)\n"
         "INPUT(7)\n"
         "\n"
         "OUTPUT(22)\n"
         "OUTPUT(23)\n"
         "\n"
         "10 = NAND(1, 3)\n"
         "11 = NAND(3, 6)\n"
         "16 = NAND(2, 11)\n"
         "19 = NAND(11, 7)\n"
         "22 = NAND(10, 16)\n"
         "23 = NAND(16, 19)\n";
}

// Fan-out-free random netlist: every net feeds at most one fan-in slot, so
// the independence assumption of transfer-matrix propagation holds exactly.
inline Netlist random_tree_netlist(std::uint64_t seed, int max_inputs = 12,
                                   int max_gates = 20) {
  Xoshiro256ss rng(seed * 2 + 1);
  NetlistBuilder b("tree" + std::to_string(seed));
  int n_inputs = 2 + static_cast<int>(rng.below(max_inputs - 1));
  std::vector<NetId> avail;
  for (int i = 0; i < n_inputs; ++i)
    avail.push_back(b.add_input("I" + std::to_string(i)));
  int n_gates = 1 + static_cast<int>(rng.below(max_gates));
  for (int g = 0; g < n_gates; ++g) {
    std::size_t arity;
    if (avail.size() == 1)
      arity = 1;
    else if (avail.size() >= 3 && rng.below(4) == 0)
      arity = 3;
    else
      arity = rng.below(8) == 0 ? 1 : 2;
    std::vector<NetId> fanin;
    for (std::size_t j = 0; j < arity; ++j) {
      std::size_t pick = rng.below(avail.size());
      fanin.push_back(avail[pick]);
      avail.erase(avail.begin() + pick);
    }
    GateKind kind;
    if (arity == 1) {
      kind = rng.below(2) ? GateKind::Not : GateKind::Buf;
    } else if (arity == 3) {
      static const GateKind k3[] = {GateKind::And, GateKind::Nand, GateKind::Or,
                                    GateKind::Nor};
      kind = k3[rng.below(4)];
    } else {
      static const GateKind k2[] = {GateKind::And, GateKind::Nand, GateKind::Or,
                                    GateKind::Nor, GateKind::Xor, GateKind::Xnor};
      kind = k2[rng.below(6)];
    }
    std::uint32_t neg = static_cast<std::uint32_t>(rng.below(1u << arity));
    avail.push_back(b.add_gate(kind, std::move(fanin), neg, "N" + std::to_string(g)));
  }
  for (NetId n : avail) b.mark_output(n);
  return b.build();
}

// General random netlist; fan-ins drawn from all existing nets, so fan-out
// and reconvergence (including repeated fan-ins on one gate) arise naturally.
inline Netlist random_general_netlist(std::uint64_t seed, int max_inputs = 12,
                                      int max_gates = 30) {
  Xoshiro256ss rng(seed * 2 + 1);
  NetlistBuilder b("gen" + std::to_string(seed));
  int n_inputs = 2 + static_cast<int>(rng.below(max_inputs - 1));
  std::vector<NetId> nets;
  for (int i = 0; i < n_inputs; ++i)
    nets.push_back(b.add_input("I" + std::to_string(i)));
  int n_gates = 2 + static_cast<int>(rng.below(max_gates - 1));
  std::vector<int> fanout(n_inputs + n_gates, 0);
  for (int g = 0; g < n_gates; ++g) {
    std::size_t arity = rng.below(8) == 0 ? 1 : 2;
    GateKind kind;
    if (arity == 1) {
      kind = rng.below(2) ? GateKind::Not : GateKind::Buf;
    } else {
      static const GateKind k2[] = {GateKind::And, GateKind::Nand, GateKind::Or,
                                    GateKind::Nor, GateKind::Xor, GateKind::Xnor};
      kind = k2[rng.below(6)];
    }
    std::vector<NetId> fanin;
    for (std::size_t j = 0; j < arity; ++j) {
      NetId f = nets[rng.below(nets.size())];
      fanin.push_back(f);
      ++fanout[f];
    }
    std::uint32_t neg = static_cast<std::uint32_t>(rng.below(1u << arity));
    nets.push_back(b.add_gate(kind, std::move(fanin), neg, "N" + std::to_string(g)));
  }
  bool any_out = false;
  for (NetId n : nets)
    if (fanout[n] == 0 && b.has(b.net_name(n)) && n >= static_cast<NetId>(n_inputs)) {
      b.mark_output(n);
      any_out = true;
    }
  if (!any_out) b.mark_output(nets.back());
  return b.build();
}

// Random expression over at most `max_vars` single-letter inputs (A..).
inline std::string random_expr(Xoshiro256ss& rng, int max_vars = 8, int depth = 0) {
  auto leaf = [&]() {
    std::string s;
    if (rng.below(4) == 0) s += "!";
    s += static_cast<char>('A' + rng.below(max_vars));
    return s;
  };
  if (depth >= 3 || rng.below(4) == 0) return leaf();
  bool is_and = rng.below(2) == 0;
  int kids = 2 + static_cast<int>(rng.below(2));
  std::string s;
  for (int i = 0; i < kids; ++i) {
    std::string kid;
    if (rng.below(3) == 0) {
      kid = leaf();
    } else {
      kid = "(" + random_expr(rng, max_vars, depth + 1) + ")";
      if (rng.below(6) == 0) kid = "!" + kid;
    }
    if (i > 0 && !is_and) s += "+";
    s += kid;
  }
  return s;
}

// Outputs compared over every input assignment; interfaces must match by
// name and order. Caller keeps input counts <= 20.
inline bool exhaustive_equivalent(const Netlist& a, const Netlist& b) {
  if (a.num_inputs() != b.num_inputs() ||
      a.outputs().size() != b.outputs().size())
    return false;
  for (std::size_t i = 0; i < a.num_inputs(); ++i)
    if (a.net_name(a.inputs()[i]) != b.net_name(b.inputs()[i])) return false;
  for (std::size_t i = 0; i < a.outputs().size(); ++i)
    if (a.net_name(a.outputs()[i]) != b.net_name(b.outputs()[i])) return false;
  std::size_t k = a.num_inputs();
  std::uint64_t total = 1ull << k;
  for (std::uint64_t blk = 0; blk * 64 < total; ++blk) {
    auto words = enum_block_words(k, blk);
    auto va = simulate_words(a, words);
    auto vb = simulate_words(b, words);
    std::uint64_t mask =
        total - blk * 64 >= 64 ? ~0ull : ((1ull << (total - blk * 64)) - 1);
    for (std::size_t o = 0; o < a.outputs().size(); ++o)
      if ((va[a.outputs()[o]] & mask) != (vb[b.outputs()[o]] & mask)) return false;
  }
  return true;
}

// Random CNF for solver cross-checks.
inline Cnf random_cnf(Xoshiro256ss& rng, int max_vars = 20, int max_clauses = 90) {
  Cnf cnf;
  cnf.num_vars = 3 + static_cast<int>(rng.below(max_vars - 2));
  int n_clauses = 1 + static_cast<int>(rng.below(max_clauses));
  for (int c = 0; c < n_clauses; ++c) {
    int width = 1 + static_cast<int>(rng.below(4));
    std::vector<int> clause;
    for (int l = 0; l < width; ++l) {
      int var = 1 + static_cast<int>(rng.below(cnf.num_vars));
      clause.push_back(rng.below(2) ? var : -var);
    }
    cnf.clauses.push_back(std::move(clause));
  }
  return cnf;
}

// Brute-force satisfiability over all assignments, 64 lanes at a time with
// early exit. Independent of the CDCL code paths.
inline bool brute_force_sat(const Cnf& cnf) {
  static constexpr std::uint64_t pat[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  int v = cnf.num_vars;
  std::uint64_t total = v >= 6 ? (1ull << (v - 6)) : 1;
  std::uint64_t tail_mask = v >= 6 ? ~0ull : ((1ull << (1u << v)) - 1);
  for (std::uint64_t blk = 0; blk < total; ++blk) {
    std::uint64_t sat = tail_mask;
    for (const auto& clause : cnf.clauses) {
      std::uint64_t cl = 0;
      for (int lit : clause) {
        int var = lit > 0 ? lit : -lit;
        std::uint64_t w;
        if (var <= 6)
          w = pat[var - 1];
        else
          w = (blk >> (var - 7)) & 1u ? ~0ull : 0ull;
        cl |= lit > 0 ? w : ~w;
      }
      sat &= cl;
      if (!sat) break;
    }
    if (sat) return true;
  }
  return false;
}

inline bool model_satisfies(const Cnf& cnf, const std::vector<std::uint8_t>& model) {
  for (const auto& clause : cnf.clauses) {
    bool ok = false;
    for (int lit : clause) {
      int var = lit > 0 ? lit : -lit;
      if ((model[var] != 0) == (lit > 0)) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

// Three rare nets that are pairwise co-activatable but jointly contradictory:
// U = (a xor b) and d, V = (b xor c) and d, W = (a xor c) and d. Any two of
// the three xors can hold at once, all three cannot.
inline Netlist parity_gadget() {
  NetlistBuilder b("parity_gadget");
  NetId a = b.add_input("a"), bb = b.add_input("b"), c = b.add_input("c"),
        d = b.add_input("d");
  NetId x1 = b.add_gate(GateKind::Xor, {a, bb}, "x_ab");
  NetId x2 = b.add_gate(GateKind::Xor, {bb, c}, "x_bc");
  NetId x3 = b.add_gate(GateKind::Xor, {a, c}, "x_ac");
  b.mark_output(b.add_gate(GateKind::And, {x1, d}, "U"));
  b.mark_output(b.add_gate(GateKind::And, {x2, d}, "V"));
  b.mark_output(b.add_gate(GateKind::And, {x3, d}, "W"));
  return b.build();
}

// 12-input circuit with eight rare nets (three-input AND cones over
// overlapping input triples, omega = 0.125 each) feeding one OR-chain output.
// All rare pairs are jointly activatable; used by the end-to-end flows.
inline Netlist desk12() {
  NetlistBuilder b("desk12");
  std::vector<NetId> x;
  for (int i = 1; i <= 12; ++i) x.push_back(b.add_input("x" + std::to_string(i)));
  static const int triples[8][3] = {{1, 2, 3},  {4, 5, 6},  {7, 8, 9}, {10, 11, 12},
                                    {2, 3, 4},  {5, 6, 7},  {8, 9, 10}, {11, 12, 1}};
  std::vector<NetId> rare;
  for (int r = 0; r < 8; ++r) {
    std::string rs = std::to_string(r + 1);
    NetId t = b.add_gate(GateKind::And,
                         {x[triples[r][0] - 1], x[triples[r][1] - 1]}, "t" + rs);
    rare.push_back(
        b.add_gate(GateKind::And, {t, x[triples[r][2] - 1]}, "R" + rs));
  }
  NetId acc = rare[0];
  for (int r = 1; r < 8; ++r)
    acc = b.add_gate(GateKind::Or, {acc, rare[r]},
                     r == 7 ? "Z" : "o" + std::to_string(r));
  b.mark_output(acc);
  return b.build();
}

}  // namespace testutil
