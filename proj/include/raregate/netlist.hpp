#pragma once

// Gate-level combinational netlist IR.
//
// A Netlist is immutable once built. Every net is driven by exactly one
// source (primary input or gate), the gate graph is acyclic, and a cached
// topological order is computed at build time. Complemented fan-ins are
// represented by a per-gate negation mask rather than explicit inverter
// gates, so a literal like !C feeding an AND does not create a counted net.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "core.hpp"

namespace raregate {

enum class GateKind : std::uint8_t { And, Nand, Or, Nor, Xor, Xnor, Not, Buf };

inline constexpr int max_arity = 16;

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::And: return "AND";
    case GateKind::Nand: return "NAND";
    case GateKind::Or: return "OR";
    case GateKind::Nor: return "NOR";
    case GateKind::Xor: return "XOR";
    case GateKind::Xnor: return "XNOR";
    case GateKind::Not: return "NOT";
    case GateKind::Buf: return "BUF";
  }
  return "?";
}

// Case-insensitive; BUFF accepted as an alias seen in circulating BENCH files.
inline std::optional<GateKind> gate_kind_from(std::string_view s) {
  std::string u(s);
  for (auto& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "AND") return GateKind::And;
  if (u == "NAND") return GateKind::Nand;
  if (u == "OR") return GateKind::Or;
  if (u == "NOR") return GateKind::Nor;
  if (u == "XOR") return GateKind::Xor;
  if (u == "XNOR") return GateKind::Xnor;
  if (u == "NOT") return GateKind::Not;
  if (u == "BUF" || u == "BUFF") return GateKind::Buf;
  return std::nullopt;
}

// Allowed fan-in counts per kind: NOT/BUF exactly 1, XOR/XNOR exactly 2,
// AND/NAND/OR/NOR 2..max_arity.
inline std::pair<int, int> arity_range(GateKind k) {
  switch (k) {
    case GateKind::Not:
    case GateKind::Buf: return {1, 1};
    case GateKind::Xor:
    case GateKind::Xnor: return {2, 2};
    default: return {2, max_arity};
  }
}

struct Gate {
  GateKind kind;
  std::vector<NetId> fanin;
  std::uint32_t neg_mask = 0;  // bit i set = fanin[i] is complemented
  NetId output = null_net;
};

inline bool gate_value(GateKind kind, const std::uint8_t* bits, std::size_t n) {
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand: {
      bool v = true;
      for (std::size_t i = 0; i < n; ++i) v = v && bits[i];
      return kind == GateKind::And ? v : !v;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      bool v = false;
      for (std::size_t i = 0; i < n; ++i) v = v || bits[i];
      return kind == GateKind::Or ? v : !v;
    }
    case GateKind::Xor: return bits[0] != bits[1];
    case GateKind::Xnor: return bits[0] == bits[1];
    case GateKind::Not: return !bits[0];
    case GateKind::Buf: return bits[0] != 0;
  }
  return false;
}

// Same semantics on 64 test vectors at once, one per bit lane.
inline std::uint64_t gate_value_words(GateKind kind, const std::uint64_t* w,
                                      std::size_t n) {
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand: {
      std::uint64_t v = ~0ull;
      for (std::size_t i = 0; i < n; ++i) v &= w[i];
      return kind == GateKind::And ? v : ~v;
    }
    case GateKind::Or:
    case GateKind::Nor: {
      std::uint64_t v = 0;
      for (std::size_t i = 0; i < n; ++i) v |= w[i];
      return kind == GateKind::Or ? v : ~v;
    }
    case GateKind::Xor: return w[0] ^ w[1];
    case GateKind::Xnor: return ~(w[0] ^ w[1]);
    case GateKind::Not: return ~w[0];
    case GateKind::Buf: return w[0];
  }
  return 0;
}

class Netlist {
 public:
  const std::string& name() const { return name_; }
  std::size_t num_nets() const { return names_.size(); }
  std::size_t num_inputs() const { return inputs_.size(); }
  std::size_t gate_count() const { return gates_.size(); }

  const std::vector<NetId>& inputs() const { return inputs_; }
  const std::vector<NetId>& outputs() const { return outputs_; }
  const std::vector<Gate>& gates() const { return gates_; }

  // Gate-driven nets in topological order (inputs excluded).
  const std::vector<NetId>& topo_order() const { return topo_; }

  bool is_input(NetId n) const { return driver_[n] < 0; }
  bool has_gate(NetId n) const { return driver_[n] >= 0; }

  const Gate& gate_of(NetId n) const {
    if (driver_[n] < 0) throw InternalError("net '" + names_[n] + "' has no driving gate");
    return gates_[static_cast<std::size_t>(driver_[n])];
  }

  const std::string& net_name(NetId n) const { return names_[n]; }

  std::optional<NetId> find(std::string_view net) const {
    auto it = index_.find(std::string(net));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool is_output(NetId n) const {
    return std::find(outputs_.begin(), outputs_.end(), n) != outputs_.end();
  }

 private:
  friend class NetlistBuilder;
  std::string name_;
  std::vector<std::string> names_;             // per net
  std::vector<std::int32_t> driver_;           // per net: gate index or -1 (input)
  std::vector<Gate> gates_;
  std::vector<NetId> inputs_;
  std::vector<NetId> outputs_;
  std::vector<NetId> topo_;
  std::unordered_map<std::string, NetId> index_;
};

// Incremental construction with forward references: a net may be used as a
// fan-in before its driver is known (needed for file parsing). build() runs
// the full validation pass.
class NetlistBuilder {
 public:
  explicit NetlistBuilder(std::string name = "top") { n_.name_ = std::move(name); }

  // Returns the net id for `net`, creating an undriven placeholder if new.
  NetId declare(const std::string& net) {
    auto it = n_.index_.find(net);
    if (it != n_.index_.end()) return it->second;
    NetId id = static_cast<NetId>(n_.names_.size());
    n_.names_.push_back(net);
    n_.driver_.push_back(-2);  // -2 = undriven so far
    n_.index_.emplace(net, id);
    return id;
  }

  NetId add_input(const std::string& net) {
    NetId id = declare(net);
    if (n_.driver_[id] != -2)
      throw ValidationError("net '" + net + "' already has a driver");
    n_.driver_[id] = -1;
    n_.inputs_.push_back(id);
    return id;
  }

  NetId add_gate(GateKind kind, std::vector<NetId> fanin, std::uint32_t neg_mask,
                 const std::string& out) {
    auto [lo, hi] = arity_range(kind);
    int k = static_cast<int>(fanin.size());
    if (k < lo || k > hi)
      throw ValidationError(std::string(to_string(kind)) + " gate '" + out +
                            "' has " + std::to_string(k) + " fan-ins (allowed " +
                            std::to_string(lo) + ".." + std::to_string(hi) + ")");
    if (k < 32 && (neg_mask >> k) != 0)
      throw ValidationError("negation mask wider than fan-in of gate '" + out +
                            "'");
    NetId id = declare(out);
    if (n_.driver_[id] != -2)
      throw ValidationError("net '" + out + "' already has a driver");
    Gate g{kind, std::move(fanin), neg_mask, id};
    n_.driver_[id] = static_cast<std::int32_t>(n_.gates_.size());
    n_.gates_.push_back(std::move(g));
    return id;
  }

  // Convenience for programmatic construction (generators, tests).
  NetId add_gate(GateKind kind, std::initializer_list<NetId> fanin,
                 const std::string& out, std::uint32_t neg_mask = 0) {
    return add_gate(kind, std::vector<NetId>(fanin), neg_mask, out);
  }

  void mark_output(NetId id) {
    if (std::find(n_.outputs_.begin(), n_.outputs_.end(), id) != n_.outputs_.end())
      throw ValidationError("duplicate output '" + n_.names_[id] + "'");
    n_.outputs_.push_back(id);
  }

  bool has(const std::string& net) const { return n_.index_.count(net) != 0; }

  const std::string& net_name(NetId id) const { return n_.names_[id]; }

  Netlist build() {
    validate();
    topo_sort();
    return std::move(n_);
  }

 private:
  void validate() {
    if (n_.inputs_.empty()) throw ValidationError("netlist has no primary inputs");
    if (n_.outputs_.empty()) throw ValidationError("netlist has no primary outputs");
    for (NetId id = 0; id < n_.names_.size(); ++id)
      if (n_.driver_[id] == -2)
        throw ValidationError("undefined net '" + n_.names_[id] + "'");
  }

  // Kahn's algorithm over gates; FIFO in gate creation order keeps the
  // resulting order deterministic. Leftover gates mean a cycle.
  void topo_sort() {
    std::size_t ng = n_.gates_.size();
    std::vector<int> pending(ng, 0);
    std::vector<std::vector<std::uint32_t>> users(n_.names_.size());
    for (std::uint32_t gi = 0; gi < ng; ++gi)
      for (NetId f : n_.gates_[gi].fanin) {
        if (n_.has_gate(f)) ++pending[gi];
        users[f].push_back(gi);
      }
    std::vector<std::uint32_t> queue;
    for (std::uint32_t gi = 0; gi < ng; ++gi)
      if (pending[gi] == 0) queue.push_back(gi);
    n_.topo_.clear();
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::uint32_t gi = queue[head];
      NetId out = n_.gates_[gi].output;
      n_.topo_.push_back(out);
      for (std::uint32_t user : users[out])
        if (--pending[user] == 0) queue.push_back(user);
    }
    if (n_.topo_.size() != ng) {
      for (std::uint32_t gi = 0; gi < ng; ++gi)
        if (pending[gi] > 0)
          throw ValidationError("cycle detected involving net '" +
                                n_.names_[n_.gates_[gi].output] + "'");
    }
  }

  Netlist n_;
};

// Full per-net evaluation of one test vector; index the result by NetId.
inline std::vector<std::uint8_t> evaluate(const Netlist& n, const TestVector& v) {
  if (v.size() != n.num_inputs())
    throw ValidationError("test vector has " + std::to_string(v.size()) +
                          " bits, netlist has " + std::to_string(n.num_inputs()) +
                          " inputs");
  std::vector<std::uint8_t> val(n.num_nets(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) val[n.inputs()[i]] = v[i] ? 1 : 0;
  std::uint8_t in[max_arity];
  for (NetId id : n.topo_order()) {
    const Gate& g = n.gate_of(id);
    for (std::size_t j = 0; j < g.fanin.size(); ++j)
      in[j] = val[g.fanin[j]] ^ ((g.neg_mask >> j) & 1u);
    val[id] = gate_value(g.kind, in, g.fanin.size()) ? 1 : 0;
  }
  return val;
}

inline std::vector<std::uint8_t> output_values(const Netlist& n, const TestVector& v) {
  auto all = evaluate(n, v);
  std::vector<std::uint8_t> out;
  out.reserve(n.outputs().size());
  for (NetId o : n.outputs()) out.push_back(all[o]);
  return out;
}

inline std::size_t gate_count(const Netlist& n) { return n.gate_count(); }

// Structural isomorphism by net name: same inputs/outputs in the same order,
// and per name the same gate kind, fan-in names, and complement mask.
// Net ids are allowed to differ.
inline bool isomorphic(const Netlist& a, const Netlist& b) {
  auto names_of = [](const Netlist& n, const std::vector<NetId>& ids) {
    std::vector<std::string> r;
    r.reserve(ids.size());
    for (NetId id : ids) r.push_back(n.net_name(id));
    return r;
  };
  if (names_of(a, a.inputs()) != names_of(b, b.inputs())) return false;
  if (names_of(a, a.outputs()) != names_of(b, b.outputs())) return false;
  if (a.gate_count() != b.gate_count()) return false;
  for (const Gate& ga : a.gates()) {
    auto nb = b.find(a.net_name(ga.output));
    if (!nb || !b.has_gate(*nb)) return false;
    const Gate& gb = b.gate_of(*nb);
    if (gb.kind != ga.kind || gb.neg_mask != ga.neg_mask) return false;
    if (names_of(a, ga.fanin) != names_of(b, gb.fanin)) return false;
  }
  return true;
}

}  // namespace raregate
