#pragma once

// Area optimization: per-output cone extraction, two-level minimization
// (Quine-McCluskey prime generation, Petrick's method for small prime sets,
// greedy set cover otherwise), single-literal factoring, and a structurally
// hashed rebuild into 2-input gates. The optimized netlist is exhaustively
// verified equivalent to the original on every primary output before it is
// returned, and the original is kept whenever the rebuild fails to strictly
// reduce gate count, so the transformation never enlarges a design.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "core.hpp"
#include "format.hpp"
#include "netlist.hpp"
#include "rareness.hpp"

namespace raregate {

inline constexpr int max_cone_inputs = 12;

// Exhaustive single-output function over a small input cone. Row index m
// encodes the cone inputs with inputs[0] as the most significant bit, so the
// bitstring of 2-input AND over (A,B) reads "0001".
struct TruthTable {
  std::vector<std::string> inputs;
  std::vector<std::uint64_t> words;

  int num_inputs() const { return static_cast<int>(inputs.size()); }
  std::size_t size() const { return 1ull << inputs.size(); }
  bool get(std::size_t m) const { return (words[m >> 6] >> (m & 63)) & 1u; }
  void set(std::size_t m, bool v) {
    std::uint64_t bit = 1ull << (m & 63);
    if (v)
      words[m >> 6] |= bit;
    else
      words[m >> 6] &= ~bit;
  }
  std::string bitstring() const {
    std::string s(size(), '0');
    for (std::size_t m = 0; m < size(); ++m)
      if (get(m)) s[m] = '1';
    return s;
  }
};

// A product term as (input name, negated) literals, kept sorted by name with
// positive before negative; a cover is a list of such cubes in canonical
// (lexicographic) order. An empty cube is the constant-1 tautology.
using CubeLit = std::pair<std::string, bool>;
using Cube = std::vector<CubeLit>;

struct Cover {
  std::vector<Cube> cubes;
};

inline std::string cube_string(const Cube& c) {
  std::string s;
  for (const auto& [var, neg] : c) {
    if (neg) s += '!';
    s += var;
  }
  return s;
}

namespace detail {

struct Cone {
  std::vector<NetId> support;  // primary inputs in declaration order
  std::vector<char> member;    // per net: in the transitive fan-in
};

inline Cone cone_of(const Netlist& n, NetId output) {
  Cone c;
  c.member.assign(n.num_nets(), 0);
  std::vector<NetId> stack{output};
  c.member[output] = 1;
  while (!stack.empty()) {
    NetId id = stack.back();
    stack.pop_back();
    if (!n.has_gate(id)) continue;
    for (NetId f : n.gate_of(id).fanin)
      if (!c.member[f]) {
        c.member[f] = 1;
        stack.push_back(f);
      }
  }
  for (NetId pi : n.inputs())
    if (c.member[pi]) c.support.push_back(pi);
  return c;
}

}  // namespace detail

inline TruthTable cone_truth_table(const Netlist& n, NetId output) {
  if (output >= n.num_nets())
    throw ValidationError("unknown net id " + std::to_string(output));
  detail::Cone cone = detail::cone_of(n, output);
  int k = static_cast<int>(cone.support.size());
  if (k > max_cone_inputs)
    throw CapacityError("cone of '" + n.net_name(output) + "' spans " +
                        std::to_string(k) + " primary inputs (limit " +
                        std::to_string(max_cone_inputs) + ")");
  TruthTable tt;
  for (NetId pi : cone.support) tt.inputs.push_back(n.net_name(pi));
  tt.words.assign((tt.size() + 63) / 64, 0);
  TestVector v(n.num_inputs(), 0);
  std::vector<std::size_t> slot(k);  // support position -> input vector index
  for (int j = 0; j < k; ++j) {
    auto it = std::find(n.inputs().begin(), n.inputs().end(), cone.support[j]);
    slot[j] = static_cast<std::size_t>(it - n.inputs().begin());
  }
  for (std::size_t m = 0; m < tt.size(); ++m) {
    for (int j = 0; j < k; ++j) v[slot[j]] = (m >> (k - 1 - j)) & 1u;
    tt.set(m, evaluate(n, v)[output] != 0);
  }
  return tt;
}

namespace detail {

struct Implicant {
  std::uint16_t values = 0;  // fixed-bit values (zero on dashed bits)
  std::uint16_t dashes = 0;  // 1 = position is free
  bool covers(std::uint16_t m) const { return ((m ^ values) & ~dashes) == 0; }
  bool operator<(const Implicant& o) const {
    return std::tie(values, dashes) < std::tie(o.values, o.dashes);
  }
};

inline Cube implicant_cube(const Implicant& imp, const TruthTable& tt) {
  int k = tt.num_inputs();
  Cube c;
  for (int j = 0; j < k; ++j) {
    int p = k - 1 - j;
    if ((imp.dashes >> p) & 1u) continue;
    c.emplace_back(tt.inputs[j], ((imp.values >> p) & 1u) == 0);
  }
  std::sort(c.begin(), c.end());
  return c;
}

inline std::vector<Implicant> prime_implicants(
    const std::vector<std::uint16_t>& on_set) {
  std::set<Implicant> current;
  for (std::uint16_t m : on_set) current.insert({m, 0});
  std::set<Implicant> primes;
  while (!current.empty()) {
    std::set<Implicant> next;
    std::map<Implicant, bool> combined;
    for (const auto& imp : current) combined[imp] = false;
    // Group by dash mask and set-bit count; only adjacent counts can merge.
    std::map<std::pair<std::uint16_t, int>, std::vector<Implicant>> groups;
    for (const auto& imp : current)
      groups[{imp.dashes, std::popcount(imp.values)}].push_back(imp);
    for (const auto& [key, lo] : groups) {
      auto hi = groups.find({key.first, key.second + 1});
      if (hi == groups.end()) continue;
      for (const auto& a : lo)
        for (const auto& b : hi->second) {
          std::uint16_t diff = a.values ^ b.values;
          if (std::popcount(diff) != 1) continue;
          next.insert({static_cast<std::uint16_t>(a.values & ~diff),
                       static_cast<std::uint16_t>(a.dashes | diff)});
          combined[a] = true;
          combined[b] = true;
        }
    }
    for (const auto& [imp, was] : combined)
      if (!was) primes.insert(imp);
    current = std::move(next);
  }
  return {primes.begin(), primes.end()};
}

}  // namespace detail

// Prime implicants via iterative combining; the minimum cover is exact
// (essential primes plus Petrick's method) when there are at most 16 primes,
// greedy set cover beyond that. Constant functions yield the empty cover
// (always 0) or the single empty cube (always 1).
inline Cover qm_minimize(const TruthTable& tt) {
  int k = tt.num_inputs();
  std::vector<std::uint16_t> on_set;
  for (std::size_t m = 0; m < tt.size(); ++m)
    if (tt.get(m)) on_set.push_back(static_cast<std::uint16_t>(m));
  if (on_set.empty()) return {};
  if (on_set.size() == tt.size()) return {{Cube{}}};

  std::vector<detail::Implicant> primes = detail::prime_implicants(on_set);
  // Canonical prime order: by rendered cube, so every later tie-break is
  // independent of internal bit layout.
  std::vector<std::pair<Cube, detail::Implicant>> ranked;
  ranked.reserve(primes.size());
  for (const auto& p : primes) ranked.emplace_back(detail::implicant_cube(p, tt), p);
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::size_t np = ranked.size();
  std::vector<std::vector<std::size_t>> covering(on_set.size());
  for (std::size_t mi = 0; mi < on_set.size(); ++mi)
    for (std::size_t pi = 0; pi < np; ++pi)
      if (ranked[pi].second.covers(on_set[mi])) covering[mi].push_back(pi);

  std::vector<char> chosen(np, 0);
  for (std::size_t mi = 0; mi < on_set.size(); ++mi)
    if (covering[mi].size() == 1) chosen[covering[mi][0]] = 1;  // essential

  auto covered = [&](std::size_t mi) {
    for (std::size_t pi : covering[mi])
      if (chosen[pi]) return true;
    return false;
  };
  std::vector<std::size_t> open;
  for (std::size_t mi = 0; mi < on_set.size(); ++mi)
    if (!covered(mi)) open.push_back(mi);

  if (!open.empty() && np <= 16) {
    // Petrick: expand the product of per-minterm sums into minimal terms,
    // with absorption after every clause.
    std::vector<std::uint32_t> terms{0};
    for (std::size_t mi : open) {
      std::vector<std::uint32_t> grown;
      for (std::uint32_t t : terms)
        for (std::size_t pi : covering[mi]) grown.push_back(t | (1u << pi));
      std::sort(grown.begin(), grown.end());
      grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
      std::vector<std::uint32_t> kept;
      for (std::uint32_t t : grown) {
        bool absorbed = false;
        for (std::uint32_t s : grown)
          if (s != t && (s & t) == s) {
            absorbed = true;
            break;
          }
        if (!absorbed) kept.push_back(t);
      }
      terms = std::move(kept);
    }
    auto indices = [](std::uint32_t t) {
      std::vector<std::size_t> v;
      for (std::size_t i = 0; i < 32; ++i)
        if ((t >> i) & 1u) v.push_back(i);
      return v;
    };
    auto literals_of = [&](std::uint32_t t) {
      std::size_t c = 0;
      for (std::size_t i = 0; i < np; ++i)
        if ((t >> i) & 1u) c += ranked[i].first.size();
      return c;
    };
    std::uint32_t best = terms[0];
    for (std::uint32_t t : terms) {
      auto cur = std::tuple(std::popcount(t), literals_of(t), indices(t));
      auto prev = std::tuple(std::popcount(best), literals_of(best), indices(best));
      if (cur < prev) best = t;
    }
    for (std::size_t i = 0; i < np; ++i)
      if ((best >> i) & 1u) chosen[i] = 1;
  } else if (!open.empty()) {
    // Greedy: most newly covered minterms, then fewer literals, then
    // canonical order.
    std::vector<char> open_mark(on_set.size(), 0);
    for (std::size_t mi : open) open_mark[mi] = 1;
    std::size_t remaining = open.size();
    while (remaining > 0) {
      std::size_t best_pi = np;
      std::size_t best_gain = 0;
      for (std::size_t pi = 0; pi < np; ++pi) {
        if (chosen[pi]) continue;
        std::size_t gain = 0;
        for (std::size_t mi = 0; mi < on_set.size(); ++mi)
          if (open_mark[mi] && ranked[pi].second.covers(on_set[mi])) ++gain;
        if (gain > best_gain ||
            (gain == best_gain && gain > 0 && best_pi != np &&
             ranked[pi].first.size() < ranked[best_pi].first.size())) {
          best_gain = gain;
          best_pi = pi;
        }
      }
      chosen[best_pi] = 1;
      for (std::size_t mi = 0; mi < on_set.size(); ++mi)
        if (open_mark[mi] && ranked[best_pi].second.covers(on_set[mi])) {
          open_mark[mi] = 0;
          --remaining;
        }
    }
  }

  Cover cover;
  for (std::size_t pi = 0; pi < np; ++pi)
    if (chosen[pi]) cover.cubes.push_back(ranked[pi].first);
  std::sort(cover.cubes.begin(), cover.cubes.end());

  // The cover must reproduce the table bit for bit.
  std::map<std::string, int> pos;
  for (int j = 0; j < k; ++j) pos[tt.inputs[j]] = k - 1 - j;
  for (std::size_t m = 0; m < tt.size(); ++m) {
    bool any = false;
    for (const auto& cube : cover.cubes) {
      bool hit = true;
      for (const auto& [var, neg] : cube)
        if ((((m >> pos[var]) & 1u) != 0) == neg) {
          hit = false;
          break;
        }
      if (hit) {
        any = true;
        break;
      }
    }
    if (any != tt.get(m))
      throw InternalError("minimized cover diverges from its truth table");
  }
  return cover;
}

// Factored expression tree consumed by rebuild.
struct Form {
  enum class Node { Lit, And, Or, Const } node = Node::Const;
  std::string var;  // Lit
  bool neg = false; // Lit
  bool cval = false;  // Const
  std::vector<Form> kids;  // And / Or

  static Form lit(std::string v, bool n) {
    Form f;
    f.node = Node::Lit;
    f.var = std::move(v);
    f.neg = n;
    return f;
  }
  static Form constant(bool v) {
    Form f;
    f.node = Node::Const;
    f.cval = v;
    return f;
  }
};

namespace detail {

inline Form cube_form(const Cube& c) {
  if (c.empty()) return Form::constant(true);
  if (c.size() == 1) return Form::lit(c[0].first, c[0].second);
  Form f;
  f.node = Form::Node::And;
  for (const auto& [var, neg] : c) f.kids.push_back(Form::lit(var, neg));
  return f;
}

inline Form sop_form(const std::vector<Cube>& cubes) {
  if (cubes.size() == 1) return cube_form(cubes[0]);
  Form f;
  f.node = Form::Node::Or;
  for (const auto& c : cubes) f.kids.push_back(cube_form(c));
  return f;
}

}  // namespace detail

// Factors a shared literal out of a two-cube cover: the candidate literal
// appearing in the most cubes wins, ties resolved alphabetically with a
// positive literal before its complement. Larger covers stay sum-of-products;
// factoring them lowers gate count but demonstrably concentrates signal
// probabilities (an OR of several near-uniform terms drifts toward constant
// 1), defeating the rareness targets this pass exists to improve, so one
// extraction level on the smallest covers is the deliberate limit.
inline Form factor_common_literal(const Cover& cover) {
  if (cover.cubes.empty()) return Form::constant(false);
  if (cover.cubes.size() == 1 && cover.cubes[0].empty())
    return Form::constant(true);
  if (cover.cubes.size() == 2) {
    Cube shared;
    std::set_intersection(cover.cubes[0].begin(), cover.cubes[0].end(),
                          cover.cubes[1].begin(), cover.cubes[1].end(),
                          std::back_inserter(shared));
    if (!shared.empty()) {
      // Canonical cube order already puts the alphabetical positive-first
      // winner at the front.
      const CubeLit& pick = shared[0];
      std::vector<Cube> quotient;
      for (const Cube& c : cover.cubes) {
        Cube q;
        for (const auto& lit : c)
          if (lit != pick) q.push_back(lit);
        quotient.push_back(std::move(q));
      }
      Form f;
      f.node = Form::Node::And;
      f.kids.push_back(Form::lit(pick.first, pick.second));
      f.kids.push_back(detail::sop_form(quotient));
      return f;
    }
  }
  return detail::sop_form(cover.cubes);
}

namespace detail {

class Rebuilder {
 public:
  explicit Rebuilder(const Netlist& original) : nb_(original.name()) {
    for (NetId pi : original.inputs()) nb_.add_input(original.net_name(pi));
  }

  void add_output(const Form& form, const std::string& out_name) {
    out_ = out_name;
    counter_ = 0;
    switch (form.node) {
      case Form::Node::Const:
        throw ValidationError("output '" + out_name +
                              "': constant outputs unsupported");
      case Form::Node::Lit: {
        NetId src = nb_.declare(form.var);
        if (!form.neg && form.var == out_name) {
          nb_.mark_output(src);
          return;
        }
        GateKind k = form.neg ? GateKind::Not : GateKind::Buf;
        nb_.mark_output(nb_.add_gate(k, std::vector<NetId>{src}, 0, out_name));
        return;
      }
      case Form::Node::And:
      case Form::Node::Or:
        nb_.mark_output(lower_node(form, true));
        return;
    }
  }

  Netlist finish() { return nb_.build(); }

 private:
  using Operand = std::pair<NetId, bool>;  // net, complemented
  using Key = std::tuple<GateKind, std::vector<NetId>, std::uint32_t>;

  Operand lower_operand(const Form& f) {
    if (f.node == Form::Node::Lit) return {nb_.declare(f.var), f.neg};
    return {lower_node(f, false), false};
  }

  NetId lower_node(const Form& f, bool is_root) {
    // Form construction guarantees And/Or nodes carry at least two kids: a
    // one-cube cover collapses to the cube and a one-literal cube to a Lit.
    GateKind kind = f.node == Form::Node::And ? GateKind::And : GateKind::Or;
    Operand acc = lower_operand(f.kids[0]);
    for (std::size_t i = 1; i < f.kids.size(); ++i) {
      Operand rhs = lower_operand(f.kids[i]);
      bool last = is_root && i + 1 == f.kids.size();
      acc = {emit(kind, acc, rhs, last), false};
    }
    return acc.first;
  }

  NetId emit(GateKind kind, Operand a, Operand b, bool named_root) {
    std::vector<NetId> fanin{a.first, b.first};
    std::uint32_t mask = (a.second ? 1u : 0u) | (b.second ? 2u : 0u);
    Key key{kind, fanin, mask};
    auto it = hash_.find(key);
    if (it != hash_.end()) {
      if (!named_root) return it->second;
      // A functionally identical gate exists under another name; alias it so
      // the output keeps its required name.
      return nb_.add_gate(GateKind::Buf, std::vector<NetId>{it->second}, 0,
                          out_);
    }
    NetId id = nb_.add_gate(kind, std::move(fanin), mask,
                            named_root ? out_ : fresh_name());
    hash_.emplace(std::move(key), id);
    return id;
  }

  std::string fresh_name() {
    std::string name;
    do {
      name = out_ + "_" + std::to_string(++counter_);
    } while (nb_.has(name));
    return name;
  }

  NetlistBuilder nb_;
  std::map<Key, NetId> hash_;
  std::string out_;
  int counter_ = 0;
};

}  // namespace detail

// Rebuilds a netlist from one factored form per primary output: 2-input
// left-associative decomposition, literal complements folded into gate
// negation masks, identical sub-gates shared across outputs.
inline Netlist rebuild(const Netlist& original, const std::vector<Form>& forms) {
  if (forms.size() != original.outputs().size())
    throw ValidationError("need one form per primary output");
  detail::Rebuilder rb(original);
  for (std::size_t i = 0; i < forms.size(); ++i)
    rb.add_output(forms[i], original.net_name(original.outputs()[i]));
  return rb.finish();
}

struct OptimizationStats {
  std::size_t area_before = 0;
  std::size_t area_after = 0;
  double area_drop_pct = 0.0;
  std::optional<double> omega_min_before, omega_min_after;
  std::optional<double> mu_all_before, mu_all_after;
  std::optional<std::size_t> rho_before, rho_after;
  double tau = 0.2;
  bool strict = true;
};

struct OptimizeResult {
  Netlist netlist;
  OptimizationStats stats;
};

inline nlohmann::ordered_json stats_json(const OptimizationStats& s) {
  nlohmann::ordered_json j;
  j["area_before"] = s.area_before;
  j["area_after"] = s.area_after;
  j["area_drop_pct"] = s.area_drop_pct;
  auto put = [&](const char* key, const auto& opt) {
    if (opt)
      j[key] = *opt;
    else
      j[key] = nullptr;
  };
  put("omega_min_before", s.omega_min_before);
  put("omega_min_after", s.omega_min_after);
  put("mu_all_before", s.mu_all_before);
  put("mu_all_after", s.mu_all_after);
  put("rho_before", s.rho_before);
  put("rho_after", s.rho_after);
  j["tau"] = s.tau;
  j["strict"] = s.strict;
  return j;
}

// Full pipeline: cone truth tables, minimization, factoring, rebuild, then
// exhaustive per-output equivalence verification. Keeps the original netlist
// when the rebuild is not strictly smaller. The rho threshold tau applies to
// the before/after stats only.
inline OptimizeResult optimize_area(const Netlist& n, double tau = 0.2,
                                    bool strict = true) {
  std::vector<Form> forms;
  std::vector<detail::Cone> cones;
  forms.reserve(n.outputs().size());
  for (NetId out : n.outputs()) {
    cones.push_back(detail::cone_of(n, out));
    forms.push_back(factor_common_literal(qm_minimize(cone_truth_table(n, out))));
  }
  Netlist rebuilt = rebuild(n, forms);

  // Exhaustive check over each output's original input cone.
  for (std::size_t oi = 0; oi < n.outputs().size(); ++oi) {
    const auto& support = cones[oi].support;
    std::vector<std::size_t> slot(support.size());
    for (std::size_t j = 0; j < support.size(); ++j) {
      auto it = std::find(n.inputs().begin(), n.inputs().end(), support[j]);
      slot[j] = static_cast<std::size_t>(it - n.inputs().begin());
    }
    TestVector v(n.num_inputs(), 0);
    for (std::size_t m = 0; m < (1ull << support.size()); ++m) {
      for (std::size_t j = 0; j < support.size(); ++j)
        v[slot[j]] = (m >> (support.size() - 1 - j)) & 1u;
      if (output_values(n, v)[oi] != output_values(rebuilt, v)[oi])
        throw InternalError("optimized netlist diverges on output '" +
                            n.net_name(n.outputs()[oi]) + "'");
    }
  }

  bool keep_original = rebuilt.gate_count() >= n.gate_count();
  OptimizeResult res{keep_original ? n : std::move(rebuilt), {}};
  OptimizationStats& s = res.stats;
  s.area_before = n.gate_count();
  s.area_after = res.netlist.gate_count();
  s.area_drop_pct =
      s.area_before == 0
          ? 0.0
          : 100.0 * static_cast<double>(s.area_before - s.area_after) /
                static_cast<double>(s.area_before);
  s.tau = tau;
  s.strict = strict;
  RarenessReport before = itm_rareness(n);
  RarenessReport after = itm_rareness(res.netlist);
  if (!before.signals.empty()) {
    s.omega_min_before = rarest(before);
    s.mu_all_before = avg_rareness(before);
    s.rho_before = count_below(before, tau, strict);
  }
  if (!after.signals.empty()) {
    s.omega_min_after = rarest(after);
    s.mu_all_after = avg_rareness(after);
    s.rho_after = count_below(after, tau, strict);
  }
  return res;
}

}  // namespace raregate
