#pragma once

// Per-net signal probabilities and rareness, computed three ways:
//
//   itm   - transfer-matrix propagation in topological order, treating gate
//           fan-ins as statistically independent. Reconvergent fan-out makes
//           this approximate by design; it is the method whose numbers the
//           area-optimization study quotes.
//   exact - brute-force enumeration of all input assignments (<= 24 inputs).
//   sim   - seeded random simulation.
//
// Rareness of a net is min(P(0), P(1)); its rare value is the less likely
// bit, with the tie at 0.5 fixed to 1. The "signal universe" every metric
// ranges over is the set of gate-driven nets; primary inputs are excluded.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bitsim.hpp"
#include "core.hpp"
#include "format.hpp"
#include "netlist.hpp"

namespace raregate {

struct ProbabilityVector {
  double p0 = 0.5;
  double p1 = 0.5;
};

inline ProbabilityVector make_pv(double p1) { return {1.0 - p1, p1}; }

inline double rareness_of(const ProbabilityVector& pv) {
  return pv.p0 < pv.p1 ? pv.p0 : pv.p1;
}

inline int rare_value_of(const ProbabilityVector& pv) {
  return pv.p1 <= pv.p0 ? 1 : 0;
}

// 2^k x 2 one-hot truth-table matrix: row i is the output distribution for
// input combination i, with fan-in 0 as the most significant index bit.
struct TransferMatrix {
  GateKind kind;
  int arity;
  std::vector<std::array<double, 2>> rows;
};

inline TransferMatrix itm(GateKind kind, int arity) {
  auto [lo, hi] = arity_range(kind);
  if (arity < lo || arity > hi)
    throw ValidationError(std::string("invalid arity ") + std::to_string(arity) +
                          " for " + to_string(kind));
  TransferMatrix tm{kind, arity, {}};
  std::size_t rows = 1ull << arity;
  tm.rows.resize(rows);
  std::uint8_t bits[max_arity];
  for (std::size_t i = 0; i < rows; ++i) {
    for (int j = 0; j < arity; ++j) bits[j] = (i >> (arity - 1 - j)) & 1u;
    bool out = gate_value(kind, bits, arity);
    tm.rows[i] = out ? std::array<double, 2>{0.0, 1.0}
                     : std::array<double, 2>{1.0, 0.0};
  }
  return tm;
}

// Output distribution of one gate: the Kronecker product of the fan-in
// distributions (a 2^k vector of input-combination probabilities) multiplied
// into the transfer matrix, then summed per column.
inline ProbabilityVector itm_apply(const TransferMatrix& tm,
                                   const std::vector<ProbabilityVector>& fanin) {
  if (static_cast<int>(fanin.size()) != tm.arity)
    throw ValidationError("fan-in count does not match transfer matrix arity");
  std::size_t rows = tm.rows.size();
  double out[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < rows; ++i) {
    double pi = 1.0;
    for (int j = 0; j < tm.arity; ++j) {
      int bit = (i >> (tm.arity - 1 - j)) & 1u;
      pi *= bit ? fanin[j].p1 : fanin[j].p0;
    }
    out[0] += pi * tm.rows[i][0];
    out[1] += pi * tm.rows[i][1];
  }
  return {out[0], out[1]};
}

// Probability vectors for every net under the independence assumption.
// `input_probs`, when given, must cover every primary input; when omitted all
// inputs are uniform <0.5, 0.5>.
inline std::vector<ProbabilityVector> propagate_itm(
    const Netlist& n,
    const std::map<NetId, ProbabilityVector>& input_probs = {}) {
  std::vector<ProbabilityVector> pv(n.num_nets());
  for (NetId in : n.inputs()) {
    if (input_probs.empty()) {
      pv[in] = {0.5, 0.5};
    } else {
      auto it = input_probs.find(in);
      if (it == input_probs.end())
        throw ValidationError("missing input probability for net '" +
                              n.net_name(in) + "'");
      pv[in] = it->second;
    }
  }
  std::map<std::pair<GateKind, int>, TransferMatrix> cache;
  for (NetId id : n.topo_order()) {
    const Gate& g = n.gate_of(id);
    int k = static_cast<int>(g.fanin.size());
    auto key = std::make_pair(g.kind, k);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, itm(g.kind, k)).first;
    std::vector<ProbabilityVector> fin(g.fanin.size());
    for (std::size_t j = 0; j < g.fanin.size(); ++j) {
      ProbabilityVector p = pv[g.fanin[j]];
      if ((g.neg_mask >> j) & 1u) std::swap(p.p0, p.p1);  // complemented literal
      fin[j] = p;
    }
    pv[id] = itm_apply(it->second, fin);
  }
  return pv;
}

// Exact signal probabilities by exhaustive enumeration; the corrective oracle
// for the independence assumption. Limited to 24 primary inputs.
inline std::vector<ProbabilityVector> exact_probabilities(const Netlist& n,
                                                          int threads = 1) {
  auto ones = count_ones_exhaustive(n, threads);
  double total = static_cast<double>(1ull << n.num_inputs());
  std::vector<ProbabilityVector> pv(n.num_nets());
  for (std::size_t id = 0; id < pv.size(); ++id)
    pv[id] = make_pv(static_cast<double>(ones[id]) / total);
  return pv;
}

struct SignalStat {
  NetId net;
  std::string name;
  double p0;
  double p1;
  double omega;
  int rare_value;
};

struct RarenessReport {
  std::string method;            // "itm" | "exact" | "sim"
  std::uint64_t seed = 0;        // sim only
  std::uint64_t vectors = 0;     // sim only
  std::vector<SignalStat> signals;  // gate-driven nets, ascending NetId
};

inline RarenessReport report_from_probs(const Netlist& n,
                                        const std::vector<ProbabilityVector>& pv,
                                        const std::string& method,
                                        std::uint64_t seed = 0,
                                        std::uint64_t vectors = 0) {
  RarenessReport r;
  r.method = method;
  r.seed = seed;
  r.vectors = vectors;
  for (NetId id = 0; id < n.num_nets(); ++id) {
    if (!n.has_gate(id)) continue;
    const ProbabilityVector& p = pv[id];
    r.signals.push_back({id, n.net_name(id), p.p0, p.p1, rareness_of(p),
                         rare_value_of(p)});
  }
  return r;
}

inline RarenessReport itm_rareness(const Netlist& n) {
  return report_from_probs(n, propagate_itm(n), "itm");
}

inline RarenessReport exact_rareness(const Netlist& n, int threads = 1) {
  return report_from_probs(n, exact_probabilities(n, threads), "exact");
}

inline RarenessReport simulate_rareness(const Netlist& n, std::uint64_t n_vectors,
                                        std::uint64_t seed, int threads = 1) {
  if (n_vectors < 1) throw ValidationError("simulation needs at least one vector");
  auto ones = count_ones_random(n, n_vectors, seed, threads);
  std::vector<ProbabilityVector> pv(n.num_nets());
  for (std::size_t id = 0; id < pv.size(); ++id)
    pv[id] = make_pv(static_cast<double>(ones[id]) / static_cast<double>(n_vectors));
  auto r = report_from_probs(n, pv, "sim", seed, n_vectors);
  return r;
}

// Pass to avg_rareness to average over the whole signal universe.
inline constexpr std::size_t all_signals = static_cast<std::size_t>(-1);

// Minimum rareness over the signal universe (the design's rarest signal).
inline double rarest(const RarenessReport& r) {
  if (r.signals.empty()) throw ValidationError("report has an empty signal universe");
  double best = r.signals[0].omega;
  for (const auto& s : r.signals) best = std::min(best, s.omega);
  return best;
}

// Mean rareness of the n rarest signals; ties broken by net id so the
// selection is deterministic.
inline double avg_rareness(const RarenessReport& r, std::size_t n = all_signals) {
  if (n == all_signals) n = r.signals.size();
  if (n == 0) throw ValidationError("average over zero signals");
  if (n > r.signals.size())
    throw ValidationError("asked for " + std::to_string(n) + " rarest of " +
                          std::to_string(r.signals.size()) + " signals");
  std::vector<std::pair<double, NetId>> v;
  v.reserve(r.signals.size());
  for (const auto& s : r.signals) v.emplace_back(s.omega, s.net);
  std::sort(v.begin(), v.end());
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += v[i].first;
  return sum / static_cast<double>(n);
}

// Number of universe signals rarer than tau; strict comparison by default
// (a signal at exactly tau does not count).
inline std::size_t count_below(const RarenessReport& r, double tau,
                               bool strict = true) {
  std::size_t c = 0;
  for (const auto& s : r.signals)
    if (strict ? s.omega < tau : s.omega <= tau) ++c;
  return c;
}

struct MetricSummary {
  double omega_min;
  double mu_all;
  double mu_top;
  std::size_t top_n;
  std::size_t rho;
  double tau;
  bool strict;
};

inline MetricSummary metrics_of(const RarenessReport& r, double tau,
                                bool strict = true, std::size_t top_n = 0) {
  if (top_n == 0) top_n = std::min<std::size_t>(100, r.signals.size());
  return {rarest(r), avg_rareness(r), avg_rareness(r, top_n),
          top_n,     count_below(r, tau, strict), tau, strict};
}

inline nlohmann::ordered_json report_json(const RarenessReport& r, double tau,
                                          bool strict = true,
                                          std::size_t top_n = 0) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  if (r.method == "sim") {
    j["seed"] = r.seed;
    j["vectors"] = r.vectors;
  } else {
    j["seed"] = nullptr;
    j["vectors"] = nullptr;
  }
  auto signals = nlohmann::ordered_json::array();
  for (const auto& s : r.signals) {
    signals.push_back({{"net", s.name},
                       {"p0", s.p0},
                       {"p1", s.p1},
                       {"omega", s.omega},
                       {"rare_value", s.rare_value}});
  }
  j["signals"] = std::move(signals);
  if (r.signals.empty()) {
    j["metrics"] = nullptr;
    return j;
  }
  MetricSummary m = metrics_of(r, tau, strict, top_n);
  j["metrics"] = {
      {"omega_min", m.omega_min},
      {"mu_all", m.mu_all},
      {"mu_topN", m.mu_top},
      {"topN", m.top_n},
      {"rho", {{"tau", m.tau}, {"strict", m.strict}, {"count", m.rho}}},
      {"display",
       {{"omega_min", trunc_display(m.omega_min, 4)},
        {"mu_all", trunc_display(m.mu_all, 4)},
        {"mu_topN", trunc_display(m.mu_top, 4)}}},
  };
  return j;
}

}  // namespace raregate
