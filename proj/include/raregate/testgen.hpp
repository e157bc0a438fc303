// Trojan-detection test generation.
//
// Two generators share the rare-node machinery:
//  - mero: statistical N-detect. Simulate a seeded random pool, rank vectors
//    by how many rare nodes they activate, then hill-climb each vector with
//    single-bit flips, keeping only vectors that push some node toward its
//    activation quota N.
//  - tarmac: SAT-based clique activation. Query all rare-node pairs for
//    joint activatability (exactly R*(R-1)/2 solver calls), partition the
//    compatibility graph into greedy maximal cliques, and emit one
//    SAT-derived vector per jointly satisfiable group.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "raregate/bitsim.hpp"
#include "raregate/core.hpp"
#include "raregate/netlist.hpp"
#include "raregate/rareness.hpp"
#include "raregate/sat.hpp"
#include "raregate/trojan.hpp"

namespace raregate {

struct RareNode {
  NetId net = null_net;
  int value = 0;    // the rare value
  double omega = 0.0;
};

struct Provenance {
  std::string algorithm;  // "mero" or "tarmac"
  double tau = 0.0;
  std::uint64_t seed = 0;
  int pool = 0;        // random-pool size fed to simulation
  int rare = 0;        // rare nodes under tau
  // mero only:
  int n_detect = 0;    // the N quota
  int unmet = 0;       // nodes still under quota when the pool ran out
  // tarmac only:
  int cliques = 0;     // greedy maximal cliques
  int groups = 0;      // jointly satisfiable groups after splitting
  std::uint64_t queries = 0;  // pairwise SAT queries, exactly R*(R-1)/2
  std::uint64_t skipped = 0;  // queries that hit the decision budget
};

struct TestSet {
  std::vector<TestVector> vectors;
  Provenance provenance;
};

// All universe signals with omega strictly below tau, ordered by net id.
inline std::vector<RareNode> rare_nodes(const Netlist& n,
                                        const RarenessReport& report,
                                        double tau) {
  (void)n;
  std::vector<RareNode> out;
  for (const SignalStat& s : report.signals)
    if (s.omega < tau) out.push_back({s.net, s.rare_value, s.omega});
  return out;
}

namespace detail {

inline int activated_count(const std::vector<std::uint8_t>& vals,
                           const std::vector<RareNode>& nodes) {
  int c = 0;
  for (const RareNode& r : nodes)
    c += vals[r.net] == static_cast<std::uint8_t>(r.value);
  return c;
}

}  // namespace detail

// Statistical N-detect generation. Deterministic for fixed arguments: the
// pool is the seeded simulation stream, ranking is a stable sort, and flips
// run left to right accepting only strict improvements in the number of
// under-quota nodes the vector activates.
inline TestSet mero(const Netlist& n, double tau, int quota, int n_random,
                    std::uint64_t seed) {
  if (quota < 1) throw ValidationError("N-detect quota must be positive");
  if (n_random < 1) throw ValidationError("random pool size must be positive");

  TestSet ts;
  ts.provenance.algorithm = "mero";
  ts.provenance.tau = tau;
  ts.provenance.seed = seed;
  ts.provenance.pool = n_random;
  ts.provenance.n_detect = quota;

  RarenessReport rep = simulate_rareness(n, n_random, seed);
  std::vector<RareNode> nodes = rare_nodes(n, rep, tau);
  ts.provenance.rare = static_cast<int>(nodes.size());
  if (nodes.empty()) return ts;

  std::vector<TestVector> pool =
      random_vectors(n.inputs().size(), n_random, seed);
  std::vector<int> order(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) order[i] = static_cast<int>(i);
  std::vector<int> hits(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    hits[i] = detail::activated_count(evaluate(n, pool[i]), nodes);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return hits[a] > hits[b]; });

  std::vector<int> counts(nodes.size(), 0);
  auto unmet_score = [&](const TestVector& v) {
    auto vals = evaluate(n, v);
    int s = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      s += counts[j] < quota &&
           vals[nodes[j].net] == static_cast<std::uint8_t>(nodes[j].value);
    return s;
  };
  auto all_met = [&] {
    return std::all_of(counts.begin(), counts.end(),
                       [&](int c) { return c >= quota; });
  };

  for (int pi : order) {
    if (all_met()) break;
    TestVector v = pool[pi];
    int score = unmet_score(v);
    for (std::size_t bit = 0; bit < v.size(); ++bit) {
      v[bit] ^= 1;
      int flipped = unmet_score(v);
      if (flipped > score)
        score = flipped;
      else
        v[bit] ^= 1;  // revert
    }
    if (score > 0) {
      auto vals = evaluate(n, v);
      for (std::size_t j = 0; j < nodes.size(); ++j)
        counts[j] += vals[nodes[j].net] ==
                     static_cast<std::uint8_t>(nodes[j].value);
      ts.vectors.push_back(std::move(v));
    }
  }
  for (int c : counts) ts.provenance.unmet += c < quota;
  return ts;
}

// Recounts, by plain simulation, how many vectors drive each rare node to
// its rare value.
inline std::vector<std::pair<RareNode, int>> n_detect_profile(
    const Netlist& n, const std::vector<TestVector>& tests, double tau,
    const RarenessReport& report) {
  std::vector<RareNode> nodes = rare_nodes(n, report, tau);
  std::vector<std::pair<RareNode, int>> out;
  for (const RareNode& r : nodes) out.emplace_back(r, 0);
  for (const TestVector& v : tests) {
    if (v.size() != n.inputs().size())
      throw ValidationError("test vector arity " + std::to_string(v.size()) +
                            " does not match " +
                            std::to_string(n.inputs().size()) + " inputs");
    auto vals = evaluate(n, v);
    for (auto& [node, count] : out)
      count += vals[node.net] == static_cast<std::uint8_t>(node.value);
  }
  return out;
}

struct CompatGraph {
  std::vector<RareNode> nodes;
  std::vector<std::vector<std::uint8_t>> adj;  // symmetric, no self-loops
  std::vector<std::pair<int, int>> edges;      // i < j, lexicographic
  std::vector<TestVector> witnesses;           // parallel to edges
  std::uint64_t queries = 0;   // exactly nodes*(nodes-1)/2
  std::uint64_t skipped = 0;   // budget-exceeded queries, treated as non-edges

  bool edge(int i, int j) const { return i != j && adj[i][j]; }
};

// Queries every node pair once for joint activatability. Budget-exceeded
// queries are conservative non-edges and are tallied in `skipped`.
inline CompatGraph build_compat_graph(
    const Netlist& n, const std::vector<RareNode>& nodes,
    std::uint64_t decision_budget = default_decision_budget) {
  CompatGraph g;
  g.nodes = nodes;
  int r = static_cast<int>(nodes.size());
  g.adj.assign(r, std::vector<std::uint8_t>(r, 0));
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      ++g.queries;
      AssignOutcome res = check_assignable(
          n,
          {{nodes[i].net, nodes[i].value}, {nodes[j].net, nodes[j].value}},
          decision_budget);
      if (res.status == SolveStatus::Sat) {
        g.adj[i][j] = g.adj[j][i] = 1;
        g.edges.emplace_back(i, j);
        g.witnesses.push_back(std::move(res.vector));
      } else if (res.status == SolveStatus::BudgetExceeded) {
        ++g.skipped;
      }
    }
  }
  return g;
}

// Greedy maximal-clique partition: seed with the lowest-index uncovered
// node, repeatedly add the uncovered node adjacent to the whole clique with
// the most uncovered neighbors (ties to the lowest index), remove the
// clique, repeat. Every node lands in exactly one clique.
inline std::vector<std::vector<int>> clique_partition(const CompatGraph& g) {
  int r = static_cast<int>(g.nodes.size());
  std::vector<std::uint8_t> covered(r, 0);
  std::vector<std::vector<int>> cliques;
  auto residual_degree = [&](int v) {
    int d = 0;
    for (int u = 0; u < r; ++u) d += !covered[u] && g.edge(v, u);
    return d;
  };
  for (int seed = 0; seed < r; ++seed) {
    if (covered[seed]) continue;
    std::vector<int> clique{seed};
    covered[seed] = 1;
    for (;;) {
      int best = -1, best_deg = -1;
      for (int v = 0; v < r; ++v) {
        if (covered[v]) continue;
        bool adj_all = true;
        for (int c : clique)
          if (!g.edge(v, c)) {
            adj_all = false;
            break;
          }
        if (!adj_all) continue;
        int d = residual_degree(v);
        if (d > best_deg) {
          best = v;
          best_deg = d;
        }
      }
      if (best < 0) break;
      clique.push_back(best);
      covered[best] = 1;
    }
    cliques.push_back(std::move(clique));
  }
  return cliques;
}

// SAT-based clique-activation generation. Pairwise edges do not guarantee a
// clique is jointly satisfiable, so each clique is split greedily: while the
// joint query fails, drop the last-added node into a FIFO of leftovers and
// retry; leftover runs are processed the same way. Every emitted vector is
// re-verified by evaluation to activate its whole group.
inline TestSet tarmac(const Netlist& n, double tau, int n_random,
                      std::uint64_t seed,
                      std::uint64_t decision_budget = default_decision_budget) {
  if (n_random < 1) throw ValidationError("random pool size must be positive");
  TestSet ts;
  ts.provenance.algorithm = "tarmac";
  ts.provenance.tau = tau;
  ts.provenance.seed = seed;
  ts.provenance.pool = n_random;

  RarenessReport rep = simulate_rareness(n, n_random, seed);
  std::vector<RareNode> nodes = rare_nodes(n, rep, tau);
  ts.provenance.rare = static_cast<int>(nodes.size());
  if (nodes.empty()) return ts;

  CompatGraph g = build_compat_graph(n, nodes, decision_budget);
  ts.provenance.queries = g.queries;
  ts.provenance.skipped = g.skipped;
  std::vector<std::vector<int>> cliques = clique_partition(g);
  ts.provenance.cliques = static_cast<int>(cliques.size());

  for (const std::vector<int>& clique : cliques) {
    std::vector<std::vector<int>> work{clique};
    std::size_t next = 0;
    while (next < work.size()) {
      std::vector<int> group = work[next++];
      std::vector<int> leftovers;
      bool emitted = false;
      while (!group.empty()) {
        std::vector<std::pair<NetId, int>> constraints;
        for (int idx : group)
          constraints.emplace_back(nodes[idx].net, nodes[idx].value);
        AssignOutcome res = check_assignable(n, constraints, decision_budget);
        if (res.status == SolveStatus::Sat) {
          auto vals = evaluate(n, res.vector);
          for (int idx : group)
            if (vals[nodes[idx].net] !=
                static_cast<std::uint8_t>(nodes[idx].value))
              throw InternalError("witness fails to activate net '" +
                                  n.net_name(nodes[idx].net) + "'");
          ts.vectors.push_back(std::move(res.vector));
          ++ts.provenance.groups;
          emitted = true;
          break;
        }
        // Joint query failed: peel the most recently added node off into
        // the leftover queue and retry the rest.
        leftovers.push_back(group.back());
        group.pop_back();
      }
      if (!emitted && !leftovers.empty()) {
        // The group ran dry, so the node just tested alone cannot reach its
        // rare value at all (constant net, or the budget gave out). Drop it;
        // requeueing it would spin forever.
        leftovers.pop_back();
      }
      if (!leftovers.empty()) work.push_back(std::move(leftovers));
    }
  }
  return ts;
}

// ---------------------------------------------------------------------------
// Serialization. Text: `#`-prefixed provenance header, then one bitstring
// per line in primary-input declaration order. JSON mirrors the same fields.

namespace detail {

inline std::string number_text(double x) {
  return nlohmann::json(x).dump();  // shortest round-trip form
}

inline void provenance_fields(
    const Provenance& p,
    const std::function<void(const std::string&, const std::string&)>& put) {
  put("algorithm", p.algorithm);
  put("tau", number_text(p.tau));
  if (p.algorithm == "mero") put("N", std::to_string(p.n_detect));
  put("seed", std::to_string(p.seed));
  put("pool", std::to_string(p.pool));
  put("rare", std::to_string(p.rare));
  if (p.algorithm == "mero") {
    put("unmet", std::to_string(p.unmet));
  } else if (p.algorithm == "tarmac") {
    put("cliques", std::to_string(p.cliques));
    put("groups", std::to_string(p.groups));
    put("queries", std::to_string(p.queries));
    put("skipped", std::to_string(p.skipped));
  }
}

}  // namespace detail

inline std::string test_set_text(const TestSet& ts, const Netlist& n) {
  std::ostringstream out;
  out << "# test set\n";
  detail::provenance_fields(ts.provenance,
                            [&](const std::string& k, const std::string& v) {
                              out << "# " << k << ": " << v << "\n";
                            });
  out << "# inputs:";
  for (NetId in : n.inputs()) out << " " << n.net_name(in);
  out << "\n";
  for (const TestVector& v : ts.vectors) out << vector_string(v) << "\n";
  return out.str();
}

inline nlohmann::ordered_json test_set_json(const TestSet& ts,
                                            const Netlist& n) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json prov;
  const Provenance& p = ts.provenance;
  prov["algorithm"] = p.algorithm;
  prov["tau"] = p.tau;
  if (p.algorithm == "mero") prov["N"] = p.n_detect;
  prov["seed"] = p.seed;
  prov["pool"] = p.pool;
  prov["rare"] = p.rare;
  if (p.algorithm == "mero") {
    prov["unmet"] = p.unmet;
  } else if (p.algorithm == "tarmac") {
    prov["cliques"] = p.cliques;
    prov["groups"] = p.groups;
    prov["queries"] = p.queries;
    prov["skipped"] = p.skipped;
  }
  j["provenance"] = std::move(prov);
  auto inputs = nlohmann::ordered_json::array();
  for (NetId in : n.inputs()) inputs.push_back(n.net_name(in));
  j["inputs"] = std::move(inputs);
  auto vectors = nlohmann::ordered_json::array();
  for (const TestVector& v : ts.vectors) vectors.push_back(vector_string(v));
  j["vectors"] = std::move(vectors);
  return j;
}

// Parses the text format back. Header keys it does not know are ignored;
// every non-comment, non-empty line must be a bitstring, all the same width.
inline TestSet parse_test_set_text(const std::string& text) {
  TestSet ts;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::size_t colon = line.find(':', first);
      if (colon == std::string::npos) continue;
      std::string key = line.substr(first + 1, colon - first - 1);
      std::string val = line.substr(colon + 1);
      auto trim = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t");
        std::size_t b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      key = trim(key);
      val = trim(val);
      try {
        if (key == "algorithm") ts.provenance.algorithm = val;
        else if (key == "tau") ts.provenance.tau = std::stod(val);
        else if (key == "N") ts.provenance.n_detect = std::stoi(val);
        else if (key == "seed") ts.provenance.seed = std::stoull(val);
        else if (key == "pool") ts.provenance.pool = std::stoi(val);
        else if (key == "rare") ts.provenance.rare = std::stoi(val);
        else if (key == "unmet") ts.provenance.unmet = std::stoi(val);
        else if (key == "cliques") ts.provenance.cliques = std::stoi(val);
        else if (key == "groups") ts.provenance.groups = std::stoi(val);
        else if (key == "queries") ts.provenance.queries = std::stoull(val);
        else if (key == "skipped") ts.provenance.skipped = std::stoull(val);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": bad value for '" + key + "': " + val);
      }
      continue;
    }
    TestVector v;
    for (char c : line.substr(first)) {
      if (c == '0' || c == '1')
        v.push_back(c == '1');
      else
        throw ParseError("line " + std::to_string(lineno) +
                         ": expected a bitstring, got '" + line + "'");
    }
    if (!ts.vectors.empty() && v.size() != ts.vectors.front().size())
      throw ParseError("line " + std::to_string(lineno) +
                       ": vector width differs from earlier lines");
    ts.vectors.push_back(std::move(v));
  }
  return ts;
}

}  // namespace raregate
