// Rare-trigger hardware Trojan modeling: sample feasible trigger
// conjunctions from a rareness report, splice trigger + payload circuitry
// into a golden netlist, and read/write golden/infected bundles.
//
// The threat model is combinational: a trigger is the AND of q rare-valued
// internal signals (q between 2 and 8), and the payload XORs the trigger
// onto the driver of one primary output. Attaching at an output driver makes
// trigger activation and output corruption coincide, so detection reduces to
// comparing primary outputs between the golden and infected designs.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "raregate/bench.hpp"
#include "raregate/core.hpp"
#include "raregate/netlist.hpp"
#include "raregate/rareness.hpp"
#include "raregate/rng.hpp"
#include "raregate/sat.hpp"

namespace raregate {

inline constexpr int min_trigger_width = 2;
inline constexpr int max_trigger_width = 8;

// Draws for trigger sampling come from a dedicated stream index far above
// anything the per-block simulation streams use for the same seed.
inline constexpr std::uint64_t trigger_stream = 1ull << 32;

struct Trigger {
  // (net, bit) pairs, sorted by net id; bit is the net's rare value.
  std::vector<std::pair<NetId, int>> literals;
  TestVector witness;  // one input assignment driving every literal

  int width() const { return static_cast<int>(literals.size()); }
};

struct TrojanInstance {
  Trigger trigger;
  NetId payload_net = null_net;  // output driver in the golden netlist
  Netlist golden;
  Netlist infected;
  TestVector witness;
};

namespace detail {

inline void check_trigger_shape(const Netlist& n, const Trigger& t) {
  int q = t.width();
  if (q < min_trigger_width || q > max_trigger_width)
    throw ValidationError("trigger width " + std::to_string(q) +
                          " outside supported range " +
                          std::to_string(min_trigger_width) + ".." +
                          std::to_string(max_trigger_width));
  std::set<NetId> seen;
  for (auto [net, bit] : t.literals) {
    if (net >= n.num_nets())
      throw ValidationError("trigger references unknown net id " +
                            std::to_string(net));
    if (bit != 0 && bit != 1)
      throw ValidationError("trigger bit for net '" + n.net_name(net) +
                            "' must be 0 or 1");
    if (!seen.insert(net).second)
      throw ValidationError("trigger lists net '" + n.net_name(net) +
                            "' more than once");
  }
}

}  // namespace detail

// Uniformly samples q-subsets of the sub-threshold signals in `report`
// (seeded, with replacement across draws but deduplicated), keeps those the
// SAT oracle proves jointly activatable, and stops after `count` feasible
// triggers or `budget` draws (default 50 per requested trigger).
inline std::vector<Trigger> sample_triggers(const Netlist& n,
                                            const RarenessReport& report,
                                            double tau, int q, int count,
                                            std::uint64_t seed,
                                            std::uint64_t budget = 0) {
  if (q < min_trigger_width || q > max_trigger_width)
    throw ValidationError("trigger width " + std::to_string(q) +
                          " outside supported range " +
                          std::to_string(min_trigger_width) + ".." +
                          std::to_string(max_trigger_width));
  if (count < 1) throw ValidationError("trigger count must be positive");

  std::vector<const SignalStat*> rare;
  for (const SignalStat& s : report.signals)
    if (s.omega < tau) rare.push_back(&s);
  if (rare.size() < static_cast<std::size_t>(q))
    throw ValidationError("only " + std::to_string(rare.size()) +
                          " signals are below threshold " + std::to_string(tau) +
                          "; need at least " + std::to_string(q) +
                          " for a trigger");

  if (budget == 0) budget = 50ull * static_cast<std::uint64_t>(count);
  Xoshiro256ss rng = seeded_stream(seed, trigger_stream);

  std::vector<Trigger> out;
  std::set<std::vector<NetId>> tried;
  std::vector<std::size_t> idx(rare.size());
  std::uint64_t draws = 0, infeasible = 0;
  while (out.size() < static_cast<std::size_t>(count) && draws < budget) {
    ++draws;
    // Partial Fisher-Yates: the first q slots are a uniform q-subset.
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (int i = 0; i < q; ++i) {
      std::size_t j = i + static_cast<std::size_t>(
                              rng.below(static_cast<std::uint64_t>(idx.size() - i)));
      std::swap(idx[i], idx[j]);
    }
    std::vector<NetId> nets;
    for (int i = 0; i < q; ++i) nets.push_back(rare[idx[i]]->net);
    std::sort(nets.begin(), nets.end());
    if (!tried.insert(nets).second) continue;

    Trigger t;
    std::vector<std::pair<NetId, int>> constraints;
    for (NetId net : nets) {
      auto it = std::find_if(rare.begin(), rare.end(),
                             [net](const SignalStat* s) { return s->net == net; });
      t.literals.emplace_back(net, (*it)->rare_value);
      constraints.emplace_back(net, (*it)->rare_value);
    }
    AssignOutcome res = check_assignable(n, constraints);
    if (res.status != SolveStatus::Sat) {
      ++infeasible;
      continue;
    }
    t.witness = std::move(res.vector);
    out.push_back(std::move(t));
  }
  if (out.empty())
    throw ValidationError(
        "no jointly activatable trigger found: " + std::to_string(draws) +
        " draws (" + std::to_string(infeasible) + " infeasible, " +
        std::to_string(draws - infeasible) + " duplicates) over " +
        std::to_string(rare.size()) + " rare signals");
  return out;
}

// Returns a copy of `n` where the primary output driven by `payload_net` is
// rewired to payload XOR trigger. The original driver keeps feeding any
// internal fanout under the name "<out>_pre"; the XOR takes the original
// output name, so the interface (input and output names, in order) is
// unchanged and the infected design matches the golden one on every input
// that leaves the trigger at 0.
inline Netlist insert(const Netlist& n, const Trigger& trigger,
                      NetId payload_net) {
  detail::check_trigger_shape(n, trigger);
  if (payload_net >= n.num_nets())
    throw ValidationError("payload net id " + std::to_string(payload_net) +
                          " does not exist");
  if (!n.has_gate(payload_net))
    throw ValidationError("payload net '" + n.net_name(payload_net) +
                          "' is not driven by a gate");
  if (!n.is_output(payload_net))
    throw ValidationError("payload net '" + n.net_name(payload_net) +
                          "' is not a primary output");
  for (auto [net, bit] : trigger.literals)
    if (net == payload_net)
      throw ValidationError("payload net '" + n.net_name(payload_net) +
                            "' cannot also be a trigger signal");

  std::string payload_name = n.net_name(payload_net);
  // Generated names must dodge both the original netlist and each other.
  std::set<std::string> used;
  auto fresh = [&](const std::string& base) {
    std::string cand = base;
    for (int k = 2; n.find(cand) || used.count(cand); ++k)
      cand = base + std::to_string(k);
    used.insert(cand);
    return cand;
  };
  std::string pre_name = fresh(payload_name + "_pre");

  NetlistBuilder b(n.name());
  std::vector<NetId> map(n.num_nets(), null_net);
  for (NetId in : n.inputs()) map[in] = b.add_input(n.net_name(in));
  for (NetId id : n.topo_order()) {
    if (!n.has_gate(id)) continue;
    const Gate& g = n.gate_of(id);
    std::vector<NetId> fanin;
    for (NetId f : g.fanin) fanin.push_back(map[f]);
    const std::string& out =
        (id == payload_net) ? pre_name : n.net_name(id);
    map[id] = b.add_gate(g.kind, std::move(fanin), g.neg_mask, out);
  }

  // Left-associated two-input AND chain over the trigger literals; a rare
  // value of 0 complements that fan-in.
  auto lit = [&](int i) { return map[trigger.literals[i].first]; };
  auto neg = [&](int i) {
    return trigger.literals[i].second == 0 ? 1u : 0u;
  };
  int q = trigger.width();
  NetId trig = b.add_gate(
      GateKind::And, {lit(0), lit(1)}, neg(0) | (neg(1) << 1),
      fresh(payload_name + (q == 2 ? "_trg" : "_trg1")));
  for (int i = 2; i < q; ++i) {
    std::string name = payload_name +
                       (i + 1 == q ? "_trg" : "_trg" + std::to_string(i));
    trig = b.add_gate(GateKind::And, {trig, lit(i)}, neg(i) << 1, fresh(name));
  }
  NetId xored = b.add_gate(GateKind::Xor, {map[payload_net], trig}, 0,
                           payload_name);
  for (NetId out : n.outputs())
    b.mark_output(out == payload_net ? xored : map[out]);
  return b.build();
}

inline TrojanInstance make_instance(const Netlist& golden,
                                    const Trigger& trigger, NetId payload_net) {
  TrojanInstance inst;
  inst.trigger = trigger;
  inst.payload_net = payload_net;
  inst.golden = golden;
  inst.infected = insert(golden, trigger, payload_net);
  inst.witness = trigger.witness;
  return inst;
}

// True iff some vector in `tests` drives different primary-output values on
// the two designs. Requires identical interfaces (input and output names, in
// declaration order).
inline bool is_detected(const Netlist& golden, const Netlist& infected,
                        const std::vector<TestVector>& tests) {
  auto names = [](const Netlist& n, const std::vector<NetId>& ids) {
    std::vector<std::string> out;
    for (NetId id : ids) out.push_back(n.net_name(id));
    return out;
  };
  if (names(golden, golden.inputs()) != names(infected, infected.inputs()) ||
      names(golden, golden.outputs()) != names(infected, infected.outputs()))
    throw ValidationError(
        "golden and infected netlists have different interfaces");
  for (const TestVector& v : tests)
    if (output_values(golden, v) != output_values(infected, v)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Bundle layout: <dir>/golden.bench, <dir>/infected_<k>.bench (1-based), and
// <dir>/trojans.json holding one record per instance:
//   [{"trigger": [{"net": name, "value": bit}, ...],
//     "payload": name, "witness": bitstring in input order}, ...]

inline std::string vector_string(const TestVector& v) {
  std::string s;
  for (std::uint8_t bit : v) s += bit ? '1' : '0';
  return s;
}

inline TestVector vector_from_string(const std::string& s) {
  TestVector v;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw ParseError("test vector must be a bitstring, got '" + s + "'");
    v.push_back(c == '1');
  }
  return v;
}

// `bench_header` is prepended to every .bench file (comment lines only, so
// the files still parse); trojans.json stays a bare record array.
inline void write_trojan_bundle(const std::string& dir,
                                const std::vector<TrojanInstance>& instances,
                                const std::string& bench_header = "") {
  if (instances.empty())
    throw ValidationError("cannot write an empty trojan bundle");
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto dump = [&](const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!f) throw ValidationError("cannot write " + p.string());
    f << text;
  };
  dump(fs::path(dir) / "golden.bench",
       bench_header + write_bench(instances[0].golden));
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const TrojanInstance& inst = instances[k];
    dump(fs::path(dir) / ("infected_" + std::to_string(k + 1) + ".bench"),
         bench_header + write_bench(inst.infected));
    nlohmann::ordered_json rec;
    rec["trigger"] = nlohmann::ordered_json::array();
    for (auto [net, bit] : inst.trigger.literals)
      rec["trigger"].push_back(
          {{"net", inst.golden.net_name(net)}, {"value", bit}});
    rec["payload"] = inst.golden.net_name(inst.payload_net);
    rec["witness"] = vector_string(inst.witness);
    records.push_back(std::move(rec));
  }
  dump(fs::path(dir) / "trojans.json", records.dump(2) + "\n");
}

inline std::vector<TrojanInstance> read_trojan_bundle(const std::string& dir) {
  namespace fs = std::filesystem;
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p);
    if (!f) throw ValidationError("cannot read " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  Netlist golden = parse_bench(slurp(fs::path(dir) / "golden.bench"), "golden");
  nlohmann::json records;
  try {
    records = nlohmann::json::parse(slurp(fs::path(dir) / "trojans.json"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("trojans.json: ") + e.what());
  }
  if (!records.is_array())
    throw ParseError("trojans.json must hold an array of trojan records");

  std::vector<TrojanInstance> out;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& rec = records[k];
    TrojanInstance inst;
    inst.golden = golden;
    std::string bench_name = "infected_" + std::to_string(k + 1);
    inst.infected =
        parse_bench(slurp(fs::path(dir) / (bench_name + ".bench")), bench_name);
    for (const auto& l : rec.at("trigger")) {
      std::string net = l.at("net").get<std::string>();
      auto id = golden.find(net);
      if (!id)
        throw ValidationError("trojans.json trigger net '" + net +
                              "' is not in the golden netlist");
      inst.trigger.literals.emplace_back(*id, l.at("value").get<int>());
    }
    std::string payload = rec.at("payload").get<std::string>();
    auto pid = golden.find(payload);
    if (!pid)
      throw ValidationError("trojans.json payload net '" + payload +
                            "' is not in the golden netlist");
    inst.payload_net = *pid;
    inst.witness = vector_from_string(rec.at("witness").get<std::string>());
    if (inst.witness.size() != golden.inputs().size())
      throw ValidationError("trojans.json witness arity mismatch for record " +
                            std::to_string(k + 1));
    inst.trigger.witness = inst.witness;
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace raregate
