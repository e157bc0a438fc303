// End-to-end trojan study on a 12-input circuit:
//   1. find the rare signals an attacker would conjoin into a trigger,
//   2. sample feasible triggers and insert output-flipping trojans,
//   3. generate detection tests two ways (statistical N-detect and
//      SAT-based clique activation),
//   4. score both test sets against the infected designs.
//
// Build:  cmake --build build --target demo_trojan_flow
// Run:    ./build/demo_trojan_flow

#include <cstdio>
#include <string>
#include <vector>

#include "raregate/raregate.hpp"

using namespace raregate;

namespace {

// Eight AND cones (R1..R8, each 1/8 likely to fire) feeding an OR chain.
// Any two cones can fire together, so two-signal triggers always have
// witnesses.
const char* desk_bench = R"(INPUT(x1)
INPUT(x2)
INPUT(x3)
INPUT(x4)
INPUT(x5)
INPUT(x6)
INPUT(x7)
INPUT(x8)
INPUT(x9)
INPUT(x10)
INPUT(x11)
INPUT(x12)
OUTPUT(Z)
t1 = AND(x1, x2)
t2 = AND(x4, x5)
t3 = AND(x7, x8)
t4 = AND(x10, x11)
t5 = AND(x2, x3)
t6 = AND(x5, x6)
t7 = AND(x8, x9)
t8 = AND(x11, x12)
R1 = AND(t1, x3)
R2 = AND(t2, x6)
R3 = AND(t3, x9)
R4 = AND(t4, x12)
R5 = AND(t5, x4)
R6 = AND(t6, x7)
R7 = AND(t7, x10)
R8 = AND(t8, x1)
o1 = OR(R1, R2)
o2 = OR(o1, R3)
o3 = OR(o2, R4)
o4 = OR(o3, R5)
o5 = OR(o4, R6)
o6 = OR(o5, R7)
Z = OR(o6, R8)
)";

}  // namespace

int main() {
  Netlist n = parse_bench(desk_bench, "desk");
  const double tau = 0.2;

  RarenessReport rep = itm_rareness(n);
  std::printf("circuit: %zu inputs, %zu gates\n", n.inputs().size(),
              gate_count(n));
  std::printf("signals with rareness below %.2f:\n", tau);
  for (const SignalStat& s : rep.signals)
    if (s.omega < tau)
      std::printf("  %-4s omega %s, rare value %d\n", s.name.c_str(),
                  trunc_display(s.omega, 4).c_str(), s.rare_value);

  // An attacker conjoins rare values: the trigger fires only when every
  // chosen signal sits at its rare value, so random tests almost never see
  // it. Each sampled trigger comes with a SAT witness proving it can fire.
  auto triggers = sample_triggers(n, rep, tau, /*q=*/2, /*count=*/5,
                                  default_seed);
  std::printf("\nsampled %zu two-signal triggers:\n", triggers.size());
  for (const Trigger& t : triggers) {
    std::printf(" ");
    for (auto [net, value] : t.literals)
      std::printf(" %s=%d", n.net_name(net).c_str(), value);
    std::printf("   witness %s\n", vector_string(t.witness).c_str());
  }

  // The payload XORs the trigger into an output, flipping it when armed.
  NetId payload = n.outputs()[0];
  std::vector<TrojanInstance> instances;
  for (const Trigger& t : triggers)
    instances.push_back(make_instance(n, t, payload));
  std::printf("\nfirst infected netlist (payload on %s):\n%s\n",
              n.net_name(payload).c_str(),
              write_bench(instances[0].infected).c_str());

  // Each trigger's witness exposes its own trojan by construction.
  for (const TrojanInstance& inst : instances)
    if (!is_detected(inst.golden, inst.infected, {inst.witness}))
      std::printf("BUG: witness failed to expose a trojan\n");

  // Two detection-test generators. N-detect drives each rare signal to its
  // rare value at least N times; clique activation asks a SAT solver which
  // rare signals can fire together and covers whole groups with one vector.
  TestSet by_ndetect = mero(n, tau, /*quota=*/3, /*n_random=*/1024,
                            default_seed);
  TestSet by_clique = tarmac(n, tau, /*n_random=*/1024, default_seed);

  std::printf("statistical N-detect: %zu vectors (quota %d, %d rare nodes, %d under quota)\n",
              by_ndetect.vectors.size(), by_ndetect.provenance.n_detect,
              by_ndetect.provenance.rare, by_ndetect.provenance.unmet);
  std::printf("clique activation:    %zu vectors (%llu pairwise queries, %d groups)\n",
              by_clique.vectors.size(),
              static_cast<unsigned long long>(by_clique.provenance.queries),
              by_clique.provenance.groups);

  CoverageReport cov_n = trojan_coverage(by_ndetect, instances);
  CoverageReport cov_c = trojan_coverage(by_clique, instances);
  std::printf("\ncoverage against %d trojans:\n", cov_n.total);
  std::printf("  %-22s %3zu vectors  %d/%d detected  coverage %.2f\n",
              "statistical N-detect", by_ndetect.vectors.size(),
              cov_n.detected, cov_n.total, cov_n.coverage);
  std::printf("  %-22s %3zu vectors  %d/%d detected  coverage %.2f\n",
              "clique activation", by_clique.vectors.size(), cov_c.detected,
              cov_c.total, cov_c.coverage);
  return 0;
}
