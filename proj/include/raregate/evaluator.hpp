// Coverage computation and before/after comparison reports.
//
// Coverage is the logic-testing ratio: the fraction of inserted Trojans for
// which some test vector makes golden and infected primary outputs differ.
// Comparisons pair two analyses taken under identical metric settings and
// derive the area / rareness / coverage deltas from them on the spot, so a
// report can never carry deltas inconsistent with its endpoints.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "raregate/core.hpp"
#include "raregate/format.hpp"
#include "raregate/netlist.hpp"
#include "raregate/rareness.hpp"
#include "raregate/testgen.hpp"
#include "raregate/trojan.hpp"

namespace raregate {

struct CoverageReport {
  int total = 0;
  int detected = 0;
  double coverage = 0.0;                // detected / total
  std::vector<std::uint8_t> per_trojan; // detection flag per instance, in order
  Provenance provenance;                // carried over from the test set
};

inline CoverageReport trojan_coverage(const TestSet& tests,
                                      const std::vector<TrojanInstance>& trojans) {
  if (trojans.empty())
    throw ValidationError("coverage needs at least one trojan instance");
  CoverageReport rep;
  rep.total = static_cast<int>(trojans.size());
  rep.provenance = tests.provenance;
  for (const TrojanInstance& inst : trojans) {
    bool hit = is_detected(inst.golden, inst.infected, tests.vectors);
    rep.per_trojan.push_back(hit);
    rep.detected += hit;
  }
  rep.coverage = static_cast<double>(rep.detected) / rep.total;
  return rep;
}

// One side of a comparison: a design analyzed at fixed metric settings.
struct AnalysisBundle {
  std::string name;
  int area = 0;  // gate count
  RarenessReport report;
  MetricSummary metrics{};
  std::size_t top_n = 0;  // as requested (0 = all); metrics.top_n is resolved
  std::optional<double> coverage;  // optional, e.g. from trojan_coverage
};

inline AnalysisBundle make_bundle(const std::string& name, const Netlist& n,
                                  const RarenessReport& report, double tau,
                                  bool strict = true, std::size_t top_n = 0,
                                  std::optional<double> coverage = std::nullopt) {
  AnalysisBundle b;
  b.name = name;
  b.area = gate_count(n);
  b.report = report;
  b.metrics = metrics_of(report, tau, strict, top_n);
  b.top_n = top_n;
  b.coverage = coverage;
  return b;
}

struct ComparisonReport {
  AnalysisBundle baseline;
  AnalysisBundle variant;
  // Deltas, derived from the two bundles by compare():
  double area_drop_pct = 0.0;              // 100 * (before - after) / before
  long long rho_drop = 0;                  // rho_before - rho_after
  std::optional<double> rho_drop_pct;      // undefined when rho_before == 0
  double d_mu_all = 0.0;                   // variant - baseline
  double d_mu_top = 0.0;                   // variant - baseline, n rarest
};

inline ComparisonReport compare(const AnalysisBundle& baseline,
                                const AnalysisBundle& variant) {
  const MetricSummary& mb = baseline.metrics;
  const MetricSummary& mv = variant.metrics;
  if (mb.tau != mv.tau || mb.strict != mv.strict ||
      baseline.top_n != variant.top_n)
    throw ValidationError(
        "comparison requires identical metric settings (tau, strict, top-n)");
  ComparisonReport rep;
  rep.baseline = baseline;
  rep.variant = variant;
  rep.area_drop_pct =
      baseline.area > 0
          ? 100.0 * (baseline.area - variant.area) / baseline.area
          : 0.0;
  rep.rho_drop = static_cast<long long>(mb.rho) - static_cast<long long>(mv.rho);
  if (mb.rho > 0)
    rep.rho_drop_pct = 100.0 * static_cast<double>(rep.rho_drop) /
                       static_cast<double>(mb.rho);
  else if (mv.rho == 0)
    rep.rho_drop_pct = 0.0;  // 0 -> 0: nothing to drop, nothing gained
  rep.d_mu_all = mv.mu_all - mb.mu_all;
  rep.d_mu_top = mv.mu_top - mb.mu_top;
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json coverage_json(const CoverageReport& rep) {
  nlohmann::ordered_json j;
  j["total"] = rep.total;
  j["detected"] = rep.detected;
  j["coverage"] = rep.coverage;
  auto flags = nlohmann::ordered_json::array();
  for (std::uint8_t f : rep.per_trojan) flags.push_back(static_cast<bool>(f));
  j["per_trojan"] = std::move(flags);
  nlohmann::ordered_json prov;
  prov["algorithm"] = rep.provenance.algorithm;
  prov["tau"] = rep.provenance.tau;
  prov["seed"] = rep.provenance.seed;
  prov["vectors_pool"] = rep.provenance.pool;
  j["test_provenance"] = std::move(prov);
  return j;
}

inline std::string coverage_csv_header() {
  return "algorithm,tau,seed,total,detected,coverage";
}

inline std::string coverage_csv_row(const CoverageReport& rep) {
  std::string row = rep.provenance.algorithm;
  row += "," + detail::number_text(rep.provenance.tau);
  row += "," + std::to_string(rep.provenance.seed);
  row += "," + std::to_string(rep.total);
  row += "," + std::to_string(rep.detected);
  row += "," + detail::number_text(rep.coverage);
  return row;
}

namespace detail {

inline nlohmann::ordered_json bundle_json(const AnalysisBundle& b) {
  nlohmann::ordered_json j;
  j["name"] = b.name;
  j["area"] = b.area;
  j["omega_min"] = b.metrics.omega_min;
  j["mu_all"] = b.metrics.mu_all;
  j["mu_top"] = b.metrics.mu_top;
  j["top_n"] = b.metrics.top_n;
  j["rho"] = b.metrics.rho;
  if (b.coverage)
    j["coverage"] = *b.coverage;
  else
    j["coverage"] = nullptr;
  // Two-decimal truncated strings, the table-comparison convention.
  nlohmann::ordered_json disp;
  disp["omega_min"] = trunc_display(b.metrics.omega_min, 2);
  disp["mu_all"] = trunc_display(b.metrics.mu_all, 2);
  disp["mu_top"] = trunc_display(b.metrics.mu_top, 2);
  j["display"] = std::move(disp);
  return j;
}

}  // namespace detail

inline nlohmann::ordered_json comparison_json(const ComparisonReport& rep) {
  nlohmann::ordered_json j;
  j["tau"] = rep.baseline.metrics.tau;
  j["strict"] = rep.baseline.metrics.strict;
  j["baseline"] = detail::bundle_json(rep.baseline);
  j["variant"] = detail::bundle_json(rep.variant);
  nlohmann::ordered_json d;
  d["area_drop_pct"] = rep.area_drop_pct;
  d["rho_drop"] = rep.rho_drop;
  if (rep.rho_drop_pct)
    d["rho_drop_pct"] = *rep.rho_drop_pct;
  else
    d["rho_drop_pct"] = nullptr;
  d["d_mu_all"] = rep.d_mu_all;
  d["d_mu_top"] = rep.d_mu_top;
  j["deltas"] = std::move(d);
  return j;
}

inline std::string comparison_csv_header() {
  return "baseline,variant,area_before,area_after,area_drop_pct,"
         "omega_min_before,omega_min_after,rho_before,rho_after,rho_drop,"
         "mu_all_before,mu_all_after,d_mu_all,mu_top_before,mu_top_after,"
         "d_mu_top,coverage_before,coverage_after";
}

inline std::string comparison_csv_row(const ComparisonReport& rep) {
  using detail::number_text;
  const MetricSummary& mb = rep.baseline.metrics;
  const MetricSummary& mv = rep.variant.metrics;
  std::string row = rep.baseline.name + "," + rep.variant.name;
  row += "," + std::to_string(rep.baseline.area);
  row += "," + std::to_string(rep.variant.area);
  row += "," + number_text(rep.area_drop_pct);
  row += "," + number_text(mb.omega_min);
  row += "," + number_text(mv.omega_min);
  row += "," + std::to_string(mb.rho);
  row += "," + std::to_string(mv.rho);
  row += "," + std::to_string(rep.rho_drop);
  row += "," + number_text(mb.mu_all);
  row += "," + number_text(mv.mu_all);
  row += "," + number_text(rep.d_mu_all);
  row += "," + number_text(mb.mu_top);
  row += "," + number_text(mv.mu_top);
  row += "," + number_text(rep.d_mu_top);
  row += ",";
  if (rep.baseline.coverage) row += number_text(*rep.baseline.coverage);
  row += ",";
  if (rep.variant.coverage) row += number_text(*rep.variant.coverage);
  return row;
}

}  // namespace raregate
