// Command-line front end. Subcommands wire the library into the full flows:
//
//   analyze   rareness report for a netlist or expression
//   optimize  rareness-aware area optimization, emits stats + BENCH
//   inject    sample feasible rare triggers and write a trojan bundle
//   gentest   mero / tarmac test generation
//   evaluate  trojan coverage of a test set against a bundle
//   compare   before/after metric deltas for two designs
//
// Reproducibility rules: the seed defaults to a fixed constant (and
// `--seed random` prints the drawn seed on stderr for replay), every file
// artifact carries a provenance header naming the tool version and a hash of
// the effective configuration, and rerunning any command with identical
// arguments produces byte-identical output. `--threads` never affects
// results, only wall time, so it stays out of the config hash.
//
// Exit codes: 0 success, 2 usage or input error, 3 capacity limit exceeded,
// 4 internal invariant violation.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "raregate/bench.hpp"
#include "raregate/core.hpp"
#include "raregate/evaluator.hpp"
#include "raregate/expr.hpp"
#include "raregate/netlist.hpp"
#include "raregate/optimizer.hpp"
#include "raregate/rareness.hpp"
#include "raregate/testgen.hpp"
#include "raregate/trojan.hpp"

namespace raregate {

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) out[i] = digits[x & 0xf];
  return out;
}

inline std::string slurp_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw ValidationError("cannot write " + out_path);
  f << content;
}

inline std::string stem_of(const std::string& path) {
  std::string stem = std::filesystem::path(path).stem().string();
  return stem.empty() ? path : stem;
}

// Input selection shared by the design-consuming commands.
struct DesignInput {
  std::string netlist_path;
  std::string expr;
  std::string expr_name = "X";

  Netlist load() const {
    if (!expr.empty()) return parse_expr(expr_name, expr);
    if (netlist_path.empty())
      throw ValidationError("provide --netlist FILE or --expr EXPRESSION");
    return parse_bench(slurp_file(netlist_path), stem_of(netlist_path));
  }

  std::string config_piece() const {
    return "netlist=" + netlist_path + "|expr=" + expr + "|name=" + expr_name;
  }
};

inline void add_design_options(CLI::App* cmd, DesignInput& in) {
  auto* n = cmd->add_option("--netlist", in.netlist_path,
                            "BENCH netlist file to analyze");
  auto* e = cmd->add_option("--expr", in.expr,
                            "boolean expression instead of a netlist file");
  cmd->add_option("--name", in.expr_name,
                  "output net name for --expr (default X)");
  n->excludes(e);
}

inline void check_tau(double tau) {
  if (!(tau > 0.0) || tau > 0.5)
    throw ValidationError("--tau must lie in (0, 0.5]");
}

inline std::uint64_t resolve_seed(const std::string& text) {
  if (text == "random") {
    std::random_device rd;
    std::uint64_t seed =
        (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed: " << seed << "\n";
    return seed;
  }
  try {
    std::size_t pos = 0;
    std::uint64_t seed = std::stoull(text, &pos, 0);
    if (pos != text.size()) throw std::invalid_argument(text);
    return seed;
  } catch (const std::exception&) {
    throw ValidationError("--seed must be an unsigned integer or 'random'");
  }
}

inline RarenessReport make_report(const Netlist& n, const std::string& method,
                                  int vectors, std::uint64_t seed,
                                  int threads) {
  if (method == "itm") return itm_rareness(n);
  if (method == "exact") return exact_rareness(n, threads);
  if (vectors < 1)
    throw ValidationError("--vectors must be at least 1");
  return simulate_rareness(n, static_cast<std::uint64_t>(vectors), seed,
                           threads);
}

inline nlohmann::ordered_json tool_provenance(std::uint64_t config_hash) {
  nlohmann::ordered_json j;
  j["tool"] = std::string("raregate ") + version;
  j["config"] = hex16(config_hash);
  return j;
}

inline std::string text_header(std::uint64_t config_hash) {
  return std::string("# raregate ") + version +
         "\n# config: " + hex16(config_hash) + "\n";
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args) {
  using detail::number_text;

  CLI::App app{
      "gate-level signal rareness: analysis, area optimization, trojan "
      "insertion, and detection-test generation"};
  app.require_subcommand(1);

  // ---- analyze ----
  detail::DesignInput an_in;
  std::string an_method = "itm", an_seed = std::to_string(default_seed),
              an_out;
  int an_vectors = 10000, an_threads = 1;
  double an_tau = 0.2;
  bool an_inclusive = false;
  std::size_t an_topn = 0;
  CLI::App* analyze = app.add_subcommand("analyze", "compute a rareness report");
  detail::add_design_options(analyze, an_in);
  analyze->add_option("--method", an_method, "itm, exact, or sim")
      ->check(CLI::IsMember({"itm", "exact", "sim"}));
  analyze->add_option("--vectors", an_vectors, "random vectors for --method sim");
  analyze->add_option("--tau", an_tau, "rareness threshold in (0, 0.5]");
  analyze->add_flag("--inclusive", an_inclusive,
                    "count signals with omega <= tau instead of strict <");
  analyze->add_option("--top-n", an_topn, "rarest-signal count for the mean");
  analyze->add_option("--seed", an_seed, "unsigned integer or 'random'");
  analyze->add_option("--threads", an_threads, "worker threads");
  analyze->add_option("--out", an_out, "output file (default stdout)");

  // ---- optimize ----
  detail::DesignInput op_in;
  std::string op_out, op_bench_out;
  double op_tau = 0.2;
  bool op_inclusive = false;
  CLI::App* optimize =
      app.add_subcommand("optimize", "rareness-aware area optimization");
  detail::add_design_options(optimize, op_in);
  optimize->add_option("--tau", op_tau, "rareness threshold in (0, 0.5]");
  optimize->add_flag("--inclusive", op_inclusive,
                     "count signals with omega <= tau instead of strict <");
  optimize->add_option("--out", op_out, "JSON output file (default stdout)");
  optimize->add_option("--bench-out", op_bench_out,
                       "also write the optimized netlist as BENCH");

  // ---- inject ----
  detail::DesignInput in_in;
  std::string in_method = "sim", in_seed = std::to_string(default_seed),
              in_out, in_payload;
  int in_vectors = 10000, in_threads = 1, in_q = 4, in_count = 1;
  double in_tau = 0.2;
  CLI::App* inject =
      app.add_subcommand("inject", "sample triggers and write a trojan bundle");
  detail::add_design_options(inject, in_in);
  inject->add_option("--method", in_method, "itm, exact, or sim")
      ->check(CLI::IsMember({"itm", "exact", "sim"}));
  inject->add_option("--vectors", in_vectors, "random vectors for --method sim");
  inject->add_option("--tau", in_tau, "rareness threshold in (0, 0.5]");
  inject->add_option("--q", in_q, "trigger width (2..8)");
  inject->add_option("--count", in_count, "trojans to insert");
  inject->add_option("--payload", in_payload,
                     "payload output net (default: first gate-driven output)");
  inject->add_option("--seed", in_seed, "unsigned integer or 'random'");
  inject->add_option("--threads", in_threads, "worker threads");
  inject->add_option("--out", in_out, "bundle directory")->required();

  // ---- gentest ----
  detail::DesignInput gt_in;
  std::string gt_algo, gt_seed = std::to_string(default_seed), gt_out,
              gt_format = "text";
  int gt_vectors = 10000, gt_n = 1000;
  double gt_tau = 0.2;
  CLI::App* gentest =
      app.add_subcommand("gentest", "generate trojan-detection tests");
  detail::add_design_options(gentest, gt_in);
  gentest->add_option("--algo", gt_algo, "mero or tarmac")
      ->required()
      ->check(CLI::IsMember({"mero", "tarmac"}));
  gentest->add_option("--tau", gt_tau, "rareness threshold in (0, 0.5]");
  gentest->add_option("--N", gt_n, "activation quota per rare node (mero)");
  gentest->add_option("--vectors", gt_vectors, "random-pool size");
  gentest->add_option("--seed", gt_seed, "unsigned integer or 'random'");
  gentest->add_option("--format", gt_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  gentest->add_option("--out", gt_out, "output file (default stdout)");

  // ---- evaluate ----
  std::string ev_bundle, ev_tests, ev_format = "json", ev_out;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "coverage of a test set against a bundle");
  evaluate->add_option("--bundle", ev_bundle, "trojan bundle directory")
      ->required();
  evaluate->add_option("--tests", ev_tests, "test-set file (text format)")
      ->required();
  evaluate->add_option("--format", ev_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  evaluate->add_option("--out", ev_out, "output file (default stdout)");

  // ---- compare ----
  std::string cp_base, cp_base_expr, cp_var, cp_var_expr;
  std::string cp_method = "itm", cp_seed = std::to_string(default_seed),
              cp_format = "json", cp_out;
  int cp_vectors = 10000, cp_threads = 1;
  double cp_tau = 0.2, cp_base_cov = 0.0, cp_var_cov = 0.0;
  bool cp_inclusive = false;
  std::size_t cp_topn = 0;
  CLI::App* cmp =
      app.add_subcommand("compare", "metric deltas between two designs");
  auto* cb = cmp->add_option("--baseline", cp_base, "baseline BENCH file");
  auto* cbe = cmp->add_option("--baseline-expr", cp_base_expr,
                              "baseline boolean expression");
  auto* cv = cmp->add_option("--variant", cp_var, "variant BENCH file");
  auto* cve =
      cmp->add_option("--variant-expr", cp_var_expr, "variant boolean expression");
  cb->excludes(cbe);
  cv->excludes(cve);
  cmp->add_option("--method", cp_method, "itm, exact, or sim")
      ->check(CLI::IsMember({"itm", "exact", "sim"}));
  cmp->add_option("--vectors", cp_vectors, "random vectors for --method sim");
  cmp->add_option("--tau", cp_tau, "rareness threshold in (0, 0.5]");
  cmp->add_flag("--inclusive", cp_inclusive,
                "count signals with omega <= tau instead of strict <");
  cmp->add_option("--top-n", cp_topn, "rarest-signal count for the mean");
  cmp->add_option("--seed", cp_seed, "unsigned integer or 'random'");
  cmp->add_option("--threads", cp_threads, "worker threads");
  auto* cbc = cmp->add_option("--baseline-coverage", cp_base_cov,
                              "optional coverage figure for the baseline");
  auto* cvc = cmp->add_option("--variant-coverage", cp_var_cov,
                              "optional coverage figure for the variant");
  cmp->add_option("--format", cp_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmp->add_option("--out", cp_out, "output file (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) {
      detail::check_tau(an_tau);
      Netlist n = an_in.load();
      std::uint64_t seed = detail::resolve_seed(an_seed);
      RarenessReport rep =
          detail::make_report(n, an_method, an_vectors, seed, an_threads);
      std::uint64_t hash = detail::fnv1a64(
          "analyze|" + an_in.config_piece() + "|method=" + an_method +
          "|vectors=" + std::to_string(an_vectors) +
          "|tau=" + number_text(an_tau) +
          "|strict=" + (an_inclusive ? "0" : "1") +
          "|top_n=" + std::to_string(an_topn) +
          "|seed=" + std::to_string(seed));
      nlohmann::ordered_json out;
      out["provenance"] = detail::tool_provenance(hash);
      out["report"] = report_json(rep, an_tau, !an_inclusive, an_topn);
      detail::emit(an_out, out.dump(2) + "\n");
    } else if (optimize->parsed()) {
      detail::check_tau(op_tau);
      Netlist n = op_in.load();
      OptimizeResult r = optimize_area(n, op_tau, !op_inclusive);
      std::uint64_t hash = detail::fnv1a64(
          "optimize|" + op_in.config_piece() + "|tau=" + number_text(op_tau) +
          "|strict=" + (op_inclusive ? "0" : "1"));
      std::string bench = write_bench(r.netlist);
      nlohmann::ordered_json out;
      out["provenance"] = detail::tool_provenance(hash);
      out["stats"] = stats_json(r.stats);
      out["bench"] = bench;
      detail::emit(op_out, out.dump(2) + "\n");
      if (!op_bench_out.empty())
        detail::emit(op_bench_out, detail::text_header(hash) + bench);
    } else if (inject->parsed()) {
      detail::check_tau(in_tau);
      Netlist n = in_in.load();
      std::uint64_t seed = detail::resolve_seed(in_seed);
      RarenessReport rep =
          detail::make_report(n, in_method, in_vectors, seed, in_threads);
      auto triggers = sample_triggers(n, rep, in_tau, in_q, in_count, seed);
      NetId payload = null_net;
      if (!in_payload.empty()) {
        auto id = n.find(in_payload);
        if (!id)
          throw ValidationError("--payload net '" + in_payload +
                                "' is not in the netlist");
        payload = *id;
      } else {
        for (NetId out_net : n.outputs())
          if (n.has_gate(out_net)) {
            payload = out_net;
            break;
          }
        if (payload == null_net)
          throw ValidationError("no gate-driven primary output to attack");
      }
      std::vector<TrojanInstance> instances;
      for (const Trigger& t : triggers)
        instances.push_back(make_instance(n, t, payload));
      std::uint64_t hash = detail::fnv1a64(
          "inject|" + in_in.config_piece() + "|method=" + in_method +
          "|vectors=" + std::to_string(in_vectors) +
          "|tau=" + number_text(in_tau) + "|q=" + std::to_string(in_q) +
          "|count=" + std::to_string(in_count) + "|payload=" + in_payload +
          "|seed=" + std::to_string(seed));
      write_trojan_bundle(in_out, instances, detail::text_header(hash));
      std::cout << "wrote " << instances.size() << " trojan(s) to " << in_out
                << "\n";
    } else if (gentest->parsed()) {
      detail::check_tau(gt_tau);
      Netlist n = gt_in.load();
      std::uint64_t seed = detail::resolve_seed(gt_seed);
      TestSet ts = gt_algo == "mero" ? mero(n, gt_tau, gt_n, gt_vectors, seed)
                                     : tarmac(n, gt_tau, gt_vectors, seed);
      std::uint64_t hash = detail::fnv1a64(
          "gentest|" + gt_in.config_piece() + "|algo=" + gt_algo +
          "|tau=" + number_text(gt_tau) + "|N=" + std::to_string(gt_n) +
          "|vectors=" + std::to_string(gt_vectors) +
          "|seed=" + std::to_string(seed) + "|format=" + gt_format);
      if (gt_format == "text") {
        detail::emit(gt_out, detail::text_header(hash) + test_set_text(ts, n));
      } else {
        nlohmann::ordered_json out;
        out["provenance"] = detail::tool_provenance(hash);
        out["test_set"] = test_set_json(ts, n);
        detail::emit(gt_out, out.dump(2) + "\n");
      }
    } else if (evaluate->parsed()) {
      auto instances = read_trojan_bundle(ev_bundle);
      TestSet ts = parse_test_set_text(detail::slurp_file(ev_tests));
      CoverageReport rep = trojan_coverage(ts, instances);
      std::uint64_t hash =
          detail::fnv1a64("evaluate|bundle=" + ev_bundle + "|tests=" +
                          ev_tests + "|format=" + ev_format);
      if (ev_format == "json") {
        nlohmann::ordered_json out;
        out["provenance"] = detail::tool_provenance(hash);
        out["coverage"] = coverage_json(rep);
        detail::emit(ev_out, out.dump(2) + "\n");
      } else {
        detail::emit(ev_out, detail::text_header(hash) +
                                 coverage_csv_header() + "\n" +
                                 coverage_csv_row(rep) + "\n");
      }
    } else if (cmp->parsed()) {
      detail::check_tau(cp_tau);
      detail::DesignInput base_in{cp_base, cp_base_expr, "X"};
      detail::DesignInput var_in{cp_var, cp_var_expr, "X"};
      Netlist base = base_in.load();
      Netlist variant = var_in.load();
      std::uint64_t seed = detail::resolve_seed(cp_seed);
      RarenessReport rb =
          detail::make_report(base, cp_method, cp_vectors, seed, cp_threads);
      RarenessReport rv = detail::make_report(variant, cp_method, cp_vectors,
                                              seed, cp_threads);
      std::string base_name = cp_base.empty() ? "baseline" : base.name();
      std::string var_name = cp_var.empty() ? "variant" : variant.name();
      AnalysisBundle bb =
          make_bundle(base_name, base, rb, cp_tau, !cp_inclusive, cp_topn,
                      cbc->count() ? std::optional<double>(cp_base_cov)
                                   : std::nullopt);
      AnalysisBundle vb =
          make_bundle(var_name, variant, rv, cp_tau, !cp_inclusive,
                      cp_topn,
                      cvc->count() ? std::optional<double>(cp_var_cov)
                                   : std::nullopt);
      ComparisonReport rep = compare(bb, vb);
      std::uint64_t hash = detail::fnv1a64(
          "compare|base=" + cp_base + "|base_expr=" + cp_base_expr +
          "|var=" + cp_var + "|var_expr=" + cp_var_expr +
          "|method=" + cp_method + "|vectors=" + std::to_string(cp_vectors) +
          "|tau=" + number_text(cp_tau) +
          "|strict=" + (cp_inclusive ? "0" : "1") +
          "|top_n=" + std::to_string(cp_topn) +
          "|seed=" + std::to_string(seed) + "|format=" + cp_format);
      if (cp_format == "json") {
        nlohmann::ordered_json out;
        out["provenance"] = detail::tool_provenance(hash);
        out["comparison"] = comparison_json(rep);
        detail::emit(cp_out, out.dump(2) + "\n");
      } else {
        detail::emit(cp_out, detail::text_header(hash) +
                                 comparison_csv_header() + "\n" +
                                 comparison_csv_row(rep) + "\n");
      }
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

inline int run_cli(int argc, const char* const* argv) {
  return run_cli(std::vector<std::string>(argv, argv + argc));
}

}  // namespace raregate
