// ness_cli: measure, scan, identities, fh-validate.
// Exit codes: 0 success, 1 configuration error, 2 numeric failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ness/harness/config.hpp"
#include "ness/harness/csv.hpp"
#include "ness/harness/fh_validate.hpp"
#include "ness/harness/identities.hpp"
#include "ness/harness/scan.hpp"

namespace {

using namespace ness;
using namespace ness::harness;

constexpr int kConfigError = 1;
constexpr int kNumericFailure = 2;

/// Stream to a file when a path is given, stdout otherwise.
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw ConfigError("cannot open output file '" + path + "'");
    os = &file;
  }
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int cmd_measure(const std::string& path, std::optional<double> at, const std::string& out) {
  ExperimentConfig cfg = load_config(path);
  const double x = at.value_or(cfg.grid.front());
  cfg.grid = {x};
  cfg.fit.enabled = false;
  cfg.threads = 1;
  cfg.validate();
  const Geometry g = cfg.geometry.at(x);
  const auto res = run_scan(cfg);
  json j;
  j["scan_value"] = x;
  j["geometry"] = {{"m0", g.m0}, {"d_left", g.d_left}, {"ell_left", g.ell_left},
                   {"d_right", g.d_right}, {"ell_right", g.ell_right}};
  j["mode"] = cfg.mode == CorrelationMode::LongRange ? "longrange" : "full";
  j["measures"] = json::array();
  for (const auto& r : res.rows) {
    json m = {{"measure", r.measure.label()}, {"n", r.measure.n}, {"numeric", number_or_null(r.numeric)},
              {"lin_term", number_or_null(r.lin_term)}, {"log_term", number_or_null(r.log_term)}};
    if (r.has_analytic() && !r.failed()) m["numeric_minus_analytic"] = r.numeric - r.lin_term - r.log_term;
    if (!r.flag().empty()) m["flag"] = r.flag();
    j["measures"].push_back(m);
  }
  Sink sink(out);
  *sink.os << j.dump(2) << '\n';
  return res.failed_rows ? kNumericFailure : 0;
}

int cmd_scan(const std::string& path, std::string out, std::optional<unsigned> threads) {
  ExperimentConfig cfg = load_config(path);
  if (threads) cfg.threads = *threads;
  if (out.empty()) out = cfg.output;
  Sink sink(out);
  const auto res = run_scan(cfg);
  write_scan_csv(*sink.os, res.rows);
  if (res.failed_rows) {
    std::cerr << "scan: " << res.failed_rows << " row(s) failed; see the flag column\n";
    return kNumericFailure;
  }
  return 0;
}

int cmd_identities(bool as_json, bool verbose, const std::string& out) {
  const auto rep = run_identities();
  Sink sink(out);
  if (as_json) {
    json j;
    j["passed"] = rep.all_passed();
    for (const auto& s : rep.summary())
      j["summary"].push_back({{"identity", s.identity}, {"rows", s.count}, {"max_residual", s.max_residual},
                              {"passed", s.passed}});
    if (verbose)
      for (const auto& e : rep.entries)
        j["entries"].push_back({{"identity", e.identity}, {"n", e.n}, {"T", e.T}, {"residual", e.residual},
                                {"tolerance", e.tolerance}, {"passed", e.passed}});
    *sink.os << j.dump(2) << '\n';
  } else {
    write_identity_report(*sink.os, rep, verbose);
  }
  return rep.all_passed() ? 0 : kNumericFailure;
}

int cmd_fh_validate(double T, const std::vector<std::size_t>& sizes, const std::string& out) {
  FhValidateConfig cfg;
  cfg.transmission = T;
  if (!sizes.empty()) cfg.sizes = sizes;
  if (!(T > 0.0 && T < 1.0)) throw ConfigError("fh-validate: transmission must lie in (0, 1)");
  if (cfg.sizes.size() < 2) throw ConfigError("fh-validate: need at least two sizes");
  Sink sink(out);
  write_fh_csv(*sink.os, run_fh_validate(cfg));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlations across a biased impurity: numerics and asymptotics"};
  app.require_subcommand(1);

  std::string config_path, out;
  std::optional<double> at;
  std::optional<unsigned> threads;
  bool as_json = false, verbose = false;
  double fh_T = 0.5;
  std::vector<std::size_t> fh_sizes;

  auto* measure = app.add_subcommand("measure", "Evaluate one configuration and print JSON");
  measure->add_option("config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
  measure->add_option("--at", at, "Scan value to evaluate (default: first grid value)");
  measure->add_option("-o,--output", out, "Output file (default: stdout)");

  auto* scan = app.add_subcommand("scan", "Run a parameter scan and write CSV");
  scan->add_option("config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
  scan->add_option("-o,--output", out, "Output file (default: config 'output', else stdout)");
  scan->add_option("-j,--threads", threads, "Worker threads (0: all cores)");

  auto* ident = app.add_subcommand("identities", "Run the identity suite");
  ident->add_flag("--json", as_json, "Emit JSON instead of text");
  ident->add_flag("-v,--verbose", verbose, "List every entry");
  ident->add_option("-o,--output", out, "Output file (default: stdout)");

  auto* fh = app.add_subcommand("fh-validate", "Exact vs Fisher-Hartwig log-determinants, CSV");
  fh->add_option("-T,--transmission", fh_T, "Transmission probability")->capture_default_str();
  fh->add_option("-M,--sizes", fh_sizes, "Matrix sizes (default: 256 512 1024)");
  fh->add_option("-o,--output", out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*measure) return cmd_measure(config_path, at, out);
    if (*scan) return cmd_scan(config_path, out, threads);
    if (*ident) return cmd_identities(as_json, verbose, out);
    if (*fh) return cmd_fh_validate(fh_T, fh_sizes, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return 0;
}
