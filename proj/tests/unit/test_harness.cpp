#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ness/harness/config.hpp"
#include "ness/harness/csv.hpp"
#include "ness/harness/fh_validate.hpp"
#include "ness/harness/fit.hpp"
#include "ness/harness/identities.hpp"
#include "ness/harness/scan.hpp"

using namespace ness;
using namespace ness::harness;

namespace {

json base_config() {
  return json::parse(R"({
    "model": {"type": "single_site", "onsite_energy": 1.0},
    "bias": {"k_fermi_left": 1.7707963267948966, "k_fermi_right": 1.5707963267948966},
    "geometry": {"base_distance": 1000, "scan": "length"},
    "grid": [8, 12, 16, 20],
    "measures": ["MI", "MI_2"],
    "threads": 1
  })");
}

std::string csv_of(const ScanResult& r) {
  std::ostringstream os;
  write_scan_csv(os, r.rows);
  return os.str();
}

}  // namespace

TEST(Config, ParsesDefaultsAndExpansions) {
  auto j = base_config();
  j["measures"] = {"S_n", "E_n", "MI_3", "E"};
  j["n_values"] = {2, 4};
  j["grid"] = {{"range", {{"start", 10}, {"stop", 20}, {"step", 5}}}};
  const auto c = parse_config(j);
  ASSERT_EQ(c.measures.size(), 6u);
  EXPECT_EQ(c.measures[0].label(), "S_2");
  EXPECT_EQ(c.measures[1].label(), "S_4");
  EXPECT_EQ(c.measures[2].label(), "E_2");
  EXPECT_EQ(c.measures[4].label(), "MI_3");
  EXPECT_EQ(c.measures[5].label(), "E");
  EXPECT_EQ(c.grid, (std::vector<double>{10, 15, 20}));
  EXPECT_EQ(c.mode, CorrelationMode::LongRange);
  EXPECT_TRUE(c.fit.enabled);
  EXPECT_EQ(c.exclusion_radius, 5);
  EXPECT_NEAR(c.bias.kf_left(), std::numbers::pi / 2 + 0.2, 1e-15);
}

TEST(Config, DyadicGridAndOffsetGeometry) {
  auto j = base_config();
  j["grid"] = {{"dyadic", {{"start", 16}, {"stop", 128}}}};
  j["geometry"] = {{"scan", "offset"}, {"ell_left", 10}, {"ell_right", 20}, {"base_distance", 500}};
  const auto c = parse_config(j);
  EXPECT_EQ(c.grid, (std::vector<double>{16, 32, 64, 128}));
  const auto g = c.geometry.at(-30);
  EXPECT_EQ(g.ell_left, 10);
  EXPECT_EQ(g.ell_right, 20);
  EXPECT_EQ(g.d_left, 500);
  EXPECT_EQ(g.d_right, 530);
}

TEST(Config, Errors) {
  auto expect_error = [](json j) { EXPECT_THROW(parse_config(j), ConfigError) << j.dump(); };
  auto j = base_config();
  j["grid"] = json::array();
  expect_error(j);
  j = base_config();
  j["grid"] = {4, 3};
  expect_error(j);
  j = base_config();
  j["measures"] = {"E_3"};
  expect_error(j);
  j = base_config();
  j["measures"] = {"MI_1"};
  expect_error(j);
  j = base_config();
  j["measures"] = {"nonsense"};
  expect_error(j);
  j = base_config();
  j["measures"] = {"S_n"};
  expect_error(j);  // no n_values
  j = base_config();
  j["mode"] = "fast";
  expect_error(j);
  j = base_config();
  j["model"] = {{"type", "constant_s"}, {"transmission", 1.5}};
  expect_error(j);
  j = base_config();
  j.erase("bias");
  expect_error(j);
  j = base_config();
  j["fit"] = {{"window", {5, 1}}};
  expect_error(j);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Fit, ConstantOffsetIsRecoveredExactly) {
  const std::vector<double> ana{1.0, 2.5, -0.3, 4.0};
  std::vector<double> num;
  for (double a : ana) num.push_back(a + 3.7);
  const auto f = fit_constant(num, ana);
  EXPECT_NEAR(f.constant, 3.7, 1e-14);
  EXPECT_NEAR(f.rms, 0.0, 1e-14);
}

TEST(Fit, SinglePointAndAlternatingNoise) {
  EXPECT_NEAR(fit_constant({2.0}, {0.5}).constant, 1.5, 1e-15);
  std::vector<double> num, ana(6, 0.0);
  for (int i = 0; i < 6; ++i) num.push_back(1.0 + (i % 2 ? 0.01 : -0.01));
  const auto f = fit_constant(num, ana);
  EXPECT_NEAR(f.constant, 1.0, 1e-14);
  EXPECT_NEAR(f.rms, 0.01, 1e-14);
  EXPECT_THROW(fit_constant(num, ana, {3, 3}), DomainError);
  EXPECT_THROW(fit_constant({1.0}, {1.0, 2.0}), DimensionError);
}

TEST(Fit, WindowAndLine) {
  const std::vector<double> num{10.0, 0.0, 1.0, 2.0}, ana{0.0, 0.0, 0.0, 0.0};
  EXPECT_NEAR(fit_constant(num, ana, {1, 4}).constant, 1.0, 1e-15);
  const auto l = fit_line({1.0, 2.0, 3.0}, {3.0, 5.0, 7.0});
  EXPECT_NEAR(l.slope, 2.0, 1e-14);
  EXPECT_NEAR(l.intercept, 1.0, 1e-14);
}

TEST(Scan, FullTransmissionGivesNoMutualInformation) {
  auto j = base_config();
  j["model"] = {{"type", "constant_s"}, {"transmission", 1.0}};
  const auto res = run_scan(parse_config(j));
  EXPECT_EQ(res.failed_rows, 0u);
  for (const auto& r : res.rows) {
    EXPECT_LE(std::abs(r.numeric), 1e-8) << r.measure.label() << ' ' << r.scan_value;
    EXPECT_NEAR(r.lin_term + r.log_term, 0.0, 1e-8);
  }
}

TEST(Scan, DeterministicAcrossThreadCounts) {
  auto j = base_config();
  j["measures"] = {"MI", "E", "S_2"};
  j["grid"] = {8, 10, 12, 14, 16, 18};
  auto c = parse_config(j);
  const std::string one = csv_of(run_scan(c));
  c.threads = 3;
  EXPECT_EQ(csv_of(run_scan(c)), one);
}

TEST(Scan, TranslationInvariantInBaseDistance) {
  auto j = base_config();
  const auto a = run_scan(parse_config(j));
  j["geometry"]["base_distance"] = 777777;
  const auto b = run_scan(parse_config(j));
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_NEAR(a.rows[i].numeric, b.rows[i].numeric, 1e-9);
}

TEST(Scan, FitUsesTailAndResidualsAreConsistent) {
  auto j = base_config();
  j["grid"] = {8, 16, 24, 32};
  const auto res = run_scan(parse_config(j));
  for (const auto& m : parse_config(j).measures) {
    const auto s = series_of(res, m);
    ASSERT_EQ(s.size(), 4u);
    const double c = 0.5 * ((s[2].numeric - s[2].lin_term - s[2].log_term) +
                            (s[3].numeric - s[3].lin_term - s[3].log_term));
    for (const auto& r : s) {
      EXPECT_NEAR(r.const_fit, c, 1e-12);
      EXPECT_NEAR(r.residual, r.numeric - r.lin_term - r.log_term - c, 1e-12);
    }
  }
}

TEST(Scan, NegativityOutsideSymmetricCaseHasNoAnalyticTerm) {
  auto j = base_config();
  j["measures"] = {"E"};
  j["geometry"]["ell_right_scale"] = 2;
  const auto res = run_scan(parse_config(j));
  for (const auto& r : res.rows) {
    EXPECT_TRUE(std::isfinite(r.numeric));
    EXPECT_FALSE(r.has_analytic());
    EXPECT_TRUE(std::isnan(r.residual));
    EXPECT_NE(r.flag().find("no_analytic"), std::string::npos);
  }
}

TEST(Scan, FailedRowsAreExcludedFromTheFit) {
  auto j = base_config();
  j["grid"] = {8, 16, 24, 32};
  const auto cfg = parse_config(j);
  auto rows = run_scan(cfg).rows;
  for (auto& r : rows) {
    if (r.index == 3) {
      r.error = "injected";
      r.numeric = 1e6;
    }
  }
  harness::detail::apply_fits(cfg, rows);
  for (const auto& r : rows) {
    if (r.index == 3) {
      EXPECT_TRUE(std::isnan(r.residual));
      EXPECT_EQ(r.flag(), "error: injected");
    } else {
      EXPECT_LT(std::abs(r.const_fit), 10.0);  // the injected value did not enter
    }
  }
  for (const auto& m : cfg.measures) {
    const auto s = [&] {
      std::vector<ScanRow> out;
      for (const auto& r : rows)
        if (r.measure == m) out.push_back(r);
      return out;
    }();
    EXPECT_NEAR(s[2].residual, 0.0, 1e-12);  // sole surviving window point
  }
}

TEST(Scan, DegeneracyFlags) {
  auto j = base_config();
  j["geometry"] = {{"scan", "offset"}, {"ell_left", 40}, {"ell_right", 60}, {"base_distance", 1000}};
  j["grid"] = {-100, -42, -30, -3, 0, 18, 23, 40, 57, 64, 80};
  j["exclusion_radius"] = 3;
  const auto flags = harness::detail::degeneracy_flags(parse_config(j));
  // Differences vanish at offsets -40, 0, 20 and 60.
  const std::vector<bool> expected{false, true, false, true, true, true, true, false, true, false, false};
  EXPECT_EQ(flags, expected);
}

TEST(Scan, StructuralDegeneracyDoesNotFlag) {
  auto j = base_config();
  const auto flags = harness::detail::degeneracy_flags(parse_config(j));
  for (bool f : flags) EXPECT_FALSE(f);
}

TEST(Csv, HeaderAndNumberFormat) {
  ScanRow r;
  r.scan_value = 16;
  r.measure = {MeasureKind::RenyiMi, 2};
  r.numeric = 0.123456789012345;
  r.analytic_note = "needs symmetric, geometry";
  std::ostringstream os;
  write_scan_csv(os, {r});
  EXPECT_EQ(os.str(),
            "scan_value,measure,n,numeric,lin_term,log_term,const_fit,residual,flag\n"
            "16,MI_2,2,0.123456789012,nan,nan,nan,nan,\"no_analytic: needs symmetric, geometry\"\n");
}

TEST(Identities, AllPassWithExpectedCoverage) {
  const auto rep = run_identities();
  EXPECT_TRUE(rep.all_passed());
  std::size_t q1 = 0, sg = 0;
  for (const auto& e : rep.entries) {
    if (e.identity == "Q_n(1)=0") ++q1;
    if (e.identity == "sum_gamma_squared") ++sg;
  }
  EXPECT_EQ(q1, 4u);
  EXPECT_EQ(sg, 7u);
  std::ostringstream os;
  write_identity_report(os, rep);
  EXPECT_EQ(os.str().find("FAIL"), std::string::npos);
}

TEST(FhValidate, SmallSizesProduceSeries) {
  FhValidateConfig cfg;
  cfg.sizes = {32, 64, 128};
  const auto series = run_fh_validate(cfg);
  EXPECT_EQ(series.size(), 12u);
  for (const auto& s : series) {
    EXPECT_EQ(s.points.size(), 3u);
    EXPECT_EQ(s.dd_ratios.size(), 1u);
    EXPECT_LT(s.log_m_rel_error, 0.1) << s.case_name << ' ' << s.family;
  }
  std::ostringstream os;
  write_fh_csv(os, series);
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 36);
}
