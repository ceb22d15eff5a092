#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ncrat/lab.hpp"
#include "ncrat/parse.hpp"

using namespace ncrat;

namespace {

/// Independent oracle: tau((z - s)^-1) by quadrature of the semicircle
/// density. With x = 2cos(theta) the integrand extends to a smooth periodic
/// function, so the trapezoid rule converges spectrally.
Complex stieltjes_by_quadrature(Complex z) {
  const int n = 4096;
  const double h = std::numbers::pi / n;
  Complex acc{0.0, 0.0};
  for (int k = 0; k <= n; ++k) {
    const double theta = k * h;
    const double s = std::sin(theta);
    const Complex f = (2.0 * s * s / std::numbers::pi) / (z - 2.0 * std::cos(theta));
    acc += (k == 0 || k == n) ? 0.5 * f : f;
  }
  return acc * h;
}

ConvergenceConfig resolvent_config(std::vector<Eigen::Index> sizes, int trials,
                                   std::uint64_t seed = kDefaultSeed) {
  ConvergenceConfig cfg;
  cfg.expression_text = "(3 - x1)^-1";
  cfg.expression = parse(cfg.expression_text);
  cfg.ensembles = {{EnsembleKind::Gue, {}}};
  cfg.sizes = std::move(sizes);
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

const double kG3 = (3.0 - std::sqrt(5.0)) / 2.0;

}  // namespace

TEST_CASE("stieltjes_semicircle: pinned values and branch") {
  CHECK(stieltjes_semicircle({3.0, 0.0}).real() == doctest::Approx(0.3819660112501051));
  CHECK(stieltjes_semicircle({3.0, 0.0}).imag() == doctest::Approx(0.0));
  CHECK(stieltjes_semicircle({-3.0, 0.0}).real() == doctest::Approx(-0.3819660112501051));
  for (double z : {1e3, 1e6, 1e8}) {
    const Complex g = stieltjes_semicircle({z, 0.0});
    CHECK(std::abs(z * g - 1.0) <= 1e-5);  // G ~ 1/z normalization
  }
  CHECK(std::abs(1e8 * stieltjes_semicircle({1e8, 0.0}) - 1.0) <= 1e-10);
  CHECK_THROWS_AS(stieltjes_semicircle({1.5, 0.0}), std::domain_error);
  CHECK_THROWS_AS(stieltjes_semicircle({-2.0, 0.0}), std::domain_error);
}

TEST_CASE("stieltjes_semicircle agrees with quadrature to 1e-10") {
  for (Complex z : {Complex{3.0, 0.0}, Complex{-3.0, 0.0}, Complex{2.5, 0.0}, Complex{1.0, 2.0},
                    Complex{0.0, 4.0}, Complex{-2.3, 0.0}, Complex{0.5, -1.5}}) {
    CAPTURE(z.real());
    CAPTURE(z.imag());
    CHECK(std::abs(stieltjes_semicircle(z) - stieltjes_by_quadrature(z)) <= 1e-10);
  }
}

TEST_CASE("config validation rejects bad schedules") {
  ConvergenceConfig cfg = resolvent_config({16, 32}, 2);
  CHECK_NOTHROW(validate(cfg));
  cfg.sizes = {};
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg.sizes = {32, 16};
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg.sizes = {16, 16};
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg.sizes = {16};
  cfg.trials = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg.trials = 2;
  cfg.ensembles.clear();
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("run_convergence: GUE norms rise toward the semicircle edge") {
  ConvergenceConfig cfg;
  cfg.expression_text = "x1";
  cfg.expression = parse(cfg.expression_text);
  cfg.ensembles = {{EnsembleKind::Gue, {}}};
  cfg.sizes = {32, 64, 128};
  cfg.trials = 5;
  cfg.seed = kDefaultSeed;
  const ConvergenceReport report = run_convergence(cfg);
  REQUIRE(report.per_size.size() == 3);
  CHECK(report.per_size[0].mean_norm < report.per_size[2].mean_norm);
  CHECK(report.per_size[2].mean_norm > 1.7);
  CHECK(report.per_size[2].mean_norm < 2.1);
  for (const TrialRow& row : report.rows) {
    CHECK(row.in_domain);
    CHECK(std::abs(row.trace.imag()) <= 1e-10);  // Hermitian-valued expression
  }
}

TEST_CASE("run_convergence: the resolvent trace approaches G(3)") {
  const ConvergenceReport report = run_convergence(resolvent_config({128}, 10));
  REQUIRE(report.per_size.size() == 1);
  CHECK(report.per_size[0].in_domain == 10);
  CHECK(report.per_size[0].mean_re_trace == doctest::Approx(kG3).epsilon(0.1));
  CHECK(std::abs(report.per_size[0].mean_im_trace) <= 1e-10);
}

TEST_CASE("adding a zero term does not change the sampled rows") {
  ConvergenceConfig base;
  base.expression_text = "x1";
  base.expression = parse(base.expression_text);
  base.ensembles = {{EnsembleKind::Gue, {}}};
  base.sizes = {16, 48};
  base.trials = 4;
  base.seed = 7;

  ConvergenceConfig padded = base;
  padded.expression_text = "x1 + 0 * x2";
  padded.expression = parse(padded.expression_text);
  padded.ensembles = {{EnsembleKind::Gue, {}}, {EnsembleKind::Gue, {}}};

  const ConvergenceReport a = run_convergence(base);
  const ConvergenceReport b = run_convergence(padded);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].trace == b.rows[i].trace);  // bit identical
    CHECK(a.rows[i].norm == b.rows[i].norm);
  }
}

TEST_CASE("self-averaging: the resolvent trace spread shrinks from n=64 to n=512") {
  const ConvergenceReport report = run_convergence(resolvent_config({64, 512}, 20));
  REQUIRE(report.per_size.size() == 2);
  CHECK(report.per_size[1].std_re_trace < report.per_size[0].std_re_trace);
}

TEST_CASE("eventual_domain_curve: polynomials are always in domain") {
  ConvergenceConfig cfg;
  cfg.expression_text = "x1 * x1' + 2";
  cfg.expression = parse(cfg.expression_text);
  cfg.ensembles = {{EnsembleKind::Ginibre, {}}};
  cfg.sizes = {4, 16};
  cfg.trials = 6;
  cfg.seed = kDefaultSeed;
  for (const DomainCurvePoint& p : eventual_domain_curve(cfg)) CHECK(p.fraction == 1.0);
}

TEST_CASE("eventual_domain_curve: (3 - x1)^-1 reaches full membership") {
  const std::vector<DomainCurvePoint> curve =
      eventual_domain_curve(resolvent_config({16, 64, 256}, 20));
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].fraction >= 0.9);
  CHECK(curve[1].fraction >= 0.95);
  CHECK(curve[2].fraction == 1.0);
}

TEST_CASE("eventual_domain_curve: x1^-1 runs but its margin stays poor") {
  ConvergenceConfig cfg = resolvent_config({8, 16}, 10);
  cfg.expression_text = "x1^-1";
  cfg.expression = parse(cfg.expression_text);
  const std::vector<DomainCurvePoint> curve = eventual_domain_curve(cfg);
  REQUIRE(curve.size() == 2);
  for (const DomainCurvePoint& p : curve) {
    CHECK(p.fraction >= 0.0);
    CHECK(p.fraction <= 1.0);
  }
}

TEST_CASE("outlier experiment: trace shifts by one, norm tracks n+1") {
  ConvergenceConfig base;
  base.expression_text = "3 + x1";
  base.expression = parse(base.expression_text);
  base.ensembles = {{EnsembleKind::Gue, {}}};
  base.sizes = {64};
  base.trials = 5;
  base.seed = kDefaultSeed;

  const OutlierReport planted = run_outlier_experiment(base, {OutlierRule::Kind::ReciprocalNPlusOne});
  REQUIRE(planted.per_size.size() == 1);
  const OutlierSummary& s = planted.per_size[0];
  CHECK(s.in_domain == 5);
  CHECK(s.mean_base_trace_re == doctest::Approx(kG3).epsilon(0.15));
  CHECK(s.mean_outlier_trace_re == doctest::Approx(1.0 + kG3).epsilon(0.1));
  CHECK(s.outlier_norm_oracle == doctest::Approx(65.0));
  CHECK(s.mean_outlier_norm == doctest::Approx(65.0).epsilon(1e-9));

  const OutlierReport flat = run_outlier_experiment(base, {OutlierRule::Kind::ConstantOne});
  const OutlierSummary& f = flat.per_size[0];
  CHECK(f.mean_outlier_trace_re == doctest::Approx(kG3).epsilon(0.15));  // limit unchanged
  CHECK(f.mean_outlier_norm < 2.0);  // no outlier in the inverse
}

TEST_CASE("fixture catalog oracles hold at n=256 within their pinned tolerances") {
  for (const LabFixture& fixture : fixture_catalog()) {
    CAPTURE(fixture.name);
    ConvergenceConfig cfg;
    cfg.expression_text = fixture.expression;
    cfg.expression = parse(fixture.expression);
    cfg.ensembles = fixture.ensembles;
    cfg.sizes = {256};
    cfg.trials = 8;
    cfg.seed = kDefaultSeed;
    cfg.trace_oracle = fixture.trace_oracle;
    cfg.norm_oracle = fixture.norm_oracle;
    const ConvergenceReport report = run_convergence(cfg);
    const SizeSummary& s = report.per_size.at(0);
    CHECK(s.in_domain == 8);
    CHECK(std::abs(s.mean_re_trace - fixture.trace_oracle->real()) <= fixture.trace_tol);
    CHECK(std::abs(s.mean_norm - *fixture.norm_oracle) <= fixture.norm_tol);
  }
}

TEST_CASE("fixture catalog entries parse and cover their variables") {
  REQUIRE(fixture_catalog().size() >= 5);
  for (const LabFixture& fixture : fixture_catalog()) {
    CAPTURE(fixture.name);
    const Expression e = parse(fixture.expression);
    CHECK(static_cast<int>(fixture.ensembles.size()) >= inventory(e).num_variables);
    CHECK(fixture.trace_oracle.has_value());
  }
  REQUIRE(realization_fixture_expressions().size() >= 8);
  bool has_level2 = false;
  for (const std::string& text : realization_fixture_expressions()) {
    const int k = level(parse(text));
    CHECK(k <= 2);
    if (k == 2) has_level2 = true;
  }
  CHECK(has_level2);
}
