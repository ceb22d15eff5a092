#include "ncrat/lab.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ncrat/eval.hpp"
#include "ncrat/parse.hpp"

namespace ncrat {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct RunningStats {
  long count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
  double mean() const { return count > 0 ? sum / static_cast<double>(count) : kNan; }
  double stddev() const {
    if (count < 2) return count == 1 ? 0.0 : kNan;
    const double m = mean();
    const double var = (sum_sq - static_cast<double>(count) * m * m) / static_cast<double>(count - 1);
    return std::sqrt(std::max(0.0, var));
  }
};

std::vector<EnsembleSpec> specs_at_size(const ConvergenceConfig& cfg, Eigen::Index n) {
  std::vector<EnsembleSpec> specs;
  specs.reserve(cfg.ensembles.size());
  for (const VariableEnsemble& e : cfg.ensembles)
    specs.push_back(EnsembleSpec{e.kind, n, cfg.seed, e.param});
  return specs;
}

MatrixTuple tuple_at(const ConvergenceConfig& cfg, Eigen::Index n, int trial) {
  const std::vector<EnsembleSpec> specs = specs_at_size(cfg, n);
  return specs.empty() ? MatrixTuple::empty(n)
                       : sample_tuple(specs, static_cast<std::uint64_t>(trial));
}

}  // namespace

void validate(const ConvergenceConfig& cfg) {
  if (cfg.sizes.empty()) throw std::invalid_argument("config: size schedule is empty");
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
    if (cfg.sizes[i] < 1) throw std::invalid_argument("config: sizes must be >= 1");
    if (i > 0 && cfg.sizes[i] <= cfg.sizes[i - 1])
      throw std::invalid_argument("config: size schedule must be strictly increasing");
  }
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
  const int m = inventory(cfg.expression).num_variables;
  if (static_cast<int>(cfg.ensembles.size()) < m)
    throw std::invalid_argument("config: fewer ensembles than variables");
}

ConvergenceReport run_convergence(const ConvergenceConfig& cfg) {
  validate(cfg);
  ConvergenceReport report;
  report.config = cfg;
  for (Eigen::Index n : cfg.sizes) {
    SizeSummary summary;
    summary.n = n;
    summary.attempted = cfg.trials;
    RunningStats re_trace, im_trace, norm;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const MatrixTuple t = tuple_at(cfg, n, trial);
      TrialRow row{n, trial, false, {kNan, kNan}, kNan};
      const EvalOutcome out = evaluate(cfg.expression, t, cfg.tol);
      if (const auto* value = std::get_if<ComplexMatrix>(&out)) {
        row.in_domain = true;
        row.trace = normalized_trace(*value);
        row.norm = operator_norm(*value);
        re_trace.add(row.trace.real());
        im_trace.add(row.trace.imag());
        norm.add(row.norm);
        ++summary.in_domain;
      }
      report.rows.push_back(row);
    }
    summary.mean_re_trace = re_trace.mean();
    summary.std_re_trace = re_trace.stddev();
    summary.mean_im_trace = im_trace.mean();
    summary.std_im_trace = im_trace.stddev();
    summary.mean_norm = norm.mean();
    summary.std_norm = norm.stddev();
    report.per_size.push_back(summary);
  }
  return report;
}

Complex stieltjes_semicircle(Complex z) {
  if (z.imag() == 0.0 && std::abs(z.real()) <= 2.0)
    throw std::domain_error("stieltjes_semicircle: z lies on the support [-2, 2]");
  // Principal sqrt of 1 - 4/z^2 keeps the G(z) ~ 1/z branch off the cut, and
  // the rationalized form (z - sqrt(z^2-4))/2 = 2/(z + sqrt(z^2-4)) avoids
  // cancellation for large |z| (Re w >= 0 means |1 + w| >= 1).
  const Complex w = std::sqrt(Complex{1.0, 0.0} - 4.0 / (z * z));
  return 2.0 / (z * (Complex{1.0, 0.0} + w));
}

std::vector<DomainCurvePoint> eventual_domain_curve(const ConvergenceConfig& cfg) {
  validate(cfg);
  std::vector<DomainCurvePoint> curve;
  for (Eigen::Index n : cfg.sizes) {
    DomainCurvePoint point;
    point.n = n;
    point.attempted = cfg.trials;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const MatrixTuple t = tuple_at(cfg, n, trial);
      if (std::holds_alternative<ComplexMatrix>(evaluate(cfg.expression, t, cfg.tol)))
        ++point.in_domain;
    }
    point.fraction = static_cast<double>(point.in_domain) / static_cast<double>(point.attempted);
    curve.push_back(point);
  }
  return curve;
}

OutlierReport run_outlier_experiment(const ConvergenceConfig& base, OutlierRule rule) {
  validate(base);
  OutlierReport report;
  report.base = base;
  report.rule = rule;
  for (Eigen::Index n : base.sizes) {
    OutlierSummary summary;
    summary.n = n;
    summary.attempted = base.trials;
    summary.outlier_norm_oracle = 1.0 / rule.value(n);
    RunningStats base_tr, base_nm, out_tr, out_nm;
    for (int trial = 0; trial < base.trials; ++trial) {
      const MatrixTuple t = tuple_at(base, n, trial);
      OutlierRow row{n, trial, false, {kNan, kNan}, kNan, {kNan, kNan}, kNan};
      const EvalOutcome out = evaluate(base.expression, t, base.tol);
      if (const auto* x = std::get_if<ComplexMatrix>(&out)) {
        const InvertOutcome x_inv = invert(*x, base.tol);
        if (const auto* xi = std::get_if<InversionResult>(&x_inv)) {
          ComplexMatrix y = ComplexMatrix::Zero(n + 1, n + 1);
          y(0, 0) = rule.value(n);
          y.block(1, 1, n, n) = *x;
          const InvertOutcome y_inv = invert(y, base.tol);
          if (const auto* yi = std::get_if<InversionResult>(&y_inv)) {
            row.in_domain = true;
            row.base_trace = normalized_trace(xi->inverse);
            row.base_norm = operator_norm(xi->inverse);
            row.outlier_trace = normalized_trace(yi->inverse);
            row.outlier_norm = operator_norm(yi->inverse);
            base_tr.add(row.base_trace.real());
            base_nm.add(row.base_norm);
            out_tr.add(row.outlier_trace.real());
            out_nm.add(row.outlier_norm);
            ++summary.in_domain;
          }
        }
      }
      report.rows.push_back(row);
    }
    summary.mean_base_trace_re = base_tr.mean();
    summary.mean_base_norm = base_nm.mean();
    summary.mean_outlier_trace_re = out_tr.mean();
    summary.mean_outlier_norm = out_nm.mean();
    report.per_size.push_back(summary);
  }
  return report;
}

namespace {

// tau((3 - s)^-1) = G(3) = (3 - sqrt 5)/2 for a standard semicircular s.
const double kResolventTrace3 = (3.0 - std::sqrt(5.0)) / 2.0;

std::vector<LabFixture> build_catalog() {
  std::vector<LabFixture> fixtures;
  fixtures.push_back(LabFixture{
      "resolvent_at_3",
      "(3 - x1)^-1",
      {{EnsembleKind::Gue, {}}},
      Complex{kResolventTrace3, 0.0},
      1.0,
      0.01,
      0.08,
  });
  fixtures.push_back(LabFixture{
      "gue_edge",
      "x1",
      {{EnsembleKind::Gue, {}}},
      Complex{0.0, 0.0},
      2.0,
      0.01,
      0.15,
  });
  fixtures.push_back(LabFixture{
      "ginibre_covariance",
      "x1 * x1'",
      {{EnsembleKind::Ginibre, {}}},
      Complex{1.0, 0.0},
      4.0,
      0.01,
      0.25,
  });
  fixtures.push_back(LabFixture{
      "collapsed_product_inverse",
      "(x1 * x2)^-1 * x1",
      {{EnsembleKind::Gue, {}}, {EnsembleKind::ShiftedGue, Complex{3.0, 0.0}}},
      Complex{kResolventTrace3, 0.0},
      1.0,
      0.01,
      0.08,
  });
  fixtures.push_back(LabFixture{
      "hua_zero",
      "y^-1 * (x^-1 + y^-1)^-1 * x^-1 - (x + y)^-1",
      {{EnsembleKind::ShiftedGue, Complex{3.0, 0.0}}, {EnsembleKind::ShiftedGue, Complex{3.0, 0.0}}},
      Complex{0.0, 0.0},
      0.0,
      1e-8,
      1e-8,
  });
  return fixtures;
}

std::vector<std::string> build_realization_fixtures() {
  return {
      "x1 + x2 * x1",
      "2.5 * x1 - x2' * x1 + 3",
      "-x1 * (x2 - x1) + 1i * x2",
      "x1^-1",
      "(x1 + x2)^-1",
      "(x1 * x2)^-1 * x1",
      "x2 * (x1 * x2)^-1 * x1",
      "y^-1 * (x^-1 + y^-1)^-1 * x^-1 - (x + y)^-1",
      "(x1^-1 + x2^-1 + x3^-1)^-1",
      "(5 - x1 * x1')^-1",
  };
}

}  // namespace

const std::vector<LabFixture>& fixture_catalog() {
  static const std::vector<LabFixture> catalog = build_catalog();
  return catalog;
}

const std::vector<std::string>& realization_fixture_expressions() {
  static const std::vector<std::string> fixtures = build_realization_fixtures();
  return fixtures;
}

}  // namespace ncrat
