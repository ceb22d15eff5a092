#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncrat/ensembles.hpp"
#include "ncrat/expr.hpp"
#include "ncrat/matrix.hpp"

namespace ncrat {

/// Seed used by the CLI and the shipped experiments when none is given.
inline constexpr std::uint64_t kDefaultSeed = 42;

struct VariableEnsemble {
  EnsembleKind kind = EnsembleKind::Gue;
  Complex param{0.0, 0.0};
};

struct ConvergenceConfig {
  Expression expression;
  std::string expression_text;              // source text, echoed into reports
  std::vector<VariableEnsemble> ensembles;  // slot i -> variable i+1
  std::vector<Eigen::Index> sizes;          // strictly increasing
  int trials = 20;
  std::uint64_t seed = 0;
  double tol = kDefaultInvertTol;
  std::optional<Complex> trace_oracle;  // analytic limit of tr_n, when known
  std::optional<double> norm_oracle;    // analytic limit of the norm
};

/// Throws std::invalid_argument when the schedule is empty or not strictly
/// increasing, trials < 1, or the ensembles don't cover the variables.
void validate(const ConvergenceConfig& cfg);

struct TrialRow {
  Eigen::Index n = 0;
  int trial = 0;
  bool in_domain = false;
  Complex trace{0.0, 0.0};  // NaN when out of domain
  double norm = 0.0;        // NaN when out of domain
};

struct SizeSummary {
  Eigen::Index n = 0;
  int attempted = 0;
  int in_domain = 0;
  // Statistics over in-domain trials; std is the sample deviation (ddof 1).
  double mean_re_trace = 0.0, std_re_trace = 0.0;
  double mean_im_trace = 0.0, std_im_trace = 0.0;
  double mean_norm = 0.0, std_norm = 0.0;
};

struct ConvergenceReport {
  ConvergenceConfig config;
  std::vector<TrialRow> rows;  // ordered by (n, trial)
  std::vector<SizeSummary> per_size;
};

/// For each size and trial: sample the tuple, evaluate, record normalized
/// trace and operator norm. Domain failures are recorded as data, never
/// thrown. Deterministic given the config (seed included).
ConvergenceReport run_convergence(const ConvergenceConfig& cfg);

/// Trace of the semicircular resolvent: G(z) = (z - sqrt(z^2 - 4))/2 on the
/// branch with G(z) ~ 1/z at infinity. Throws std::domain_error on [-2, 2].
Complex stieltjes_semicircle(Complex z);

struct DomainCurvePoint {
  Eigen::Index n = 0;
  int attempted = 0;
  int in_domain = 0;
  double fraction = 0.0;
};

/// Same sampling as run_convergence, reporting only domain-membership
/// frequency per size.
std::vector<DomainCurvePoint> eventual_domain_curve(const ConvergenceConfig& cfg);

/// Scalar planted in the extra corner of the outlier experiment.
struct OutlierRule {
  enum class Kind { ReciprocalNPlusOne, ConstantOne };
  Kind kind = Kind::ReciprocalNPlusOne;

  double value(Eigen::Index n) const {
    return kind == Kind::ReciprocalNPlusOne ? 1.0 / static_cast<double>(n + 1) : 1.0;
  }
  const char* name() const {
    return kind == Kind::ReciprocalNPlusOne ? "one_over_n_plus_1" : "constant_one";
  }
};

struct OutlierRow {
  Eigen::Index n = 0;  // size of X; Y has size n+1
  int trial = 0;
  bool in_domain = false;  // base evaluation, X and Y all invertible
  Complex base_trace{0.0, 0.0};   // tr_n(X^-1)
  double base_norm = 0.0;         // ||X^-1||
  Complex outlier_trace{0.0, 0.0};  // tr_{n+1}(Y^-1)
  double outlier_norm = 0.0;        // ||Y^-1||
};

struct OutlierSummary {
  Eigen::Index n = 0;
  int attempted = 0;
  int in_domain = 0;
  double mean_base_trace_re = 0.0;
  double mean_base_norm = 0.0;
  double mean_outlier_trace_re = 0.0;
  double mean_outlier_norm = 0.0;
  double outlier_norm_oracle = 0.0;  // 1 / rule(n)
};

struct OutlierReport {
  ConvergenceConfig base;
  OutlierRule rule;
  std::vector<OutlierRow> rows;
  std::vector<OutlierSummary> per_size;
};

/// Evaluates the base expression to X, plants Y = diag(rule(n), X) of size
/// n+1, and reports traces and norms of both inverses side by side: the
/// trace of Y^-1 lands near 1 + tau(x^-1) while its norm grows like n+1.
OutlierReport run_outlier_experiment(const ConvergenceConfig& base, OutlierRule rule = {});

/// Named convergence experiment shipped with the library, with pinned
/// analytic targets and tolerances.
struct LabFixture {
  std::string name;
  std::string expression;
  std::vector<VariableEnsemble> ensembles;
  std::optional<Complex> trace_oracle;
  std::optional<double> norm_oracle;
  double trace_tol = 0.0;  // at n = 512, 20 trials
  double norm_tol = 0.0;
};

const std::vector<LabFixture>& fixture_catalog();

/// Expressions (levels 0-2) used for realization fidelity checks.
const std::vector<std::string>& realization_fixture_expressions();

}  // namespace ncrat
