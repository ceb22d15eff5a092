#include "ncrat/idtest.hpp"

#include <algorithm>
#include <stdexcept>

#include "ncrat/ensembles.hpp"
#include "ncrat/eval.hpp"

namespace ncrat {

IdentityVerdict test_identity(const Expression& e1, const Expression& e2, Eigen::Index max_size,
                              int trials_per_size, double tol, std::uint64_t seed) {
  if (max_size < 1 || trials_per_size < 1)
    throw std::invalid_argument("test_identity: max_size and trials_per_size must be >= 1");

  const int m = std::max(inventory(e1).num_variables, inventory(e2).num_variables);

  IdentityVerdict verdict;
  verdict.tolerance = tol;
  verdict.seed = seed;
  verdict.max_size = max_size;
  verdict.trials_per_size = trials_per_size;
  verdict.common_points_per_size.assign(static_cast<std::size_t>(max_size), 0);

  for (Eigen::Index n = 1; n <= max_size; ++n) {
    std::vector<EnsembleSpec> specs(static_cast<std::size_t>(m),
                                    EnsembleSpec{EnsembleKind::Ginibre, n, seed});
    for (int trial = 0; trial < trials_per_size; ++trial) {
      const MatrixTuple t = specs.empty()
                                ? MatrixTuple::empty(n)
                                : sample_tuple(specs, static_cast<std::uint64_t>(trial));
      const EvalOutcome a = evaluate(e1, t);
      if (!std::holds_alternative<ComplexMatrix>(a)) continue;
      const EvalOutcome b = evaluate(e2, t);
      if (!std::holds_alternative<ComplexMatrix>(b)) continue;

      ++verdict.common_points_per_size[static_cast<std::size_t>(n) - 1];
      ++verdict.common_domain_points;
      const ComplexMatrix& va = std::get<ComplexMatrix>(a);
      const ComplexMatrix& vb = std::get<ComplexMatrix>(b);
      const double deviation = (va - vb).norm() / std::max({1.0, va.norm(), vb.norm()});
      if (deviation > tol) {
        verdict.kind = IdentityVerdict::Kind::Distinct;
        verdict.witness = DistinctWitness{n, trial, deviation};
        // Fill the per-size tallies seen so far and stop: the loop order makes
        // this the smallest (size, trial) witness.
        for (long c : verdict.common_points_per_size)
          if (c > 0) ++verdict.sizes_with_common_point;
        return verdict;
      }
    }
  }

  for (long c : verdict.common_points_per_size)
    if (c > 0) ++verdict.sizes_with_common_point;
  verdict.kind = verdict.common_domain_points > 0 ? IdentityVerdict::Kind::ProbablyEqual
                                                  : IdentityVerdict::Kind::NoCommonDomainPoint;
  return verdict;
}

IdentityVerdict zero_test(const Expression& e, Eigen::Index max_size, int trials_per_size,
                          double tol, std::uint64_t seed) {
  return test_identity(e, Expression::scalar({0.0, 0.0}), max_size, trials_per_size, tol, seed);
}

}  // namespace ncrat
