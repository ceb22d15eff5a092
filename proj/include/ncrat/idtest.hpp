#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncrat/expr.hpp"
#include "ncrat/matrix.hpp"

namespace ncrat {

struct DistinctWitness {
  Eigen::Index size = 0;
  int trial = 0;
  double deviation = 0.0;
};

/// Outcome of randomized identity testing. Distinct verdicts carry a replay
/// witness: re-running with the same seed, size and trial reproduces the
/// deviation deterministically.
struct IdentityVerdict {
  enum class Kind { Distinct, ProbablyEqual, NoCommonDomainPoint };

  Kind kind = Kind::NoCommonDomainPoint;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  Eigen::Index max_size = 0;
  int trials_per_size = 0;
  std::optional<DistinctWitness> witness;       // set iff Distinct
  std::vector<long> common_points_per_size;     // index k -> size k+1
  long common_domain_points = 0;                // total over all sizes
  Eigen::Index sizes_with_common_point = 0;
};

inline constexpr Eigen::Index kIdTestDefaultMaxSize = 6;
inline constexpr int kIdTestDefaultTrials = 20;
inline constexpr double kIdTestDefaultTol = 1e-7;

/// Compares e1 and e2 on Ginibre tuples of sizes 1..max_size. A deviation
/// above tol at a common domain point is Distinct (smallest (size, trial)
/// wins); agreement everywhere with at least one common domain point is
/// ProbablyEqual; no common domain point at any size is its own verdict.
IdentityVerdict test_identity(const Expression& e1, const Expression& e2,
                              Eigen::Index max_size = kIdTestDefaultMaxSize,
                              int trials_per_size = kIdTestDefaultTrials,
                              double tol = kIdTestDefaultTol, std::uint64_t seed = 0);

/// test_identity against the literal zero expression.
IdentityVerdict zero_test(const Expression& e, Eigen::Index max_size = kIdTestDefaultMaxSize,
                          int trials_per_size = kIdTestDefaultTrials,
                          double tol = kIdTestDefaultTol, std::uint64_t seed = 0);

}  // namespace ncrat
