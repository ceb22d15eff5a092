#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "ncrat/expr.hpp"
#include "ncrat/matrix.hpp"

namespace ncrat {

/// Evaluation point: one matrix per variable index 1..m, all square of a
/// common dimension. Adjoints are derived at evaluation time, never stored.
struct MatrixTuple {
  std::vector<ComplexMatrix> matrices;
  Eigen::Index common_dim = 0;

  /// Builds from a non-empty list, checking shapes.
  static MatrixTuple of(std::vector<ComplexMatrix> matrices);
  /// Builds a tuple with no variables (scalar-only expressions) at dimension n.
  static MatrixTuple empty(Eigen::Index n);

  Eigen::Index size() const { return static_cast<Eigen::Index>(matrices.size()); }
  const ComplexMatrix& matrix(int variable_index) const;  // 1-based
};

struct DomainError {
  Expression failing_subexpression;  // the Inverse node (or whole expression)
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

using EvalOutcome = std::variant<ComplexMatrix, DomainError>;

/// An Inverse argument also fails when its largest singular value sits below
/// this factor times machine epsilon times the largest intermediate produced
/// so far: such a matrix is indistinguishable from zero at working precision
/// (expressions that reduce to 0, like the Hua identity, leave exactly this
/// kind of roundoff residue).
inline constexpr double kEvalNoiseFloorFactor = 1e4;

/// Recursive evaluation with post-order, left-to-right domain checking: the
/// first Inverse node whose argument fails `invert` at `tol` is reported.
EvalOutcome evaluate(const Expression& e, const MatrixTuple& t, double tol = kDefaultInvertTol);

struct InverseDiagnostic {
  Expression node;         // the Inverse node
  bool reached = false;    // argument was computable
  bool invertible = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

struct DomainCheck {
  bool in_domain = false;
  std::vector<InverseDiagnostic> inverses;  // post-order, left to right
};

/// Never fails: domain violations come back as in_domain=false plus the
/// sigma margins of every Inverse node whose argument could be computed.
DomainCheck in_domain(const Expression& e, const MatrixTuple& t, double tol = kDefaultInvertTol);

/// Norm of the inverse of the evaluated expression, computed through the
/// spectral-gap identity ||r^-1|| = sqrt(1 / (R - ||R*I - r r*||)) with
/// R = ||r r*||, using operator norms only. Fails with DomainError when the
/// evaluation fails or the gap is not positive at `tol`.
std::variant<double, DomainError> inverse_norm_via_gap(const Expression& e, const MatrixTuple& t,
                                                       double tol = kDefaultInvertTol);

}  // namespace ncrat
