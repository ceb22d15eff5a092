#pragma once

#include <Eigen/Dense>
#include <complex>
#include <variant>

namespace ncrat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Default relative invertibility threshold: a matrix counts as invertible
/// when sigma_min > tol * sigma_max.
inline constexpr double kDefaultInvertTol = 1e-8;

/// Largest dimension handled by direct factorizations (SVD / Hermitian
/// eigendecomposition); beyond it the spectral routines switch to seeded
/// power iteration.
inline constexpr Eigen::Index kDirectSpectralLimit = 512;

struct InversionResult {
  ComplexMatrix inverse;
  double smallest_singular_value = 0.0;
  double largest_singular_value = 0.0;
  double reciprocal_condition = 0.0;  // sigma_min / sigma_max, in [0, 1]
};

struct SingularError {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

using InvertOutcome = std::variant<InversionResult, SingularError>;
using SchurOutcome = std::variant<ComplexMatrix, SingularError>;

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(Complex factor, const ComplexMatrix& a);
ComplexMatrix adjoint(const ComplexMatrix& a);

/// Largest singular value, i.e. the operator norm on C^n. Exact dense
/// computation up to kDirectSpectralLimit, seeded power iteration on a*a
/// above it (relative tolerance 1e-12, at most 10000 iterations).
double operator_norm(const ComplexMatrix& a);

/// (1/n) * trace.
Complex normalized_trace(const ComplexMatrix& a);

struct SingularExtremes {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Extreme singular values, via the same direct/iterative split as
/// operator_norm.
SingularExtremes singular_extremes(const ComplexMatrix& a);

/// LU inverse with conditioning report; fails when sigma_min <= tol * sigma_max.
InvertOutcome invert(const ComplexMatrix& a, double tol = kDefaultInvertTol);

/// Inverse of [[A, B], [C, D]] assembled from the Schur complement
/// factorization: [[1,0],[-D^-1 C,1]] * diag((A - B D^-1 C)^-1, D^-1) *
/// [[1,-B D^-1],[0,1]]. Fails when D or the Schur complement fails `tol`.
SchurOutcome schur_block_inverse(const ComplexMatrix& A, const ComplexMatrix& B,
                                 const ComplexMatrix& C, const ComplexMatrix& D,
                                 double tol = kDefaultInvertTol);

/// Smallest spectral point of a PSD matrix computed with two operator norms:
/// R - ||R*I - p|| with R = ||p||. No eigendecomposition. Rejects
/// non-Hermitian input (||p - p*|| > 1e-10 * ||p||) with std::invalid_argument.
double smallest_spectral_point_psd(const ComplexMatrix& p);

bool is_hermitian(const ComplexMatrix& a, double rtol = 1e-12);

}  // namespace ncrat
