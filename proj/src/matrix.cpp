#include "ncrat/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncrat/rng.hpp"

namespace ncrat {

namespace {

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

/// Deterministic unit start vector for the iterative paths.
Eigen::VectorXcd seeded_start_vector(Eigen::Index n) {
  StreamRng rng{0x9072ull, static_cast<std::uint64_t>(n)};
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(rng.next_gaussian(), rng.next_gaussian());
  v.normalize();
  return v;
}

constexpr int kPowerIterationLimit = 10000;
constexpr double kPowerIterationRtol = 1e-12;

/// Largest eigenvalue of the PSD matrix a*a by power iteration; returns
/// sigma_max(a).
double sigma_max_power(const ComplexMatrix& a) {
  const Eigen::Index n = a.cols();
  Eigen::VectorXcd v = seeded_start_vector(n);
  double prev = 0.0;
  for (int it = 0; it < kPowerIterationLimit; ++it) {
    Eigen::VectorXcd w = a.adjoint() * (a * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double est = std::sqrt(norm);
    if (it > 0 && std::abs(est - prev) <= kPowerIterationRtol * est) return est;
    prev = est;
  }
  return prev;
}

/// sigma_min(a) by inverse power iteration on a*a using LU solves with a.
double sigma_min_inverse_power(const ComplexMatrix& a) {
  const Eigen::Index n = a.cols();
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  Eigen::VectorXcd v = seeded_start_vector(n);
  double prev = 0.0;
  for (int it = 0; it < kPowerIterationLimit; ++it) {
    // w = (a*a)^-1 v = a^-1 (a^-*) v
    Eigen::VectorXcd w = lu.solve(lu.adjoint().solve(v));
    if (!w.allFinite()) return 0.0;  // exactly singular factorization
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double est = 1.0 / std::sqrt(norm);
    if (it > 0 && std::abs(est - prev) <= kPowerIterationRtol * est) return est;
    prev = est;
  }
  return prev;
}

SingularExtremes extremes_direct(const ComplexMatrix& a) {
  if (is_hermitian(a)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(a, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    double lo = std::abs(ev(0));
    double hi = lo;
    for (Eigen::Index i = 1; i < ev.size(); ++i) {
      const double m = std::abs(ev(i));
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    return {lo, hi};
  }
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  const auto& sv = svd.singularValues();
  return {sv(sv.size() - 1), sv(0)};
}

}  // namespace

bool is_hermitian(const ComplexMatrix& a, double rtol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  return (a - a.adjoint()).norm() <= rtol * std::max(1.0, scale);
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "add");
  return a + b;
}

ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "sub");
  return a - b;
}

ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mul: dimension mismatch");
  return a * b;
}

ComplexMatrix scale(Complex factor, const ComplexMatrix& a) { return factor * a; }

ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

SingularExtremes singular_extremes(const ComplexMatrix& a) {
  require_square(a, "singular_extremes");
  if (a.rows() <= kDirectSpectralLimit) return extremes_direct(a);
  return {sigma_min_inverse_power(a), sigma_max_power(a)};
}

double operator_norm(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() == a.cols() && a.rows() <= kDirectSpectralLimit) {
    if (is_hermitian(a)) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(a, Eigen::EigenvaluesOnly);
      const auto& ev = eig.eigenvalues();
      return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    }
    Eigen::BDCSVD<ComplexMatrix> svd(a);
    return svd.singularValues()(0);
  }
  if (std::min(a.rows(), a.cols()) <= kDirectSpectralLimit && a.rows() != a.cols()) {
    Eigen::BDCSVD<ComplexMatrix> svd(a);
    return svd.singularValues()(0);
  }
  return sigma_max_power(a);
}

Complex normalized_trace(const ComplexMatrix& a) {
  require_square(a, "normalized_trace");
  return a.trace() / static_cast<double>(a.rows());
}

InvertOutcome invert(const ComplexMatrix& a, double tol) {
  require_square(a, "invert");
  const SingularExtremes ext = singular_extremes(a);
  if (!(ext.sigma_min > tol * ext.sigma_max) || ext.sigma_max == 0.0)
    return SingularError{ext.sigma_min, ext.sigma_max};
  InversionResult result;
  result.inverse = a.partialPivLu().inverse();
  result.smallest_singular_value = ext.sigma_min;
  result.largest_singular_value = ext.sigma_max;
  result.reciprocal_condition = ext.sigma_min / ext.sigma_max;
  return result;
}

SchurOutcome schur_block_inverse(const ComplexMatrix& A, const ComplexMatrix& B,
                                 const ComplexMatrix& C, const ComplexMatrix& D,
                                 double tol) {
  const Eigen::Index k = A.rows();
  const Eigen::Index l = D.rows();
  require_square(A, "schur_block_inverse: A");
  require_square(D, "schur_block_inverse: D");
  if (B.rows() != k || B.cols() != l || C.rows() != l || C.cols() != k)
    throw std::invalid_argument("schur_block_inverse: off-diagonal block shape mismatch");

  const InvertOutcome d_inv = invert(D, tol);
  if (std::holds_alternative<SingularError>(d_inv)) return std::get<SingularError>(d_inv);
  const ComplexMatrix& Dinv = std::get<InversionResult>(d_inv).inverse;

  const ComplexMatrix schur = A - B * Dinv * C;
  const InvertOutcome s_inv = invert(schur, tol);
  if (std::holds_alternative<SingularError>(s_inv)) return std::get<SingularError>(s_inv);
  const ComplexMatrix& Sinv = std::get<InversionResult>(s_inv).inverse;

  const Eigen::Index m = k + l;
  ComplexMatrix lower = ComplexMatrix::Identity(m, m);
  lower.block(k, 0, l, k) = -Dinv * C;
  ComplexMatrix middle = ComplexMatrix::Zero(m, m);
  middle.block(0, 0, k, k) = Sinv;
  middle.block(k, k, l, l) = Dinv;
  ComplexMatrix upper = ComplexMatrix::Identity(m, m);
  upper.block(0, k, k, l) = -B * Dinv;
  return ComplexMatrix(lower * middle * upper);
}

double smallest_spectral_point_psd(const ComplexMatrix& p) {
  require_square(p, "smallest_spectral_point_psd");
  const double scale = p.norm();
  if ((p - p.adjoint()).norm() > 1e-10 * std::max(1.0, scale))
    throw std::invalid_argument("smallest_spectral_point_psd: input is not Hermitian");
  const double radius = operator_norm(p);
  if (radius == 0.0) return 0.0;
  const ComplexMatrix shifted =
      ComplexMatrix(radius * ComplexMatrix::Identity(p.rows(), p.cols()) - p);
  return std::max(0.0, radius - operator_norm(shifted));
}

}  // namespace ncrat
