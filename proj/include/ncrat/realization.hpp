#pragma once

#include <compare>
#include <cstdint>
#include <variant>
#include <vector>

#include "ncrat/eval.hpp"
#include "ncrat/expr.hpp"
#include "ncrat/matrix.hpp"

namespace ncrat {

/// One formal letter x_i or x_i*.
struct Letter {
  int index = 0;
  bool adjoint = false;
  auto operator<=>(const Letter&) const = default;
};

/// A word in the letters; the empty word is the unit.
using Word = std::vector<Letter>;

struct NcTerm {
  Complex coeff;
  Word word;
};

/// Non-commutative polynomial in the letters x_1, x_1*, ..., stored as a
/// canonical (sorted, combined, zero-free) list of coefficient/word terms.
class NcPolynomial {
 public:
  NcPolynomial() = default;  // zero
  static NcPolynomial constant(Complex c);
  static NcPolynomial letter(Letter l);

  NcPolynomial operator+(const NcPolynomial& other) const;
  NcPolynomial operator-() const;
  NcPolynomial operator*(const NcPolynomial& other) const;
  NcPolynomial scaled(Complex factor) const;

  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // 0 for the zero polynomial
  const std::vector<NcTerm>& terms() const { return terms_; }

  /// Instantiates at a tuple: letters become matrices, words products, and
  /// the result is the n x n coefficient-weighted sum.
  ComplexMatrix evaluate(const MatrixTuple& t) const;

 private:
  explicit NcPolynomial(std::vector<NcTerm> terms);
  void normalize();
  std::vector<NcTerm> terms_;
};

/// Dense rows x cols grid of non-commutative polynomials.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(Eigen::Index rows, Eigen::Index cols);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  NcPolynomial& at(Eigen::Index r, Eigen::Index c);
  const NcPolynomial& at(Eigen::Index r, Eigen::Index c) const;

  PolyMatrix negated() const;
  int max_degree() const;

  /// Blockwise instantiation: an n-dimensional tuple yields (rows*n) x (cols*n).
  ComplexMatrix evaluate(const MatrixTuple& t) const;

 private:
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::vector<NcPolynomial> entries_;  // row-major
};

/// r = u A^-1 v with u 1xd, A dxd, v dx1 over the polynomial ring.
struct Realization {
  PolyMatrix u;
  PolyMatrix A;
  PolyMatrix v;
  Eigen::Index dim = 0;
  Expression source;  // expression the realization was built from
};

/// Structural construction: leaves get d=1, Sum and Product are direct
/// sums (d1+d2), Inverse borders A with u/v and one extra row/column (d1+1).
/// Total on every expression; domain issues surface only at evaluation.
Realization realize(const Expression& e);

/// Instantiates u, A, v at the tuple, inverts A(t) at `tol` and sandwiches.
std::variant<ComplexMatrix, DomainError> evaluate_realization(const Realization& r,
                                                              const MatrixTuple& t,
                                                              double tol = kDefaultInvertTol);

struct VerificationReport {
  int trials = 0;
  int both_defined = 0;
  int eval_only = 0;         // direct evaluation defined, realization not
  int realization_only = 0;  // realization defined, direct evaluation not
  double max_rel_error = 0.0;

  int domain_mismatches() const { return eval_only + realization_only; }
};

/// Samples `trials` Ginibre tuples of dimension `dim` and compares direct
/// evaluation against the realization wherever both are defined. The error
/// metric is ||E - R||_F / max(1, ||E||_F, ||R||_F).
VerificationReport verify_realization(const Expression& e, const Realization& r, int trials,
                                      Eigen::Index dim, std::uint64_t seed,
                                      double tol = kDefaultInvertTol);

}  // namespace ncrat
