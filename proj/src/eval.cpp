#include "ncrat/eval.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncrat {

MatrixTuple MatrixTuple::of(std::vector<ComplexMatrix> matrices) {
  if (matrices.empty()) throw std::invalid_argument("MatrixTuple::of: empty tuple (use empty(n))");
  const Eigen::Index n = matrices.front().rows();
  for (const auto& m : matrices) {
    if (m.rows() != m.cols() || m.rows() != n)
      throw std::invalid_argument("MatrixTuple: matrices must be square with a common dimension");
    if (!m.allFinite()) throw std::invalid_argument("MatrixTuple: entries must be finite");
  }
  MatrixTuple t;
  t.matrices = std::move(matrices);
  t.common_dim = n;
  return t;
}

MatrixTuple MatrixTuple::empty(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("MatrixTuple::empty: dimension must be >= 1");
  MatrixTuple t;
  t.common_dim = n;
  return t;
}

const ComplexMatrix& MatrixTuple::matrix(int variable_index) const {
  if (variable_index < 1 || variable_index > size())
    throw std::out_of_range("MatrixTuple: variable index outside tuple");
  return matrices[static_cast<std::size_t>(variable_index) - 1];
}

namespace {

double noise_floor(double scale) {
  return kEvalNoiseFloorFactor * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
}

/// `scale` accumulates the largest Frobenius norm produced anywhere in the
/// evaluation; the Inverse guard measures "numerically zero" against it.
EvalOutcome eval_rec(const Expression& e, const MatrixTuple& t, double tol, double& scale) {
  const Eigen::Index n = t.common_dim;
  const auto track = [&scale](ComplexMatrix m) {
    scale = std::max(scale, m.norm());
    return EvalOutcome(std::move(m));
  };
  switch (e.kind()) {
    case ExprKind::Scalar:
      return track(e.scalar_value() * ComplexMatrix::Identity(n, n));
    case ExprKind::Variable:
      return track(t.matrix(e.variable_index()));
    case ExprKind::AdjointVariable:
      return track(t.matrix(e.variable_index()).adjoint());
    case ExprKind::Negation: {
      EvalOutcome inner = eval_rec(e.inner(), t, tol, scale);
      if (auto* err = std::get_if<DomainError>(&inner)) return *err;
      return ComplexMatrix(-std::get<ComplexMatrix>(inner));
    }
    case ExprKind::Inverse: {
      EvalOutcome inner = eval_rec(e.inner(), t, tol, scale);
      if (auto* err = std::get_if<DomainError>(&inner)) return *err;
      const ComplexMatrix& arg = std::get<ComplexMatrix>(inner);
      InvertOutcome inv = invert(arg, tol);
      if (auto* sing = std::get_if<SingularError>(&inv))
        return DomainError{e, sing->sigma_min, sing->sigma_max};
      auto& result = std::get<InversionResult>(inv);
      if (result.largest_singular_value <= noise_floor(scale))
        return DomainError{e, result.smallest_singular_value, result.largest_singular_value};
      return track(std::move(result.inverse));
    }
    default: {
      EvalOutcome left = eval_rec(e.left(), t, tol, scale);
      if (auto* err = std::get_if<DomainError>(&left)) return *err;
      EvalOutcome right = eval_rec(e.right(), t, tol, scale);
      if (auto* err = std::get_if<DomainError>(&right)) return *err;
      const ComplexMatrix& l = std::get<ComplexMatrix>(left);
      const ComplexMatrix& r = std::get<ComplexMatrix>(right);
      switch (e.kind()) {
        case ExprKind::Sum:
          return track(l + r);
        case ExprKind::Difference:
          return track(l - r);
        default:
          return track(l * r);
      }
    }
  }
}

std::optional<ComplexMatrix> domain_rec(const Expression& e, const MatrixTuple& t, double tol,
                                        double& scale, std::vector<InverseDiagnostic>& diags) {
  const Eigen::Index n = t.common_dim;
  const auto track = [&scale](ComplexMatrix m) {
    scale = std::max(scale, m.norm());
    return std::optional<ComplexMatrix>(std::move(m));
  };
  switch (e.kind()) {
    case ExprKind::Scalar:
      return track(e.scalar_value() * ComplexMatrix::Identity(n, n));
    case ExprKind::Variable:
      return track(t.matrix(e.variable_index()));
    case ExprKind::AdjointVariable:
      return track(t.matrix(e.variable_index()).adjoint());
    case ExprKind::Negation: {
      auto inner = domain_rec(e.inner(), t, tol, scale, diags);
      if (!inner) return std::nullopt;
      return ComplexMatrix(-*inner);
    }
    case ExprKind::Inverse: {
      auto inner = domain_rec(e.inner(), t, tol, scale, diags);
      InverseDiagnostic diag{.node = e};
      if (!inner) {
        diags.push_back(std::move(diag));
        return std::nullopt;
      }
      diag.reached = true;
      const SingularExtremes ext = singular_extremes(*inner);
      diag.sigma_min = ext.sigma_min;
      diag.sigma_max = ext.sigma_max;
      diag.invertible =
          ext.sigma_min > tol * ext.sigma_max && ext.sigma_max > noise_floor(scale);
      const bool ok = diag.invertible;
      diags.push_back(std::move(diag));
      if (!ok) return std::nullopt;
      return track(inner->partialPivLu().inverse());
    }
    default: {
      auto left = domain_rec(e.left(), t, tol, scale, diags);
      auto right = domain_rec(e.right(), t, tol, scale, diags);  // still walked on left failure
      if (!left || !right) return std::nullopt;
      switch (e.kind()) {
        case ExprKind::Sum:
          return track(*left + *right);
        case ExprKind::Difference:
          return track(*left - *right);
        default:
          return track(*left * *right);
      }
    }
  }
}

void require_coverage(const Expression& e, const MatrixTuple& t) {
  const VariableInventory inv = inventory(e);
  if (inv.num_variables > t.size())
    throw std::out_of_range("evaluate: tuple does not cover the expression's variables");
  if (t.common_dim < 1) throw std::invalid_argument("evaluate: tuple has no dimension");
}

}  // namespace

EvalOutcome evaluate(const Expression& e, const MatrixTuple& t, double tol) {
  require_coverage(e, t);
  double scale = 0.0;
  return eval_rec(e, t, tol, scale);
}

DomainCheck in_domain(const Expression& e, const MatrixTuple& t, double tol) {
  require_coverage(e, t);
  DomainCheck check;
  double scale = 0.0;
  auto value = domain_rec(e, t, tol, scale, check.inverses);
  check.in_domain = value.has_value();
  return check;
}

std::variant<double, DomainError> inverse_norm_via_gap(const Expression& e, const MatrixTuple& t,
                                                       double tol) {
  EvalOutcome out = evaluate(e, t, tol);
  if (auto* err = std::get_if<DomainError>(&out)) return *err;
  const ComplexMatrix& r = std::get<ComplexMatrix>(out);
  const ComplexMatrix gram = ComplexMatrix(r * r.adjoint());
  const double radius = operator_norm(gram);
  const Eigen::Index n = gram.rows();
  const double gap =
      radius == 0.0
          ? 0.0
          : radius - operator_norm(ComplexMatrix(radius * ComplexMatrix::Identity(n, n) - gram));
  // gap = sigma_min(r)^2 and radius = sigma_max(r)^2, so the invertibility
  // test sigma_min > tol * sigma_max reads gap > tol^2 * radius.
  if (!(gap > tol * tol * radius) || radius == 0.0)
    return DomainError{e, std::sqrt(std::max(gap, 0.0)), std::sqrt(radius)};
  return std::sqrt(1.0 / gap);
}

}  // namespace ncrat
