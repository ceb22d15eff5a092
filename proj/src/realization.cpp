#include "ncrat/realization.hpp"

#include <algorithm>
#include <stdexcept>

#include "ncrat/ensembles.hpp"

namespace ncrat {

NcPolynomial::NcPolynomial(std::vector<NcTerm> terms) : terms_(std::move(terms)) { normalize(); }

NcPolynomial NcPolynomial::constant(Complex c) {
  if (c == Complex{0.0, 0.0}) return NcPolynomial();
  return NcPolynomial({NcTerm{c, {}}});
}

NcPolynomial NcPolynomial::letter(Letter l) { return NcPolynomial({NcTerm{Complex{1.0, 0.0}, {l}}}); }

void NcPolynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const NcTerm& a, const NcTerm& b) { return a.word < b.word; });
  std::vector<NcTerm> combined;
  for (auto& term : terms_) {
    if (!combined.empty() && combined.back().word == term.word) {
      combined.back().coeff += term.coeff;
    } else {
      combined.push_back(std::move(term));
    }
  }
  combined.erase(std::remove_if(combined.begin(), combined.end(),
                                [](const NcTerm& t) { return t.coeff == Complex{0.0, 0.0}; }),
                 combined.end());
  terms_ = std::move(combined);
}

NcPolynomial NcPolynomial::operator+(const NcPolynomial& other) const {
  std::vector<NcTerm> terms = terms_;
  terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
  return NcPolynomial(std::move(terms));
}

NcPolynomial NcPolynomial::operator-() const {
  std::vector<NcTerm> terms = terms_;
  for (auto& t : terms) t.coeff = -t.coeff;
  return NcPolynomial(std::move(terms));
}

NcPolynomial NcPolynomial::operator*(const NcPolynomial& other) const {
  std::vector<NcTerm> terms;
  terms.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      Word word = a.word;
      word.insert(word.end(), b.word.begin(), b.word.end());
      terms.push_back(NcTerm{a.coeff * b.coeff, std::move(word)});
    }
  }
  return NcPolynomial(std::move(terms));
}

NcPolynomial NcPolynomial::scaled(Complex factor) const {
  std::vector<NcTerm> terms = terms_;
  for (auto& t : terms) t.coeff *= factor;
  return NcPolynomial(std::move(terms));
}

int NcPolynomial::degree() const {
  int deg = 0;
  for (const auto& t : terms_) deg = std::max(deg, static_cast<int>(t.word.size()));
  return deg;
}

ComplexMatrix NcPolynomial::evaluate(const MatrixTuple& t) const {
  const Eigen::Index n = t.common_dim;
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (const auto& term : terms_) {
    ComplexMatrix word_value = ComplexMatrix::Identity(n, n);
    for (const Letter& l : term.word) {
      const ComplexMatrix& x = t.matrix(l.index);
      word_value = l.adjoint ? ComplexMatrix(word_value * x.adjoint())
                             : ComplexMatrix(word_value * x);
    }
    acc += term.coeff * word_value;
  }
  return acc;
}

PolyMatrix::PolyMatrix(Eigen::Index rows, Eigen::Index cols)
    : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows * cols)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("PolyMatrix: negative dimension");
}

NcPolynomial& PolyMatrix::at(Eigen::Index r, Eigen::Index c) {
  return entries_[static_cast<std::size_t>(r * cols_ + c)];
}

const NcPolynomial& PolyMatrix::at(Eigen::Index r, Eigen::Index c) const {
  return entries_[static_cast<std::size_t>(r * cols_ + c)];
}

PolyMatrix PolyMatrix::negated() const {
  PolyMatrix out(rows_, cols_);
  for (Eigen::Index r = 0; r < rows_; ++r)
    for (Eigen::Index c = 0; c < cols_; ++c) out.at(r, c) = -at(r, c);
  return out;
}

int PolyMatrix::max_degree() const {
  int deg = 0;
  for (const auto& p : entries_) deg = std::max(deg, p.degree());
  return deg;
}

ComplexMatrix PolyMatrix::evaluate(const MatrixTuple& t) const {
  const Eigen::Index n = t.common_dim;
  ComplexMatrix out = ComplexMatrix::Zero(rows_ * n, cols_ * n);
  for (Eigen::Index r = 0; r < rows_; ++r)
    for (Eigen::Index c = 0; c < cols_; ++c)
      out.block(r * n, c * n, n, n) = at(r, c).evaluate(t);
  return out;
}

namespace {

struct Pieces {
  PolyMatrix u;  // 1 x d
  PolyMatrix A;  // d x d
  PolyMatrix v;  // d x 1
  Eigen::Index d = 0;
};

Pieces leaf(NcPolynomial value) {
  Pieces p;
  p.d = 1;
  p.u = PolyMatrix(1, 1);
  p.u.at(0, 0) = NcPolynomial::constant({1.0, 0.0});
  p.A = PolyMatrix(1, 1);
  p.A.at(0, 0) = NcPolynomial::constant({1.0, 0.0});
  p.v = PolyMatrix(1, 1);
  p.v.at(0, 0) = std::move(value);
  return p;
}

Pieces negated(Pieces p) {
  p.v = p.v.negated();
  return p;
}

Pieces direct_sum(const Pieces& a, const Pieces& b) {
  Pieces p;
  p.d = a.d + b.d;
  p.u = PolyMatrix(1, p.d);
  for (Eigen::Index i = 0; i < a.d; ++i) p.u.at(0, i) = a.u.at(0, i);
  for (Eigen::Index i = 0; i < b.d; ++i) p.u.at(0, a.d + i) = b.u.at(0, i);
  p.A = PolyMatrix(p.d, p.d);
  for (Eigen::Index r = 0; r < a.d; ++r)
    for (Eigen::Index c = 0; c < a.d; ++c) p.A.at(r, c) = a.A.at(r, c);
  for (Eigen::Index r = 0; r < b.d; ++r)
    for (Eigen::Index c = 0; c < b.d; ++c) p.A.at(a.d + r, a.d + c) = b.A.at(r, c);
  p.v = PolyMatrix(p.d, 1);
  for (Eigen::Index i = 0; i < a.d; ++i) p.v.at(i, 0) = a.v.at(i, 0);
  for (Eigen::Index i = 0; i < b.d; ++i) p.v.at(a.d + i, 0) = b.v.at(i, 0);
  return p;
}

Pieces product(const Pieces& a, const Pieces& b) {
  Pieces p;
  p.d = a.d + b.d;
  p.u = PolyMatrix(1, p.d);
  for (Eigen::Index i = 0; i < a.d; ++i) p.u.at(0, i) = a.u.at(0, i);
  p.A = PolyMatrix(p.d, p.d);
  for (Eigen::Index r = 0; r < a.d; ++r)
    for (Eigen::Index c = 0; c < a.d; ++c) p.A.at(r, c) = a.A.at(r, c);
  // Top-right coupling block -v1 u2.
  for (Eigen::Index r = 0; r < a.d; ++r)
    for (Eigen::Index c = 0; c < b.d; ++c)
      p.A.at(r, a.d + c) = -(a.v.at(r, 0) * b.u.at(0, c));
  for (Eigen::Index r = 0; r < b.d; ++r)
    for (Eigen::Index c = 0; c < b.d; ++c) p.A.at(a.d + r, a.d + c) = b.A.at(r, c);
  p.v = PolyMatrix(p.d, 1);
  for (Eigen::Index i = 0; i < b.d; ++i) p.v.at(a.d + i, 0) = b.v.at(i, 0);
  return p;
}

Pieces inverse(const Pieces& a) {
  // Border A1 with v1 (right) and u1 (bottom); the Schur complement of the
  // zero corner is -u1 A1^-1 v1, which the new row/column expose.
  Pieces p;
  p.d = a.d + 1;
  p.A = PolyMatrix(p.d, p.d);
  for (Eigen::Index r = 0; r < a.d; ++r)
    for (Eigen::Index c = 0; c < a.d; ++c) p.A.at(r, c) = a.A.at(r, c);
  for (Eigen::Index r = 0; r < a.d; ++r) p.A.at(r, a.d) = a.v.at(r, 0);
  for (Eigen::Index c = 0; c < a.d; ++c) p.A.at(a.d, c) = a.u.at(0, c);
  // Bottom-right entry stays zero.
  p.u = PolyMatrix(1, p.d);
  p.u.at(0, a.d) = NcPolynomial::constant({-1.0, 0.0});
  p.v = PolyMatrix(p.d, 1);
  p.v.at(a.d, 0) = NcPolynomial::constant({1.0, 0.0});
  return p;
}

Pieces build(const Expression& e) {
  switch (e.kind()) {
    case ExprKind::Scalar:
      return leaf(NcPolynomial::constant(e.scalar_value()));
    case ExprKind::Variable:
      return leaf(NcPolynomial::letter(Letter{e.variable_index(), false}));
    case ExprKind::AdjointVariable:
      return leaf(NcPolynomial::letter(Letter{e.variable_index(), true}));
    case ExprKind::Sum:
      return direct_sum(build(e.left()), build(e.right()));
    case ExprKind::Difference:
      return direct_sum(build(e.left()), negated(build(e.right())));
    case ExprKind::Product:
      return product(build(e.left()), build(e.right()));
    case ExprKind::Negation:
      return negated(build(e.inner()));
    case ExprKind::Inverse:
      return inverse(build(e.inner()));
  }
  throw std::logic_error("unknown expression kind");
}

}  // namespace

Realization realize(const Expression& e) {
  Pieces p = build(e);
  return Realization{std::move(p.u), std::move(p.A), std::move(p.v), p.d, e};
}

std::variant<ComplexMatrix, DomainError> evaluate_realization(const Realization& r,
                                                              const MatrixTuple& t, double tol) {
  const VariableInventory inv = inventory(r.source);
  if (inv.num_variables > t.size())
    throw std::out_of_range("evaluate_realization: tuple does not cover the variables");
  const ComplexMatrix big = r.A.evaluate(t);
  InvertOutcome out = invert(big, tol);
  if (auto* sing = std::get_if<SingularError>(&out))
    return DomainError{r.source, sing->sigma_min, sing->sigma_max};
  const ComplexMatrix& big_inv = std::get<InversionResult>(out).inverse;
  const ComplexMatrix u_val = r.u.evaluate(t);
  const ComplexMatrix v_val = r.v.evaluate(t);
  return ComplexMatrix(u_val * big_inv * v_val);
}

VerificationReport verify_realization(const Expression& e, const Realization& r, int trials,
                                      Eigen::Index dim, std::uint64_t seed, double tol) {
  const VariableInventory inv = inventory(e);
  std::vector<EnsembleSpec> specs(static_cast<std::size_t>(inv.num_variables),
                                  EnsembleSpec{EnsembleKind::Ginibre, dim, seed});
  VerificationReport report;
  report.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    const MatrixTuple t = specs.empty()
                              ? MatrixTuple::empty(dim)
                              : sample_tuple(specs, static_cast<std::uint64_t>(trial));
    const EvalOutcome direct = evaluate(e, t, tol);
    const auto realized = evaluate_realization(r, t, tol);
    const bool direct_ok = std::holds_alternative<ComplexMatrix>(direct);
    const bool realized_ok = std::holds_alternative<ComplexMatrix>(realized);
    if (direct_ok && realized_ok) {
      ++report.both_defined;
      const ComplexMatrix& a = std::get<ComplexMatrix>(direct);
      const ComplexMatrix& b = std::get<ComplexMatrix>(realized);
      const double err = (a - b).norm() / std::max({1.0, a.norm(), b.norm()});
      report.max_rel_error = std::max(report.max_rel_error, err);
    } else if (direct_ok) {
      ++report.eval_only;
    } else if (realized_ok) {
      ++report.realization_only;
    }
  }
  return report;
}

}  // namespace ncrat
