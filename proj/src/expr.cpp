#include "ncrat/expr.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ncrat {

Expression::Expression() {
  static const std::shared_ptr<const Node> zero = [] {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Scalar;
    return n;
  }();
  node_ = zero;
}

Expression Expression::scalar(std::complex<double> value) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Scalar;
  n->scalar = value;
  return Expression(std::move(n));
}

Expression Expression::variable(int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Variable;
  n->index = index;
  return Expression(std::move(n));
}

Expression Expression::adjoint_variable(int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::AdjointVariable;
  n->index = index;
  return Expression(std::move(n));
}

Expression Expression::sum(Expression l, Expression r) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Sum;
  n->a = std::move(l.node_);
  n->b = std::move(r.node_);
  return Expression(std::move(n));
}

Expression Expression::difference(Expression l, Expression r) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Difference;
  n->a = std::move(l.node_);
  n->b = std::move(r.node_);
  return Expression(std::move(n));
}

Expression Expression::product(Expression l, Expression r) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Product;
  n->a = std::move(l.node_);
  n->b = std::move(r.node_);
  return Expression(std::move(n));
}

Expression Expression::negation(Expression e) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Negation;
  n->a = std::move(e.node_);
  return Expression(std::move(n));
}

Expression Expression::inverse(Expression e) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Inverse;
  n->a = std::move(e.node_);
  return Expression(std::move(n));
}

std::complex<double> Expression::scalar_value() const {
  if (node_->kind != ExprKind::Scalar) throw std::logic_error("scalar_value on non-scalar node");
  return node_->scalar;
}

int Expression::variable_index() const {
  if (node_->kind != ExprKind::Variable && node_->kind != ExprKind::AdjointVariable)
    throw std::logic_error("variable_index on non-variable node");
  return node_->index;
}

Expression Expression::left() const {
  if (!node_->a) throw std::logic_error("expression node has no left child");
  return Expression(node_->a);
}

Expression Expression::right() const {
  if (!node_->b) throw std::logic_error("expression node has no right child");
  return Expression(node_->b);
}

Expression Expression::inner() const {
  if (!node_->a) throw std::logic_error("expression node has no inner child");
  return Expression(node_->a);
}

bool Expression::operator==(const Expression& other) const {
  const Node* x = node_.get();
  const Node* y = other.node_.get();
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case ExprKind::Scalar:
      return x->scalar == y->scalar;
    case ExprKind::Variable:
    case ExprKind::AdjointVariable:
      return x->index == y->index;
    case ExprKind::Negation:
    case ExprKind::Inverse:
      return Expression(x->a) == Expression(y->a);
    default:
      return Expression(x->a) == Expression(y->a) && Expression(x->b) == Expression(y->b);
  }
}

int level(const Expression& e) {
  switch (e.kind()) {
    case ExprKind::Scalar:
    case ExprKind::Variable:
    case ExprKind::AdjointVariable:
      return 0;
    case ExprKind::Negation:
      return level(e.inner());
    case ExprKind::Inverse:
      return level(e.inner()) + 1;
    default:
      return std::max(level(e.left()), level(e.right()));
  }
}

namespace {

void collect_inventory(const Expression& e, VariableInventory& inv) {
  switch (e.kind()) {
    case ExprKind::Scalar:
      return;
    case ExprKind::Variable:
    case ExprKind::AdjointVariable: {
      int idx = e.variable_index();
      if (idx > inv.num_variables) {
        inv.num_variables = idx;
        inv.uses_adjoint.resize(static_cast<std::size_t>(idx), false);
      }
      if (e.kind() == ExprKind::AdjointVariable) inv.uses_adjoint[static_cast<std::size_t>(idx) - 1] = true;
      return;
    }
    case ExprKind::Negation:
    case ExprKind::Inverse:
      collect_inventory(e.inner(), inv);
      return;
    default:
      collect_inventory(e.left(), inv);
      collect_inventory(e.right(), inv);
      return;
  }
}

}  // namespace

VariableInventory inventory(const Expression& e) {
  VariableInventory inv;
  collect_inventory(e, inv);
  return inv;
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

// Printing precedence: 0 sum, 1 product, 2 unary minus, 3 postfix, 4 atom.
constexpr int kPrecSum = 0;
constexpr int kPrecProd = 1;
constexpr int kPrecUnary = 2;
constexpr int kPrecPostfix = 3;
constexpr int kPrecAtom = 4;

std::string print_scalar(std::complex<double> c, int& prec_out) {
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0) {
    prec_out = std::signbit(re) ? kPrecUnary : kPrecAtom;
    return format_double(re);
  }
  if (re == 0.0) {
    prec_out = std::signbit(im) ? kPrecUnary : kPrecAtom;
    return format_double(im) + "i";
  }
  // Mixed complex literals print parenthesized; the parser folds the
  // arithmetic back into a single scalar node.
  prec_out = kPrecAtom;
  std::string s = "(" + format_double(re);
  s += im < 0.0 ? " - " : " + ";
  s += format_double(std::abs(im)) + "i)";
  return s;
}

std::string print_expr(const Expression& e, int min_prec) {
  std::string text;
  int prec = kPrecAtom;
  switch (e.kind()) {
    case ExprKind::Scalar:
      text = print_scalar(e.scalar_value(), prec);
      break;
    case ExprKind::Variable:
      text = "x" + std::to_string(e.variable_index());
      prec = kPrecAtom;
      break;
    case ExprKind::AdjointVariable:
      text = "x" + std::to_string(e.variable_index()) + "'";
      prec = kPrecPostfix;
      break;
    case ExprKind::Sum:
      text = print_expr(e.left(), kPrecSum) + " + " + print_expr(e.right(), kPrecSum + 1);
      prec = kPrecSum;
      break;
    case ExprKind::Difference:
      text = print_expr(e.left(), kPrecSum) + " - " + print_expr(e.right(), kPrecSum + 1);
      prec = kPrecSum;
      break;
    case ExprKind::Product:
      text = print_expr(e.left(), kPrecProd) + " * " + print_expr(e.right(), kPrecProd + 1);
      prec = kPrecProd;
      break;
    case ExprKind::Negation:
      text = "-" + print_expr(e.inner(), kPrecUnary);
      prec = kPrecUnary;
      break;
    case ExprKind::Inverse:
      text = print_expr(e.inner(), kPrecPostfix) + "^-1";
      prec = kPrecPostfix;
      break;
  }
  if (prec < min_prec) return "(" + text + ")";
  return text;
}

}  // namespace

std::string pretty_print(const Expression& e) { return print_expr(e, kPrecSum); }

}  // namespace ncrat
