#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ncrat {

enum class ExprKind {
  Scalar,
  Variable,
  AdjointVariable,
  Sum,
  Difference,
  Product,
  Negation,
  Inverse,
};

/// Immutable AST of a non-commutative rational expression over the letters
/// x1..xm and their adjoints x1'..xm'. Nodes are shared; copies are cheap and
/// expressions can be moved across threads freely.
class Expression {
 public:
  Expression();  // the zero scalar

  static Expression scalar(std::complex<double> value);
  static Expression variable(int index);          // index >= 1
  static Expression adjoint_variable(int index);  // index >= 1
  static Expression sum(Expression left, Expression right);
  static Expression difference(Expression left, Expression right);
  static Expression product(Expression left, Expression right);
  static Expression negation(Expression inner);
  static Expression inverse(Expression inner);

  ExprKind kind() const { return node_->kind; }
  bool is_scalar() const { return node_->kind == ExprKind::Scalar; }

  std::complex<double> scalar_value() const;  // Scalar nodes only
  int variable_index() const;                 // Variable / AdjointVariable only
  Expression left() const;                    // Sum / Difference / Product
  Expression right() const;                   // Sum / Difference / Product
  Expression inner() const;                   // Negation / Inverse

  /// Syntactic identity, never rational-function equality.
  bool operator==(const Expression& other) const;
  bool operator!=(const Expression& other) const { return !(*this == other); }

 private:
  struct Node {
    ExprKind kind;
    std::complex<double> scalar{0.0, 0.0};
    int index = 0;
    std::shared_ptr<const Node> a;  // left child / unary inner
    std::shared_ptr<const Node> b;  // right child
  };

  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Minimal k with e in the k-th inverse-nesting stage: 0 for polynomial
/// expressions, and each Inverse node adds one to its argument's level.
int level(const Expression& e);

struct VariableInventory {
  int num_variables = 0;          // highest variable index used
  std::vector<bool> uses_adjoint; // size num_variables, 0-based on index-1

  bool adjoint_used(int index) const {
    return index >= 1 && index <= num_variables && uses_adjoint[index - 1];
  }
};

VariableInventory inventory(const Expression& e);

/// Emits text in the parser grammar; parse(pretty_print(e)) reproduces e for
/// every expression the parser can produce.
std::string pretty_print(const Expression& e);

/// Shortest round-trippable decimal for a double ("3", "2.5", "1e-05").
std::string format_double(double value);

}  // namespace ncrat
