#include <doctest.h>

#include "ncrat/ensembles.hpp"
#include "ncrat/eval.hpp"
#include "ncrat/idtest.hpp"
#include "ncrat/parse.hpp"

using namespace ncrat;

TEST_CASE("(x1*x2)^-1 and x2^-1 * x1^-1 are probably equal") {
  const IdentityVerdict v = test_identity(parse("(x1 * x2)^-1"), parse("x2^-1 * x1^-1"));
  CHECK(v.kind == IdentityVerdict::Kind::ProbablyEqual);
  CHECK(v.common_domain_points > 0);
  CHECK(v.sizes_with_common_point == v.max_size);
}

TEST_CASE("stable finiteness holds on matrices: y(xy)^-1 x = 1") {
  const IdentityVerdict v = test_identity(parse("x2 * (x1 * x2)^-1 * x1"), parse("1"));
  CHECK(v.kind == IdentityVerdict::Kind::ProbablyEqual);
}

TEST_CASE("x1*x2 vs x2*x1 is distinct with a witness of size >= 2") {
  const IdentityVerdict v = test_identity(parse("x1 * x2"), parse("x2 * x1"));
  REQUIRE(v.kind == IdentityVerdict::Kind::Distinct);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->size >= 2);  // scalars commute, so size-1 trials all agree
  CHECK(v.witness->deviation > v.tolerance);
}

TEST_CASE("the empty-domain expression reports NoCommonDomainPoint") {
  const IdentityVerdict v =
      test_identity(parse("(1 - x2 * (x1 * x2)^-1 * x1)^-1"), parse("x1"));
  CHECK(v.kind == IdentityVerdict::Kind::NoCommonDomainPoint);
  CHECK(v.common_domain_points == 0);
}

TEST_CASE("zero_test fixtures") {
  CHECK(zero_test(parse("y^-1 * (x^-1 + y^-1)^-1 * x^-1 - (x + y)^-1")).kind ==
        IdentityVerdict::Kind::ProbablyEqual);
  CHECK(zero_test(parse("x1 - x1")).kind == IdentityVerdict::Kind::ProbablyEqual);
  const IdentityVerdict v = zero_test(parse("x1^-1"));
  REQUIRE(v.kind == IdentityVerdict::Kind::Distinct);
  CHECK(v.witness->size == 1);
}

TEST_CASE("Distinct witnesses replay deterministically") {
  const IdentityVerdict v = test_identity(parse("x1 * x2"), parse("x2 * x1"), 6, 20, 1e-7, 99);
  REQUIRE(v.kind == IdentityVerdict::Kind::Distinct);
  REQUIRE(v.witness.has_value());

  // Recompute the deviation straight from the witness coordinates.
  std::vector<EnsembleSpec> specs(2, EnsembleSpec{EnsembleKind::Ginibre, v.witness->size, 99});
  const MatrixTuple t = sample_tuple(specs, static_cast<std::uint64_t>(v.witness->trial));
  const ComplexMatrix a = std::get<ComplexMatrix>(evaluate(parse("x1 * x2"), t));
  const ComplexMatrix b = std::get<ComplexMatrix>(evaluate(parse("x2 * x1"), t));
  const double deviation = (a - b).norm() / std::max({1.0, a.norm(), b.norm()});
  CHECK(deviation == v.witness->deviation);  // bit-identical replay
  CHECK(deviation > 1e-7);

  const IdentityVerdict again = test_identity(parse("x1 * x2"), parse("x2 * x1"), 6, 20, 1e-7, 99);
  REQUIRE(again.witness.has_value());
  CHECK(again.witness->size == v.witness->size);
  CHECK(again.witness->trial == v.witness->trial);
  CHECK(again.witness->deviation == v.witness->deviation);
}

TEST_CASE("monotone evidence: smaller budgets with the same seed stay equal") {
  const Expression e1 = parse("(x1 * x2)^-1");
  const Expression e2 = parse("x2^-1 * x1^-1");
  REQUIRE(test_identity(e1, e2, 6, 20, 1e-7, 5).kind == IdentityVerdict::Kind::ProbablyEqual);
  CHECK(test_identity(e1, e2, 3, 5, 1e-7, 5).kind == IdentityVerdict::Kind::ProbablyEqual);
  CHECK(test_identity(e1, e2, 1, 1, 1e-7, 5).kind == IdentityVerdict::Kind::ProbablyEqual);
}

TEST_CASE("scalar-only expressions are compared at every size") {
  const IdentityVerdict v = test_identity(parse("2 * 3"), parse("6"));
  CHECK(v.kind == IdentityVerdict::Kind::ProbablyEqual);
  const IdentityVerdict w = test_identity(parse("2"), parse("3"));
  CHECK(w.kind == IdentityVerdict::Kind::Distinct);
}
