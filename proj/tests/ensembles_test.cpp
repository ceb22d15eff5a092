#include <doctest.h>

#include "ncrat/ensembles.hpp"
#include "ncrat/matrix.hpp"

using namespace ncrat;

TEST_CASE("diagonal constant ensemble is c * I") {
  const EnsembleSpec spec{EnsembleKind::DiagonalConstant, 2, 0, Complex{3.0, 0.0}};
  const ComplexMatrix m = sample(spec, 1, 0);
  CHECK(m(0, 0) == Complex{3.0, 0.0});
  CHECK(m(1, 1) == Complex{3.0, 0.0});
  CHECK(m(0, 1) == Complex{0.0, 0.0});
  CHECK(m(1, 0) == Complex{0.0, 0.0});
}

TEST_CASE("GUE samples are exactly Hermitian") {
  const ComplexMatrix x = sample(EnsembleSpec{EnsembleKind::Gue, 32, 7}, 1, 3);
  CHECK((x - x.adjoint()).norm() == 0.0);

  const ComplexMatrix shifted =
      sample(EnsembleSpec{EnsembleKind::ShiftedGue, 32, 7, Complex{3.0, 0.0}}, 1, 3);
  CHECK((shifted - shifted.adjoint()).norm() == 0.0);
}

TEST_CASE("GUE moments match the Catalan numbers at n=512") {
  const EnsembleSpec spec{EnsembleKind::Gue, 512, 42};
  double m2 = 0.0;
  double m4 = 0.0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    const ComplexMatrix x = sample(spec, 1, static_cast<std::uint64_t>(trial));
    // X Hermitian: tr X^2 = ||X||_F^2 and tr X^4 = ||X^2||_F^2.
    m2 += x.squaredNorm() / 512.0;
    m4 += ComplexMatrix(x * x).squaredNorm() / 512.0;
  }
  m2 /= trials;
  m4 /= trials;
  CHECK(m2 > 0.98);
  CHECK(m2 < 1.02);
  CHECK(m4 > 1.9);
  CHECK(m4 < 2.1);
}

TEST_CASE("independent GUE pair: tr(X1 X2) averages to zero") {
  std::vector<EnsembleSpec> specs(2, EnsembleSpec{EnsembleKind::Gue, 128, 11});
  double acc = 0.0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    const MatrixTuple t = sample_tuple(specs, static_cast<std::uint64_t>(trial));
    acc += normalized_trace(ComplexMatrix(t.matrix(1) * t.matrix(2))).real();
  }
  acc /= trials;
  CHECK(acc > -0.05);
  CHECK(acc < 0.05);
}

TEST_CASE("Haar samples are unitary to 1e-12") {
  const ComplexMatrix u = sample(EnsembleSpec{EnsembleKind::HaarUnitary, 8, 3}, 1, 0);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(8, 8)).norm() <= 1e-12);
}

TEST_CASE("substreams: index and trial separate, identical keys reproduce") {
  const EnsembleSpec spec{EnsembleKind::Gue, 16, 5};
  const ComplexMatrix a = sample(spec, 1, 0);
  const ComplexMatrix b = sample(spec, 2, 0);
  const ComplexMatrix c = sample(spec, 1, 1);
  CHECK((a - b).norm() > 1e-3);
  CHECK((a - c).norm() > 1e-3);
  const ComplexMatrix a_again = sample(spec, 1, 0);
  CHECK((a - a_again).norm() == 0.0);  // bit identical

  std::vector<EnsembleSpec> specs(2, spec);
  const MatrixTuple t1 = sample_tuple(specs, 4);
  const MatrixTuple t2 = sample_tuple(specs, 4);
  CHECK((t1.matrix(1) - t2.matrix(1)).norm() == 0.0);
  CHECK((t1.matrix(2) - t2.matrix(2)).norm() == 0.0);
}

TEST_CASE("dimension mismatches are rejected") {
  std::vector<EnsembleSpec> specs{EnsembleSpec{EnsembleKind::Gue, 4, 1},
                                  EnsembleSpec{EnsembleKind::Gue, 5, 1}};
  CHECK_THROWS_AS(sample_tuple(specs, 0), std::invalid_argument);
}

TEST_CASE("kind names round-trip") {
  for (EnsembleKind k : {EnsembleKind::Gue, EnsembleKind::Ginibre, EnsembleKind::HaarUnitary,
                         EnsembleKind::ShiftedGue, EnsembleKind::DiagonalConstant}) {
    CHECK(kind_from_name(kind_name(k)) == k);
  }
  CHECK_FALSE(kind_from_name("goe").has_value());
}
