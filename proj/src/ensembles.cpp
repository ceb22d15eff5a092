#include "ncrat/ensembles.hpp"

#include <cmath>
#include <stdexcept>

#include "ncrat/rng.hpp"

namespace ncrat {

namespace {

std::uint64_t kind_id(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::Gue: return 1;
    case EnsembleKind::Ginibre: return 2;
    case EnsembleKind::HaarUnitary: return 3;
    case EnsembleKind::ShiftedGue: return 4;
    case EnsembleKind::DiagonalConstant: return 5;
  }
  throw std::invalid_argument("unknown ensemble kind");
}

StreamRng stream_for(const EnsembleSpec& spec, std::uint64_t index, std::uint64_t trial) {
  return StreamRng{spec.seed, kind_id(spec.kind), static_cast<std::uint64_t>(spec.dim), index,
                   trial};
}

ComplexMatrix sample_gue(Eigen::Index n, StreamRng& rng) {
  ComplexMatrix x(n, n);
  const double diag_scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double off_scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, i) = Complex(rng.next_gaussian() * diag_scale, 0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex entry(rng.next_gaussian() * off_scale, rng.next_gaussian() * off_scale);
      x(i, j) = entry;
      x(j, i) = std::conj(entry);
    }
  }
  return x;
}

ComplexMatrix sample_ginibre(Eigen::Index n, StreamRng& rng) {
  ComplexMatrix x(n, n);
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      x(i, j) = Complex(rng.next_gaussian() * scale, rng.next_gaussian() * scale);
  return x;
}

ComplexMatrix sample_haar(Eigen::Index n, StreamRng& rng) {
  const ComplexMatrix g = sample_ginibre(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  // Phase fix: make R's diagonal positive so Q is Haar distributed.
  const auto r_diag = qr.matrixQR().diagonal();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mag = std::abs(r_diag(i));
    phases(i) = mag == 0.0 ? Complex(1.0, 0.0) : r_diag(i) / mag;
  }
  return ComplexMatrix(q * phases.asDiagonal());
}

}  // namespace

ComplexMatrix sample(const EnsembleSpec& spec, std::uint64_t index, std::uint64_t trial) {
  if (spec.dim < 1) throw std::invalid_argument("sample: dimension must be >= 1");
  const Eigen::Index n = spec.dim;
  StreamRng rng = stream_for(spec, index, trial);
  switch (spec.kind) {
    case EnsembleKind::Gue:
      return sample_gue(n, rng);
    case EnsembleKind::Ginibre:
      return sample_ginibre(n, rng);
    case EnsembleKind::HaarUnitary:
      return sample_haar(n, rng);
    case EnsembleKind::ShiftedGue:
      return ComplexMatrix(spec.param * ComplexMatrix::Identity(n, n) + sample_gue(n, rng));
    case EnsembleKind::DiagonalConstant:
      return ComplexMatrix(spec.param * ComplexMatrix::Identity(n, n));
  }
  throw std::invalid_argument("unknown ensemble kind");
}

MatrixTuple sample_tuple(const std::vector<EnsembleSpec>& specs, std::uint64_t trial) {
  if (specs.empty()) throw std::invalid_argument("sample_tuple: no specs");
  const Eigen::Index n = specs.front().dim;
  std::vector<ComplexMatrix> matrices;
  matrices.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].dim != n) throw std::invalid_argument("sample_tuple: dimension mismatch");
    matrices.push_back(sample(specs[i], static_cast<std::uint64_t>(i) + 1, trial));
  }
  return MatrixTuple::of(std::move(matrices));
}

std::string_view kind_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::Gue: return "gue";
    case EnsembleKind::Ginibre: return "ginibre";
    case EnsembleKind::HaarUnitary: return "haar";
    case EnsembleKind::ShiftedGue: return "shifted_gue";
    case EnsembleKind::DiagonalConstant: return "diag_const";
  }
  return "unknown";
}

std::optional<EnsembleKind> kind_from_name(std::string_view name) {
  if (name == "gue") return EnsembleKind::Gue;
  if (name == "ginibre") return EnsembleKind::Ginibre;
  if (name == "haar" || name == "haar_unitary") return EnsembleKind::HaarUnitary;
  if (name == "shifted_gue") return EnsembleKind::ShiftedGue;
  if (name == "diag_const" || name == "diagonal_constant") return EnsembleKind::DiagonalConstant;
  return std::nullopt;
}

}  // namespace ncrat
