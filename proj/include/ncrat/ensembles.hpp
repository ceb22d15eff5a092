#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ncrat/eval.hpp"
#include "ncrat/matrix.hpp"

namespace ncrat {

enum class EnsembleKind {
  Gue,              // Hermitian Gaussian, spectrum -> semicircle on [-2, 2]
  Ginibre,          // iid complex Gaussians, variance 1/n
  HaarUnitary,      // QR of Ginibre with the positive-diagonal phase fix
  ShiftedGue,       // param + GUE
  DiagonalConstant, // param * I, no randomness
};

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Gue;
  Eigen::Index dim = 1;
  std::uint64_t seed = 0;
  Complex param{0.0, 0.0};  // offset for ShiftedGue, value for DiagonalConstant
};

/// Draws the matrix for tuple slot `index` (1-based) of the given trial.
/// The output is a pure function of (seed, kind, dim, index, trial), so
/// trials can be sampled in any order with identical results.
ComplexMatrix sample(const EnsembleSpec& spec, std::uint64_t index, std::uint64_t trial);

/// One matrix per spec, slot i sampled with index i+1.
MatrixTuple sample_tuple(const std::vector<EnsembleSpec>& specs, std::uint64_t trial);

std::string_view kind_name(EnsembleKind kind);
std::optional<EnsembleKind> kind_from_name(std::string_view name);

}  // namespace ncrat
