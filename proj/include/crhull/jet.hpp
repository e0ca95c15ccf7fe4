#pragma once

#include <array>
#include <optional>

#include "crhull/bipoly.hpp"

namespace crhull {

/// Second-order Wirtinger Taylor data of a slice φ at `center`, in the
/// convention φ(center + ζ) = Σ β_{i,j} ζ^i ζ̄^j + remainder(ζ), i.e.
/// β_{i,j} is the raw mixed derivative divided by i!·j!.
struct TaylorJet {
  std::array<std::array<Complex, 3>, 3> coefficients{};  // [i][j], only i + j ≤ 2 used
  Complex center{};
  /// Exact terms of (ζ, ζ̄)-degree ≥ 3; absent for finite-difference jets.
  std::optional<BiPoly> remainder;

  Complex beta(int i, int j) const { return coefficients.at(i).at(j); }
  Complex& beta(int i, int j) { return coefficients.at(i).at(j); }
  /// 1 + largest |β|, used to make thresholds relative.
  double scale() const;
};

}  // namespace crhull
