#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crhull/jet.hpp"
#include "crhull/manifold.hpp"

namespace crhull {

/// Exact jet of a t-free slice polynomial φ about `center`.
TaylorJet jet_of(const BiPoly& phi, Complex center);
TaylorJet jet_at(const ManifoldSpec& spec, std::span<const double> t, Complex center);

/// One step of the slice normalization. Parameter meanings:
///   Translate:      w = ζ + value, z₂ → z₂ − value
///   KillLinear:     z₃ → z₃ − value − linear·z₂
///   Scale:          z₃ → z₃ / value
///   Rotate:         ζ → e^{iθ}ζ, z₂ → e^{−iθ}z₂ (θ = value.real())
///   KillQuadratic:  z₃ → z₃ + value·z₂²
struct CoordinateChange {
  enum class Kind { Translate, KillLinear, Scale, Rotate, KillQuadratic };
  Kind kind;
  Complex value{};
  Complex linear{};
};

const char* to_string(CoordinateChange::Kind kind) noexcept;

struct SliceNormalForm {
  double gamma_t = 0.0;
  double theta = 0.0;
  BiPoly g_hat{0};
  Complex beta11{};
  std::vector<CoordinateChange> change_log;
};

inline constexpr double kOffLocusTolerance = 1e-9;

/// Reduces a jet at a complex point to ζζ̄ + γ_t(ζ² + ζ̄²) + Ĝ_t(ζ).
/// Throws ErrorCode::DegenerateJet when β₁,₁ vanishes, ErrorCode::OffLocus
/// when β₀,₁ does not, and ErrorCode::InvalidArgument without a remainder.
SliceNormalForm reduce(const TaylorJet& jet);

/// Applies `log` to the parametrized slice (z₂, z₃) = (w, φ(w)) and returns
/// the resulting pair as polynomials in the final parameter ζ.
std::pair<BiPoly, BiPoly> replay(const std::vector<CoordinateChange>& log, const BiPoly& phi);

/// (2γ−1)³ / (2¹⁴γ³). Throws ErrorCode::NonHyperbolic for γ ≤ 1/2.
double normal_form_threshold(double gamma_t);

}  // namespace crhull
