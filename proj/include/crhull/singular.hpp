#pragma once

#include <limits>
#include <span>
#include <vector>

#include "crhull/jet.hpp"
#include "crhull/manifold.hpp"

namespace crhull {

/// ∂φ_t/∂w̄ = w + 2γw̄ + F_w̄(t, w). Vanishes exactly at complex tangents.
Complex b_slice(const ManifoldSpec& spec, std::span<const double> t, Complex w);

struct EtaSolution {
  Complex eta{};
  bool converged = false;
  double residual = 0.0;
  int iterations = 0;
  /// Real Jacobian determinant |b_w|² − |b_w̄|² at eta.
  double jacobian_det = 0.0;
  /// Set when |jacobian_det| < 1e−10 at the returned point.
  bool nondegeneracy_warning = false;
};

inline constexpr int kMaxNewtonIterations = 50;
inline constexpr double kLocusTolerance = 1e-12;
inline constexpr double kSingularJacobian = 1e-10;

/// Newton iteration for b_slice(t, ·) = 0 from `seed`. Throws
/// ErrorCode::SingularJacobian when a step is needed at a point with
/// |det| < 1e−10.
EtaSolution locate_eta(const ManifoldSpec& spec, std::span<const double> t, Complex seed);

struct SingularLocus {
  std::vector<std::vector<double>> t_grid;
  std::vector<Complex> eta;
  std::vector<bool> converged;
  std::vector<double> residuals;
  double max_residual = 0.0;

  bool all_converged() const;
};

/// Continuation over `t_grid`: points are solved outward from the origin,
/// each seeded from the nearest already-converged point. Failures are
/// recorded, never thrown.
SingularLocus trace_locus(const ManifoldSpec& spec, const std::vector<std::vector<double>>& t_grid);

/// Product grid with `count` equally spaced values per axis over [−T, T]
/// (count = 1 gives {0}).
std::vector<std::vector<double>> uniform_t_grid(std::size_t t_arity, double T, int count);

enum class PointKind { Elliptic, Parabolic, Hyperbolic, Degenerate };

const char* to_string(PointKind kind) noexcept;

struct Classification {
  PointKind kind = PointKind::Degenerate;
  double gamma_t = std::numeric_limits<double>::infinity();
  Complex beta11{};
  Complex beta02{};
};

inline constexpr double kParabolicBand = 1e-9;
inline constexpr double kDegenerateBeta11 = 1e-12;

Classification classify_point(const TaylorJet& jet);

}  // namespace crhull
