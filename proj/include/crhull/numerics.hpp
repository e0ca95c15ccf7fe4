#pragma once

#include <functional>
#include <vector>

#include "crhull/bipoly.hpp"
#include "crhull/jet.hpp"

namespace crhull {

/// q = 1 − √(1+z) on the principal branch. Throws ErrorCode::Domain unless
/// |z| < 1/4, where |q| ≤ (10/11)|z| and |q| < 9/10.
Complex sqrt1p_deviation(Complex z);

/// Polar sampling of the closed disk: the center plus `radial_count` rings
/// at radius·k/radial_count, each with `angular_count` equally spaced angles
/// starting at angle 0. The outermost ring lies on the boundary.
struct DiskGrid {
  double radius = 0.0;
  int radial_count = 0;
  int angular_count = 0;
  std::vector<Complex> points;

  static DiskGrid make(double radius, int radial_count, int angular_count);
};

struct C2NormBound {
  double upper = 0.0;     // certified coefficient bound
  double grid_max = 0.0;  // sampled estimate, never used for certification
  double radius = 0.0;
};

/// F and its real partials up to order two, w = x + iy.
struct RealPartials {
  BiPoly value, dx, dy, dxx, dxy, dyy;

  std::array<const BiPoly*, 6> all() const { return {&value, &dx, &dy, &dxx, &dxy, &dyy}; }
};

RealPartials real_partials(const BiPoly& F);

/// Σ|c|·r^(b+c): a sup bound of |P| on the closed disk of radius r.
double coefficient_bound(const BiPoly& P, double r);

/// Certified part of c2_norm_upper alone (no grid sampling).
double c2_upper_bound(const RealPartials& partials, double r);

/// C²-norm bound of a t-free F on the closed r-disk, as the max over the six
/// real partials of order ≤ 2. `grid` controls the sampled estimate.
C2NormBound c2_norm_upper(const BiPoly& F, double r, int radial_count = 32,
                          int angular_count = 64);

/// Central-difference Wirtinger jet of f at p with step h. f must be
/// evaluable on the disk of radius 4h about p.
TaylorJet wirtinger_jet(const std::function<Complex(Complex)>& f, Complex p, double h = 1e-4);

}  // namespace crhull
