#include "crhull/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>

#include "crhull/error.hpp"

namespace crhull {

namespace {

// Coefficient sums are exact in real arithmetic; this covers summation rounding.
constexpr double kRoundingSlack = 1.0 + 64.0 * std::numeric_limits<double>::epsilon();

const Complex kI{0.0, 1.0};

}  // namespace

double TaylorJet::scale() const {
  double s = 0.0;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; i + j <= 2; ++j) s = std::max(s, std::abs(beta(i, j)));
  return 1.0 + s;
}

Complex sqrt1p_deviation(Complex z) {
  if (!(std::abs(z) < 0.25))
    throw Error(ErrorCode::Domain, "sqrt1p_deviation requires |z| < 1/4");
  const Complex q = 1.0 - std::sqrt(1.0 + z);
  assert(std::abs(q) <= (10.0 / 11.0) * std::abs(z) * (1.0 + 1e-12) + 1e-300);
  return q;
}

DiskGrid DiskGrid::make(double radius, int radial_count, int angular_count) {
  if (!(radius > 0.0) || radial_count < 2 || angular_count < 4)
    throw Error(ErrorCode::InvalidArgument,
                "DiskGrid needs radius > 0, radial_count >= 2, angular_count >= 4");
  DiskGrid g{radius, radial_count, angular_count, {}};
  g.points.reserve(static_cast<std::size_t>(radial_count) * angular_count + 1);
  g.points.emplace_back(0.0, 0.0);
  for (int k = 1; k <= radial_count; ++k) {
    const double rho = radius * k / radial_count;
    for (int j = 0; j < angular_count; ++j)
      g.points.push_back(std::polar(rho, 2.0 * std::numbers::pi * j / angular_count));
  }
  return g;
}

RealPartials real_partials(const BiPoly& F) {
  const BiPoly Fw = F.d_w();
  const BiPoly Fwb = F.d_wbar();
  const BiPoly Fww = Fw.d_w();
  const BiPoly Fwwb = Fw.d_wbar();
  const BiPoly Fwbwb = Fwb.d_wbar();
  RealPartials p;
  p.value = F;
  p.dx = Fw + Fwb;
  p.dy = kI * (Fw - Fwb);
  p.dxx = Fww + 2.0 * Fwwb + Fwbwb;
  p.dxy = kI * (Fww - Fwbwb);
  p.dyy = 2.0 * Fwwb - Fww - Fwbwb;
  return p;
}

double coefficient_bound(const BiPoly& P, double r) {
  double s = 0.0;
  for (const auto& [m, c] : P.terms()) s += std::abs(c) * std::pow(r, m.w + m.wbar);
  return s;
}

double c2_upper_bound(const RealPartials& partials, double r) {
  double upper = 0.0;
  for (const BiPoly* p : partials.all()) upper = std::max(upper, coefficient_bound(*p, r));
  return upper * kRoundingSlack;
}

C2NormBound c2_norm_upper(const BiPoly& F, double r, int radial_count, int angular_count) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "c2_norm_upper requires r > 0");
  if (F.t_arity() != 0)
    throw Error(ErrorCode::Arity, "c2_norm_upper expects a t-free polynomial");
  C2NormBound out{0.0, 0.0, r};
  if (F.is_zero()) return out;
  const RealPartials partials = real_partials(F);
  const DiskGrid grid = DiskGrid::make(r, radial_count, angular_count);
  out.upper = c2_upper_bound(partials, r);
  for (const BiPoly* p : partials.all()) {
    for (Complex z : grid.points) out.grid_max = std::max(out.grid_max, std::abs(p->eval(z)));
  }
  return out;
}

TaylorJet wirtinger_jet(const std::function<Complex(Complex)>& f, Complex p, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "wirtinger_jet requires h > 0");
  const Complex dx{h, 0.0}, dy{0.0, h};
  const Complex f0 = f(p);
  const Complex fxp = f(p + dx), fxm = f(p - dx);
  const Complex fyp = f(p + dy), fym = f(p - dy);
  const Complex Fx = (fxp - fxm) / (2.0 * h);
  const Complex Fy = (fyp - fym) / (2.0 * h);
  const Complex Fxx = (fxp - 2.0 * f0 + fxm) / (h * h);
  const Complex Fyy = (fyp - 2.0 * f0 + fym) / (h * h);
  const Complex Fxy =
      (f(p + dx + dy) - f(p + dx - dy) - f(p - dx + dy) + f(p - dx - dy)) / (4.0 * h * h);

  TaylorJet jet;
  jet.center = p;
  jet.beta(0, 0) = f0;
  jet.beta(1, 0) = 0.5 * (Fx - kI * Fy);
  jet.beta(0, 1) = 0.5 * (Fx + kI * Fy);
  // raw ∂²_w = (Fxx − 2iFxy − Fyy)/4, divided by 2!
  jet.beta(2, 0) = (Fxx - 2.0 * kI * Fxy - Fyy) / 8.0;
  jet.beta(0, 2) = (Fxx + 2.0 * kI * Fxy - Fyy) / 8.0;
  jet.beta(1, 1) = (Fxx + Fyy) / 4.0;
  return jet;
}

}  // namespace crhull
