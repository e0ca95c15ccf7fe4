#include "crhull/normalform.hpp"

#include <algorithm>
#include <cmath>

#include "crhull/error.hpp"

namespace crhull {

TaylorJet jet_of(const BiPoly& phi, Complex center) {
  if (phi.t_arity() != 0) throw Error(ErrorCode::Arity, "jet_of expects a t-free slice");
  const BiPoly local = phi.shifted(center);
  TaylorJet jet;
  jet.center = center;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; i + j <= 2; ++j) jet.beta(i, j) = local.coefficient(Monomial{{}, i, j});
  jet.remainder = local.filter_w_degree(3, std::max(3, local.total_degree()));
  return jet;
}

TaylorJet jet_at(const ManifoldSpec& spec, std::span<const double> t, Complex center) {
  return jet_of(slice_polynomial(spec, t), center);
}

const char* to_string(CoordinateChange::Kind kind) noexcept {
  using K = CoordinateChange::Kind;
  switch (kind) {
    case K::Translate: return "translate";
    case K::KillLinear: return "kill-linear";
    case K::Scale: return "scale";
    case K::Rotate: return "rotate";
    case K::KillQuadratic: return "kill-holomorphic-quadratic";
  }
  return "unknown";
}

SliceNormalForm reduce(const TaylorJet& jet) {
  if (!jet.remainder) throw Error(ErrorCode::InvalidArgument, "reduce needs an exact remainder");
  const double scale = jet.scale();
  const Complex b11 = jet.beta(1, 1);
  if (std::abs(b11) <= 1e-12 * scale)
    throw Error(ErrorCode::DegenerateJet, "reduce: beta11 vanishes");
  if (std::abs(jet.beta(0, 1)) > kOffLocusTolerance * scale)
    throw Error(ErrorCode::OffLocus, "reduce: beta01 does not vanish; center is not a complex point");

  const Complex ratio = jet.beta(0, 2) / b11;
  SliceNormalForm nf;
  nf.beta11 = b11;
  nf.gamma_t = std::abs(ratio);
  nf.theta = ratio == Complex{} ? 0.0 : 0.5 * std::arg(ratio);
  nf.g_hat = jet.remainder->rotated(nf.theta) * (1.0 / b11);

  using K = CoordinateChange::Kind;
  const Complex kill = nf.gamma_t - jet.beta(2, 0) / b11 * std::polar(1.0, 2.0 * nf.theta);
  nf.change_log = {
      {K::Translate, jet.center, {}},
      {K::KillLinear, jet.beta(0, 0), jet.beta(1, 0)},
      {K::Scale, b11, {}},
      {K::Rotate, nf.theta, {}},
      {K::KillQuadratic, kill, {}},
  };
  return nf;
}

std::pair<BiPoly, BiPoly> replay(const std::vector<CoordinateChange>& log, const BiPoly& phi) {
  BiPoly z2 = BiPoly::w();
  BiPoly z3 = phi;
  using K = CoordinateChange::Kind;
  for (const CoordinateChange& step : log) {
    switch (step.kind) {
      case K::Translate:
        z2 = z2.shifted(step.value) - BiPoly::constant(0, step.value);
        z3 = z3.shifted(step.value);
        break;
      case K::KillLinear:
        z3 = z3 - BiPoly::constant(0, step.value) - step.linear * z2;
        break;
      case K::Scale:
        z3 = z3 * (1.0 / step.value);
        break;
      case K::Rotate: {
        const double theta = step.value.real();
        z2 = z2.rotated(theta) * std::polar(1.0, -theta);
        z3 = z3.rotated(theta);
        break;
      }
      case K::KillQuadratic:
        z3 = z3 + step.value * (z2 * z2);
        break;
    }
  }
  return {std::move(z2), std::move(z3)};
}

double normal_form_threshold(double gamma_t) {
  if (!(gamma_t > 0.5))
    throw Error(ErrorCode::NonHyperbolic, "normal_form_threshold requires gamma > 1/2");
  const double a = 2.0 * gamma_t - 1.0;
  return (a * a * a) / (16384.0 * gamma_t * gamma_t * gamma_t);
}

}  // namespace crhull
