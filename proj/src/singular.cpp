#include "crhull/singular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crhull/error.hpp"

namespace crhull {

namespace {

double norm2(std::span<const double> t) {
  double s = 0.0;
  for (double x : t) s += x * x;
  return std::sqrt(s);
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

Complex b_slice(const ManifoldSpec& spec, std::span<const double> t, Complex w) {
  return w + 2.0 * spec.gamma * std::conj(w) + spec.F.d_wbar().eval(t, w);
}

EtaSolution locate_eta(const ManifoldSpec& spec, std::span<const double> t, Complex seed) {
  const BiPoly b = slice_polynomial(spec, t).d_wbar();
  const BiPoly b_w = b.d_w();
  const BiPoly b_wb = b.d_wbar();
  const double t_norm = norm2(t);

  EtaSolution sol;
  Complex w = seed;
  for (int iter = 0;; ++iter) {
    const Complex value = b.eval(w);
    const Complex A = b_w.eval(w);
    const Complex B = b_wb.eval(w);
    sol.eta = w;
    sol.residual = std::abs(value);
    sol.iterations = iter;
    sol.jacobian_det = std::norm(A) - std::norm(B);
    sol.nondegeneracy_warning = std::abs(sol.jacobian_det) < kSingularJacobian;
    if (sol.residual <= kLocusTolerance * (1.0 + std::abs(w) + t_norm)) {
      sol.converged = true;
      return sol;
    }
    if (iter == kMaxNewtonIterations || !std::isfinite(sol.residual)) return sol;
    if (sol.nondegeneracy_warning)
      throw Error(ErrorCode::SingularJacobian, "locate_eta: singular Jacobian at iterate " +
                                                   std::to_string(iter));
    // Solve A·δ + B·δ̄ = −value for the complex step δ.
    w += (B * std::conj(value) - std::conj(A) * value) / sol.jacobian_det;
  }
}

bool SingularLocus::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

SingularLocus trace_locus(const ManifoldSpec& spec, const std::vector<std::vector<double>>& t_grid) {
  SingularLocus locus;
  locus.t_grid = t_grid;
  const std::size_t count = t_grid.size();
  locus.eta.assign(count, Complex{});
  locus.converged.assign(count, false);
  locus.residuals.assign(count, 0.0);

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double na = norm2(t_grid[a]), nb = norm2(t_grid[b]);
    if (na != nb) return na < nb;
    return t_grid[a] < t_grid[b];
  });

  std::vector<std::size_t> solved;
  for (std::size_t idx : order) {
    Complex seed{};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s : solved) {
      const double d = distance(t_grid[idx], t_grid[s]);
      if (d < best) {
        best = d;
        seed = locus.eta[s];
      }
    }
    try {
      const EtaSolution sol = locate_eta(spec, t_grid[idx], seed);
      locus.eta[idx] = sol.eta;
      locus.converged[idx] = sol.converged;
      locus.residuals[idx] = sol.residual;
      if (sol.converged) solved.push_back(idx);
    } catch (const Error&) {
      locus.eta[idx] = seed;
      locus.residuals[idx] = std::abs(b_slice(spec, t_grid[idx], seed));
    }
    locus.max_residual = std::max(locus.max_residual, locus.residuals[idx]);
  }
  return locus;
}

std::vector<std::vector<double>> uniform_t_grid(std::size_t t_arity, double T, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "t-grid count must be >= 1");
  std::vector<double> axis(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) axis[i] = count == 1 ? 0.0 : -T + 2.0 * T * i / (count - 1);
  if (count % 2 == 1) axis[count / 2] = 0.0;

  std::vector<std::vector<double>> grid{{}};
  for (std::size_t d = 0; d < t_arity; ++d) {
    std::vector<std::vector<double>> next;
    next.reserve(grid.size() * axis.size());
    for (const auto& prefix : grid)
      for (double x : axis) {
        auto p = prefix;
        p.push_back(x);
        next.push_back(std::move(p));
      }
    grid = std::move(next);
  }
  return grid;
}

const char* to_string(PointKind kind) noexcept {
  switch (kind) {
    case PointKind::Elliptic: return "elliptic";
    case PointKind::Parabolic: return "parabolic";
    case PointKind::Hyperbolic: return "hyperbolic";
    case PointKind::Degenerate: return "degenerate";
  }
  return "unknown";
}

Classification classify_point(const TaylorJet& jet) {
  Classification c;
  c.beta11 = jet.beta(1, 1);
  c.beta02 = jet.beta(0, 2);
  if (std::abs(c.beta11) <= kDegenerateBeta11 * jet.scale()) return c;
  c.gamma_t = std::abs(c.beta02 / c.beta11);
  if (std::abs(c.gamma_t - 0.5) <= kParabolicBand)
    c.kind = PointKind::Parabolic;
  else
    c.kind = c.gamma_t < 0.5 ? PointKind::Elliptic : PointKind::Hyperbolic;
  return c;
}

}  // namespace crhull
