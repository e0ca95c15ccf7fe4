#include "crhull/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "crhull/error.hpp"
#include "crhull/normalform.hpp"
#include "crhull/singular.hpp"

namespace crhull {

namespace {

const Complex kI{0.0, 1.0};

void require_hyperbolic(double gamma, const char* where) {
  if (!(gamma > 0.5))
    throw Error(ErrorCode::NonHyperbolic, std::string(where) + " requires gamma > 1/2");
}

// Perturbation of the linear root for γv² + sign·Dv − F = 0, chosen so that
// dv(0) = 0. Returns sign·(−D/(2γ))·q with q = 1 − √(1 + 4γF/D²).
Complex branch_root(double gamma, Complex D, Complex Fv, double sign) {
  const Complex z = 4.0 * gamma * Fv / (D * D);
  if (!(std::abs(z) < 0.25))
    throw Error(ErrorCode::BranchDomain,
                "branch square-root argument has modulus >= 1/4; point outside certified region");
  return sign * (-D / (2.0 * gamma)) * sqrt1p_deviation(z);
}

BranchSolution solve_branch(Branch which, double gamma, const BiPoly& F, std::span<const double> t,
                            Complex zeta) {
  require_hyperbolic(gamma, "branch solver");
  const double sign = which == Branch::S1 ? 1.0 : -1.0;
  const Complex D = zeta + 2.0 * gamma * std::conj(zeta);
  const Complex Fv = F.eval(t, zeta);
  BranchSolution out;
  out.which = which;
  if (zeta != Complex{}) out.value = branch_root(gamma, D, Fv, sign);
  const Complex v = out.value;
  out.residual = std::abs(gamma * v * v + sign * D * v - Fv);
  out.linear_part = which == Branch::S1 ? std::conj(zeta) + v
                                         : -zeta / gamma - std::conj(zeta) + v;
  return out;
}

double grid_value(double half_width, int count, int i) {
  return count == 1 ? 0.0 : -half_width + 2.0 * half_width * i / (count - 1);
}

Complex q_polynomial(double eps, const SheetPoint& s) {
  return eps * (s.z1 * s.z1 + s.z2 * s.z2) + kI * s.z1 * s.z2;
}

// Sheet perturbation f = √(D² + 4γF) − D with D = 2γw̄ + w.
Complex sheet_perturbation(const ManifoldSpec& spec, double t, Complex w) {
  if (w == Complex{}) return {};
  const double g = spec.gamma;
  const Complex D = 2.0 * g * std::conj(w) + w;
  const double tv[1] = {t};
  const Complex Fv = spec.F.eval(tv, w);
  const Complex z = 4.0 * g * Fv / (D * D);
  if (!(std::abs(z) < 0.25))
    throw Error(ErrorCode::BranchDomain, "sheet square-root argument has modulus >= 1/4");
  return -D * sqrt1p_deviation(z);
}

double sheet_h(const ManifoldSpec& spec, double t, Complex w) {
  const double tv[1] = {t};
  return spec.f.empty() ? 0.0 : spec.f[0].eval(tv, w).real();
}

void require_m3(const ManifoldSpec& spec) {
  if (spec.n != 3 || spec.f.size() != 1 || spec.F.t_arity() != 1)
    throw Error(ErrorCode::InvalidArgument, "the n = 3 check needs a spec with n = 3");
  require_hyperbolic(spec.gamma, "kallin_check_m3");
}

}  // namespace

const char* to_string(Branch b) noexcept {
  switch (b) {
    case Branch::S1: return "S1";
    case Branch::S2: return "S2";
    case Branch::V1: return "V1";
    case Branch::V2: return "V2";
  }
  return "unknown";
}

BranchSolution solve_branch_f(double gamma, const BiPoly& F, std::span<const double> t, Complex zeta) {
  return solve_branch(Branch::S1, gamma, F, t, zeta);
}

BranchSolution solve_branch_g(double gamma, const BiPoly& F, std::span<const double> t, Complex zeta) {
  return solve_branch(Branch::S2, gamma, F, t, zeta);
}

double forward_check(double gamma, const BiPoly& F, std::span<const double> t,
                     const BranchSolution& branch, Complex zeta) {
  const Complex L = branch.linear_part;
  const Complex image = zeta * L + gamma * (zeta * zeta + L * L);
  const Complex zb = std::conj(zeta);
  const Complex target = zeta * zb + gamma * (zeta * zeta + zb * zb) + F.eval(t, zeta);
  return std::abs(image - target);
}

BranchDerivatives branch_derivatives(double gamma, const BiPoly& F, std::span<const double> t,
                                     const BranchSolution& branch, Complex zeta) {
  if (zeta == Complex{}) return {};
  const Complex D = zeta + 2.0 * gamma * std::conj(zeta);
  const Complex Fz = F.d_w().eval(t, zeta);
  const Complex Fzb = F.d_wbar().eval(t, zeta);
  const Complex v = branch.value;
  if (branch.which == Branch::S1) {
    const Complex denom = 2.0 * gamma * v + D;
    return {(Fz - v) / denom, (Fzb - 2.0 * gamma * v) / denom};
  }
  if (branch.which == Branch::S2) {
    const Complex denom = 2.0 * gamma * v - D;
    return {(Fz + v) / denom, (Fzb + 2.0 * gamma * v) / denom};
  }
  throw Error(ErrorCode::InvalidArgument, "branch_derivatives supports S1 and S2 only");
}

double lipschitz_alpha(double gamma) {
  require_hyperbolic(gamma, "lipschitz_alpha");
  return (2.0 * gamma - 1.0) / (32.0 * gamma * gamma);
}

LipschitzAudit lipschitz_audit(double gamma, const BiPoly& F, double r, std::size_t pair_count,
                               std::uint64_t seed) {
  LipschitzAudit audit;
  audit.alpha = lipschitz_alpha(gamma);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] {
    const double rho = r * std::sqrt(unit(rng));
    return std::polar(rho, 2.0 * std::numbers::pi * unit(rng));
  };
  for (std::size_t i = 0; i < pair_count; ++i) {
    const Complex a = draw(), b = draw();
    const double dz = std::abs(a - b);
    if (dz == 0.0) continue;
    const double rf = std::abs(solve_branch_f(gamma, F, {}, a).value -
                               solve_branch_f(gamma, F, {}, b).value) / dz;
    const double rg = std::abs(solve_branch_g(gamma, F, {}, a).value -
                               solve_branch_g(gamma, F, {}, b).value) / dz;
    audit.max_ratio = std::max({audit.max_ratio, rf, rg});
    if (rf > audit.alpha || rg > audit.alpha) ++audit.violations;
    ++audit.pairs;
  }
  return audit;
}

KallinReport kallin_check_m2(double gamma, const BiPoly& F, const DiskGrid& grid) {
  KallinReport rep;
  rep.alpha = lipschitz_alpha(gamma);
  const double a = rep.alpha;
  rep.side1_min_margin = rep.side2_min_margin = std::numeric_limits<double>::infinity();
  rep.side1_min_value = std::numeric_limits<double>::infinity();
  rep.side2_max_value = -std::numeric_limits<double>::infinity();
  auto psi = [a](Complex z1, Complex z2) { return 0.25 * (z1 * z1 - z2 * z2) + 2.0 * a * z1 * z2; };

  for (Complex zeta : grid.points) {
    const double s = std::norm(zeta);
    if (s == 0.0) continue;
    const Complex p1 = psi(zeta, solve_branch_f(gamma, F, {}, zeta).linear_part);
    const Complex p2 = psi(zeta, solve_branch_g(gamma, F, {}, zeta).linear_part);
    rep.side1_min_value = std::min(rep.side1_min_value, p1.real());
    rep.side2_max_value = std::max(rep.side2_max_value, p2.real());
    rep.side1_min_margin = std::min(rep.side1_min_margin, p1.real() / s - 0.375 * a);
    rep.side2_min_margin = std::min(rep.side2_min_margin, -p2.real() / s - 3.0 * a);
    if (std::abs(p1) <= 1e-14 * s || std::abs(p2) <= 1e-14 * s) rep.zero_fiber_ok = false;
    ++rep.points;
  }
  std::ostringstream os;
  os << "disk r=" << grid.radius << " " << grid.radial_count << "x" << grid.angular_count;
  rep.grid = os.str();
  return rep;
}

double choose_epsilon(double gamma) {
  require_hyperbolic(gamma, "choose_epsilon");
  const double eps =
      gamma >= 1.0 ? 0.25 : 0.5 * (2.0 * gamma - 1.0) / (4.0 * gamma * (1.0 - gamma));
  const double lhs = eps * (-1.0 + 1.0 / gamma) - 1.0 / (2.0 * gamma) + 1.0 / (4.0 * gamma * gamma);
  if (!(lhs < 0.0)) throw Error(ErrorCode::Domain, "choose_epsilon: inequality not satisfied");
  return eps;
}

SheetPoint sheet_v1(const ManifoldSpec& spec, double t, Complex w) {
  const double g = spec.gamma;
  const Complex f = sheet_perturbation(spec, t, w);
  return {Complex{t, sheet_h(spec, t, w)}, w.real() + f / (4.0 * g), w.imag() + kI * f / (4.0 * g)};
}

SheetPoint sheet_v2(const ManifoldSpec& spec, double t, Complex w) {
  const double g = spec.gamma, u = w.real(), v = w.imag();
  const Complex f = sheet_perturbation(spec, t, w);
  return {Complex{t, sheet_h(spec, t, w)},
          (-u + (2.0 * g - 1.0) * kI * v) / (2.0 * g) - f / (4.0 * g),
          (-(2.0 * g + 1.0) * kI * u + v) / (2.0 * g) - kI * f / (4.0 * g)};
}

KallinReport kallin_check_m3(const ManifoldSpec& spec, const BoxGrid& grid) {
  require_m3(spec);
  if (!order_two_in_w(spec.F))
    throw Error(ErrorCode::OrderTwoViolation, "kallin_check_m3: F does not vanish to order two in w");
  KallinReport rep;
  rep.alpha = choose_epsilon(spec.gamma);
  const double eps = rep.alpha;
  rep.side1_min_margin = rep.side2_min_margin = std::numeric_limits<double>::infinity();
  rep.side1_min_value = std::numeric_limits<double>::infinity();
  rep.side2_max_value = -std::numeric_limits<double>::infinity();

  for (int i = 0; i < grid.t_count; ++i) {
    const double t = grid_value(grid.T, grid.t_count, i);
    for (int j = 0; j < grid.u_count; ++j) {
      const double u = grid_value(grid.r, grid.u_count, j);
      for (int k = 0; k < grid.v_count; ++k) {
        const double v = grid_value(grid.r, grid.v_count, k);
        const Complex w{u, v};
        const Complex q1 = q_polynomial(eps, sheet_v1(spec, t, w));
        const Complex q2 = q_polynomial(eps, sheet_v2(spec, t, w));
        const double s = u * u + v * v;
        ++rep.points;
        rep.side1_min_value = std::min(rep.side1_min_value, q1.real());
        rep.side2_max_value = std::max(rep.side2_max_value, q2.real());
        if (s == 0.0) {
          // Zero fiber: both sheets must meet Q = 0 exactly on the t-axis.
          if (std::abs(q1) > 1e-12 || std::abs(q2) > 1e-12) rep.zero_fiber_ok = false;
          continue;
        }
        rep.side1_min_margin = std::min(rep.side1_min_margin, q1.real() / s);
        rep.side2_min_margin = std::min(rep.side2_min_margin, -q2.real() / s);
        if (std::abs(q1.real()) <= 1e-12 * s || std::abs(q2.real()) <= 1e-12 * s)
          rep.zero_fiber_ok = false;
      }
    }
  }
  std::ostringstream os;
  os << "box T=" << grid.T << " r=" << grid.r << " " << grid.t_count << "x" << grid.u_count << "x"
     << grid.v_count;
  rep.grid = os.str();
  return rep;
}

CertifiedRadius certify_radius(double gamma, const BiPoly& F, double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "certify_radius requires R > 0");
  CertifiedRadius out;
  out.threshold = normal_form_threshold(gamma);
  if (F.is_zero()) {
    out.r = R;
    out.certified = true;
    return out;
  }
  const RealPartials partials = real_partials(F);
  auto fits = [&](double r) { return c2_upper_bound(partials, r) <= out.threshold; };

  if (fits(R)) {
    out.r = R;
  } else {
    double lo = 0.0, hi = R;
    while (hi - lo > std::ldexp(hi, -52) && out.bisection_steps < 1100) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (fits(mid) ? lo : hi) = mid;
      ++out.bisection_steps;
    }
    out.r = lo;
  }
  out.certified = out.r > 0.0;
  if (out.certified) out.c2_at_r = c2_norm_upper(F, out.r).upper;
  return out;
}

double FlatCertificate::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const SliceRecord& s : per_slice)
    if (s.in_box && s.margin < m) m = s.margin;
  return m;
}

FlatCertificate certify_flat(const ManifoldSpec& spec, const std::vector<std::vector<double>>& t_grid) {
  if (!spec.flat) throw Error(ErrorCode::NotFlat, "certify_flat requires a flat spec");
  const std::size_t k = spec.t_arity();

  std::vector<std::vector<double>> grid = t_grid;
  const std::vector<double> origin(k, 0.0);
  if (std::find(grid.begin(), grid.end(), origin) == grid.end()) grid.insert(grid.begin(), origin);

  FlatCertificate cert;
  const SingularLocus locus = trace_locus(spec, grid);
  std::vector<RealPartials> partials(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SliceRecord rec;
    rec.t = grid[i];
    rec.eta = locus.eta[i];
    if (!locus.converged[i]) {
      rec.failure = "locus not converged";
    } else {
      try {
        const SliceNormalForm nf = reduce(jet_at(spec, grid[i], locus.eta[i]));
        rec.ok = true;
        rec.gamma_t = nf.gamma_t;
        rec.g_hat = nf.g_hat;
        rec.hyperbolic = nf.gamma_t > 0.5 + kParabolicBand;
        if (rec.hyperbolic) rec.threshold = normal_form_threshold(nf.gamma_t);
        partials[i] = real_partials(nf.g_hat);
      } catch (const Error& e) {
        rec.failure = e.what();
      }
    }
    cert.per_slice.push_back(std::move(rec));
  }

  const auto origin_it = std::find(grid.begin(), grid.end(), origin);
  const SliceRecord& center = cert.per_slice[static_cast<std::size_t>(origin_it - grid.begin())];
  if (!center.ok) {
    cert.diagnostics.push_back("origin slice failed: " + center.failure);
    return cert;
  }
  if (!center.hyperbolic) {
    cert.diagnostics.push_back("non-hyperbolic origin slice");
    return cert;
  }

  auto sup_norm = [](const std::vector<double>& t) {
    double m = 0.0;
    for (double x : t) m = std::max(m, std::abs(x));
    return m;
  };

  for (int j = 0; j <= kCandidateLevels && !cert.certified; ++j) {
    const double Tc = std::ldexp(spec.T, -j);
    std::vector<std::size_t> members;
    bool usable = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (sup_norm(grid[i]) > Tc * (1.0 + 1e-12)) continue;
      const SliceRecord& rec = cert.per_slice[i];
      if (!rec.ok || !rec.hyperbolic) usable = false;
      members.push_back(i);
    }
    if (!usable) continue;
    for (int l = 0; l <= kCandidateLevels; ++l) {
      const double rho = std::ldexp(spec.R, -l);
      const bool all_positive = std::all_of(members.begin(), members.end(), [&](std::size_t i) {
        const SliceRecord& rec = cert.per_slice[i];
        return std::abs(rec.eta) + rho <= spec.R && c2_upper_bound(partials[i], rho) < rec.threshold;
      });
      if (all_positive) {
        cert.T_star = Tc;
        cert.r_star = rho;
        cert.certified = true;
        break;
      }
    }
  }

  if (!cert.certified) {
    cert.diagnostics.push_back("no candidate box with positive margins");
    return cert;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SliceRecord& rec = cert.per_slice[i];
    rec.in_box = sup_norm(grid[i]) <= cert.T_star * (1.0 + 1e-12);
    if (!rec.ok || !rec.hyperbolic) continue;
    rec.g_hat_c2 = rec.g_hat.is_zero() ? 0.0 : c2_norm_upper(rec.g_hat, cert.r_star).upper;
    rec.margin = rec.threshold - rec.g_hat_c2;
  }
  return cert;
}

}  // namespace crhull
