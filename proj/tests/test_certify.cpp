#include <doctest.h>

#include <cmath>
#include <random>

#include "crhull/certify.hpp"
#include "crhull/error.hpp"
#include "crhull/normalform.hpp"
#include "crhull/singular.hpp"
#include "support.hpp"

using namespace crhull;
using testing::poly;

namespace {

const BiPoly kCubic = poly(0, {{{}, 3, 0, 1.0}});

// F rescaled so its certified C² bound on the r-disk sits just under the threshold.
BiPoly scaled_to_threshold(const BiPoly& F, double gamma, double r) {
  return F * Complex{(1.0 - 1e-12) * normal_form_threshold(gamma) / c2_norm_upper(F, r).upper};
}

// The n = 3 sheet fixture: h = uv, F = w²w̄.
ManifoldSpec sheet_fixture(double gamma = 1.0) {
  ManifoldSpec s;
  s.n = 3;
  s.gamma = gamma;
  s.F = poly(1, {{{0}, 2, 1, 1.0}});
  s.f = {poly(1, {{{0}, 2, 0, Complex{0, -0.25}}, {{0}, 0, 2, Complex{0, 0.25}}})};
  return s;
}

}  // namespace

TEST_CASE("branch solutions for the cubic at 0.1") {
  const BranchSolution f = solve_branch_f(1.0, kCubic, {}, 0.1);
  const double f_exact = (-0.3 + std::sqrt(0.094)) / 2.0;
  CHECK(std::abs(f.value - f_exact) < 1e-15);
  CHECK(f.value.real() == doctest::Approx(3.2971e-3).epsilon(1e-4));
  CHECK(std::abs(f.value * f.value + 0.3 * f.value - 0.001) <= 1e-12);
  CHECK(f.residual <= 1e-12);
  CHECK(forward_check(1.0, kCubic, {}, f, 0.1) <= 1e-12);

  const BranchSolution g = solve_branch_g(1.0, kCubic, {}, 0.1);
  CHECK(std::abs(g.value - (0.3 - std::sqrt(0.094)) / 2.0) < 1e-15);
  CHECK(g.residual <= 1e-12);
  CHECK(forward_check(1.0, kCubic, {}, g, 0.1) <= 1e-12);

  const BranchSolution gi = solve_branch_g(1.0, kCubic, {}, Complex{0, 0.01});
  CHECK(gi.residual <= 1e-12);
}

TEST_CASE("branches vanish for F = 0 and at the origin") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Complex z = testing::uniform_disk(rng, 1.0);
    CHECK(solve_branch_f(0.8, BiPoly(0), {}, z).value == Complex{});
    CHECK(solve_branch_g(0.8, BiPoly(0), {}, z).value == Complex{});
    CHECK(forward_check(0.8, BiPoly(0), {}, solve_branch_f(0.8, BiPoly(0), {}, z), z) < 1e-15);
  }
  CHECK(solve_branch_f(1.0, kCubic, {}, 0.0).value == Complex{});
  CHECK(solve_branch_g(1.0, kCubic, {}, 0.0).value == Complex{});
}

TEST_CASE("branch solver refusals") {
  CHECK_THROWS_AS(solve_branch_f(0.5, kCubic, {}, 0.1), Error);
  try {
    solve_branch_f(1.0, kCubic * Complex{100.0}, {}, 0.5);
    FAIL("expected BranchDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BranchDomain);
  }
}

TEST_CASE("branch residuals and forward checks on certified disks") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 1000; ++k) {
    const double gamma = std::uniform_real_distribution<double>(0.55, 3.0)(rng);
    const BiPoly raw = testing::random_poly(rng, 3, 5, 3);
    const double r = certify_radius(gamma, raw, 1.0).r;
    const Complex z = testing::uniform_disk(rng, r);
    const double scale = 1.0 + std::abs(raw.eval(z));
    for (const BranchSolution& b : {solve_branch_f(gamma, raw, {}, z), solve_branch_g(gamma, raw, {}, z)}) {
      CHECK(b.residual <= 1e-10 * scale);
      CHECK(forward_check(gamma, raw, {}, b, z) <= 1e-10);
    }
  }
}

TEST_CASE("branch derivatives match finite differences and the derivative size bound") {
  std::mt19937_64 rng(29);
  for (double gamma : {0.6, 1.0, 2.0}) {
    const BiPoly F = scaled_to_threshold(testing::random_poly(rng, 3, 4, 3), gamma, 0.5);
    const double bound = (2.0 * gamma - 1.0) / (512.0 * gamma * gamma);
    for (int k = 0; k < 200; ++k) {
      const Complex z = testing::uniform_disk(rng, 0.49);
      if (std::abs(z) < 1e-3) continue;
      const BranchSolution f = solve_branch_f(gamma, F, {}, z);
      const BranchDerivatives d = branch_derivatives(gamma, F, {}, f, z);
      const double h = 1e-6;
      auto fv = [&](Complex p) { return solve_branch_f(gamma, F, {}, p).value; };
      const Complex fx = (fv(z + h) - fv(z - h)) / (2 * h);
      const Complex fy = (fv(z + Complex{0, h}) - fv(z - Complex{0, h})) / (2 * h);
      const Complex fz = 0.5 * (fx - Complex{0, 1} * fy), fzb = 0.5 * (fx + Complex{0, 1} * fy);
      CHECK(std::abs(fz - d.dz) < 1e-7);
      CHECK(std::abs(fzb - d.dzbar) < 1e-7);
      CHECK(std::abs(fz) <= bound + 1e-6);
      CHECK(std::abs(fzb) <= bound + 1e-6);
    }
  }
}

TEST_CASE("lipschitz_alpha and audit") {
  CHECK(lipschitz_alpha(1.0) == 0.03125);
  CHECK(lipschitz_alpha(0.75) == doctest::Approx(0.5 / 18.0).epsilon(1e-15));
  CHECK_THROWS_AS(lipschitz_alpha(0.5), Error);

  const LipschitzAudit zero = lipschitz_audit(1.0, BiPoly(0), 0.5, 1000, 0);
  CHECK(zero.max_ratio == 0.0);
  CHECK(zero.pairs == 1000);

  const BiPoly F = scaled_to_threshold(kCubic, 0.75, 0.5);
  const LipschitzAudit a = lipschitz_audit(0.75, F, 0.5, 10000, 0);
  CHECK(a.violations == 0);
  CHECK(a.max_ratio <= a.alpha);
  const LipschitzAudit again = lipschitz_audit(0.75, F, 0.5, 10000, 0);
  CHECK(again.max_ratio == a.max_ratio);
}

TEST_CASE("kallin_check_m2 quadric margins") {
  const DiskGrid grid = DiskGrid::make(1.0, 32, 64);
  const KallinReport rep = kallin_check_m2(1.0, BiPoly(0), grid);
  CHECK(std::abs(rep.side1_min_margin - 13.0 / 256.0) <= 1e-12);
  CHECK(std::abs(rep.side2_min_margin - 5.0 / 32.0) <= 1e-12);
  CHECK(rep.zero_fiber_ok);
  CHECK(rep.points == grid.points.size() - 1);

  // oracle: S₁ gives Re ψ = 2α|ζ|², S₂ gives −(7/8)u² − (1/4)v²
  const double alpha = 1.0 / 32.0;
  double m1 = 1e9, m2 = 1e9;
  for (Complex z : grid.points) {
    const double s = std::norm(z);
    if (s == 0.0) continue;
    m1 = std::min(m1, 2 * alpha - 0.375 * alpha);
    m2 = std::min(m2, (0.875 * z.real() * z.real() + 0.25 * z.imag() * z.imag()) / s - 3 * alpha);
  }
  CHECK(rep.side1_min_margin == doctest::Approx(m1).epsilon(1e-13));
  CHECK(rep.side2_min_margin == doctest::Approx(m2).epsilon(1e-13));
}

TEST_CASE("kallin_check_m2 stays positive for scaled cubics") {
  for (double gamma : {0.6, 0.75, 1.0, 2.0}) {
    const BiPoly F = scaled_to_threshold(kCubic, gamma, 0.5);
    const KallinReport rep = kallin_check_m2(gamma, F, DiskGrid::make(0.5, 32, 64));
    CHECK(rep.side1_min_margin > 0.0);
    CHECK(rep.side2_min_margin > 0.0);
    CHECK(rep.zero_fiber_ok);
  }
}

TEST_CASE("choose_epsilon") {
  CHECK(choose_epsilon(0.75) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(choose_epsilon(1.0) == 0.25);
  CHECK(choose_epsilon(2.0) == 0.25);
  for (double g = 0.51; g < 5.0; g += 0.01) {
    const double e = choose_epsilon(g);
    CHECK(e * (-1.0 + 1.0 / g) - 1.0 / (2 * g) + 1.0 / (4 * g * g) < 0.0);
  }
  CHECK_THROWS_AS(choose_epsilon(0.5), Error);
}

TEST_CASE("kallin_check_m3 on the flat quadric") {
  ManifoldSpec s = sheet_fixture();
  s.F = BiPoly(1);
  s.f = {BiPoly(1)};
  const KallinReport rep = kallin_check_m3(s, BoxGrid{0.1, 0.5, 3, 33, 33});
  // Re Q(V₁) = ε(u²+v²); Re Q(V₂) = −(2ε + 3/4)u² − v²/4
  CHECK(rep.alpha == 0.25);
  CHECK(rep.side1_min_margin == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(rep.side2_min_margin == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(rep.side1_min_value == 0.0);
  CHECK(rep.side2_max_value == 0.0);
  CHECK(rep.zero_fiber_ok);

  const Complex w{0.3, -0.2};
  const SheetPoint p2 = sheet_v2(s, 0.0, w);
  const double reQ = (0.25 * (p2.z1 * p2.z1 + p2.z2 * p2.z2) + Complex{0, 1} * p2.z1 * p2.z2).real();
  CHECK(reQ == doctest::Approx(-(0.5 + 0.75) * 0.09 - 0.25 * 0.04).epsilon(1e-14));
}

TEST_CASE("sheets recover w through ζ₁ + iζ₂") {
  const ManifoldSpec s = sheet_fixture(1.3);
  std::mt19937_64 rng(31);
  for (int k = 0; k < 100; ++k) {
    const Complex w = testing::uniform_disk(rng, 0.03);
    const double t = 0.1 * std::uniform_real_distribution<double>(-1, 1)(rng);
    for (const SheetPoint& p : {sheet_v1(s, t, w), sheet_v2(s, t, w)}) {
      const Complex back = p.z1 + Complex{0, 1} * p.z2;
      CHECK(std::abs(p.z0 - Complex{t, w.real() * w.imag()}) < 1e-15);
      CHECK(std::abs(back - w) < 1e-14);
    }
  }
}

TEST_CASE("kallin_check_m3 sheet fixture sign contracts") {
  const KallinReport rep = kallin_check_m3(sheet_fixture(), BoxGrid{0.1, 0.03, 9, 32, 32});
  CHECK(rep.side1_min_value >= 0.0);
  CHECK(rep.side2_max_value <= 0.0);
  CHECK(rep.zero_fiber_ok);
  CHECK(rep.points == 9u * 32u * 32u);
}

TEST_CASE("kallin_check_m3 refusals") {
  CHECK_THROWS_AS(kallin_check_m3(testing::spec2(1.0), BoxGrid{}), Error);
  try {
    kallin_check_m3(testing::flat_fixture(), BoxGrid{0.1, 0.01, 3, 4, 4});
    FAIL("expected OrderTwoViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrderTwoViolation);
  }
  CHECK_THROWS_AS(kallin_check_m3(sheet_fixture(0.4), BoxGrid{0.1, 0.01, 3, 4, 4}), Error);
}

TEST_CASE("certify_radius examples") {
  const CertifiedRadius zero = certify_radius(0.8, BiPoly(0), 10.0);
  CHECK(zero.certified);
  CHECK(zero.r == 10.0);

  // the coefficient bound of w³ is 6r for r ≤ 1, so r* = threshold/6
  const CertifiedRadius c = certify_radius(1.0, kCubic, 1.0);
  CHECK(c.certified);
  CHECK(c.threshold == 1.0 / 16384.0);
  CHECK(std::abs(c.r - 1.0 / 98304.0) <= std::ldexp(1.0 / 98304.0, -30));
  CHECK(c.c2_at_r <= c.threshold);

  const CertifiedRadius low = certify_radius(0.6, kCubic, 1.0);
  CHECK(low.threshold == doctest::Approx(0.008 / (16384.0 * 0.216)).epsilon(1e-13));
  CHECK(low.r == doctest::Approx(low.threshold / 6.0).epsilon(1e-12));
  CHECK(low.r == doctest::Approx(3.7674e-7).epsilon(1e-4));

  CHECK(certify_radius(1.0, kCubic * Complex{1e-9}, 1.0).r == 1.0);
  CHECK_THROWS_AS(certify_radius(0.5, kCubic, 1.0), Error);
}

TEST_CASE("certified radius shrinks as gamma approaches 1/2") {
  double previous = INFINITY;
  for (double g : {2.0, 1.0, 0.75, 0.6}) {
    const double r = certify_radius(g, kCubic, 1.0).r;
    CHECK(r < previous);
    previous = r;
  }
}

TEST_CASE("certify_flat with F = 0 certifies the whole box") {
  ManifoldSpec s = testing::flat_fixture(0.5, 2.0);
  s.F = BiPoly(1);
  const FlatCertificate c = certify_flat(s, uniform_t_grid(1, 0.5, 11));
  CHECK(c.certified);
  CHECK(c.T_star == 0.5);
  CHECK(c.r_star == 2.0);
  for (const SliceRecord& r : c.per_slice) {
    CHECK(r.gamma_t == doctest::Approx(1.0));
    CHECK(r.g_hat.is_zero());
  }
}

TEST_CASE("certify_flat fixture") {
  const FlatCertificate c = certify_flat(testing::flat_fixture(), uniform_t_grid(1, 1.0, 21));
  REQUIRE(c.certified);
  // every slice is ww̄ + (w² + w̄²) + ζ³ after reduction: threshold 2⁻¹⁴, bound 6ρ
  CHECK(c.T_star == 1.0);
  CHECK(c.r_star == std::ldexp(1.0, -17));
  CHECK(c.min_margin() == doctest::Approx(1.0 / 65536.0).epsilon(1e-9));
  for (const SliceRecord& r : c.per_slice) {
    CHECK(r.ok);
    CHECK(r.hyperbolic);
    CHECK(r.gamma_t == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.eta - Complex{-r.t[0] * r.t[0] / 3.0, 0}) < 1e-13);
    CHECK(r.g_hat.max_coefficient_distance(poly(0, {{{}, 3, 0, 1.0}})) < 1e-12);
    CHECK(r.margin > 0.0);
  }
}

TEST_CASE("certify_flat refusals") {
  ManifoldSpec e = testing::flat_fixture();
  e.gamma = 0.3;
  const FlatCertificate c = certify_flat(e, uniform_t_grid(1, 1.0, 5));
  CHECK_FALSE(c.certified);
  REQUIRE(c.diagnostics.size() == 1);
  CHECK(c.diagnostics[0] == "non-hyperbolic origin slice");

  ManifoldSpec nf = testing::flat_fixture();
  nf.flat = false;
  CHECK_THROWS_AS(certify_flat(nf, uniform_t_grid(1, 1.0, 5)), Error);
}
