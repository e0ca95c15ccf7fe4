#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crhull/bipoly.hpp"
#include "crhull/manifold.hpp"
#include "crhull/numerics.hpp"

namespace crhull {

enum class Branch { S1, S2, V1, V2 };

const char* to_string(Branch b) noexcept;

struct BranchSolution {
  Branch which = Branch::S1;
  /// f (S1), g (S2), or the sheet perturbation f of the n = 3 preimage (V1/V2).
  Complex value{};
  /// Second preimage coordinate: ζ̄ + f (S1) or −ζ/γ − ζ̄ + g (S2).
  Complex linear_part{};
  /// |γv² ± Dv − F| for the defining quadratic, D = ζ + 2γζ̄.
  double residual = 0.0;
};

/// Root of γf² + (ζ + 2γζ̄)f − F = 0 with df(0) = 0; f(0) := 0.
/// F is t-free or evaluated at `t`. Throws ErrorCode::BranchDomain when
/// |4γF/(ζ+2γζ̄)²| ≥ 1/4.
BranchSolution solve_branch_f(double gamma, const BiPoly& F, std::span<const double> t, Complex zeta);
/// Root of γg² − (ζ + 2γζ̄)g − F = 0 with dg(0) = 0; g(0) := 0.
BranchSolution solve_branch_g(double gamma, const BiPoly& F, std::span<const double> t, Complex zeta);

/// |second coordinate of P(ζ, linear_part) − (ζζ̄ + γ(ζ²+ζ̄²) + F(ζ))| for
/// P(z₁, z₂) = (z₁, z₁z₂ + γ(z₁² + z₂²)).
double forward_check(double gamma, const BiPoly& F, std::span<const double> t,
                     const BranchSolution& branch, Complex zeta);

struct BranchDerivatives {
  Complex dz{};
  Complex dzbar{};
};

/// Exact ∂/∂ζ, ∂/∂ζ̄ of the branch by implicit differentiation of its quadratic.
BranchDerivatives branch_derivatives(double gamma, const BiPoly& F, std::span<const double> t,
                                     const BranchSolution& branch, Complex zeta);

/// α = (2γ−1)/(32γ²), the Lipschitz constant of both branches.
double lipschitz_alpha(double gamma);

struct LipschitzAudit {
  double max_ratio = 0.0;
  double alpha = 0.0;
  std::size_t pairs = 0;
  std::size_t violations = 0;
};

/// Samples `pair_count` point pairs uniformly in the closed r-disk
/// (deterministic for a given seed) and records max |Δf|/|Δζ|, |Δg|/|Δζ|.
LipschitzAudit lipschitz_audit(double gamma, const BiPoly& F, double r, std::size_t pair_count,
                               std::uint64_t seed = 0);

struct KallinReport {
  double side1_min_margin = 0.0;
  double side2_min_margin = 0.0;
  bool zero_fiber_ok = true;
  /// α for the ψ check; ε for the Q check.
  double alpha = 0.0;
  /// Raw extrema: min Re over side 1 and max Re over side 2.
  double side1_min_value = 0.0;
  double side2_max_value = 0.0;
  std::size_t points = 0;
  std::string grid;
};

/// ψ(z₁, z₂) = ¼(z₁² − z₂²) + 2α z₁z₂. Margins per |ζ|²:
///   side 1: min Re ψ(S₁)/|ζ|² − (3/8)α,  side 2: min −Re ψ(S₂)/|ζ|² − 3α.
KallinReport kallin_check_m2(double gamma, const BiPoly& F, const DiskGrid& grid);

/// ε for Q = ε(ζ₁² + ζ₂²) + iζ₁ζ₂: 1/4 for γ ≥ 1, otherwise half of
/// (2γ−1)/(4γ(1−γ)). Throws ErrorCode::NonHyperbolic for γ ≤ 1/2.
double choose_epsilon(double gamma);

/// Box sampling of (t, u, v) for the n = 3 check: t uniform on [−T, T],
/// u and v uniform on [−r, r].
struct BoxGrid {
  double T = 0.0;
  double r = 0.0;
  int t_count = 1;
  int u_count = 2;
  int v_count = 2;
};

struct SheetPoint {
  Complex z0, z1, z2;
};

/// The two preimage sheets of M³ under P(ζ₀,ζ₁,ζ₂) = (ζ₀, ζ₁+iζ₂, ζ₁²+ζ₂²+2γ(ζ₁²−ζ₂²)).
SheetPoint sheet_v1(const ManifoldSpec& spec, double t, Complex w);
SheetPoint sheet_v2(const ManifoldSpec& spec, double t, Complex w);

/// Sign contracts for Q on V₁ (Re Q ≥ 0) and V₂ (Re Q ≤ 0) over the box.
/// Margins are normalized by u² + v². Requires n = 3, γ > 1/2 and F of order
/// two in w.
KallinReport kallin_check_m3(const ManifoldSpec& spec, const BoxGrid& grid);

struct CertifiedRadius {
  double r = 0.0;
  double threshold = 0.0;
  double c2_at_r = 0.0;
  int bisection_steps = 0;
  bool certified = false;
};

/// Largest r ∈ (0, R] (to bisection resolution) with c2_norm_upper(F, r) ≤ threshold(γ).
CertifiedRadius certify_radius(double gamma, const BiPoly& F, double R);

struct SliceRecord {
  std::vector<double> t;
  Complex eta{};
  bool ok = false;          // locus converged and jet reducible
  bool in_box = false;      // |t|∞ ≤ T_star
  std::string failure;      // empty when ok
  double gamma_t = 0.0;
  bool hyperbolic = false;
  double threshold = 0.0;
  BiPoly g_hat{0};
  double g_hat_c2 = 0.0;    // at r_star
  double margin = 0.0;      // threshold − g_hat_c2 at r_star
};

struct FlatCertificate {
  double T_star = 0.0;
  double r_star = 0.0;
  std::vector<SliceRecord> per_slice;
  bool certified = false;
  std::vector<std::string> diagnostics;

  double min_margin() const;
};

inline constexpr int kCandidateLevels = 40;

/// Runs locus → jet → reduce on every grid slice and picks the largest box
/// [−T·2^−j, T·2^−j]^{n−2} × B(R·2^−k) on which every slice is hyperbolic
/// with positive normal-form threshold margin.
FlatCertificate certify_flat(const ManifoldSpec& spec, const std::vector<std::vector<double>>& t_grid);

}  // namespace crhull
