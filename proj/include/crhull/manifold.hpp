#pragma once

#include <span>
#include <string>
#include <vector>

#include "crhull/bipoly.hpp"

namespace crhull {

/// A real n-manifold in ℂⁿ in Bishop normal form centered at 0:
///   z_j   = t_j + i f_j(t, w)           (j = 1..n−2)
///   z_n−1 = w
///   z_n   = ww̄ + γ(w² + w̄²) + F(t, w)
/// over t ∈ [−T, T]^{n−2}, |w| ≤ R. In flat form f_j depends on t_1..t_j only.
struct ManifoldSpec {
  int n = 2;
  double gamma = 0.0;
  BiPoly F{0};
  std::vector<BiPoly> f;
  double T = 1.0;
  double R = 1.0;
  bool flat = false;

  std::size_t t_arity() const { return n >= 2 ? static_cast<std::size_t>(n - 2) : 0; }
};

struct EmbeddedPoint {
  std::vector<Complex> z;
};

/// Last coordinate ww̄ + γ(w² + w̄²) + F as a polynomial in (t, w, w̄).
BiPoly slice_polynomial(const ManifoldSpec& spec);
/// Same, with t fixed: the slice function φ_t(w).
BiPoly slice_polynomial(const ManifoldSpec& spec, std::span<const double> t);

EmbeddedPoint embed(const ManifoldSpec& spec, std::span<const double> t, Complex w);

/// One human-readable diagnostic per violated invariant; empty iff valid.
std::vector<std::string> validate_spec(const ManifoldSpec& spec);

/// True iff every term of F has (w, w̄)-degree at least two.
bool order_two_in_w(const BiPoly& F);

/// True iff P takes real values for real t (coefficients conjugation-symmetric in (b, c)).
bool is_real_valued(const BiPoly& P, double tol = 0.0);

}  // namespace crhull
