#include "crhull/manifold.hpp"

#include <algorithm>
#include <cmath>

#include "crhull/error.hpp"

namespace crhull {

BiPoly slice_polynomial(const ManifoldSpec& spec) {
  return bishop_quadric(spec.gamma, spec.t_arity()) + spec.F;
}

BiPoly slice_polynomial(const ManifoldSpec& spec, std::span<const double> t) {
  return slice_polynomial(spec).at_t(t);
}

EmbeddedPoint embed(const ManifoldSpec& spec, std::span<const double> t, Complex w) {
  if (t.size() != spec.t_arity())
    throw Error(ErrorCode::Arity, "embed: expected " + std::to_string(spec.t_arity()) + " t-values");
  for (double tj : t)
    if (std::abs(tj) > spec.T) throw Error(ErrorCode::OutOfDomain, "embed: |t_j| exceeds T");
  // polar(R, θ) can land one ulp outside the closed disk
  if (std::abs(w) > spec.R * (1.0 + 1e-12)) throw Error(ErrorCode::OutOfDomain, "embed: |w| exceeds R");

  EmbeddedPoint p;
  p.z.reserve(static_cast<std::size_t>(spec.n));
  for (std::size_t j = 0; j < spec.t_arity(); ++j)
    p.z.emplace_back(t[j], spec.f[j].eval(t, w).real());
  p.z.push_back(w);
  p.z.push_back(slice_polynomial(spec).eval(t, w));
  return p;
}

bool order_two_in_w(const BiPoly& F) {
  return std::all_of(F.terms().begin(), F.terms().end(),
                     [](const auto& kv) { return kv.first.w + kv.first.wbar >= 2; });
}

bool is_real_valued(const BiPoly& P, double tol) {
  for (const auto& [m, c] : P.terms()) {
    const Complex mirror = P.coefficient(Monomial{m.t, m.wbar, m.w});
    if (std::abs(c - std::conj(mirror)) > tol) return false;
  }
  return true;
}

std::vector<std::string> validate_spec(const ManifoldSpec& spec) {
  std::vector<std::string> out;
  if (spec.n < 2) out.push_back("n must be at least 2");
  if (!(spec.gamma >= 0.0) || !std::isfinite(spec.gamma)) out.push_back("gamma must be finite and >= 0");
  if (!(spec.T > 0.0)) out.push_back("domain T must be > 0");
  if (!(spec.R > 0.0)) out.push_back("domain R must be > 0");
  if (spec.n < 2) return out;

  const std::size_t k = spec.t_arity();
  if (spec.F.t_arity() != k)
    out.push_back("F t-arity " + std::to_string(spec.F.t_arity()) + " != n-2 = " + std::to_string(k));
  if (spec.f.size() != k)
    out.push_back("expected " + std::to_string(k) + " graph functions f_j, got " +
                  std::to_string(spec.f.size()));

  for (const auto& [m, c] : spec.F.terms())
    if (m.total_degree() <= 2) out.push_back("F order-3 violation at " + describe(m));

  for (std::size_t j = 0; j < spec.f.size(); ++j) {
    const BiPoly& fj = spec.f[j];
    const std::string name = "f" + std::to_string(j + 1);
    if (fj.t_arity() != k) {
      out.push_back(name + " t-arity mismatch");
      continue;
    }
    for (const auto& [m, c] : fj.terms()) {
      if (m.total_degree() <= 1) out.push_back(name + " order-2 violation at " + describe(m));
      if (spec.flat) {
        bool bad = m.w != 0 || m.wbar != 0;
        for (std::size_t i = j + 1; i < k; ++i) bad = bad || m.t[i] != 0;
        if (bad) out.push_back(name + " flatness violation at " + describe(m));
      }
      const Complex mirror = fj.coefficient(Monomial{m.t, m.wbar, m.w});
      if (std::abs(c - std::conj(mirror)) > 1e-14 * (1.0 + std::abs(c)))
        out.push_back(name + " not real-valued at " + describe(m));
    }
  }
  return out;
}

}  // namespace crhull
