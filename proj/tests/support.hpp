#pragma once

#include <complex>
#include <initializer_list>
#include <random>
#include <vector>

#include "crhull/bipoly.hpp"
#include "crhull/manifold.hpp"

namespace testing {

using crhull::BiPoly;
using crhull::Complex;
using crhull::Monomial;

struct T {
  std::vector<int> a;
  int b, c;
  Complex coef;
};

inline BiPoly poly(std::size_t arity, std::initializer_list<T> terms) {
  BiPoly p(arity);
  for (const T& t : terms) p.add_term(Monomial{t.a, t.b, t.c}, t.coef);
  return p;
}

inline crhull::ManifoldSpec spec2(double gamma, BiPoly F = BiPoly(0), double R = 1.0) {
  crhull::ManifoldSpec s;
  s.n = 2;
  s.gamma = gamma;
  s.F = std::move(F);
  s.R = R;
  return s;
}

// The flat n = 3 fixture: f1 = t², F = t²(w + w̄) + w³.
inline crhull::ManifoldSpec flat_fixture(double T = 1.0, double R = 1.0) {
  crhull::ManifoldSpec s;
  s.n = 3;
  s.gamma = 1.0;
  s.flat = true;
  s.T = T;
  s.R = R;
  s.F = poly(1, {{{2}, 1, 0, 1.0}, {{2}, 0, 1, 1.0}, {{0}, 3, 0, 1.0}});
  s.f = {poly(1, {{{2}, 0, 0, 1.0}})};
  return s;
}

// Random t-free polynomial with (w, w̄)-degrees in [lo, hi] and coefficients in the unit square.
inline BiPoly random_poly(std::mt19937_64& rng, int lo, int hi, int terms) {
  std::uniform_int_distribution<int> deg(lo, hi);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BiPoly p(0);
  for (int k = 0; k < terms; ++k) {
    const int d = deg(rng);
    const int b = std::uniform_int_distribution<int>(0, d)(rng);
    p.add_term(Monomial{{}, b, d - b}, {u(rng), u(rng)});
  }
  return p;
}

inline Complex ipow(Complex z, int k) {
  Complex v{1.0, 0.0};
  for (int i = 0; i < k; ++i) v *= z;
  return v;
}

// Direct evaluation of Σ c t^a w^b w̄^c without BiPoly::eval.
inline Complex brute_eval(const BiPoly& p, const std::vector<double>& t, Complex w) {
  Complex s{};
  for (const auto& [m, c] : p.terms()) {
    Complex v = c;
    for (std::size_t j = 0; j < m.t.size(); ++j) v *= ipow(t[j], m.t[j]);
    v *= ipow(w, m.w) * ipow(std::conj(w), m.wbar);
    s += v;
  }
  return s;
}

inline Complex uniform_disk(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(r * std::sqrt(u(rng)), 2.0 * 3.14159265358979323846 * u(rng));
}

}  // namespace testing
