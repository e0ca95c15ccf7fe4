#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace crhull {

using Complex = std::complex<double>;

/// Exponent triple of a term t^a w^b w̄^c. `t` has one entry per real
/// parameter; `w` and `wbar` are the powers of w and w̄.
struct Monomial {
  std::vector<int> t;
  int w = 0;
  int wbar = 0;

  int t_degree() const;
  int total_degree() const { return t_degree() + w + wbar; }

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

/// "(a=..,b=..,c=..)" with a printed as a scalar for 0/1 t-variables.
std::string describe(const Monomial& m);

/// Polynomial in real parameters t and in (w, w̄) with complex
/// coefficients. Zero coefficients are never stored.
class BiPoly {
 public:
  explicit BiPoly(std::size_t t_arity = 0) : t_arity_(t_arity) {}

  static BiPoly constant(std::size_t t_arity, Complex value);
  static BiPoly w(std::size_t t_arity = 0);
  static BiPoly wbar(std::size_t t_arity = 0);
  static BiPoly t(std::size_t t_arity, std::size_t index);
  /// Single term c·t^a w^b w̄^c.
  static BiPoly term(Monomial m, Complex coefficient);

  std::size_t t_arity() const { return t_arity_; }
  const std::map<Monomial, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Complex coefficient(const Monomial& m) const;
  int total_degree() const;

  /// Adds `coefficient` to the term, dropping it if the sum is exactly zero.
  void add_term(const Monomial& m, Complex coefficient);

  Complex eval(std::span<const double> t, Complex w) const;
  Complex eval(Complex w) const { return eval({}, w); }

  BiPoly d_w() const;
  BiPoly d_wbar() const;
  /// Q(t, ζ) = P(t, e^{iθ} ζ).
  BiPoly rotated(double theta) const;
  /// Substitutes fixed t, returning a t-free polynomial in (w, w̄).
  BiPoly at_t(std::span<const double> t) const;
  /// Q(t, ζ) = P(t, ζ + center), expanded binomially.
  BiPoly shifted(Complex center) const;
  /// Polynomial whose values are the complex conjugates of this one's.
  BiPoly conjugate() const;
  /// Keeps only terms whose (w, w̄)-degree b + c lies in [lo, hi].
  BiPoly filter_w_degree(int lo, int hi) const;

  BiPoly& operator+=(const BiPoly& other);
  BiPoly& operator-=(const BiPoly& other);
  BiPoly& operator*=(Complex s);
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(BiPoly a, Complex s) { return a *= s; }
  friend BiPoly operator*(Complex s, BiPoly a) { return a *= s; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);

  bool operator==(const BiPoly&) const = default;

  /// Largest coefficient modulus difference against `other` (0 when equal).
  double max_coefficient_distance(const BiPoly& other) const;

 private:
  void require_same_arity(const BiPoly& other) const;

  std::size_t t_arity_;
  std::map<Monomial, Complex> terms_;
};

/// ww̄ + γ(w² + w̄²) in t-arity `t_arity`.
BiPoly bishop_quadric(double gamma, std::size_t t_arity = 0);

}  // namespace crhull
