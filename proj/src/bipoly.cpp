#include "crhull/bipoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "crhull/error.hpp"

namespace crhull {

namespace {

std::vector<Complex> powers(Complex base, int max_exponent) {
  std::vector<Complex> out(static_cast<std::size_t>(max_exponent) + 1, Complex{1.0, 0.0});
  for (int k = 1; k <= max_exponent; ++k) out[k] = out[k - 1] * base;
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

int Monomial::t_degree() const { return std::accumulate(t.begin(), t.end(), 0); }

std::string describe(const Monomial& m) {
  std::ostringstream os;
  os << "(a=";
  if (m.t.size() <= 1) {
    os << (m.t.empty() ? 0 : m.t[0]);
  } else {
    os << '[';
    for (std::size_t i = 0; i < m.t.size(); ++i) os << (i ? "," : "") << m.t[i];
    os << ']';
  }
  os << ",b=" << m.w << ",c=" << m.wbar << ')';
  return os.str();
}

BiPoly BiPoly::constant(std::size_t t_arity, Complex value) {
  BiPoly p(t_arity);
  p.add_term(Monomial{std::vector<int>(t_arity, 0), 0, 0}, value);
  return p;
}

BiPoly BiPoly::w(std::size_t t_arity) {
  BiPoly p(t_arity);
  p.add_term(Monomial{std::vector<int>(t_arity, 0), 1, 0}, 1.0);
  return p;
}

BiPoly BiPoly::wbar(std::size_t t_arity) {
  BiPoly p(t_arity);
  p.add_term(Monomial{std::vector<int>(t_arity, 0), 0, 1}, 1.0);
  return p;
}

BiPoly BiPoly::t(std::size_t t_arity, std::size_t index) {
  if (index >= t_arity) throw Error(ErrorCode::Arity, "t index out of range");
  Monomial m{std::vector<int>(t_arity, 0), 0, 0};
  m.t[index] = 1;
  BiPoly p(t_arity);
  p.add_term(m, 1.0);
  return p;
}

BiPoly BiPoly::term(Monomial m, Complex coefficient) {
  BiPoly p(m.t.size());
  p.add_term(m, coefficient);
  return p;
}

Complex BiPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

int BiPoly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

void BiPoly::add_term(const Monomial& m, Complex coefficient) {
  if (m.t.size() != t_arity_) throw Error(ErrorCode::Arity, "monomial t-arity mismatch");
  if (m.w < 0 || m.wbar < 0 || std::any_of(m.t.begin(), m.t.end(), [](int a) { return a < 0; }))
    throw Error(ErrorCode::InvalidArgument, "negative exponent " + describe(m));
  if (coefficient == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(m, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

Complex BiPoly::eval(std::span<const double> t, Complex w) const {
  if (t.size() != t_arity_)
    throw Error(ErrorCode::Arity, "expected " + std::to_string(t_arity_) + " t-values, got " +
                                      std::to_string(t.size()));
  int max_w = 0, max_wbar = 0;
  for (const auto& [m, c] : terms_) {
    max_w = std::max(max_w, m.w);
    max_wbar = std::max(max_wbar, m.wbar);
  }
  const auto wp = powers(w, max_w);
  const auto wbp = powers(std::conj(w), max_wbar);
  Complex sum{};
  for (const auto& [m, c] : terms_) {
    double tp = 1.0;
    for (std::size_t i = 0; i < t_arity_; ++i)
      for (int k = 0; k < m.t[i]; ++k) tp *= t[i];
    sum += c * tp * wp[m.w] * wbp[m.wbar];
  }
  return sum;
}

BiPoly BiPoly::d_w() const {
  BiPoly out(t_arity_);
  for (const auto& [m, c] : terms_) {
    if (m.w == 0) continue;
    Monomial d = m;
    d.w -= 1;
    out.add_term(d, c * static_cast<double>(m.w));
  }
  return out;
}

BiPoly BiPoly::d_wbar() const {
  BiPoly out(t_arity_);
  for (const auto& [m, c] : terms_) {
    if (m.wbar == 0) continue;
    Monomial d = m;
    d.wbar -= 1;
    out.add_term(d, c * static_cast<double>(m.wbar));
  }
  return out;
}

BiPoly BiPoly::rotated(double theta) const {
  BiPoly out(t_arity_);
  for (const auto& [m, c] : terms_)
    out.add_term(m, c * std::polar(1.0, theta * static_cast<double>(m.w - m.wbar)));
  return out;
}

BiPoly BiPoly::at_t(std::span<const double> t) const {
  if (t.size() != t_arity_) throw Error(ErrorCode::Arity, "at_t: t-arity mismatch");
  BiPoly out(0);
  for (const auto& [m, c] : terms_) {
    double tp = 1.0;
    for (std::size_t i = 0; i < t_arity_; ++i)
      for (int k = 0; k < m.t[i]; ++k) tp *= t[i];
    out.add_term(Monomial{{}, m.w, m.wbar}, c * tp);
  }
  return out;
}

BiPoly BiPoly::shifted(Complex center) const {
  BiPoly out(t_arity_);
  const int deg = total_degree();
  const auto cp = powers(center, deg);
  const auto cbp = powers(std::conj(center), deg);
  for (const auto& [m, c] : terms_) {
    for (int i = 0; i <= m.w; ++i) {
      const Complex wi = binomial(m.w, i) * cp[m.w - i];
      for (int j = 0; j <= m.wbar; ++j) {
        const Complex wj = binomial(m.wbar, j) * cbp[m.wbar - j];
        out.add_term(Monomial{m.t, i, j}, c * wi * wj);
      }
    }
  }
  return out;
}

BiPoly BiPoly::conjugate() const {
  BiPoly out(t_arity_);
  for (const auto& [m, c] : terms_) out.add_term(Monomial{m.t, m.wbar, m.w}, std::conj(c));
  return out;
}

BiPoly BiPoly::filter_w_degree(int lo, int hi) const {
  BiPoly out(t_arity_);
  for (const auto& [m, c] : terms_) {
    const int d = m.w + m.wbar;
    if (d >= lo && d <= hi) out.add_term(m, c);
  }
  return out;
}

void BiPoly::require_same_arity(const BiPoly& other) const {
  if (other.t_arity_ != t_arity_) throw Error(ErrorCode::Arity, "BiPoly t-arity mismatch");
}

BiPoly& BiPoly::operator+=(const BiPoly& other) {
  require_same_arity(other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& other) {
  require_same_arity(other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

BiPoly& BiPoly::operator*=(Complex s) {
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  std::erase_if(terms_, [](const auto& kv) { return kv.second == Complex{}; });
  return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  a.require_same_arity(b);
  BiPoly out(a.t_arity());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m{ma.t, ma.w + mb.w, ma.wbar + mb.wbar};
      for (std::size_t i = 0; i < m.t.size(); ++i) m.t[i] += mb.t[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

double BiPoly::max_coefficient_distance(const BiPoly& other) const {
  require_same_arity(other);
  double d = 0.0;
  for (const auto& [m, c] : terms_) d = std::max(d, std::abs(c - other.coefficient(m)));
  for (const auto& [m, c] : other.terms_)
    if (!terms_.contains(m)) d = std::max(d, std::abs(c));
  return d;
}

BiPoly bishop_quadric(double gamma, std::size_t t_arity) {
  const std::vector<int> zero(t_arity, 0);
  BiPoly p(t_arity);
  p.add_term(Monomial{zero, 1, 1}, 1.0);
  p.add_term(Monomial{zero, 2, 0}, gamma);
  p.add_term(Monomial{zero, 0, 2}, gamma);
  return p;
}

}  // namespace crhull
