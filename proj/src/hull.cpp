#include "crhull/hull.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "crhull/error.hpp"
#include "crhull/singular.hpp"

namespace crhull {

namespace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Multi-indices with 1 ≤ |m| ≤ degree, by total degree then lexicographic.
std::vector<std::vector<int>> exponents(std::size_t dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> m(dim, 0);
  for (int total = 1; total <= degree; ++total) {
    // enumerate compositions of `total` into `dim` parts in lexicographically descending order
    auto rec = [&](auto&& self, std::size_t i, int left) -> void {
      if (i + 1 == dim) {
        m[i] = left;
        out.push_back(m);
        return;
      }
      for (int k = left; k >= 0; --k) {
        m[i] = k;
        self(self, i + 1, left - k);
      }
    };
    rec(rec, 0, total);
  }
  return out;
}

Complex monomial(std::span<const Complex> z, std::span<const Complex> q, const std::vector<int>& m) {
  Complex v{1.0, 0.0};
  for (std::size_t j = 0; j < m.size(); ++j)
    for (int k = 0; k < m[j]; ++k) v *= z[j] - q[j];
  return v;
}

}  // namespace

SampleCloud sample_manifold(const ManifoldSpec& spec, int t_count, const DiskGrid& disk) {
  if (disk.radius > spec.R) throw Error(ErrorCode::OutOfDomain, "disk grid exceeds the w-domain");
  SampleCloud cloud;
  cloud.t_count = t_count;
  cloud.radial_count = disk.radial_count;
  cloud.angular_count = disk.angular_count;
  cloud.radius = disk.radius;
  for (const auto& t : uniform_t_grid(spec.t_arity(), spec.T, t_count))
    for (Complex w : disk.points) cloud.points.push_back(embed(spec, t, w).z);
  return cloud;
}

SeparationResult separate(const SampleCloud& cloud, std::span<const Complex> q, int degree,
                          const SeparateOptions& options) {
  if (degree < 1 || degree > kMaxHullDegree)
    throw Error(ErrorCode::InvalidArgument, "separate: degree must lie in [1, 10]");
  if (cloud.points.empty()) throw Error(ErrorCode::InvalidArgument, "separate: empty cloud");
  if (cloud.points.size() > kMaxCloudSize)
    throw Error(ErrorCode::InvalidArgument, "separate: cloud exceeds 1e5 points");
  const std::size_t dim = cloud.dimension();
  if (q.size() != dim) throw Error(ErrorCode::Arity, "separate: query dimension mismatch");
  for (Complex c : q)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorCode::InvalidArgument, "separate: query is not finite");

  const auto exps = exponents(dim, degree);
  const auto N = static_cast<Eigen::Index>(cloud.points.size());

  // Column-scaled basis; all-zero columns are dropped.
  std::vector<std::size_t> kept;
  std::vector<double> scales;
  Matrix A(N, static_cast<Eigen::Index>(exps.size()));
  for (Eigen::Index k = 0; k < N; ++k) {
    const PointN& z = cloud.points[static_cast<std::size_t>(k)];
    if (z.size() != dim) throw Error(ErrorCode::Arity, "separate: ragged cloud");
    for (std::size_t j = 0; j < exps.size(); ++j) A(k, static_cast<Eigen::Index>(j)) = monomial(z, q, exps[j]);
  }
  if (!A.allFinite()) throw Error(ErrorCode::IllConditioned, "separate: non-finite basis values");
  for (std::size_t j = 0; j < exps.size(); ++j) {
    const double s = A.col(static_cast<Eigen::Index>(j)).cwiseAbs().maxCoeff();
    if (s > 0.0) {
      kept.push_back(j);
      scales.push_back(s);
    }
  }
  if (kept.empty()) throw Error(ErrorCode::IllConditioned, "separate: basis vanishes on the cloud");
  Matrix B(N, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j)
    B.col(static_cast<Eigen::Index>(j)) = A.col(static_cast<Eigen::Index>(kept[j])) / scales[j];

  SeparationResult best;
  best.degree = degree;
  best.query.assign(q.begin(), q.end());
  best.ratio = std::numeric_limits<double>::infinity();
  Vector best_c = Vector::Zero(B.cols());

  Eigen::VectorXd weights = Eigen::VectorXd::Constant(N, 1.0 / static_cast<double>(N));
  const Vector ones = Vector::Ones(N);
  double previous = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    const Eigen::VectorXd sw = weights.cwiseSqrt();
    const Matrix WB = sw.asDiagonal() * B;
    const Vector rhs = -(sw.cast<Complex>().asDiagonal() * ones);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(WB);
    cod.setThreshold(1e-13);
    const Vector c = cod.solve(rhs);
    if (!c.allFinite()) throw Error(ErrorCode::IllConditioned, "separate: least-squares solve failed");
    best.rank = static_cast<int>(cod.rank());

    const Eigen::VectorXd err = (ones + B * c).cwiseAbs();
    const double emax = err.maxCoeff();
    best.lower_bound = std::max(best.lower_bound, std::sqrt(weights.dot(err.cwiseAbs2())));
    best.iterations = iter;
    if (emax < best.ratio) {
      best.ratio = emax;
      best_c = c;
    }
    if (std::abs(previous - emax) < options.tolerance * emax ||
        best.ratio - best.lower_bound <= options.tolerance * best.ratio) {
      best.converged = true;
      break;
    }
    previous = emax;

    const Eigen::VectorXd updated = weights.cwiseProduct(err);
    const double total = updated.sum();
    if (!(total > 0.0)) {
      best.converged = true;  // exact interpolation: P vanishes on the weighted support
      break;
    }
    weights = updated / total;
  }

  for (std::size_t j = 0; j < kept.size(); ++j)
    best.terms.push_back({exps[kept[j]], best_c(static_cast<Eigen::Index>(j)) / scales[j]});
  // Report the ratio of the returned (unscaled) polynomial so it re-evaluates exactly.
  double ratio = 0.0;
  for (const PointN& z : cloud.points) ratio = std::max(ratio, std::abs(evaluate_separator(best, z)));
  best.ratio = ratio;
  return best;
}

std::vector<SeparationResult> hull_scan(const SampleCloud& cloud, const std::vector<PointN>& queries,
                                        int degree, const SeparateOptions& options) {
  std::vector<SeparationResult> out;
  out.reserve(queries.size());
  for (const PointN& q : queries) out.push_back(separate(cloud, q, degree, options));
  return out;
}

Complex evaluate_separator(const SeparationResult& result, std::span<const Complex> z) {
  if (z.size() != result.query.size()) throw Error(ErrorCode::Arity, "evaluate_separator: dimension");
  Complex v{1.0, 0.0};
  for (const SeparatorTerm& t : result.terms) v += t.coefficient * monomial(z, result.query, t.exponent);
  return v;
}

}  // namespace crhull
