#pragma once

#include <span>
#include <string>
#include <vector>

#include "crhull/bipoly.hpp"
#include "crhull/manifold.hpp"
#include "crhull/numerics.hpp"

namespace crhull {

using PointN = std::vector<Complex>;

struct SampleCloud {
  std::vector<PointN> points;
  std::string source;  // fingerprint of the sampled spec, if known
  int t_count = 1;
  int radial_count = 0;
  int angular_count = 0;
  double radius = 0.0;

  std::size_t dimension() const { return points.empty() ? 0 : points.front().size(); }
};

/// Embeds the product of a uniform t-grid (t_count per axis over [−T, T]) and
/// `disk` (which must fit inside |w| ≤ R).
SampleCloud sample_manifold(const ManifoldSpec& spec, int t_count, const DiskGrid& disk);

struct SeparatorTerm {
  std::vector<int> exponent;  // powers of (z_j − q_j)
  Complex coefficient;
};

/// Near-minimax P with P(q) = 1. P(z) = 1 + Σ c_m (z − q)^m.
struct SeparationResult {
  double ratio = 0.0;  // max over the cloud of |P|
  int degree = 0;
  PointN query;
  std::vector<SeparatorTerm> terms;
  int iterations = 0;
  bool converged = false;
  double lower_bound = 0.0;  // Lawson weighted-L2 lower bound on the minimax value
  int rank = 0;
};

inline constexpr int kMaxHullDegree = 10;
inline constexpr std::size_t kMaxCloudSize = 100000;

struct SeparateOptions {
  int max_iterations = 3000;
  double tolerance = 1e-9;
};

/// Lawson iteratively reweighted least squares for min max_K |P| subject to
/// P(q) = 1 over polynomials of total degree ≤ `degree`, on column-scaled
/// monomials centered at q.
SeparationResult separate(const SampleCloud& cloud, std::span<const Complex> q, int degree,
                          const SeparateOptions& options = {});

std::vector<SeparationResult> hull_scan(const SampleCloud& cloud, const std::vector<PointN>& queries,
                                        int degree, const SeparateOptions& options = {});

Complex evaluate_separator(const SeparationResult& result, std::span<const Complex> z);

}  // namespace crhull
