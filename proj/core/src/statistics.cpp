// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/statistics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace anchorsec::detect {

double default_threshold() { return std::sqrt(-2.0 * std::log(0.01)); }

Matrix2 sample_covariance(std::span<const Point> points) {
  if (points.size() < 2) {
    throw Error(Errc::too_few_samples, "covariance needs at least two samples");
  }
  // Centring on offsets from the first sample keeps identical samples at
  // exactly zero spread.
  const Point origin = points.front();
  Point mean;
  for (const Point& p : points) mean = mean + (p - origin);
  mean = mean / static_cast<double>(points.size());
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const Point& p : points) {
    const Point d = (p - origin) - mean;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  const double n1 = static_cast<double>(points.size() - 1);
  return {sxx / n1, sxy / n1, sxy / n1, syy / n1};
}

Matrix2 invert_2x2(const Matrix2& c, double det_floor) {
  const double det = c.determinant();
  if (!(det > det_floor)) {
    throw Error(Errc::singular_covariance,
                "determinant " + std::to_string(det) + " is not above " + std::to_string(det_floor));
  }
  return {c.yy / det, -c.xy / det, -c.yx / det, c.xx / det};
}

double mahalanobis_distance(Point x, Point c, const Matrix2& covariance) {
  const double off = 0.5 * (covariance.xy + covariance.yx);
  if (!(covariance.xx > 0.0) || !(covariance.determinant() > 0.0)) {
    throw Error(Errc::singular_covariance, "covariance is not positive definite");
  }
  // C = L L^T with L = [[l11, 0], [l21, l22]]; solve L y = x - c.
  const double l11 = std::sqrt(covariance.xx);
  const double l21 = off / l11;
  const double l22_sq = covariance.yy - l21 * l21;
  if (!(l22_sq > 0.0)) {
    throw Error(Errc::singular_covariance, "covariance is not positive definite");
  }
  const double l22 = std::sqrt(l22_sq);
  const Point d = x - c;
  const double y1 = d.x / l11;
  const double y2 = (d.y - l21 * y1) / l22;
  return std::hypot(y1, y2);
}

namespace {

double quadratic_form(Point z, Point mean, const Matrix2& covariance) {
  const Matrix2 inv = invert_2x2(covariance, 0.0);
  const Point d = z - mean;
  return geometry::dot(d, inv * d);
}

}  // namespace

double gaussian_density(Point z, const GroupStatistics& g) {
  const double q = quadratic_form(z, g.mean, g.covariance);
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(g.covariance.determinant()));
}

double discriminant(Point z, const GroupStatistics& g) {
  const double q = quadratic_form(z, g.mean, g.covariance);
  return -std::log(g.covariance.determinant()) - q;
}

GroupId classify(Point z, std::span<const GroupStatistics> stats) {
  if (stats.empty()) throw Error(Errc::empty_statistics, "no group statistics to classify against");
  const GroupStatistics* best = nullptr;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& g : stats) {
    const double log_prior =
        g.prior > 0.0 ? std::log(g.prior) : -std::numeric_limits<double>::infinity();
    const double score = discriminant(z, g) + 2.0 * log_prior;
    if (best == nullptr || score > best_score ||
        (score == best_score && g.group_id < best->group_id)) {
      best = &g;
      best_score = score;
    }
  }
  return best->group_id;
}

double chi_square2_survival(double d2) { return std::exp(-0.5 * d2); }

double family_threshold(double threshold, std::size_t tests) {
  if (tests <= 1) return threshold;
  const double family_tail = chi_square2_survival(threshold * threshold);
  // Sidak: 1 - (1 - p)^(1/k), computed without cancellation.
  const double per_test =
      -std::expm1(std::log1p(-family_tail) / static_cast<double>(tests));
  return std::sqrt(-2.0 * std::log(per_test));
}

}  // namespace anchorsec::detect
