// SPDX-License-Identifier: Apache-2.0
//
// Gaussian class model over trilateration groups and Mahalanobis scoring.
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "anchorsec/geometry.hpp"
#include "anchorsec/network.hpp"

namespace anchorsec::detect {

using geometry::Matrix2;
using geometry::Point;
using network::AnchorId;
using network::GroupId;

inline constexpr double kDefaultDeterminantFloor = 1e-12;

/// sqrt of the 0.99 quantile of chi-square with 2 degrees of freedom.
double default_threshold();

/// Class model of one trilateration group.
struct GroupStatistics {
  GroupId group_id = 0;
  Point mean;                ///< the group's M1 reference point
  Matrix2 covariance;        ///< spread of the re-localized trilateration point
  double prior = 0.0;
  std::size_t sample_count = 0;
  /// Spread of each member's position when re-derived from the other two
  /// members and the trilateration point; empty where that triple is degenerate.
  std::array<std::optional<Matrix2>, 3> member_covariance;
};

/// Mean-centred sample covariance with divisor n - 1.
/// Throws Error{too_few_samples} for fewer than two points.
Matrix2 sample_covariance(std::span<const Point> points);

/// Closed-form inverse [[s2^2, -r s1 s2], [-r s1 s2, s1^2]] / |C|.
/// Throws Error{singular_covariance} when |C| <= det_floor.
Matrix2 invert_2x2(const Matrix2& c, double det_floor = kDefaultDeterminantFloor);

/// sqrt((x - c)^T C^-1 (x - c)), evaluated through a Cholesky factor of C.
/// Throws Error{singular_covariance} unless C is positive definite.
double mahalanobis_distance(Point x, Point c, const Matrix2& covariance);

/// Bivariate normal density of z under the group's class model.
double gaussian_density(Point z, const GroupStatistics& g);

/// -ln|C| - (z - mean)^T C^-1 (z - mean), through the closed-form inverse.
/// gaussian_density and discriminant throw Error{singular_covariance} when |C| <= 0.
double discriminant(Point z, const GroupStatistics& g);

/// Group with the largest discriminant plus 2 ln(prior); with the uniform
/// priors used by the detectors this is the plain discriminant argmax.
/// Ties go to the lowest group id. Throws Error{empty_statistics}.
GroupId classify(Point z, std::span<const GroupStatistics> stats);

/// Upper tail of the chi-square(2) law at the squared distance `d2`.
double chi_square2_survival(double d2);

/// Per-test distance threshold such that `tests` independent chi-square(2)
/// tests together reject with the same probability as one test at `threshold`.
double family_threshold(double threshold, std::size_t tests);

}  // namespace anchorsec::detect
