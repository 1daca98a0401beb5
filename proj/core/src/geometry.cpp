// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace anchorsec::geometry {

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point p) { return std::hypot(p.x, p.y); }
double distance(Point a, Point b) { return norm(a - b); }
bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

std::optional<Errc> check_triple(Point p1, Point p2, Point p3, const Limits& limits) {
  if (!is_finite(p1) || !is_finite(p2) || !is_finite(p3)) return Errc::invalid_argument;
  const Point base = p2 - p1;
  const double length = norm(base);
  if (length == 0.0) return Errc::degenerate_baseline;
  // Collinearity is checked first so that a flat triple is reported as such
  // even when its baseline is also short.
  const double height = cross(base, p3 - p1) / length;
  if (std::abs(height) < limits.min_height) return Errc::collinear_anchors;
  if (length < limits.min_baseline) return Errc::degenerate_baseline;
  return std::nullopt;
}

CanonicalFrame canonical_frame(Point p1, Point p2, Point p3, const Limits& limits) {
  if (auto failure = check_triple(p1, p2, p3, limits)) {
    switch (*failure) {
      case Errc::degenerate_baseline:
        throw Error(*failure, "anchors 1 and 2 are " + std::to_string(distance(p1, p2)) +
                                  " m apart, below " + std::to_string(limits.min_baseline));
      case Errc::collinear_anchors:
        throw Error(*failure, "third anchor lies within " + std::to_string(limits.min_height) +
                                  " m of the baseline");
      default:
        throw Error(*failure, "anchor coordinates must be finite");
    }
  }

  const Point base = p2 - p1;
  const double length = norm(base);
  const Point ex = base / length;
  const Point ey{-ex.y, ex.x};

  CanonicalFrame frame;
  frame.origin = p1;
  frame.rotation = {ex.x, ex.y, ey.x, ey.y};
  frame.baseline = length;
  frame.i = dot(p3 - p1, ex);
  frame.j = dot(p3 - p1, ey);
  return frame;
}

CanonicalSolution solve_canonical(const CanonicalFrame& frame, const RangeTriple& ranges) {
  const double d = frame.baseline;
  const double i = frame.i;
  const double j = frame.j;
  const double l1_sq = ranges.l1 * ranges.l1;
  const double l2_sq = ranges.l2 * ranges.l2;
  const double l3_sq = ranges.l3 * ranges.l3;

  CanonicalSolution s;
  s.a1 = (l1_sq - l2_sq + d * d) / (2.0 * d);
  s.a2 = (l1_sq - l3_sq + i * i + j * j) / (2.0 * j) - (i / j) * s.a1;
  s.residual = std::abs(l1_sq - s.a1 * s.a1 - s.a2 * s.a2);
  return s;
}

Fix trilaterate(const std::array<Point, 3>& anchors, const RangeTriple& ranges,
                const Limits& limits) {
  const auto valid = [](double r) { return std::isfinite(r) && r >= 0.0; };
  if (!valid(ranges.l1) || !valid(ranges.l2) || !valid(ranges.l3)) {
    throw Error(Errc::invalid_argument, "ranges must be finite and non-negative");
  }
  const CanonicalFrame frame = canonical_frame(anchors[0], anchors[1], anchors[2], limits);
  const CanonicalSolution s = solve_canonical(frame, ranges);
  return {frame.to_world({s.a1, s.a2}), s.residual};
}

bool circles_intersect(double baseline, double l1, double l2) {
  return std::abs(l1 - l2) < baseline && baseline < l1 + l2;
}

Point centroid(std::span<const Point> points) {
  if (points.empty()) throw Error(Errc::empty_input, "centroid of an empty point set");
  Point sum;
  for (const Point& p : points) sum = sum + p;
  return sum / static_cast<double>(points.size());
}

double min_angle(Point p1, Point p2, Point p3) {
  const auto corner = [](Point at, Point u, Point v) {
    const Point a = u - at;
    const Point b = v - at;
    return std::atan2(std::abs(cross(a, b)), dot(a, b));
  };
  const double a1 = corner(p1, p2, p3);
  const double a2 = corner(p2, p1, p3);
  return std::min({a1, a2, std::numbers::pi - a1 - a2});
}

}  // namespace anchorsec::geometry
