// SPDX-License-Identifier: Apache-2.0
//
// Planar trilateration. Three anchors are mapped into a frame where the
// first sits at the origin, the second on the positive x axis at distance
// `baseline`, and the third at (i, j). In that frame the range equations
// reduce to two linear solves; the leftover of the first range equation is
// reported as a consistency residual.
#pragma once

#include <array>
#include <optional>
#include <span>

#include "anchorsec/error.hpp"

namespace anchorsec::geometry {

/// Position in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend Point operator*(Point p, double s) { return {s * p.x, s * p.y}; }
  friend Point operator/(Point p, double s) { return {p.x / s, p.y / s}; }
};

double dot(Point a, Point b);
double cross(Point a, Point b);
double norm(Point p);
double distance(Point a, Point b);
bool is_finite(Point p);

/// Row-major 2x2 matrix.
struct Matrix2 {
  double xx = 0.0;
  double xy = 0.0;
  double yx = 0.0;
  double yy = 0.0;

  static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Matrix2 diagonal(double a, double d) { return {a, 0.0, 0.0, d}; }

  double determinant() const { return xx * yy - xy * yx; }
  double trace() const { return xx + yy; }
  Matrix2 transposed() const { return {xx, yx, xy, yy}; }

  friend bool operator==(const Matrix2&, const Matrix2&) = default;

  friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
    return {a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy};
  }
  friend Matrix2 operator*(double s, const Matrix2& m) {
    return {s * m.xx, s * m.xy, s * m.yx, s * m.yy};
  }
  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy,
            a.yx * b.xx + a.yy * b.yx, a.yx * b.xy + a.yy * b.yy};
  }
  friend Point operator*(const Matrix2& m, Point p) {
    return {m.xx * p.x + m.xy * p.y, m.yx * p.x + m.yy * p.y};
  }
};

/// Conditioning floors for an anchor triple.
struct Limits {
  double min_baseline = 1.0;  ///< smallest accepted |p2 - p1|
  double min_height = 1.0;    ///< smallest accepted |j|, the height of p3 over the baseline
};

struct CanonicalFrame {
  Point origin;
  Matrix2 rotation;  ///< world -> canonical
  double baseline = 0.0;
  double i = 0.0;
  double j = 0.0;

  Point to_canonical(Point world) const { return rotation * (world - origin); }
  Point to_world(Point canonical) const { return origin + rotation.transposed() * canonical; }
};

struct RangeTriple {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
};

struct CanonicalSolution {
  double a1 = 0.0;
  double a2 = 0.0;
  double residual = 0.0;  ///< |l1^2 - a1^2 - a2^2|, meters^2
};

struct Fix {
  Point position;
  double residual = 0.0;
};

/// Returns the reason a triple cannot be solved, or nothing when it can.
std::optional<Errc> check_triple(Point p1, Point p2, Point p3, const Limits& limits = {});

/// Throws Error{degenerate_baseline | collinear_anchors | invalid_argument}.
CanonicalFrame canonical_frame(Point p1, Point p2, Point p3, const Limits& limits = {});

CanonicalSolution solve_canonical(const CanonicalFrame& frame, const RangeTriple& ranges);

/// Position of the emitter whose ranges to `anchors` are `ranges`.
Fix trilaterate(const std::array<Point, 3>& anchors, const RangeTriple& ranges,
                const Limits& limits = {});

/// True iff circles of radius l1 and l2 whose centres are `baseline` apart
/// cross at two distinct points.
bool circles_intersect(double baseline, double l1, double l2);

/// Smallest interior angle of the triangle, in radians; 0 when two vertices coincide.
double min_angle(Point p1, Point p2, Point p3);

Point centroid(std::span<const Point> points);

}  // namespace anchorsec::geometry
