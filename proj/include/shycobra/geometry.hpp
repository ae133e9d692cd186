#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shycobra {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

/// Planar rigid transform / pose: position in metres, heading in radians.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose2&, const Pose2&) = default;
};

/// a ∘ b : b expressed in a's frame, mapped to the world.
inline Pose2 compose(const Pose2& a, const Pose2& b) {
  const double c = std::cos(a.theta), s = std::sin(a.theta);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y, wrap_angle(a.theta + b.theta)};
}

inline Pose2 inverse(const Pose2& a) {
  const double c = std::cos(a.theta), s = std::sin(a.theta);
  return {-c * a.x - s * a.y, s * a.x - c * a.y, wrap_angle(-a.theta)};
}

/// Planar pose difference a ⊖ b split into position error (m) and wrapped angle error (rad).
struct PoseError {
  double position = 0.0;
  double angle = 0.0;
};

inline PoseError pose_error(const Pose2& a, const Pose2& b) {
  return {std::hypot(a.x - b.x, a.y - b.y), std::abs(wrap_angle(a.theta - b.theta))};
}

/// Axis-aligned rectangle.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  Vec2 center() const { return {0.5 * (min_x + max_x), 0.5 * (min_y + max_y)}; }
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(Vec2 p) const { return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y; }
  Rect translated(Vec2 d) const { return {min_x + d.x, min_y + d.y, max_x + d.x, max_y + d.y}; }
  /// Shrinks by `margin` on every side (may produce an empty rectangle).
  Rect inset(double margin) const { return {min_x + margin, min_y + margin, max_x - margin, max_y - margin}; }
  bool empty() const { return min_x > max_x || min_y > max_y; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Signed distance from a point to a rectangle: negative inside (depth to the nearest edge).
inline double signed_distance(Vec2 p, const Rect& r) {
  const double dx = std::max(r.min_x - p.x, p.x - r.max_x);
  const double dy = std::max(r.min_y - p.y, p.y - r.max_y);
  if (dx <= 0.0 && dy <= 0.0) return std::max(dx, dy);
  return std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

namespace detail {
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

inline double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}
}  // namespace detail

/// Signed clearance between segment ab and a rectangle; negative when the segment enters it.
inline double segment_rect_clearance(Vec2 a, Vec2 b, const Rect& r) {
  const double sa = signed_distance(a, r);
  const double sb = signed_distance(b, r);
  if (sa <= 0.0 || sb <= 0.0) return std::min(sa, sb);
  const Vec2 corners[4] = {{r.min_x, r.min_y}, {r.max_x, r.min_y}, {r.max_x, r.max_y}, {r.min_x, r.max_y}};
  double best = std::min(sa, sb);
  for (int i = 0; i < 4; ++i) {
    const Vec2 c = corners[i], d = corners[(i + 1) % 4];
    if (detail::segments_intersect(a, b, c, d)) return -0.0;
    best = std::min(best, detail::segment_segment_distance(a, b, c, d));
  }
  return best;
}

}  // namespace shycobra
