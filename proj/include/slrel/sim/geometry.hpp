#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "slrel/core/error.hpp"

namespace slrel {

/// Point or vector in the local East/North frame, meters.
struct Vec2 {
  double x = 0.0;  // east
  double y = 0.0;  // north

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Distance from p to the closed segment [a, b].
inline double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + t * ab);
}

using Polygon = std::vector<Vec2>;

/// Even-odd point-in-polygon test; boundary points may go either way.
inline bool contains(const Polygon& poly, Vec2 p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

inline double boundary_distance(const Polygon& poly, Vec2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  }
  return best;
}

namespace detail {

inline int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

inline bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

inline bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) {
    return true;
  }
  return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
         (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

}  // namespace detail

/// True for polygons with >= 3 vertices whose non-adjacent edges never touch.
inline bool is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        continue;
      }
      if (detail::segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

/// Lane centerline polyline with a physical width.
struct LaneGeometry {
  std::string lane_id;
  std::vector<Vec2> centerline;
  double width = 3.5;

  void validate() const {
    if (centerline.size() < 2) {
      throw PreconditionError("lane '" + lane_id + "' needs at least two centerline points");
    }
    for (std::size_t i = 1; i < centerline.size(); ++i) {
      if (centerline[i] == centerline[i - 1]) {
        throw PreconditionError("lane '" + lane_id + "' has repeated consecutive points");
      }
    }
    if (!(width > 0.0)) {
      throw PreconditionError("lane '" + lane_id + "' needs a positive width");
    }
  }

  double length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < centerline.size(); ++i) {
      total += distance(centerline[i - 1], centerline[i]);
    }
    return total;
  }

  /// Position at arc length s, clamped to the ends.
  Vec2 point_at(double s) const {
    for (std::size_t i = 1; i < centerline.size(); ++i) {
      const double len = distance(centerline[i - 1], centerline[i]);
      if (s <= len || i + 1 == centerline.size()) {
        const double t = std::clamp(s / len, 0.0, 1.0);
        return centerline[i - 1] + t * (centerline[i] - centerline[i - 1]);
      }
      s -= len;
    }
    return centerline.back();
  }

  /// Unit travel direction at arc length s.
  Vec2 tangent_at(double s) const {
    for (std::size_t i = 1; i < centerline.size(); ++i) {
      const double len = distance(centerline[i - 1], centerline[i]);
      if (s <= len || i + 1 == centerline.size()) {
        return (1.0 / len) * (centerline[i] - centerline[i - 1]);
      }
      s -= len;
    }
    return {1.0, 0.0};
  }
};

/// Position of a point relative to a lane.
struct LaneCoordinates {
  double s = 0.0;        // arc length along the centerline, in [0, length]
  double d = 0.0;        // signed lateral offset, positive left of travel
  bool interior = true;  // false when the foot point is clamped to a lane end
};

/// Nearest-segment projection of p onto the lane centerline.
inline LaneCoordinates arc_length_project(const LaneGeometry& lane, Vec2 p) {
  const auto& pts = lane.centerline;
  const std::size_t last = pts.size() - 1;
  LaneCoordinates best;
  double best_dist = std::numeric_limits<double>::infinity();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < last; ++i) {
    const Vec2 a = pts[i];
    const Vec2 ab = pts[i + 1] - a;
    const double len = norm(ab);
    const double raw = dot(p - a, ab) / (len * len);
    const double t = std::clamp(raw, 0.0, 1.0);
    const Vec2 foot = a + t * ab;
    const double dist = distance(p, foot);
    if (dist < best_dist) {
      best_dist = dist;
      const double side = cross(ab, p - a);
      best.s = cumulative + t * len;
      best.d = side >= 0.0 ? dist : -dist;
      best.interior = !((i == 0 && raw < 0.0) || (i + 1 == last && raw > 1.0));
    }
    cumulative += len;
  }
  return best;
}

}  // namespace slrel
