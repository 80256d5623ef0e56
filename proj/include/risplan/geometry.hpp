/*
Copyright 2026 The risplan Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef RISPLAN_GEOMETRY_HPP
#define RISPLAN_GEOMETRY_HPP

#include <cmath>
#include <span>
#include <vector>

namespace risplan {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(b - a); }
// Azimuth of b as seen from a, measured from the +x axis.
inline double bearing(Point from, Point to) { return std::atan2(to.y - from.y, to.x - from.x); }

// Axis-aligned rectangle [min.x, max.x] x [min.y, max.y].
struct Rect {
  Point min;
  Point max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double area() const { return width() * height(); }
  bool contains(Point p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool contains(const Rect& r) const { return contains(r.min) && contains(r.max); }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Convex polygon, vertices in counter-clockwise order.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;
  // Accepts either winding; throws std::invalid_argument for fewer than three
  // vertices, zero area or a non-convex outline.
  explicit ConvexPolygon(std::vector<Point> vertices);

  std::span<const Point> vertices() const { return vertices_; }

  // Strict interior test (points on the boundary are outside).
  bool strictly_contains(Point p) const;

  // True iff the closed segment a-b passes through the open interior.
  // Segments grazing an edge or a vertex do not count.
  bool segment_crosses_interior(Point a, Point b) const;

 private:
  std::vector<Point> vertices_;
};

}  // namespace risplan

#endif  // RISPLAN_GEOMETRY_HPP
