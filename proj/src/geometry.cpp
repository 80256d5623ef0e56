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

#include "risplan/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace risplan {
namespace {

// Geometric tolerance in meters.
constexpr double kEps = 1e-9;

double signed_area(const std::vector<Point>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  const double area = signed_area(vertices_);
  if (std::abs(area) < kEps) throw std::invalid_argument("polygon has zero area");
  if (area < 0.0) std::reverse(vertices_.begin(), vertices_.end());
  const size_t n = vertices_.size();
  for (size_t i = 0; i < n; ++i) {
    const Point e0 = vertices_[(i + 1) % n] - vertices_[i];
    const Point e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    if (cross(e0, e1) < -kEps) throw std::invalid_argument("polygon is not convex");
  }
}

bool ConvexPolygon::strictly_contains(Point p) const {
  const size_t n = vertices_.size();
  for (size_t i = 0; i < n; ++i) {
    const Point e = vertices_[(i + 1) % n] - vertices_[i];
    if (cross(e, p - vertices_[i]) <= kEps * norm(e)) return false;
  }
  return true;
}

bool ConvexPolygon::segment_crosses_interior(Point a, Point b) const {
  const Point d = b - a;
  if (norm(d) < kEps) return false;
  // Cyrus-Beck clip of the segment against the closed polygon.
  double t_enter = 0.0;
  double t_exit = 1.0;
  const size_t n = vertices_.size();
  for (size_t i = 0; i < n; ++i) {
    const Point e = vertices_[(i + 1) % n] - vertices_[i];
    const double f0 = cross(e, a - vertices_[i]);  // >= 0 means inside this edge
    const double df = cross(e, d);
    if (std::abs(df) < 1e-15) {
      if (f0 < 0.0) return false;
      continue;
    }
    const double t = -f0 / df;
    if (df > 0.0) {
      t_enter = std::max(t_enter, t);
    } else {
      t_exit = std::min(t_exit, t);
    }
    if (t_enter > t_exit) return false;
  }
  if ((t_exit - t_enter) * norm(d) <= kEps) return false;
  // A non-degenerate chord of a convex polygon either runs along its boundary
  // or has its midpoint in the open interior.
  const double tm = 0.5 * (t_enter + t_exit);
  return strictly_contains(a + tm * d);
}

}  // namespace risplan
