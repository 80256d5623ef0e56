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

#include "risplan/pdfgrid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "risplan/error.hpp"
#include "risplan/units.hpp"

namespace risplan {
namespace {

// Below this integral a product is treated as identically zero.
constexpr double kVanishingMass = 1e-300;

GridPdf blank(const GridSpec& spec) {
  spec.validate();
  return GridPdf{spec, std::vector<double>(spec.size(), 0.0)};
}

template <typename Kernel>
void fill(GridPdf& pdf, Kernel&& kernel) {
  const GridSpec& g = pdf.spec;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) pdf.values[g.index(i, j)] = kernel(g.center(i, j));
  }
}

template <typename Kernel>
void multiply(GridPdf& pdf, Kernel&& kernel) {
  const GridSpec& g = pdf.spec;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double& v = pdf.values[g.index(i, j)];
      if (v != 0.0) v *= kernel(g.center(i, j));
    }
  }
}

struct BearingKernel {
  Point sensor;
  double bearing;
  double inv_two_var;
  double operator()(Point p) const {
    const double d = wrap_angle(std::atan2(p.y - sensor.y, p.x - sensor.x) - bearing);
    return std::exp(-d * d * inv_two_var);
  }
};

struct RangeKernel {
  Point sensor;
  double range;
  double inv_two_var;
  double operator()(Point p) const {
    const double d = std::hypot(p.x - sensor.x, p.y - sensor.y) - range;
    return std::exp(-d * d * inv_two_var);
  }
};

BearingKernel bearing_kernel(Point sensor, double bearing_rad, double sigma_sq) {
  check_positive(sigma_sq, "AoA variance");
  return {sensor, bearing_rad, 0.5 / sigma_sq};
}

RangeKernel range_kernel(Point sensor, double range_m, double sigma) {
  check_positive(sigma, "ToA sigma");
  return {sensor, range_m, 0.5 / (sigma * sigma)};
}

}  // namespace

void GridSpec::validate() const {
  if (nx < 3 || ny < 3) throw DomainError("grid needs at least 3x3 samples");
  if (!(dx > 0.0 && dy > 0.0)) throw DomainError("grid spacing must be > 0");
}

GridSpec GridSpec::covering(const Rect& r, double spacing) {
  check_positive(spacing, "grid spacing");
  GridSpec g;
  g.origin = r.min;
  g.nx = std::max(3, static_cast<int>(std::lround(r.width() / spacing)) + 1);
  g.ny = std::max(3, static_cast<int>(std::lround(r.height() / spacing)) + 1);
  g.dx = r.width() / (g.nx - 1);
  g.dy = r.height() / (g.ny - 1);
  return g;
}

double GridPdf::integral() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * spec.cell_area();
}

GridPdf aoa_pdf(const GridSpec& spec, Point sensor_pos, Point true_ue, double sigma_sq) {
  if (sensor_pos == true_ue) throw DomainError("undefined bearing: sensor coincides with UE");
  return aoa_pdf_from_bearing(spec, sensor_pos, bearing(sensor_pos, true_ue), sigma_sq);
}

GridPdf aoa_pdf_from_bearing(const GridSpec& spec, Point sensor_pos, double bearing_rad,
                             double sigma_sq) {
  GridPdf pdf = blank(spec);
  fill(pdf, bearing_kernel(sensor_pos, bearing_rad, sigma_sq));
  return pdf;
}

GridPdf toa_pdf(const GridSpec& spec, Point sensor_pos, Point true_ue, double sigma_range) {
  return toa_pdf_from_range(spec, sensor_pos, distance(sensor_pos, true_ue), sigma_range);
}

GridPdf toa_pdf_from_range(const GridSpec& spec, Point sensor_pos, double range_m,
                           double sigma_range) {
  GridPdf pdf = blank(spec);
  fill(pdf, range_kernel(sensor_pos, range_m, sigma_range));
  return pdf;
}

GridPdf normalize(GridPdf pdf) {
  const double mass = pdf.integral();
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("cannot normalize a zero PDF");
  const double scale = 1.0 / mass;
  for (double& v : pdf.values) v *= scale;
  return pdf;
}

GridPdf fuse(std::span<const GridPdf> pdfs) {
  if (pdfs.empty()) throw DomainError("fuse needs at least one PDF");
  GridPdf out = pdfs.front();
  for (size_t k = 1; k < pdfs.size(); ++k) {
    if (!(pdfs[k].spec == out.spec)) throw DomainError("fuse: PDFs live on different grids");
    for (size_t c = 0; c < out.values.size(); ++c) out.values[c] *= pdfs[k].values[c];
  }
  if (!(out.integral() >= kVanishingMass)) {
    throw DomainError("inconsistent measurements / window too small");
  }
  return normalize(std::move(out));
}

double overlap(const GridPdf& u, const GridPdf& v) {
  if (!(u.spec == v.spec)) throw DomainError("overlap: PDFs live on different grids");
  double sum = 0.0;
  for (size_t c = 0; c < u.values.size(); ++c) sum += u.values[c] * v.values[c];
  return sum * u.spec.cell_area();
}

size_t argmax(const GridPdf& pdf) {
  return static_cast<size_t>(std::max_element(pdf.values.begin(), pdf.values.end()) -
                             pdf.values.begin());
}

void write_csv(std::ostream& out, const GridPdf& pdf) {
  const auto old_precision = out.precision(17);
  out << "x,y,value\n";
  for (int j = 0; j < pdf.spec.ny; ++j) {
    for (int i = 0; i < pdf.spec.nx; ++i) {
      const Point c = pdf.spec.center(i, j);
      out << c.x << ',' << c.y << ',' << pdf.at(i, j) << '\n';
    }
  }
  out.precision(old_precision);
}

GridSpec local_window(std::span<const SensorAccuracy> sensors, Point true_ue, const Rect& bounds,
                      const WindowPolicy& policy) {
  double widest = 0.0;
  // Linearized information: each sensor constrains one direction.
  double jxx = 0.0, jxy = 0.0, jyy = 0.0;
  for (const SensorAccuracy& s : sensors) {
    const double r = distance(s.position, true_ue);
    if (r <= 0.0) continue;
    const double ux = (true_ue.x - s.position.x) / r;
    const double uy = (true_ue.y - s.position.y) / r;
    double sx = ux, sy = uy, footprint = s.sigma;
    if (s.kind == SensorKind::kAoa) {
      sx = -uy;
      sy = ux;
      footprint = r * s.sigma;
    }
    widest = std::max(widest, footprint);
    const double w = 1.0 / (footprint * footprint);
    jxx += w * sx * sx;
    jxy += w * sx * sy;
    jyy += w * sy * sy;
  }
  double half = policy.sigma_multiple * widest;
  const double mean = 0.5 * (jxx + jyy);
  const double dev = std::hypot(0.5 * (jxx - jyy), jxy);
  const double ev_min = mean - dev;
  if (ev_min > 1e-12 * std::max(mean, 1e-300)) {
    half = std::min(half, policy.sigma_multiple / std::sqrt(ev_min));
  }
  if (!(half > 0.0)) throw DomainError("local_window: no sensor footprint");

  const int min_k = std::max(1, (policy.min_cells_per_axis - 1) / 2);
  const int max_k = std::max(min_k, (policy.max_cells_per_axis - 1) / 2);
  const double spacing = std::max(std::min(policy.fine_spacing, half / min_k), half / max_k);
  const int k = std::min(max_k, static_cast<int>(std::ceil(half / spacing - 1e-9)));
  auto span = [&](double centre, double lo, double hi, int& k_lo, int& k_hi) {
    k_lo = std::min(k, static_cast<int>(std::floor((centre - lo) / spacing + 1e-9)));
    k_hi = std::min(k, static_cast<int>(std::floor((hi - centre) / spacing + 1e-9)));
  };
  int kx_lo, kx_hi, ky_lo, ky_hi;
  span(true_ue.x, bounds.min.x, bounds.max.x, kx_lo, kx_hi);
  span(true_ue.y, bounds.min.y, bounds.max.y, ky_lo, ky_hi);

  GridSpec g;
  g.dx = g.dy = spacing;
  g.nx = kx_lo + kx_hi + 1;
  g.ny = ky_lo + ky_hi + 1;
  g.origin = {true_ue.x - kx_lo * spacing, true_ue.y - ky_lo * spacing};
  g.validate();
  return g;
}

GridPdf fused_sensor_pdf(std::span<const SensorAccuracy> sensors, Point true_ue,
                         const GridSpec& spec) {
  if (sensors.empty()) throw DomainError("fused_sensor_pdf: no sensors");
  GridPdf pdf = blank(spec);
  std::fill(pdf.values.begin(), pdf.values.end(), 1.0);
  for (const SensorAccuracy& s : sensors) {
    if (s.kind == SensorKind::kToa) {
      multiply(pdf, range_kernel(s.position, distance(s.position, true_ue), s.sigma));
    } else {
      if (s.position == true_ue) throw DomainError("undefined bearing: sensor coincides with UE");
      multiply(pdf, bearing_kernel(s.position, bearing(s.position, true_ue), s.sigma * s.sigma));
    }
  }
  if (!(pdf.integral() >= kVanishingMass)) {
    throw DomainError("inconsistent measurements / window too small");
  }
  return normalize(std::move(pdf));
}

}  // namespace risplan
