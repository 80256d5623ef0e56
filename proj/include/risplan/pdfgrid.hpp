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

// Discrete 2D position densities on uniform grids.
//
// Samples follow the density convention: a GridPdf is normalized when
// sum(P[i,j]) * dx * dy == 1, so refining the grid leaves sample values
// (approximately) unchanged.

#ifndef RISPLAN_PDFGRID_HPP
#define RISPLAN_PDFGRID_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "risplan/geometry.hpp"
#include "risplan/linkbudget.hpp"

namespace risplan {

// Sample (i, j) sits at origin + (i * dx, j * dy).
struct GridSpec {
  Point origin;
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;

  size_t size() const { return static_cast<size_t>(nx) * static_cast<size_t>(ny); }
  size_t index(int i, int j) const { return static_cast<size_t>(j) * nx + static_cast<size_t>(i); }
  Point center(int i, int j) const { return {origin.x + i * dx, origin.y + j * dy}; }
  double cell_area() const { return dx * dy; }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;

  // Throws DomainError unless nx, ny >= 3 and dx, dy > 0.
  void validate() const;
  // Samples covering `r` at (approximately) `spacing`, nodes on both edges.
  static GridSpec covering(const Rect& r, double spacing);
};

struct GridPdf {
  GridSpec spec;
  std::vector<double> values;  // row-major, x fastest

  double at(int i, int j) const { return values[spec.index(i, j)]; }
  // Riemann integral sum(P) * dx * dy.
  double integral() const;
};

// Unnormalized bearing likelihood exp(-D^2 / (2 sigma^2)) with D the wrapped
// difference between each sample's bearing from the sensor and the bearing
// of `true_ue`. Throws DomainError when sensor and UE coincide.
GridPdf aoa_pdf(const GridSpec& spec, Point sensor_pos, Point true_ue, double sigma_sq);
GridPdf aoa_pdf_from_bearing(const GridSpec& spec, Point sensor_pos, double bearing_rad,
                             double sigma_sq);

// Unnormalized ranging likelihood exp(-(r - r_true)^2 / (2 sigma^2)).
GridPdf toa_pdf(const GridSpec& spec, Point sensor_pos, Point true_ue, double sigma_range);
GridPdf toa_pdf_from_range(const GridSpec& spec, Point sensor_pos, double range_m,
                           double sigma_range);

// Pointwise product renormalized to unit integral. Throws DomainError for an
// empty list, mismatched grids or a product that vanishes on the grid.
GridPdf fuse(std::span<const GridPdf> pdfs);

// Throws DomainError when the values sum to zero.
GridPdf normalize(GridPdf pdf);

// <u, v> = sum(u * v) * dx * dy on identical grids.
double overlap(const GridPdf& u, const GridPdf& v);

// Index of the largest sample; ties go to the lowest index.
size_t argmax(const GridPdf& pdf);

// Rows "x,y,value".
void write_csv(std::ostream& out, const GridPdf& pdf);

// Sizing of the per-point evaluation window.
struct WindowPolicy {
  double fine_spacing = 0.05;    // m, coarsest spacing for small windows
  int min_cells_per_axis = 21;   // finer spacing below this
  int max_cells_per_axis = 201;  // coarser spacing beyond this
  double sigma_multiple = 6.0;
};

// Square window centred on `true_ue` (which lands on a grid node) and clipped
// to `bounds`. The half-width is sigma_multiple times the widest single
// sensor footprint, shrunk to sigma_multiple times the linearized fused
// standard deviation when the sensors jointly localize. The spacing is
// fine_spacing unless that leaves fewer than min_cells_per_axis or more than
// max_cells_per_axis samples across the window.
GridSpec local_window(std::span<const SensorAccuracy> sensors, Point true_ue, const Rect& bounds,
                      const WindowPolicy& policy = {});

// Normalized product of every sensor's likelihood centred on `true_ue`.
GridPdf fused_sensor_pdf(std::span<const SensorAccuracy> sensors, Point true_ue,
                         const GridSpec& spec);

}  // namespace risplan

#endif  // RISPLAN_PDFGRID_HPP
