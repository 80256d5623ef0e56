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

// Position estimation from concrete range and bearing readings.

#ifndef RISPLAN_LOCALIZER_HPP
#define RISPLAN_LOCALIZER_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "risplan/pdfgrid.hpp"

namespace risplan {

struct Measurement {
  std::string sensor_id;
  SensorKind kind = SensorKind::kToa;
  double value = 0.0;            // m or rad
  double sigma = 0.0;            // same unit as value
  double nlos_bias_range = 0.0;  // half-width of a flat bias; 0 disables
};

using SensorPositions = std::map<std::string, Point>;

// Likelihood of a Gaussian error convolved with a uniform bias on
// [-w, w]: (Phi((x + w) / sigma) - Phi((x - w) / sigma)) / (2 w).
// Falls back to the Gaussian density when w == 0.
double biased_kernel(double residual, double sigma, double half_width);

// Throws ValidationError for unknown sensors or invalid sigma/bias.
GridPdf measurement_pdf(const Measurement& m, Point sensor_pos, const GridSpec& spec);

struct LocationEstimate {
  GridPdf posterior;
  Point point_estimate;
  std::vector<std::string> used;
  std::vector<std::string> discarded;
};

LocationEstimate locate(const std::vector<Measurement>& measurements,
                        const SensorPositions& sensors, const GridSpec& spec);

// Fuses bias-tolerant likelihoods, drops measurements whose overlap with
// the fused posterior is below `overlap_threshold` times the median
// overlap, then fuses the survivors without bias terms.
LocationEstimate nlos_filter_refine(const std::vector<Measurement>& measurements,
                                    const SensorPositions& sensors, const GridSpec& spec,
                                    double overlap_threshold = 0.1);

// CSV with header "sensor_id,kind,value,sigma,nlos_bias" (kind "toa"/"aoa").
std::vector<Measurement> read_measurements(std::istream& in);

}  // namespace risplan

#endif  // RISPLAN_LOCALIZER_HPP
