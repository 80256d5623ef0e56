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

#include "risplan/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "risplan/error.hpp"
#include "risplan/units.hpp"

namespace risplan {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

Point sensor_position(const Measurement& m, const SensorPositions& sensors) {
  const auto it = sensors.find(m.sensor_id);
  if (it == sensors.end()) {
    throw ValidationError("measurements." + m.sensor_id, "unknown sensor");
  }
  return it->second;
}

Measurement without_bias(Measurement m) {
  m.nlos_bias_range = 0.0;
  return m;
}

LocationEstimate fuse_all(const std::vector<Measurement>& ms, const SensorPositions& sensors,
                          const GridSpec& spec) {
  if (ms.empty()) throw DomainError("no consistent subset");
  spec.validate();
  GridPdf acc{spec, std::vector<double>(spec.size(), 1.0)};
  for (const Measurement& m : ms) {
    const GridPdf p = measurement_pdf(m, sensor_position(m, sensors), spec);
    for (size_t c = 0; c < acc.values.size(); ++c) acc.values[c] *= p.values[c];
  }
  if (!(acc.integral() >= 1e-300)) throw DomainError("inconsistent measurements / window too small");
  LocationEstimate est;
  est.posterior = normalize(std::move(acc));
  const size_t k = argmax(est.posterior);
  est.point_estimate = spec.center(static_cast<int>(k % static_cast<size_t>(spec.nx)),
                                   static_cast<int>(k / static_cast<size_t>(spec.nx)));
  for (const Measurement& m : ms) est.used.push_back(m.sensor_id);
  return est;
}

}  // namespace

double biased_kernel(double residual, double sigma, double half_width) {
  if (half_width <= 0.0) {
    const double z = residual / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
  }
  return (normal_cdf((residual + half_width) / sigma) -
          normal_cdf((residual - half_width) / sigma)) /
         (2.0 * half_width);
}

GridPdf measurement_pdf(const Measurement& m, Point sensor_pos, const GridSpec& spec) {
  if (!(m.sigma > 0.0)) throw ValidationError("measurements." + m.sensor_id, "sigma must be > 0");
  if (!(m.nlos_bias_range >= 0.0)) {
    throw ValidationError("measurements." + m.sensor_id, "nlos_bias must be >= 0");
  }
  if (m.nlos_bias_range == 0.0) {
    return m.kind == SensorKind::kToa
               ? toa_pdf_from_range(spec, sensor_pos, m.value, m.sigma)
               : aoa_pdf_from_bearing(spec, sensor_pos, m.value, m.sigma * m.sigma);
  }
  spec.validate();
  GridPdf pdf{spec, std::vector<double>(spec.size(), 0.0)};
  // Scaled so the kernel peaks near 1 like the unbiased one.
  const double scale = 1.0 / biased_kernel(0.0, m.sigma, m.nlos_bias_range);
  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      const Point p = spec.center(i, j);
      double r = 0.0;
      if (m.kind == SensorKind::kToa) {
        r = distance(sensor_pos, p) - m.value;
      } else {
        r = wrap_angle(std::atan2(p.y - sensor_pos.y, p.x - sensor_pos.x) - m.value);
      }
      pdf.values[spec.index(i, j)] = scale * biased_kernel(r, m.sigma, m.nlos_bias_range);
    }
  }
  return pdf;
}

LocationEstimate locate(const std::vector<Measurement>& measurements,
                        const SensorPositions& sensors, const GridSpec& spec) {
  return fuse_all(measurements, sensors, spec);
}

LocationEstimate nlos_filter_refine(const std::vector<Measurement>& measurements,
                                    const SensorPositions& sensors, const GridSpec& spec,
                                    double overlap_threshold) {
  std::vector<Measurement> plain;
  for (const Measurement& m : measurements) plain.push_back(without_bias(m));
  if (measurements.size() < 3 || overlap_threshold <= 0.0) return fuse_all(plain, sensors, spec);

  const LocationEstimate tolerant = fuse_all(measurements, sensors, spec);
  std::vector<double> scores;
  for (const Measurement& m : measurements) {
    scores.push_back(
        overlap(tolerant.posterior, measurement_pdf(m, sensor_position(m, sensors), spec)));
  }
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  std::vector<Measurement> kept;
  std::vector<std::string> dropped;
  for (size_t k = 0; k < measurements.size(); ++k) {
    if (scores[k] < overlap_threshold * median) {
      dropped.push_back(measurements[k].sensor_id);
    } else {
      kept.push_back(plain[k]);
    }
  }
  if (kept.empty()) throw DomainError("no consistent subset");
  LocationEstimate out = fuse_all(kept, sensors, spec);
  out.discarded = std::move(dropped);
  return out;
}

std::vector<Measurement> read_measurements(std::istream& in) {
  std::vector<Measurement> out;
  std::string line;
  size_t row = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("sensor_id", 0) == 0) continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, ',');) cols.push_back(tok);
    const std::string where = "measurements[" + std::to_string(row) + "]";
    if (cols.size() < 4 || cols.size() > 5) {
      throw ValidationError(where, "expected sensor_id,kind,value,sigma[,nlos_bias]");
    }
    Measurement m;
    m.sensor_id = cols[0];
    if (cols[1] == "toa") {
      m.kind = SensorKind::kToa;
    } else if (cols[1] == "aoa") {
      m.kind = SensorKind::kAoa;
    } else {
      throw ValidationError(where + ".kind", "must be toa or aoa");
    }
    try {
      m.value = std::stod(cols[2]);
      m.sigma = std::stod(cols[3]);
      m.nlos_bias_range = cols.size() == 5 ? std::stod(cols[4]) : 0.0;
    } catch (const std::exception&) {
      throw ValidationError(where, "malformed number");
    }
    if (!(m.sigma > 0.0)) throw ValidationError(where + ".sigma", "must be > 0");
    if (!(m.nlos_bias_range >= 0.0)) throw ValidationError(where + ".nlos_bias", "must be >= 0");
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace risplan
