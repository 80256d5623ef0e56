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

#include "risplan/fisher.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "risplan/error.hpp"

namespace risplan {
namespace {

const double kExcluded = std::nan("");

// d/du ln P along one axis from ln P at offsets -2..+2 (NaN where the cell
// is excluded or off-grid). Central where possible, otherwise the
// second-order one-sided stencil, falling back to first order.
double log_derivative(const std::array<double, 5>& lp, double h) {
  const bool m1 = !std::isnan(lp[1]), p1 = !std::isnan(lp[3]);
  if (m1 && p1) return (lp[3] - lp[1]) / (2.0 * h);
  if (p1) {
    if (!std::isnan(lp[4])) return (-3.0 * lp[2] + 4.0 * lp[3] - lp[4]) / (2.0 * h);
    return (lp[3] - lp[2]) / h;
  }
  if (m1) {
    if (!std::isnan(lp[0])) return (3.0 * lp[2] - 4.0 * lp[1] + lp[0]) / (2.0 * h);
    return (lp[2] - lp[1]) / h;
  }
  return 0.0;
}

}  // namespace

Eigen2 symmetric_eigenvalues(const Matrix2& m) {
  const double off = 0.5 * (m.xy + m.yx);
  const double mean = 0.5 * (m.xx + m.yy);
  const double dev = std::hypot(0.5 * (m.xx - m.yy), off);
  Eigen2 e{mean - dev, mean + dev};
  // Cancellation guard: recover the small root from the determinant.
  const double det = m.xx * m.yy - off * off;
  if (e.max > 0.0 && std::abs(e.min) < 1e-8 * e.max) e.min = det / e.max;
  return e;
}

Matrix2 fisher_matrix(const GridPdf& pdf) {
  const GridSpec& g = pdf.spec;
  g.validate();
  if (pdf.values.size() != g.size()) throw DomainError("fisher_matrix: value count mismatch");
  const double mass = pdf.integral();
  if (!(std::abs(mass - 1.0) <= 1e-6)) {
    throw DomainError("fisher_matrix: PDF not normalized (integral " + std::to_string(mass) + ")");
  }

  std::vector<double> lp(pdf.values.size());
  for (size_t c = 0; c < lp.size(); ++c) {
    const double v = pdf.values[c];
    lp[c] = v >= kMinDensity ? std::log(v) : kExcluded;
  }

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const size_t c = g.index(i, j);
      if (std::isnan(lp[c])) continue;
      std::array<double, 5> ax, ay;
      for (int k = -2; k <= 2; ++k) {
        const int ii = i + k, jj = j + k;
        ax[static_cast<size_t>(k + 2)] = ii >= 0 && ii < g.nx ? lp[g.index(ii, j)] : kExcluded;
        ay[static_cast<size_t>(k + 2)] = jj >= 0 && jj < g.ny ? lp[g.index(i, jj)] : kExcluded;
      }
      const double gx = log_derivative(ax, g.dx);
      const double gy = log_derivative(ay, g.dy);
      const double w = pdf.values[c];
      sxx += gx * gx * w;
      sxy += gx * gy * w;
      syy += gy * gy * w;
    }
  }
  const double a = g.cell_area();
  return Matrix2{sxx * a, sxy * a, sxy * a, syy * a};
}

LocalizationBound localization_bound(const GridPdf& pdf) {
  LocalizationBound b;
  b.fim = fisher_matrix(pdf);
  const Eigen2 e = symmetric_eigenvalues(b.fim);
  b.ev_min = e.min;
  b.ev_max = e.max;
  b.sigma_crb = 1.0 / std::sqrt(std::max(e.min, kInformationFloor));
  return b;
}

PairRanking theorem1_check(double sigma_r, double sigma_theta,
                           const std::vector<SensorPair>& candidates, Point true_ue,
                           const GridSpec& grid, double tie_rel) {
  PairRanking out;
  out.ev_min.reserve(candidates.size());
  for (const SensorPair& p : candidates) {
    std::vector<SensorAccuracy> sensors{
        {SensorKind::kToa, "toa", p.toa, sigma_r, 0.0},
        {SensorKind::kAoa, "aoa", p.aoa, sigma_theta, 0.0},
    };
    out.ev_min.push_back(localization_bound(fused_sensor_pdf(sensors, true_ue, grid)).ev_min);
  }
  if (out.ev_min.empty()) return out;
  const double top = *std::max_element(out.ev_min.begin(), out.ev_min.end());
  for (size_t k = 0; k < out.ev_min.size(); ++k) {
    if (out.ev_min[k] >= top * (1.0 - tie_rel)) {
      out.best = k;
      break;
    }
  }
  return out;
}

}  // namespace risplan
