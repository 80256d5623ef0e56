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

// Numerical spatial Fisher information of a gridded position density.

#ifndef RISPLAN_FISHER_HPP
#define RISPLAN_FISHER_HPP

#include <utility>
#include <vector>

#include "risplan/pdfgrid.hpp"

namespace risplan {

inline constexpr double kInformationFloor = 1e-12;  // m^-2
inline constexpr double kMinDensity = 1e-30;

struct Matrix2 {
  double xx = 0.0;
  double xy = 0.0;
  double yx = 0.0;
  double yy = 0.0;
};

struct Eigen2 {
  double min = 0.0;
  double max = 0.0;
};

// Closed-form eigenvalues of the symmetric part of `m`.
Eigen2 symmetric_eigenvalues(const Matrix2& m);

struct LocalizationBound {
  Matrix2 fim;
  double ev_min = 0.0;
  double ev_max = 0.0;
  double sigma_crb = 0.0;  // m
};

// sum over cells of grad(ln P) grad(ln P)^T * P * dx * dy. Derivatives are
// central where both neighbours carry density >= kMinDensity, one-sided
// where only one does. Throws DomainError unless the PDF integrates to 1
// within 1e-6.
Matrix2 fisher_matrix(const GridPdf& pdf);

// sigma_crb = 1 / sqrt(max(ev_min, kInformationFloor)).
LocalizationBound localization_bound(const GridPdf& pdf);

struct SensorPair {
  Point toa;
  Point aoa;
};

struct PairRanking {
  size_t best = 0;
  std::vector<double> ev_min;  // one per candidate
};

// Smallest Fisher eigenvalue of the ToA x AoA product for every candidate
// pair on a shared grid. `best` is the first candidate within `tie_rel` of
// the maximum.
PairRanking theorem1_check(double sigma_r, double sigma_theta,
                           const std::vector<SensorPair>& candidates, Point true_ue,
                           const GridSpec& grid, double tie_rel = 0.0);

}  // namespace risplan

#endif  // RISPLAN_FISHER_HPP
