// Copyright 2026 The wljump Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Least-squares polynomial fit residuals for profile-shape checks.
#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace wljump::testing_support {

/// ||y - fit|| / ||y|| for the best polynomial of the given degree. Time is
/// mapped to [-1, 1] before building the Vandermonde matrix.
inline double relative_fit_residual(const std::vector<double>& t, const std::vector<double>& y, int degree) {
  const auto n = static_cast<Eigen::Index>(t.size());
  if (n == 0) return 0.0;
  const auto [lo_it, hi_it] = std::minmax_element(t.begin(), t.end());
  const double mid = 0.5 * (*lo_it + *hi_it);
  const double half = std::max(0.5 * (*hi_it - *lo_it), 1e-300);
  Eigen::MatrixXd V(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = (t[static_cast<std::size_t>(i)] - mid) / half;
    double pw = 1.0;
    for (int k = 0; k <= degree; ++k) {
      V(i, k) = pw;
      pw *= s;
    }
    b[i] = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coef = V.colPivHouseholderQr().solve(b);
  const double scale = b.norm();
  if (scale == 0.0) return 0.0;
  return (V * coef - b).norm() / scale;
}

}  // namespace wljump::testing_support
