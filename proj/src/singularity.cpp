// Copyright 2026 The hyperfill Authors
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

#include "hyperfill/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hyperfill {
namespace {

constexpr double kSpikeJump = 50.0;
constexpr int kZooms = 6;
constexpr int kZoomPoints = 128;
constexpr double kShrink = 32.0;
constexpr std::size_t kMaximaToZoom = 4;

}  // namespace

BlowupReport DetectBlowup(const std::function<double(double)>& log_f, double a,
                          double b) {
  BlowupReport report;
  const int n = std::max(2, static_cast<int>(std::ceil((b - a) * kSamplesPerUnit)));
  const double h = (b - a) / n;
  std::vector<double> t(n + 1);
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) {
    t[i] = i == n ? b : a + h * i;
    v[i] = log_f(t[i]);
  }

  report.log_max = v[0];
  report.location = t[0];
  std::vector<int> maxima;
  for (int i = 0; i <= n; ++i) {
    const double left = i > 0 ? v[i - 1] : -INFINITY;
    const double right = i < n ? v[i + 1] : -INFINITY;
    if (v[i] > report.log_max) {
      report.log_max = v[i];
      report.location = t[i];
    }
    if (v[i] >= left && v[i] >= right) maxima.push_back(i);
    const double neighbour = std::max(i > 0 ? v[i - 1] : v[i + 1],
                                      i < n ? v[i + 1] : v[i - 1]);
    if (v[i] - neighbour > kSpikeJump && !report.spike) {
      report.spike = true;
      report.location = t[i];
    }
  }
  std::sort(maxima.begin(), maxima.end(),
            [&](int x, int y) { return v[x] > v[y]; });
  if (maxima.size() > kMaximaToZoom) maxima.resize(kMaximaToZoom);

  for (int start : maxima) {
    double center = t[start];
    double half = h;
    const double base = v[start];
    double best = base;
    for (int z = 0; z < kZooms; ++z) {
      const double lo = std::max(a, center - half);
      const double hi = std::min(b, center + half);
      double arg = center;
      for (int k = 0; k <= kZoomPoints; ++k) {
        const double x = lo + (hi - lo) * k / kZoomPoints;
        const double fx = log_f(x);
        if (fx > best) {
          best = fx;
          arg = x;
        }
      }
      center = arg;
      half /= kShrink;
    }
    const double s = (best - base) / (kZooms * std::log(kShrink));
    if (s > report.exponent) {
      report.exponent = s;
      if (!report.spike) report.location = center;
    }
    if (best > report.log_max) report.log_max = best;
  }
  return report;
}

}  // namespace hyperfill
