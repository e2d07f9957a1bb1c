// Copyright 2026 The tlsbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tlsbayes/experiment.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "tlsbayes/errors.hpp"
#include "tlsbayes/physics.hpp"

namespace tlsbayes {

GroundTruth sample_ground_truth(ModelClass n_d, const PriorRanges& prior,
                                Rng& rng) {
  validate(prior);
  GroundTruth gt;
  gt.x = sample_particle(prior, n_d, rng);
  gt.n_d = n_d;
  return gt;
}

MeasurementRecord simulate_measurement(const GroundTruth& gt,
                                       const MeasurementSetting& s, int m_r,
                                       double gamma, Rng& rng) {
  if (m_r < 1) throw ConfigError("shots per setting must be at least 1");
  const double p = excited_prob(gt.x, s, gamma);
  std::binomial_distribution<int> outcome(m_r, p);
  MeasurementRecord rec;
  rec.setting = s;
  rec.shots = m_r;
  rec.excited = outcome(rng);
  return rec;
}

std::vector<double> axis_values(const LinearAxis& axis) {
  if (axis.points < 1) throw ConfigError("frequency grid is empty");
  std::vector<double> v(static_cast<std::size_t>(axis.points));
  if (axis.points == 1) {
    v[0] = 0.5 * (axis.low + axis.high);
    return v;
  }
  const double step = (axis.high - axis.low) / (axis.points - 1);
  for (int i = 0; i < axis.points; ++i) {
    v[static_cast<std::size_t>(i)] = axis.low + step * i;
  }
  v.back() = axis.high;
  return v;
}

std::vector<double> axis_values(const LogAxis& axis) {
  if (axis.points < 1) throw ConfigError("time grid is empty");
  if (!(axis.low > 0.0) || axis.high < axis.low) {
    throw ConfigError("time grid needs 0 < low <= high");
  }
  std::vector<double> v(static_cast<std::size_t>(axis.points));
  if (axis.points == 1) {
    v[0] = axis.low;
    return v;
  }
  const double a = std::log(axis.low);
  const double b = std::log(axis.high);
  for (int i = 0; i < axis.points; ++i) {
    v[static_cast<std::size_t>(i)] =
        std::exp(a + (b - a) * i / (axis.points - 1));
  }
  v.front() = axis.low;
  v.back() = axis.high;
  return v;
}

SpectrumGrid swap_spectrum(const GroundTruth& gt, const LinearAxis& freq,
                           const LogAxis& time, double gamma) {
  SpectrumGrid grid;
  grid.frequencies = axis_values(freq);
  grid.times = axis_values(time);
  const auto nf = static_cast<Eigen::Index>(grid.frequencies.size());
  const auto nt = static_cast<Eigen::Index>(grid.times.size());
  grid.excited.resize(nf, nt);
  for (Eigen::Index i = 0; i < nf; ++i) {
    for (Eigen::Index j = 0; j < nt; ++j) {
      const MeasurementSetting s{grid.frequencies[static_cast<std::size_t>(i)],
                                 grid.times[static_cast<std::size_t>(j)]};
      grid.excited(i, j) = excited_prob(gt.x, s, gamma);
    }
  }
  return grid;
}

std::vector<int> spectrum_dips(const SpectrumGrid& grid) {
  std::vector<int> dips;
  const Eigen::Index nf = grid.excited.rows();
  if (nf < 2 || grid.excited.cols() == 0) return dips;
  const Eigen::VectorXd contrast =
      grid.excited.colwise().maxCoeff() - grid.excited.colwise().minCoeff();
  Eigen::Index best = 0;
  contrast.maxCoeff(&best);
  if (!(contrast(best) > 0.0)) return dips;
  const Eigen::VectorXd col = grid.excited.col(best);
  for (Eigen::Index i = 0; i < nf; ++i) {
    const bool below_left = i == 0 || col(i) < col(i - 1);
    const bool below_right = i == nf - 1 || col(i) < col(i + 1);
    if (below_left && below_right) dips.push_back(static_cast<int>(i));
  }
  return dips;
}

void write_csv(std::ostream& os, const SpectrumGrid& grid) {
  const auto old_precision = os.precision(17);
  os << "frequency_rad_per_us";
  for (double t : grid.times) os << ',' << t;
  os << '\n';
  for (std::size_t i = 0; i < grid.frequencies.size(); ++i) {
    os << grid.frequencies[i];
    for (Eigen::Index j = 0; j < grid.excited.cols(); ++j) {
      os << ',' << grid.excited(static_cast<Eigen::Index>(i), j);
    }
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace tlsbayes
