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

#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "tlsbayes/cloud.hpp"
#include "tlsbayes/parameters.hpp"
#include "tlsbayes/prior.hpp"
#include "tlsbayes/rng.hpp"

namespace tlsbayes {

// Hidden sample: true parameters and defect count.
struct GroundTruth {
  ParticleVector x;
  ModelClass n_d = ModelClass::kNone;
};

GroundTruth sample_ground_truth(ModelClass n_d, const PriorRanges& prior,
                                Rng& rng);

// Binomial(m_r, P_e) excited count at setting s.
MeasurementRecord simulate_measurement(const GroundTruth& gt,
                                       const MeasurementSetting& s, int m_r,
                                       double gamma, Rng& rng);

struct LinearAxis {
  double low = 0.0;
  double high = 0.0;
  int points = 241;
};

struct LogAxis {
  double low = 0.01;  // us
  double high = 50.0;
  int points = 60;
};

std::vector<double> axis_values(const LinearAxis& axis);
std::vector<double> axis_values(const LogAxis& axis);

// Excited-state probability over a frequency x time grid. Rows are
// frequencies, columns are waiting times.
struct SpectrumGrid {
  std::vector<double> frequencies;  // rad/us
  std::vector<double> times;        // us
  Eigen::MatrixXd excited;
};

SpectrumGrid swap_spectrum(const GroundTruth& gt, const LinearAxis& freq,
                           const LogAxis& time, double gamma = 0.0);

// Frequency indices of local minima along the time column with the largest
// contrast. Endpoints count when lower than their single neighbour.
std::vector<int> spectrum_dips(const SpectrumGrid& grid);

// Header row: "frequency_rad_per_us" followed by the times; one row per
// frequency.
void write_csv(std::ostream& os, const SpectrumGrid& grid);

}  // namespace tlsbayes
