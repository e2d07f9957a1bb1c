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

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "tlsbayes/cloud.hpp"
#include "tlsbayes/parameters.hpp"
#include "tlsbayes/prior.hpp"

namespace tlsbayes {

// Exact Bayesian posterior over a fixed, finite hypothesis set. Used to
// validate the particle filter; it shares the likelihood model but none of
// the update arithmetic (log-pmf with the binomial coefficient, long double
// normalization).
class GridPosterior {
 public:
  // Probabilities are normalized; throws ConfigError on size mismatch,
  // negative entries or invalid points.
  GridPosterior(std::vector<ParticleVector> points,
                std::vector<double> probabilities);

  const std::vector<ParticleVector>& points() const { return points_; }
  const std::vector<double>& probabilities() const { return probs_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<ParticleVector> points_;
  std::vector<double> probs_;

  friend GridPosterior oracle_update(const GridPosterior&,
                                     const MeasurementRecord&, double);
};

// p_i' proportional to Binomial(excited; shots, P_e(x_i)) p_i.
GridPosterior oracle_update(const GridPosterior& gp,
                            const MeasurementRecord& rec, double gamma = 0.0);

struct OracleMoments {
  ParticleVector mean;                               // model averaged
  Eigen::Matrix<double, kNumParams, kNumParams> covariance;
  std::array<double, 3> stratum_weight{};            // W_k
  double p1_present = 0.0;
  double p2_present = 0.0;
};

OracleMoments oracle_moments(const GridPosterior& gp);

// Reduced two-model scenario: either no defect, or one defect with unknown
// (g1, wd1) and pinned coherence and qubit T1.
struct ReducedScenario {
  PriorRanges prior;  // zero-width ranges for the pinned coordinates
  int grid_points_per_axis = 101;
  double no_defect_mass = 0.5;
};

// t2d1 = 0.075 us, t1q = 37 us, g and wd over the default prior box.
ReducedScenario default_reduced_scenario();

// Regular grid over the (g1, wd1) rectangle plus one no-defect point.
GridPosterior reduced_grid_prior(const ReducedScenario& scenario);

}  // namespace tlsbayes
