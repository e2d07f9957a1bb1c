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
#include <optional>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tlsbayes/parameters.hpp"
#include "tlsbayes/prior.hpp"
#include "tlsbayes/rng.hpp"

namespace tlsbayes {

// Outcome of m shots at one setting.
struct MeasurementRecord {
  MeasurementSetting setting;
  int shots = 1;
  int excited = 0;
};

// Log-likelihood of a record given per-shot excited probability p, without
// the binomial coefficient (it cancels under normalization).
double record_log_likelihood(double p, const MeasurementRecord& rec);

// Weighted particle approximation of the posterior. Every particle carries
// a stratum label fixed at construction; resampling never changes it.
class ParticleCloud {
 public:
  using Positions = Eigen::Matrix<double, kNumParams, Eigen::Dynamic>;

  // Validates every column and normalizes the weights to unit sum. Throws
  // EncodingError for invalid positions and InvalidStateError for bad
  // weights (negative, non-finite, size mismatch, zero total).
  ParticleCloud(Positions positions, Eigen::VectorXd weights);

  Eigen::Index size() const { return positions_.cols(); }
  const Positions& positions() const { return positions_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  auto position(Eigen::Index i) const { return positions_.col(i); }
  double weight(Eigen::Index i) const { return weights_(i); }
  ModelClass stratum(Eigen::Index i) const {
    return strata_[static_cast<std::size_t>(i)];
  }
  const std::vector<ModelClass>& strata() const { return strata_; }

  // Total weight W_k of each stratum.
  std::array<double, 3> stratum_weights() const;

 private:
  Positions positions_;
  Eigen::VectorXd weights_;
  std::vector<ModelClass> strata_;

  friend void bayes_update(ParticleCloud&, const MeasurementRecord&, double);
};

// Equal-weight cloud drawn from the prior. Strata are laid out in order
// k = 0, 1, 2 with sizes from stratum_counts; particles are drawn in index
// order with sample_particle.
ParticleCloud init_cloud(const PriorRanges& prior, std::size_t n_p, Rng& rng);

// w_i <- L(rec | x_i) w_i, renormalized. On total underflow the cloud is
// left untouched and DegenerateUpdateError is thrown.
void bayes_update(ParticleCloud& cloud, const MeasurementRecord& rec,
                  double gamma = 0.0);

// 1 / sum w_i^2.
double effective_sample_size(const ParticleCloud& cloud);

struct StratumSummary {
  double weight = 0.0;        // W_k
  std::size_t count = 0;      // particles labelled k
  bool empty = true;          // W_k == 0
  bool degenerate = true;     // < 2 distinct support points or W_k < 1e-12
  Eigen::VectorXd mean;       // over encoded_coordinates(k)
  Eigen::MatrixXd covariance; // weights renormalized within the stratum
};

struct StratumMoments {
  std::array<StratumSummary, 3> strata;

  const StratumSummary& operator[](ModelClass k) const {
    return strata[index_of(k)];
  }
  // Conditional mean scattered back into a full vector (zeros elsewhere).
  ParticleVector padded_mean(ModelClass k) const;
};

inline constexpr double kNegligibleStratumWeight = 1e-12;

StratumMoments stratum_moments(const ParticleCloud& cloud);

struct ResampleOptions {
  double a = 0.995;           // Liu-West shrinkage
  bool order_defects = true;  // re-impose g1 >= g2 on two-defect offspring
  // When set, jittered draws outside this box count as violations. The
  // posterior vanishes outside the prior support, and particles that leave
  // it can sit where no measurement ever probes them.
  std::optional<PriorRanges> support;
};

// Stratified Liu-West resampling. For each of the N_p offspring, in index
// order: one uniform draw picks an ancestor by weight over the full cloud;
// unless the ancestor's stratum is degenerate or a == 1, its encoded
// coordinates are drawn from N(a x + (1 - a) mean_k, (1 - a^2) Cov_k)
// using one normal per encoded coordinate. Draws violating positivity (or
// leaving `support`) are repeated up to kMaxRedraws times, then the
// ancestor is copied.
ParticleCloud resample(const ParticleCloud& cloud,
                       const ResampleOptions& options, Rng& rng);

inline constexpr int kMaxRedraws = 100;

struct ModelProbabilities {
  double p1_present = 0.0;  // W_1 + W_2
  double p2_present = 0.0;  // W_2
  double p1_absent = 0.0;   // W_0
  double p2_absent = 0.0;   // W_0 + W_1
};

// The absent probabilities are formed as complements so that
// p1_present + p1_absent == 1 and p2_present + p2_absent == 1 exactly.
ModelProbabilities model_probabilities(const ParticleCloud& cloud);
ModelProbabilities model_probabilities(const std::array<double, 3>& w);

// Model-averaged posterior mean, absent coordinates counted as zero.
ParticleVector posterior_estimate(const ParticleCloud& cloud);

// Posterior mean of T1 at qubit frequency wq.
double expected_t1(const ParticleCloud& cloud, double wq);

}  // namespace tlsbayes
