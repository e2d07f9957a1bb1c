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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tlsbayes/cloud.hpp"
#include "tlsbayes/errors.hpp"
#include "tlsbayes/experiment.hpp"
#include "tlsbayes/oracle.hpp"
#include "tlsbayes/policy.hpp"
#include "tlsbayes/prior.hpp"

namespace tlsbayes {

enum class ResampleMode {
  kEssThreshold,  // when ESS / N_p < threshold
  kAlways,        // after every update
  kNever,
};

// How squared errors are scaled before taking medians.
enum class ErrorNormalization {
  kPriorVariance,     // (b - a)^2 / 12
  kPriorRangeSquared, // (b - a)^2
  kNone,
};

struct RunConfig {
  std::size_t particles = 40000;
  double shrinkage = 0.995;
  int shots_per_setting = 200;
  // Number of estimates: one for the prior plus one per setting.
  int estimates = 1001;
  double gamma = 0.0;
  ResampleMode resample_mode = ResampleMode::kEssThreshold;
  double resample_threshold = 0.5;
  bool order_defects = true;
  // Reject resampling draws that leave the prior box.
  bool restrict_to_prior = true;
  PriorRanges prior = default_prior();
  PolicyConfig policy = default_policy(default_prior());
  std::uint64_t seed = 1;
  ModelClass true_defects = ModelClass::kTwo;
  ErrorNormalization normalization = ErrorNormalization::kPriorVariance;
  LinearAxis spectrum_frequency{mhz_to_angular(-60.0), mhz_to_angular(60.0),
                                241};
  LogAxis spectrum_time{0.01, 50.0, 60};

  // M = M_r (N_est - 1).
  long long total_shots() const {
    return static_cast<long long>(shots_per_setting) * (estimates - 1);
  }
};

// Throws ConfigError unless counts >= 1, 0 <= a <= 1, 0 <= gamma < 0.5, the
// prior is valid and the policy window is nonempty.
void validate(const RunConfig& cfg);

struct TraceEntry {
  ParticleVector estimate;                    // model averaged
  std::array<ParticleVector, 3> conditional;  // per-stratum means, padded
  std::array<double, 3> stratum_weight{};
  ModelProbabilities probabilities;
  double ess = 0.0;
  bool resampled = false;
  std::optional<MeasurementRecord> record;    // absent for the prior entry
};

struct RunTrace {
  GroundTruth truth;
  std::vector<TraceEntry> entries;  // size == estimates
  StratumMoments final_moments;
  int resample_count = 0;
};

struct RunSeeds {
  std::uint64_t truth = 0;
  std::uint64_t measurement = 0;
  std::uint64_t inference = 0;
};

RunSeeds seeds_for_sample(std::uint64_t master, std::uint64_t sample);

GroundTruth draw_truth(const RunConfig& cfg, const RunSeeds& seeds);

// Degenerate update inside a run, tagged with where it happened.
class RunFailure : public DegenerateUpdateError {
 public:
  RunFailure(std::uint64_t sample, int step, const std::string& what);
  std::uint64_t sample() const { return sample_; }
  int step() const { return step_; }

 private:
  std::uint64_t sample_;
  int step_;
};

// The adaptive loop: estimates - 1 rounds of {choose setting, simulate
// shots, Bayes update, conditional resample}. The inference stream is
// consumed by the policy then the resampler, in that order, every round.
RunTrace run_characterization(const RunConfig& cfg, const GroundTruth& truth,
                              const RunSeeds& seeds,
                              std::uint64_t sample_index = 0);

// Sample 0 of cfg.seed.
RunTrace run_characterization(const RunConfig& cfg);

// Rows: estimate index (0 is the prior); columns: Param. NaN marks
// parameters the truth does not encode.
struct ErrorSeries {
  Eigen::MatrixXd model_averaged;
  Eigen::MatrixXd conditional;  // against the true stratum's conditional mean
};

double normalization_scale(const PriorRanges& prior, Param p,
                           ErrorNormalization normalization);

ErrorSeries squared_error(const RunTrace& trace, const GroundTruth& truth,
                          const PriorRanges& prior,
                          ErrorNormalization normalization);

struct FailureInfo {
  std::uint64_t sample = 0;
  int step = 0;
  std::string message;
};

struct EnsembleSummary {
  RunConfig config;
  std::size_t samples = 0;
  std::size_t completed = 0;
  std::vector<FailureInfo> failures;
  // Rows: estimate index; columns: Param. Lower medians over finite values.
  Eigen::MatrixXd median_error;
  Eigen::MatrixXd median_conditional_error;
  Eigen::MatrixXi error_samples;
  // Rows: estimate index; columns: P_1p, P_2p, P_1a, P_2a.
  Eigen::MatrixXd median_probability;
};

inline constexpr std::array<const char*, 4> kProbabilityNames = {
    "P1p", "P2p", "P1a", "P2a"};

// Lower median of the finite entries; NaN when there are none.
double lower_median(std::vector<double> values);

// Independent truths and runs for samples 0..n_samples-1 of cfg.seed,
// spread over `threads` workers. The result does not depend on `threads`.
EnsembleSummary run_ensemble(const RunConfig& cfg, std::size_t n_samples,
                             unsigned threads = 1);

struct OracleComparisonConfig {
  ReducedScenario scenario = default_reduced_scenario();
  int streams = 20;
  int records = 50;
  int shots_per_record = 1;
  std::size_t particles = 40000;
  double shrinkage = 0.995;
  double resample_threshold = 0.5;
  double gamma = 0.0;
  bool restrict_to_prior = true;
  std::uint64_t seed = 1;
};

struct OracleComparisonRow {
  int stream = 0;
  ModelClass truth_class = ModelClass::kNone;
  ParticleVector truth;
  double smc_mean_g1 = 0.0, oracle_mean_g1 = 0.0, oracle_sd_g1 = 0.0;
  double smc_mean_wd1 = 0.0, oracle_mean_wd1 = 0.0, oracle_sd_wd1 = 0.0;
  double smc_p1_present = 0.0, oracle_p1_present = 0.0;

  double z_g1() const;
  double z_wd1() const;
  // |z| <= 3 for both coordinates and |dP_1p| <= 0.05.
  bool within_tolerance() const;
};

// SMC and exact grid posterior fed the same adaptively chosen records; the
// SMC cloud drives the policy.
std::vector<OracleComparisonRow> compare_with_oracle(
    const OracleComparisonConfig& cfg);

}  // namespace tlsbayes
