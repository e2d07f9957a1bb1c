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

#include "tlsbayes/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace tlsbayes {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TraceEntry snapshot(const ParticleCloud& cloud) {
  TraceEntry e;
  e.estimate = posterior_estimate(cloud);
  const StratumMoments moments = stratum_moments(cloud);
  for (ModelClass k : kModelClasses) {
    e.conditional[index_of(k)] = moments.padded_mean(k);
    e.stratum_weight[index_of(k)] = moments[k].weight;
  }
  e.probabilities = model_probabilities(e.stratum_weight);
  e.ess = effective_sample_size(cloud);
  return e;
}

bool should_resample(const RunConfig& cfg, const ParticleCloud& cloud,
                     double ess) {
  switch (cfg.resample_mode) {
    case ResampleMode::kAlways:
      return true;
    case ResampleMode::kNever:
      return false;
    case ResampleMode::kEssThreshold:
      break;
  }
  return ess < cfg.resample_threshold * static_cast<double>(cloud.size());
}

}  // namespace

void validate(const RunConfig& cfg) {
  validate(cfg.prior);
  if (cfg.particles < 3) throw ConfigError("particles must be at least 3");
  if (cfg.shots_per_setting < 1) {
    throw ConfigError("shots_per_setting must be at least 1");
  }
  if (cfg.estimates < 1) throw ConfigError("estimates must be at least 1");
  if (!(cfg.shrinkage >= 0.0 && cfg.shrinkage <= 1.0)) {
    throw ConfigError("shrinkage must lie in [0, 1]");
  }
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 0.5)) {
    throw ConfigError("gamma must lie in [0, 0.5)");
  }
  if (!(cfg.resample_threshold >= 0.0) || !std::isfinite(cfg.resample_threshold)) {
    throw ConfigError("resample_threshold must be finite and nonnegative");
  }
  if (!(cfg.policy.freq_window.low < cfg.policy.freq_window.high)) {
    throw ConfigError("policy frequency window needs low < high");
  }
}

RunSeeds seeds_for_sample(std::uint64_t master, std::uint64_t sample) {
  return RunSeeds{derive_seed(master, sample, Stream::kTruth),
                  derive_seed(master, sample, Stream::kMeasurement),
                  derive_seed(master, sample, Stream::kInference)};
}

GroundTruth draw_truth(const RunConfig& cfg, const RunSeeds& seeds) {
  Rng rng(seeds.truth);
  return sample_ground_truth(cfg.true_defects, cfg.prior, rng);
}

RunFailure::RunFailure(std::uint64_t sample, int step, const std::string& what)
    : DegenerateUpdateError("sample " + std::to_string(sample) + ", step " +
                            std::to_string(step) + ": " + what),
      sample_(sample),
      step_(step) {}

RunTrace run_characterization(const RunConfig& cfg, const GroundTruth& truth,
                              const RunSeeds& seeds,
                              std::uint64_t sample_index) {
  validate(cfg);
  Rng inference(seeds.inference);
  Rng measurement(seeds.measurement);
  ResampleOptions options{cfg.shrinkage, cfg.order_defects, std::nullopt};
  if (cfg.restrict_to_prior) options.support = cfg.prior;

  ParticleCloud cloud = init_cloud(cfg.prior, cfg.particles, inference);
  RunTrace trace;
  trace.truth = truth;
  trace.entries.reserve(static_cast<std::size_t>(cfg.estimates));
  trace.entries.push_back(snapshot(cloud));

  for (int step = 1; step < cfg.estimates; ++step) {
    const MeasurementSetting s = choose_setting(cloud, cfg.policy, inference);
    const MeasurementRecord rec = simulate_measurement(
        truth, s, cfg.shots_per_setting, cfg.gamma, measurement);
    try {
      bayes_update(cloud, rec, cfg.gamma);
    } catch (const DegenerateUpdateError& e) {
      throw RunFailure(sample_index, step, e.what());
    }
    const double ess = effective_sample_size(cloud);
    bool resampled = false;
    if (should_resample(cfg, cloud, ess)) {
      cloud = resample(cloud, options, inference);
      resampled = true;
      ++trace.resample_count;
    }
    TraceEntry e = snapshot(cloud);
    // ESS is reported as seen by the resampling decision.
    e.ess = ess;
    e.resampled = resampled;
    e.record = rec;
    trace.entries.push_back(std::move(e));
  }
  trace.final_moments = stratum_moments(cloud);
  return trace;
}

RunTrace run_characterization(const RunConfig& cfg) {
  const RunSeeds seeds = seeds_for_sample(cfg.seed, 0);
  return run_characterization(cfg, draw_truth(cfg, seeds), seeds, 0);
}

double normalization_scale(const PriorRanges& prior, Param p,
                           ErrorNormalization normalization) {
  const double width = prior.range_of(p).width();
  switch (normalization) {
    case ErrorNormalization::kPriorVariance:
      return width > 0.0 ? width * width / 12.0 : 1.0;
    case ErrorNormalization::kPriorRangeSquared:
      return width > 0.0 ? width * width : 1.0;
    case ErrorNormalization::kNone:
      break;
  }
  return 1.0;
}

ErrorSeries squared_error(const RunTrace& trace, const GroundTruth& truth,
                          const PriorRanges& prior,
                          ErrorNormalization normalization) {
  const auto rows = static_cast<Eigen::Index>(trace.entries.size());
  ErrorSeries out;
  out.model_averaged = Eigen::MatrixXd::Constant(rows, kNumParams, kNaN);
  out.conditional = Eigen::MatrixXd::Constant(rows, kNumParams, kNaN);
  const std::size_t k = index_of(truth.n_d);
  for (Eigen::Index p : encoded_coordinates(truth.n_d)) {
    const double scale =
        normalization_scale(prior, static_cast<Param>(p), normalization);
    for (Eigen::Index n = 0; n < rows; ++n) {
      const TraceEntry& e = trace.entries[static_cast<std::size_t>(n)];
      const double d = e.estimate(p) - truth.x(p);
      out.model_averaged(n, p) = d * d / scale;
      if (e.stratum_weight[k] > 0.0) {
        const double dc = e.conditional[k](p) - truth.x(p);
        out.conditional(n, p) = dc * dc / scale;
      }
    }
  }
  return out;
}

double lower_median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) return kNaN;
  const auto mid = values.begin() +
                   static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

namespace {

struct RunOutcome {
  bool ok = false;
  FailureInfo failure;
  ErrorSeries errors;
  Eigen::MatrixXd probabilities;  // estimates x 4
};

RunOutcome run_one(const RunConfig& cfg, std::uint64_t sample) {
  RunOutcome out;
  const RunSeeds seeds = seeds_for_sample(cfg.seed, sample);
  const GroundTruth truth = draw_truth(cfg, seeds);
  try {
    const RunTrace trace = run_characterization(cfg, truth, seeds, sample);
    out.errors = squared_error(trace, truth, cfg.prior, cfg.normalization);
    out.probabilities.resize(static_cast<Eigen::Index>(trace.entries.size()), 4);
    for (std::size_t n = 0; n < trace.entries.size(); ++n) {
      const ModelProbabilities& p = trace.entries[n].probabilities;
      out.probabilities.row(static_cast<Eigen::Index>(n))
          << p.p1_present, p.p2_present, p.p1_absent, p.p2_absent;
    }
    out.ok = true;
  } catch (const RunFailure& e) {
    out.failure = FailureInfo{e.sample(), e.step(), e.what()};
  }
  return out;
}

}  // namespace

EnsembleSummary run_ensemble(const RunConfig& cfg, std::size_t n_samples,
                             unsigned threads) {
  validate(cfg);
  if (n_samples < 1) throw ConfigError("ensemble needs at least one sample");
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_samples)));

  std::vector<RunOutcome> outcomes(n_samples);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_samples) return;
      try {
        outcomes[i] = run_one(cfg, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  EnsembleSummary summary;
  summary.config = cfg;
  summary.samples = n_samples;
  const auto rows = static_cast<Eigen::Index>(cfg.estimates);
  summary.median_error.resize(rows, kNumParams);
  summary.median_conditional_error.resize(rows, kNumParams);
  summary.error_samples.resize(rows, kNumParams);
  summary.median_probability.resize(rows, 4);

  std::vector<const RunOutcome*> done;
  for (const RunOutcome& o : outcomes) {
    if (o.ok) {
      done.push_back(&o);
    } else {
      summary.failures.push_back(o.failure);
    }
  }
  summary.completed = done.size();

  std::vector<double> column;
  column.reserve(done.size());
  for (Eigen::Index n = 0; n < rows; ++n) {
    for (Eigen::Index p = 0; p < kNumParams; ++p) {
      column.clear();
      for (const RunOutcome* o : done) column.push_back(o->errors.model_averaged(n, p));
      summary.error_samples(n, p) = static_cast<int>(std::count_if(
          column.begin(), column.end(), [](double v) { return std::isfinite(v); }));
      summary.median_error(n, p) = lower_median(column);
      column.clear();
      for (const RunOutcome* o : done) column.push_back(o->errors.conditional(n, p));
      summary.median_conditional_error(n, p) = lower_median(column);
    }
    for (Eigen::Index q = 0; q < 4; ++q) {
      column.clear();
      for (const RunOutcome* o : done) column.push_back(o->probabilities(n, q));
      summary.median_probability(n, q) = lower_median(column);
    }
  }
  return summary;
}

double OracleComparisonRow::z_g1() const {
  const double d = std::abs(smc_mean_g1 - oracle_mean_g1);
  if (oracle_sd_g1 > 0.0) return d / oracle_sd_g1;
  return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double OracleComparisonRow::z_wd1() const {
  const double d = std::abs(smc_mean_wd1 - oracle_mean_wd1);
  if (oracle_sd_wd1 > 0.0) return d / oracle_sd_wd1;
  return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

bool OracleComparisonRow::within_tolerance() const {
  return z_g1() <= 3.0 && z_wd1() <= 3.0 &&
         std::abs(smc_p1_present - oracle_p1_present) <= 0.05;
}

std::vector<OracleComparisonRow> compare_with_oracle(
    const OracleComparisonConfig& cfg) {
  const PriorRanges& prior = cfg.scenario.prior;
  validate(prior);
  const PolicyConfig policy = default_policy(prior);
  ResampleOptions options{cfg.shrinkage, true, std::nullopt};
  if (cfg.restrict_to_prior) options.support = prior;
  const GridPosterior grid_prior = reduced_grid_prior(cfg.scenario);
  const double no_defect =
      prior.model_weights[0] / (prior.model_weights[0] + prior.model_weights[1]);

  std::vector<OracleComparisonRow> rows;
  for (int stream = 0; stream < cfg.streams; ++stream) {
    const RunSeeds seeds =
        seeds_for_sample(cfg.seed, static_cast<std::uint64_t>(stream));
    Rng truth_rng(seeds.truth);
    const ModelClass k =
        uniform01(truth_rng) < no_defect ? ModelClass::kNone : ModelClass::kOne;
    const GroundTruth truth = sample_ground_truth(k, prior, truth_rng);

    Rng inference(seeds.inference);
    Rng measurement(seeds.measurement);
    ParticleCloud cloud = init_cloud(prior, cfg.particles, inference);
    GridPosterior grid = grid_prior;
    for (int r = 0; r < cfg.records; ++r) {
      const MeasurementSetting s = choose_setting(cloud, policy, inference);
      const MeasurementRecord rec = simulate_measurement(
          truth, s, cfg.shots_per_record, cfg.gamma, measurement);
      bayes_update(cloud, rec, cfg.gamma);
      grid = oracle_update(grid, rec, cfg.gamma);
      if (effective_sample_size(cloud) <
          cfg.resample_threshold * static_cast<double>(cloud.size())) {
        cloud = resample(cloud, options, inference);
      }
    }
    const ParticleVector smc = posterior_estimate(cloud);
    const OracleMoments om = oracle_moments(grid);
    OracleComparisonRow row;
    row.stream = stream;
    row.truth_class = k;
    row.truth = truth.x;
    row.smc_mean_g1 = smc(kG1);
    row.oracle_mean_g1 = om.mean(kG1);
    row.oracle_sd_g1 = std::sqrt(om.covariance(kG1, kG1));
    row.smc_mean_wd1 = smc(kWd1);
    row.oracle_mean_wd1 = om.mean(kWd1);
    row.oracle_sd_wd1 = std::sqrt(om.covariance(kWd1, kWd1));
    row.smc_p1_present = model_probabilities(cloud).p1_present;
    row.oracle_p1_present = om.p1_present;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tlsbayes
