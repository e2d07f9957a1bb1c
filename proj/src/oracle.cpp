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

#include "tlsbayes/oracle.hpp"

#include <cmath>
#include <limits>

#include "tlsbayes/errors.hpp"
#include "tlsbayes/physics.hpp"

namespace tlsbayes {
namespace {

long double log_binomial_pmf(int k, int n, double p) {
  const long double lp = static_cast<long double>(p);
  long double out = std::lgamma(static_cast<long double>(n) + 1) -
                    std::lgamma(static_cast<long double>(k) + 1) -
                    std::lgamma(static_cast<long double>(n - k) + 1);
  if (k > 0) out += k * std::log(lp);
  if (n - k > 0) out += (n - k) * std::log(1.0L - lp);
  return out;
}

}  // namespace

GridPosterior::GridPosterior(std::vector<ParticleVector> points,
                             std::vector<double> probabilities)
    : points_(std::move(points)), probs_(std::move(probabilities)) {
  if (points_.empty() || points_.size() != probs_.size()) {
    throw ConfigError("grid needs one probability per point");
  }
  long double total = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!is_valid(points_[i])) throw ConfigError("invalid grid point");
    if (!(probs_[i] >= 0.0)) throw ConfigError("negative grid probability");
    total += probs_[i];
  }
  if (!(total > 0)) throw ConfigError("grid probabilities sum to zero");
  for (double& p : probs_) p = static_cast<double>(p / total);
}

GridPosterior oracle_update(const GridPosterior& gp,
                            const MeasurementRecord& rec, double gamma) {
  const std::size_t n = gp.size();
  std::vector<long double> log_post(n);
  long double peak = -std::numeric_limits<long double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (gp.probs_[i] == 0.0) {
      log_post[i] = -std::numeric_limits<long double>::infinity();
      continue;
    }
    const double pe = excited_prob(gp.points_[i], rec.setting, gamma);
    log_post[i] = log_binomial_pmf(rec.excited, rec.shots, pe) +
                  std::log(static_cast<long double>(gp.probs_[i]));
    if (log_post[i] > peak) peak = log_post[i];
  }
  if (!std::isfinite(peak)) {
    throw DegenerateUpdateError("oracle: total likelihood is zero");
  }
  long double total = 0;
  std::vector<long double> unnorm(n);
  for (std::size_t i = 0; i < n; ++i) {
    unnorm[i] = std::exp(log_post[i] - peak);
    total += unnorm[i];
  }
  GridPosterior out = gp;
  for (std::size_t i = 0; i < n; ++i) {
    out.probs_[i] = static_cast<double>(unnorm[i] / total);
  }
  return out;
}

OracleMoments oracle_moments(const GridPosterior& gp) {
  using LVec = Eigen::Matrix<long double, kNumParams, 1>;
  LVec mean = LVec::Zero();
  OracleMoments m;
  for (std::size_t i = 0; i < gp.size(); ++i) {
    const long double p = gp.probabilities()[i];
    mean += p * gp.points()[i].cast<long double>();
    m.stratum_weight[index_of(stratum_of(gp.points()[i]))] +=
        static_cast<double>(p);
  }
  Eigen::Matrix<long double, kNumParams, kNumParams> cov;
  cov.setZero();
  for (std::size_t i = 0; i < gp.size(); ++i) {
    const LVec d = gp.points()[i].cast<long double>() - mean;
    cov += static_cast<long double>(gp.probabilities()[i]) * d *
           d.transpose();
  }
  m.mean = mean.cast<double>();
  m.covariance = cov.cast<double>();
  m.p1_present = m.stratum_weight[1] + m.stratum_weight[2];
  m.p2_present = m.stratum_weight[2];
  return m;
}

ReducedScenario default_reduced_scenario() {
  ReducedScenario s;
  s.prior = default_prior();
  s.prior.defect_coherence = {0.075, 0.075};
  s.prior.qubit_t1 = {37.0, 37.0};
  s.prior.model_weights = {0.5, 0.5, 0.0};
  return s;
}

GridPosterior reduced_grid_prior(const ReducedScenario& scenario) {
  const int n = scenario.grid_points_per_axis;
  if (n < 2) throw ConfigError("reduced grid needs at least 2 points per axis");
  const PriorRanges& prior = scenario.prior;
  validate(prior);
  std::vector<ParticleVector> points;
  std::vector<double> probs;
  points.reserve(static_cast<std::size_t>(n * n + 1));
  probs.reserve(points.capacity());

  ParticleVector none = ParticleVector::Zero();
  none(kT1q) = prior.qubit_t1.low;
  points.push_back(none);
  probs.push_back(scenario.no_defect_mass);

  const double each = (1.0 - scenario.no_defect_mass) / (n * n);
  for (int a = 0; a < n; ++a) {
    const double g = prior.coupling.low + prior.coupling.width() * a / (n - 1);
    for (int b = 0; b < n; ++b) {
      const double wd = prior.defect_frequency.low +
                        prior.defect_frequency.width() * b / (n - 1);
      ParticleVector x = ParticleVector::Zero();
      x(kG1) = g;
      x(kWd1) = wd;
      x(kT2d1) = prior.defect_coherence.low;
      x(kT1q) = prior.qubit_t1.low;
      points.push_back(x);
      probs.push_back(each);
    }
  }
  return GridPosterior(std::move(points), std::move(probs));
}

}  // namespace tlsbayes
