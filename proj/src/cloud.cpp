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

#include "tlsbayes/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tlsbayes/errors.hpp"
#include "tlsbayes/physics.hpp"

namespace tlsbayes {

double record_log_likelihood(double p, const MeasurementRecord& rec) {
  const int failures = rec.shots - rec.excited;
  double ll = 0.0;
  if (rec.excited > 0) ll += rec.excited * std::log(p);
  if (failures > 0) ll += failures * std::log1p(-p);
  return ll;
}

ParticleCloud::ParticleCloud(Positions positions, Eigen::VectorXd weights)
    : positions_(std::move(positions)), weights_(std::move(weights)) {
  if (weights_.size() != positions_.cols() || positions_.cols() == 0) {
    throw InvalidStateError("cloud needs one weight per particle");
  }
  if (!weights_.allFinite() || (weights_.array() < 0.0).any()) {
    throw InvalidStateError("weights must be finite and nonnegative");
  }
  const double total = weights_.sum();
  if (!(total > 0.0)) throw InvalidStateError("weights sum to zero");
  weights_ /= total;

  strata_.resize(static_cast<std::size_t>(positions_.cols()));
  for (Eigen::Index i = 0; i < positions_.cols(); ++i) {
    const ParticleVector x = positions_.col(i);
    if (!is_valid(x, false)) {
      throw EncodingError("particle " + std::to_string(i) +
                          " violates the parameter encoding");
    }
    strata_[static_cast<std::size_t>(i)] = stratum_of(x);
  }
}

std::array<double, 3> ParticleCloud::stratum_weights() const {
  std::array<double, 3> w{};
  for (Eigen::Index i = 0; i < size(); ++i) {
    w[index_of(stratum(i))] += weights_(i);
  }
  return w;
}

ParticleCloud init_cloud(const PriorRanges& prior, std::size_t n_p, Rng& rng) {
  validate(prior);
  if (n_p < 3) throw ConfigError("particle count must be at least 3");
  const auto counts = stratum_counts(prior, n_p);
  ParticleCloud::Positions positions(kNumParams,
                                     static_cast<Eigen::Index>(n_p));
  Eigen::Index col = 0;
  for (ModelClass k : kModelClasses) {
    for (std::size_t n = 0; n < counts[index_of(k)]; ++n) {
      positions.col(col++) = sample_particle(prior, k, rng);
    }
  }
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(
      static_cast<Eigen::Index>(n_p), 1.0 / static_cast<double>(n_p));
  return ParticleCloud(std::move(positions), std::move(weights));
}

void bayes_update(ParticleCloud& cloud, const MeasurementRecord& rec,
                  double gamma) {
  const Eigen::Index n = cloud.size();
  Eigen::VectorXd log_l(n);
  double max_log_l = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cloud.weights_(i) == 0.0) {
      log_l(i) = -std::numeric_limits<double>::infinity();
      continue;
    }
    const double p = excited_prob(cloud.positions_.col(i), rec.setting, gamma);
    log_l(i) = record_log_likelihood(p, rec);
    if (log_l(i) > max_log_l) max_log_l = log_l(i);
  }
  if (!std::isfinite(max_log_l)) {
    throw DegenerateUpdateError("every particle has zero likelihood");
  }
  Eigen::VectorXd updated(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    updated(i) = cloud.weights_(i) * std::exp(log_l(i) - max_log_l);
  }
  const double total = updated.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegenerateUpdateError("posterior weights underflowed");
  }
  cloud.weights_ = updated / total;
}

double effective_sample_size(const ParticleCloud& cloud) {
  return 1.0 / cloud.weights().squaredNorm();
}

ParticleVector StratumMoments::padded_mean(ModelClass k) const {
  ParticleVector x = ParticleVector::Zero();
  const StratumSummary& s = strata[index_of(k)];
  if (s.empty) return x;
  const auto coords = encoded_coordinates(k);
  for (std::size_t c = 0; c < coords.size(); ++c) {
    x(coords[c]) = s.mean(static_cast<Eigen::Index>(c));
  }
  return x;
}

StratumMoments stratum_moments(const ParticleCloud& cloud) {
  using Vec = ParticleVector;
  using Mat = Eigen::Matrix<double, kNumParams, kNumParams>;

  std::array<double, 3> weight{};
  std::array<std::size_t, 3> count{};
  std::array<Vec, 3> sum;
  sum.fill(Vec::Zero());
  std::array<Eigen::Index, 3> first_support = {-1, -1, -1};
  std::array<bool, 3> distinct{};

  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const std::size_t k = index_of(cloud.stratum(i));
    const double w = cloud.weight(i);
    ++count[k];
    if (w == 0.0) continue;
    weight[k] += w;
    sum[k] += w * cloud.position(i);
    if (first_support[k] < 0) {
      first_support[k] = i;
    } else if (!distinct[k] &&
               cloud.position(i) != cloud.position(first_support[k])) {
      distinct[k] = true;
    }
  }

  std::array<Vec, 3> mean;
  for (std::size_t k = 0; k < 3; ++k) {
    mean[k] = weight[k] > 0.0 ? Vec(sum[k] / weight[k]) : Vec::Zero();
  }

  std::array<Mat, 3> scatter;
  scatter.fill(Mat::Zero());
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const double w = cloud.weight(i);
    if (w == 0.0) continue;
    const std::size_t k = index_of(cloud.stratum(i));
    const Vec d = cloud.position(i) - mean[k];
    scatter[k].noalias() += w * d * d.transpose();
  }

  StratumMoments out;
  for (ModelClass km : kModelClasses) {
    const std::size_t k = index_of(km);
    StratumSummary& s = out.strata[k];
    const auto coords = encoded_coordinates(km);
    const auto dim = static_cast<Eigen::Index>(coords.size());
    s.weight = weight[k];
    s.count = count[k];
    s.empty = !(weight[k] > 0.0);
    s.degenerate = s.empty || !distinct[k] ||
                   weight[k] < kNegligibleStratumWeight;
    s.mean = Eigen::VectorXd::Zero(dim);
    s.covariance = Eigen::MatrixXd::Zero(dim, dim);
    if (s.empty) continue;
    for (Eigen::Index r = 0; r < dim; ++r) {
      s.mean(r) = mean[k](coords[static_cast<std::size_t>(r)]);
      for (Eigen::Index c = 0; c < dim; ++c) {
        s.covariance(r, c) = scatter[k](coords[static_cast<std::size_t>(r)],
                                        coords[static_cast<std::size_t>(c)]) /
                             weight[k];
      }
    }
  }
  return out;
}

namespace {

bool physically_admissible(const ParticleVector& x, ModelClass k) {
  if (!(x(kT1q) > 0.0)) return false;
  for (int j = 0; j < defect_count(k); ++j) {
    const auto [gi, wi, ti] = defect_coordinates(j);
    (void)wi;
    if (!(x(gi) > 0.0) || !(x(ti) > 0.0)) return false;
  }
  return x.allFinite();
}

// Slack keeps pinned (zero-width) ranges from rejecting rounding noise.
bool inside(const Interval& r, double v) {
  const double slack =
      1e-12 * std::max({1.0, std::abs(r.low), std::abs(r.high)});
  return v >= r.low - slack && v <= r.high + slack;
}

bool within_support(const ParticleVector& x, ModelClass k,
                    const PriorRanges& prior) {
  if (!inside(prior.qubit_t1, x(kT1q))) return false;
  for (int j = 0; j < defect_count(k); ++j) {
    const auto [gi, wi, ti] = defect_coordinates(j);
    if (!inside(prior.coupling, x(gi)) ||
        !inside(prior.defect_frequency, x(wi)) ||
        !inside(prior.defect_coherence, x(ti))) {
      return false;
    }
  }
  return true;
}

// Square root of (1 - a^2) Cov with negative eigenvalues clipped, so that
// factor * z with z ~ N(0, I) has the target covariance.
struct JitterKernel {
  bool active = false;
  Eigen::VectorXd mean;
  Eigen::MatrixXd factor;
};

JitterKernel make_kernel(const StratumSummary& s, double a) {
  JitterKernel kernel;
  const double scale = 1.0 - a * a;
  if (s.degenerate || !(scale > 0.0)) return kernel;
  const Eigen::MatrixXd sym = 0.5 * (s.covariance + s.covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  if (!(lambda.maxCoeff() > 0.0)) return kernel;
  kernel.active = true;
  kernel.mean = s.mean;
  kernel.factor =
      eig.eigenvectors() * (scale * lambda).cwiseSqrt().asDiagonal();
  return kernel;
}

}  // namespace

ParticleCloud resample(const ParticleCloud& cloud,
                       const ResampleOptions& options, Rng& rng) {
  if (!(options.a >= 0.0 && options.a <= 1.0)) {
    throw ConfigError("shrinkage a must lie in [0, 1]");
  }
  const StratumMoments moments = stratum_moments(cloud);
  if (moments.strata[0].empty && moments.strata[1].empty &&
      moments.strata[2].empty) {
    throw InvalidStateError("cannot resample: every stratum is empty");
  }
  std::array<JitterKernel, 3> kernels;
  for (std::size_t k = 0; k < 3; ++k) {
    kernels[k] = make_kernel(moments.strata[k], options.a);
  }

  const Eigen::Index n = cloud.size();
  std::vector<double> cumulative(static_cast<std::size_t>(n));
  std::partial_sum(cloud.weights().begin(), cloud.weights().end(),
                   cumulative.begin());
  const double total = cumulative.back();

  ParticleCloud::Positions offspring(kNumParams, n);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z;
  for (Eigen::Index m = 0; m < n; ++m) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto ancestor = static_cast<Eigen::Index>(it - cumulative.begin());
    const ModelClass km = cloud.stratum(ancestor);
    const JitterKernel& kernel = kernels[index_of(km)];
    const ParticleVector parent = cloud.position(ancestor);
    ParticleVector child = parent;

    if (kernel.active) {
      const auto coords = encoded_coordinates(km);
      const auto dim = static_cast<Eigen::Index>(coords.size());
      Eigen::VectorXd centre(dim);
      for (Eigen::Index c = 0; c < dim; ++c) {
        centre(c) = options.a * parent(coords[static_cast<std::size_t>(c)]) +
                    (1.0 - options.a) * kernel.mean(c);
      }
      z.resize(dim);
      bool accepted = false;
      for (int attempt = 0; attempt < kMaxRedraws && !accepted; ++attempt) {
        for (Eigen::Index c = 0; c < dim; ++c) z(c) = normal(rng);
        const Eigen::VectorXd draw = centre + kernel.factor * z;
        ParticleVector candidate = ParticleVector::Zero();
        for (Eigen::Index c = 0; c < dim; ++c) {
          candidate(coords[static_cast<std::size_t>(c)]) = draw(c);
        }
        if (physically_admissible(candidate, km) &&
            (!options.support || within_support(candidate, km, *options.support))) {
          child = candidate;
          accepted = true;
        }
      }
    }
    if (options.order_defects) canonicalize(child);
    offspring.col(m) = child;
  }

  Eigen::VectorXd weights =
      Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return ParticleCloud(std::move(offspring), std::move(weights));
}

ModelProbabilities model_probabilities(const std::array<double, 3>& w) {
  ModelProbabilities p;
  const double total = w[0] + w[1] + w[2];
  p.p1_present = std::min(1.0, (w[1] + w[2]) / total);
  p.p2_present = std::min(1.0, w[2] / total);
  p.p1_absent = 1.0 - p.p1_present;
  p.p2_absent = 1.0 - p.p2_present;
  return p;
}

ModelProbabilities model_probabilities(const ParticleCloud& cloud) {
  return model_probabilities(cloud.stratum_weights());
}

ParticleVector posterior_estimate(const ParticleCloud& cloud) {
  return cloud.positions() * cloud.weights();
}

double expected_t1(const ParticleCloud& cloud, double wq) {
  double t1 = 0.0;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const double w = cloud.weight(i);
    if (w == 0.0) continue;
    t1 += w * relaxation_time(cloud.position(i), wq);
  }
  return t1;
}

}  // namespace tlsbayes
