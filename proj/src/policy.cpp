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

#include "tlsbayes/policy.hpp"

#include "tlsbayes/errors.hpp"

namespace tlsbayes {
namespace {

// Weighted pick restricted to particles with at least `min_defects`
// defects; returns the chosen particle's coordinate `coord`.
double draw_marginal(const ParticleCloud& cloud, int min_defects,
                     Eigen::Index coord, double restricted_total, Rng& rng) {
  const double target = uniform01(rng) * restricted_total;
  double running = 0.0;
  Eigen::Index last = -1;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const double w = cloud.weight(i);
    if (w == 0.0 || defect_count(cloud.stratum(i)) < min_defects) continue;
    running += w;
    last = i;
    if (running > target) return cloud.position(i)(coord);
  }
  // Rounding can leave target at the very top of the range.
  return cloud.position(last)(coord);
}

}  // namespace

PolicyConfig default_policy(const PriorRanges& prior) {
  return PolicyConfig{prior.defect_frequency, FrequencyFallback::kUniformWindow};
}

double choose_frequency(const ParticleCloud& cloud, const PolicyConfig& cfg,
                        Rng& rng) {
  const auto w = cloud.stratum_weights();
  const ModelProbabilities p = model_probabilities(w);
  const double norm = p.p1_present + p.p2_present;
  if (!(norm > 0.0)) {
    switch (cfg.fallback) {
      case FrequencyFallback::kWindowCentre:
        return cfg.freq_window.midpoint();
      case FrequencyFallback::kUniformWindow:
        break;
    }
    return uniform_in(rng, cfg.freq_window.low, cfg.freq_window.high);
  }
  const bool first = uniform01(rng) * norm < p.p1_present;
  if (first) return draw_marginal(cloud, 1, kWd1, w[1] + w[2], rng);
  return draw_marginal(cloud, 2, kWd2, w[2], rng);
}

double choose_time(const ParticleCloud& cloud, double wq, Rng& rng) {
  return uniform_open_closed(rng) * expected_t1(cloud, wq);
}

MeasurementSetting choose_setting(const ParticleCloud& cloud,
                                  const PolicyConfig& cfg, Rng& rng) {
  MeasurementSetting s;
  s.wq = choose_frequency(cloud, cfg, rng);
  s.t = choose_time(cloud, s.wq, rng);
  return s;
}

}  // namespace tlsbayes
