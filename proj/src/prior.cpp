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

#include "tlsbayes/prior.hpp"

#include <cmath>
#include <string>

#include "tlsbayes/errors.hpp"

namespace tlsbayes {
namespace {

void check_interval(const Interval& r, const char* name, bool positive) {
  if (!std::isfinite(r.low) || !std::isfinite(r.high)) {
    throw ConfigError(std::string(name) + ": range bounds must be finite");
  }
  if (r.low > r.high) {
    throw ConfigError(std::string(name) + ": empty range (low > high)");
  }
  if (positive && !(r.low > 0.0)) {
    throw ConfigError(std::string(name) + ": range must be strictly positive");
  }
}

}  // namespace

const Interval& PriorRanges::range_of(Param p) const {
  switch (p) {
    case kG1:
    case kG2:
      return coupling;
    case kWd1:
    case kWd2:
      return defect_frequency;
    case kT2d1:
    case kT2d2:
      return defect_coherence;
    case kT1q:
      break;
  }
  return qubit_t1;
}

PriorRanges default_prior() {
  PriorRanges prior;
  prior.coupling = {mhz_to_angular(0.34), mhz_to_angular(0.46)};
  prior.defect_frequency = {mhz_to_angular(-60.0), mhz_to_angular(60.0)};
  prior.defect_coherence = {0.05, 0.1};
  prior.qubit_t1 = {30.0, 44.0};
  return prior;
}

void validate(const PriorRanges& prior) {
  check_interval(prior.coupling, "coupling", true);
  check_interval(prior.defect_frequency, "defect_frequency", false);
  check_interval(prior.defect_coherence, "defect_coherence", true);
  check_interval(prior.qubit_t1, "qubit_t1", true);
  double total = 0.0;
  for (double w : prior.model_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("model weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("model weights sum to zero");
}

ParticleVector sample_particle(const PriorRanges& prior, ModelClass k,
                               Rng& rng) {
  ParticleVector x = ParticleVector::Zero();
  for (int j = 0; j < defect_count(k); ++j) {
    const auto [gi, wi, ti] = defect_coordinates(j);
    x(gi) = uniform_in(rng, prior.coupling.low, prior.coupling.high);
    x(wi) = uniform_in(rng, prior.defect_frequency.low,
                       prior.defect_frequency.high);
    x(ti) = uniform_in(rng, prior.defect_coherence.low,
                       prior.defect_coherence.high);
  }
  x(kT1q) = uniform_in(rng, prior.qubit_t1.low, prior.qubit_t1.high);
  canonicalize(x);
  return x;
}

double uniform_variance(const PriorRanges& prior, Param p) {
  const double w = prior.range_of(p).width();
  return w * w / 12.0;
}

std::array<std::size_t, 3> stratum_counts(const PriorRanges& prior,
                                          std::size_t n_p) {
  const auto& w = prior.model_weights;
  const double total = w[0] + w[1] + w[2];
  std::array<std::size_t, 3> counts{};
  std::size_t assigned = 0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    counts[k] = static_cast<std::size_t>(
        std::floor(static_cast<double>(n_p) * w[k] / total + 1e-9));
    assigned += counts[k];
    if (w[k] > 0.0) last_nonzero = k;
  }
  counts[last_nonzero] += n_p - assigned;
  return counts;
}

}  // namespace tlsbayes
