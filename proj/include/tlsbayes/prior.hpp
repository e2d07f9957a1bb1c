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
#include <cstddef>

#include "tlsbayes/parameters.hpp"
#include "tlsbayes/rng.hpp"

namespace tlsbayes {

struct Interval {
  double low = 0.0;
  double high = 0.0;

  double width() const { return high - low; }
  double midpoint() const { return 0.5 * (low + high); }
  bool contains(double v) const { return low <= v && v <= high; }
};

// Uniform box prior per defect plus a prior over the defect count. All
// values are stored in internal units (rad/us, us).
struct PriorRanges {
  Interval coupling;           // g1, g2
  Interval defect_frequency;   // wd1, wd2
  Interval defect_coherence;   // t2d1, t2d2
  Interval qubit_t1;           // t1q
  std::array<double, 3> model_weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};

  const Interval& range_of(Param p) const;
};

// g in [0.34, 0.46] MHz, wd in [-60, 60] MHz (angular), T2d in
// [0.05, 0.1] us, T1q in [30, 44] us, one third per defect count.
PriorRanges default_prior();

// Throws ConfigError on an empty or non-physical range, or on model
// weights that are negative or sum to zero. A zero-width range is allowed
// and pins the coordinate.
void validate(const PriorRanges& prior);

// Uniform draw of the coordinates encoded by k; the rest stay zero. Two
// defects are ordered so that g1 >= g2. Draw order: (g, wd, t2d) for each
// encoded defect, then t1q.
ParticleVector sample_particle(const PriorRanges& prior, ModelClass k,
                               Rng& rng);

// Variance of the uniform marginal: width^2 / 12.
double uniform_variance(const PriorRanges& prior, Param p);

// Particles per stratum for a total of n_p: floor(n_p * w_k / sum w), with
// the remainder assigned to the highest stratum of nonzero weight.
std::array<std::size_t, 3> stratum_counts(const PriorRanges& prior,
                                          std::size_t n_p);

}  // namespace tlsbayes
