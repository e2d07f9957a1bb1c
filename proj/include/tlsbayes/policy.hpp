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

#include "tlsbayes/cloud.hpp"
#include "tlsbayes/prior.hpp"
#include "tlsbayes/rng.hpp"

namespace tlsbayes {

// What to do when no particle encodes a defect (P_1p + P_2p == 0). The
// excited probability is then frequency independent, so any choice is
// equally informative.
enum class FrequencyFallback {
  kUniformWindow,  // uniform draw from the window
  kWindowCentre,   // deterministic midpoint
};

struct PolicyConfig {
  Interval freq_window;  // rad/us
  FrequencyFallback fallback = FrequencyFallback::kUniformWindow;
};

// Window equal to the prior defect-frequency range.
PolicyConfig default_policy(const PriorRanges& prior);

// Draws wq from the mixture
//   (P_1p p(wd1 | D) + P_2p p(wd2 | D)) / (P_1p + P_2p).
// One uniform picks the branch, a second picks a particle by weight among
// those encoding the branch coordinate, and that particle's coordinate is
// returned exactly.
double choose_frequency(const ParticleCloud& cloud, const PolicyConfig& cfg,
                        Rng& rng);

// t = r * E[T1(wq)] with r uniform on (0, 1].
double choose_time(const ParticleCloud& cloud, double wq, Rng& rng);

MeasurementSetting choose_setting(const ParticleCloud& cloud,
                                  const PolicyConfig& cfg, Rng& rng);

}  // namespace tlsbayes
