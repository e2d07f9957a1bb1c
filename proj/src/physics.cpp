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

#include "tlsbayes/physics.hpp"

namespace tlsbayes {

RegimeReport regime_check(const ParticleVector& x) {
  RegimeReport report;
  for (int j = 0; j < 2; ++j) {
    const auto [gi, wi, ti] = defect_coordinates(j);
    (void)wi;
    const double g = x(gi);
    DefectRegime& d = report.defects[static_cast<std::size_t>(j)];
    if (g == 0.0) continue;
    const double t2d = x(ti);
    d.present = true;
    d.rate_window_ok = 1.0 / x(kT1q) < g && g < 1.0 / t2d;
    d.coupling_to_rate = g / defect_rate(g, t2d, 0.0);
    d.coupling_coherence_product = g * t2d;
  }
  return report;
}

}  // namespace tlsbayes
