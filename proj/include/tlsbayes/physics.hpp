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
#include <cmath>

#include <Eigen/Dense>

#include "tlsbayes/parameters.hpp"

namespace tlsbayes {

// Relaxation rate induced on the qubit by one incoherent defect,
//   2 g^2 / (1/T2 + T2 * detuning^2).
// Zero coupling yields zero regardless of the coherence time.
template <typename Scalar>
Scalar defect_rate(Scalar g, Scalar t2d, Scalar detuning) {
  if (g == Scalar(0)) return Scalar(0);
  return Scalar(2) * g * g / (Scalar(1) / t2d + t2d * detuning * detuning);
}

// Observable qubit T1 at qubit frequency wq: the intrinsic rate plus the
// rates of every encoded defect.
template <typename Derived>
typename Derived::Scalar relaxation_time(
    const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar wq) {
  using Scalar = typename Derived::Scalar;
  const Scalar rate = Scalar(1) / x(kT1q) +
                      defect_rate<Scalar>(x(kG1), x(kT2d1), wq - x(kWd1)) +
                      defect_rate<Scalar>(x(kG2), x(kT2d2), wq - x(kWd2));
  return Scalar(1) / rate;
}

// Probability of reading out the excited state after waiting t at wq, with
// symmetric readout error gamma: (1 - 2 gamma) exp(-t / T1) + gamma.
template <typename Derived>
typename Derived::Scalar excited_prob(const Eigen::MatrixBase<Derived>& x,
                                      const MeasurementSetting& s,
                                      typename Derived::Scalar gamma = 0) {
  using Scalar = typename Derived::Scalar;
  using std::exp;
  const Scalar t1 = relaxation_time(x, Scalar(s.wq));
  return (Scalar(1) - Scalar(2) * gamma) * exp(-Scalar(s.t) / t1) + gamma;
}

struct DefectRegime {
  bool present = false;
  // 1/T1q < g < 1/T2d; vacuously true for an absent defect.
  bool rate_window_ok = true;
  // g / Gamma at zero detuning, equal to 1 / (2 g T2d).
  double coupling_to_rate = 0.0;
  // g * T2d, the dimensionless incoherence measure.
  double coupling_coherence_product = 0.0;
};

struct RegimeReport {
  std::array<DefectRegime, 2> defects;
  bool all_rate_windows_ok() const {
    return defects[0].rate_window_ok && defects[1].rate_window_ok;
  }
};

// Reports, never rejects.
RegimeReport regime_check(const ParticleVector& x);

}  // namespace tlsbayes
