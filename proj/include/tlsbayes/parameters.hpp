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
#include <numbers>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace tlsbayes {

// Layout of the seven-dimensional parameter vector. Frequencies are angular
// (rad/us) relative to the reference frequency, times are in microseconds.
// Absent defects are encoded by zeroing all of their coordinates.
enum Param : Eigen::Index {
  kG1 = 0,
  kG2 = 1,
  kWd1 = 2,
  kWd2 = 3,
  kT2d1 = 4,
  kT2d2 = 5,
  kT1q = 6,
};

inline constexpr Eigen::Index kNumParams = 7;

inline constexpr std::array<std::string_view, kNumParams> kParamNames = {
    "g1", "g2", "wd1", "wd2", "t2d1", "t2d2", "t1q"};

template <typename Scalar>
using ParticleVectorT = Eigen::Matrix<Scalar, kNumParams, 1>;
using ParticleVector = ParticleVectorT<double>;

// Number of defects encoded by a particle.
enum class ModelClass : int { kNone = 0, kOne = 1, kTwo = 2 };

inline constexpr std::array<ModelClass, 3> kModelClasses = {
    ModelClass::kNone, ModelClass::kOne, ModelClass::kTwo};

constexpr int defect_count(ModelClass k) { return static_cast<int>(k); }
constexpr std::size_t index_of(ModelClass k) {
  return static_cast<std::size_t>(k);
}
ModelClass model_class_from_count(int n_d);

// Coordinates carried by a stratum, in increasing Param order.
std::span<const Eigen::Index> encoded_coordinates(ModelClass k);

// Coordinate indices of defect j (0 or 1): coupling, frequency, coherence.
constexpr std::array<Eigen::Index, 3> defect_coordinates(int j) {
  return j == 0 ? std::array<Eigen::Index, 3>{kG1, kWd1, kT2d1}
                : std::array<Eigen::Index, 3>{kG2, kWd2, kT2d2};
}

// Classifies the zero pattern; throws EncodingError on a mixed pattern.
ModelClass stratum_of(const ParticleVector& x);

// True when x satisfies zero encoding and positivity, and g1 >= g2 unless
// `require_order` is false.
bool is_valid(const ParticleVector& x, bool require_order = true);

// Swaps the defect triples so that g1 >= g2. No-op unless both present.
template <typename Derived>
void canonicalize(Eigen::MatrixBase<Derived>& x) {
  if (x(kG2) != 0 && x(kG2) > x(kG1)) {
    std::swap(x(kG1), x(kG2));
    std::swap(x(kWd1), x(kWd2));
    std::swap(x(kT2d1), x(kT2d2));
  }
}

struct MeasurementSetting {
  double wq = 0.0;  // qubit angular frequency offset, rad/us
  double t = 0.0;   // waiting time, us
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double mhz_to_angular(double f_mhz) { return kTwoPi * f_mhz; }
constexpr double angular_to_mhz(double w) { return w / kTwoPi; }

}  // namespace tlsbayes
