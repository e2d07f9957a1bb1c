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

#include "tlsbayes/parameters.hpp"

#include <string>

#include "tlsbayes/errors.hpp"

namespace tlsbayes {
namespace {

constexpr std::array<Eigen::Index, 1> kNoneCoords = {kT1q};
constexpr std::array<Eigen::Index, 4> kOneCoords = {kG1, kWd1, kT2d1, kT1q};
constexpr std::array<Eigen::Index, 7> kTwoCoords = {kG1,   kG2,   kWd1, kWd2,
                                                   kT2d1, kT2d2, kT1q};

}  // namespace

ModelClass model_class_from_count(int n_d) {
  if (n_d < 0 || n_d > 2) {
    throw ConfigError("defect count must be 0, 1 or 2, got " +
                      std::to_string(n_d));
  }
  return static_cast<ModelClass>(n_d);
}

std::span<const Eigen::Index> encoded_coordinates(ModelClass k) {
  switch (k) {
    case ModelClass::kNone:
      return kNoneCoords;
    case ModelClass::kOne:
      return kOneCoords;
    case ModelClass::kTwo:
      return kTwoCoords;
  }
  return {};
}

ModelClass stratum_of(const ParticleVector& x) {
  const bool g1 = x(kG1) != 0.0;
  const bool g2 = x(kG2) != 0.0;
  if (g1 && g2) return ModelClass::kTwo;
  if (g1 && x(kWd2) == 0.0 && x(kT2d2) == 0.0) return ModelClass::kOne;
  if (!g1 && !g2 && x(kWd1) == 0.0 && x(kWd2) == 0.0 && x(kT2d1) == 0.0 &&
      x(kT2d2) == 0.0) {
    return ModelClass::kNone;
  }
  throw EncodingError("parameter vector has a mixed zero pattern");
}

bool is_valid(const ParticleVector& x, bool require_order) {
  if (!x.allFinite()) return false;
  ModelClass k;
  try {
    k = stratum_of(x);
  } catch (const EncodingError&) {
    return false;
  }
  if (!(x(kT1q) > 0.0)) return false;
  if (k != ModelClass::kNone && !(x(kT2d1) > 0.0)) return false;
  if (k == ModelClass::kTwo && (!(x(kT2d2) > 0.0) || (require_order && x(kG1) < x(kG2)))) {
    return false;
  }
  return true;
}

}  // namespace tlsbayes
