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

#include <cstdint>
#include <random>

namespace tlsbayes {

using Rng = std::mt19937_64;

// Stream identifiers for seed derivation. Each run consumes three
// independent streams so that a ground truth can be replayed against a
// different policy without perturbing the outcomes it generates.
enum class Stream : std::uint64_t {
  kTruth = 1,
  kMeasurement = 2,
  kInference = 3,
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based seed for (master, sample index, stream). Independent of
// thread scheduling: sample i always receives the same three seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t sample,
                                    Stream stream) {
  return mix64(mix64(master ^ mix64(sample)) +
               static_cast<std::uint64_t>(stream));
}

// Uniform on [0, 1) from the top 53 bits of one engine output.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1].
inline double uniform_open_closed(Rng& rng) { return 1.0 - uniform01(rng); }

inline double uniform_in(Rng& rng, double low, double high) {
  return low + (high - low) * uniform01(rng);
}

}  // namespace tlsbayes
