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

#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "test_support.hpp"
#include "tlsbayes/errors.hpp"
#include "tlsbayes/experiment.hpp"
#include "tlsbayes/physics.hpp"

using namespace tlsbayes;
using namespace tlsbayes::testing;

TEST_CASE("ground truths follow the requested defect count") {
  Rng rng(1);
  for (ModelClass k : kModelClasses) {
    for (int n = 0; n < 500; ++n) {
      const GroundTruth gt = sample_ground_truth(k, default_prior(), rng);
      REQUIRE(gt.n_d == k);
      REQUIRE(stratum_of(gt.x) == k);
      REQUIRE(is_valid(gt.x));
    }
  }
}

TEST_CASE("simulate_measurement edge probabilities") {
  Rng rng(2);
  // t -> 0 without relaxation gives P_e = 1 exactly.
  const GroundTruth gt{no_defect(37.0), ModelClass::kNone};
  const MeasurementRecord all = simulate_measurement(gt, {0.0, 0.0}, 50, 0.0, rng);
  CHECK(all.excited == 50);
  CHECK(all.shots == 50);
  // Far beyond T1 the probability underflows to zero.
  const MeasurementRecord none = simulate_measurement(gt, {0.0, 1e6}, 50, 0.0, rng);
  CHECK(none.excited == 0);
  CHECK_THROWS_AS(simulate_measurement(gt, {0.0, 1.0}, 0, 0.0, rng), ConfigError);
}

TEST_CASE("simulated counts have binomial mean and variance") {
  const GroundTruth gt{one_defect(2.5, 0.0, 0.075, 37.0), ModelClass::kOne};
  const MeasurementSetting s{5.0, 0.4};
  const double p = excited_prob(gt.x, s);
  Rng rng(3);
  constexpr int kReps = 5000;
  constexpr int kShots = 200;
  double sum = 0.0, sum_sq = 0.0;
  for (int n = 0; n < kReps; ++n) {
    const double c = simulate_measurement(gt, s, kShots, 0.0, rng).excited;
    sum += c;
    sum_sq += c * c;
  }
  const double mean = sum / kReps;
  const double var = sum_sq / kReps - mean * mean;
  const double expected_var = kShots * p * (1.0 - p);
  CHECK(std::abs(mean - kShots * p) <= 3.0 * std::sqrt(expected_var / kReps));
  CHECK(var == doctest::Approx(expected_var).epsilon(0.06));
}

TEST_CASE("readout asymmetry shifts the excited fraction") {
  const GroundTruth gt{no_defect(37.0), ModelClass::kNone};
  Rng rng(4);
  // P_e = (1 - 2 gamma) + gamma at t = 0.
  const MeasurementRecord rec = simulate_measurement(gt, {0.0, 0.0}, 100000, 0.1, rng);
  const double p = 0.9;
  CHECK(std::abs(rec.excited / 100000.0 - p) < 3.0 * std::sqrt(p * (1 - p) / 100000.0));
}

TEST_CASE("axes") {
  const auto f = axis_values(LinearAxis{-1.0, 1.0, 5});
  REQUIRE(f.size() == 5);
  CHECK(f[0] == -1.0);
  CHECK(f[2] == 0.0);
  CHECK(f[4] == 1.0);
  const auto t = axis_values(LogAxis{0.01, 100.0, 5});
  REQUIRE(t.size() == 5);
  CHECK(t[0] == 0.01);
  CHECK(t[1] == doctest::Approx(0.1));
  CHECK(t[4] == 100.0);
  CHECK_THROWS_AS(axis_values(LogAxis{0.0, 1.0, 5}), ConfigError);
  CHECK_THROWS_AS(axis_values(LinearAxis{0.0, 1.0, 0}), ConfigError);
}

TEST_CASE("spectrum of a defect-free qubit is flat") {
  const GroundTruth gt{no_defect(37.0), ModelClass::kNone};
  const SpectrumGrid grid = swap_spectrum(gt, LinearAxis{-377.0, 377.0, 241}, LogAxis{});
  CHECK(grid.excited.rows() == 241);
  CHECK(grid.excited.cols() == 60);
  for (Eigen::Index j = 0; j < grid.excited.cols(); ++j) {
    CHECK(grid.excited.col(j).maxCoeff() == grid.excited.col(j).minCoeff());
  }
  CHECK(spectrum_dips(grid).empty());
}

TEST_CASE("spectrum dips sit at the defect frequencies") {
  const LinearAxis freq{mhz_to_angular(-60.0), mhz_to_angular(60.0), 241};
  const double cell = (freq.high - freq.low) / (freq.points - 1);

  const GroundTruth one{one_defect(2.5, mhz_to_angular(20.0), 0.075, 37.0), ModelClass::kOne};
  const SpectrumGrid g1 = swap_spectrum(one, freq, LogAxis{});
  const auto d1 = spectrum_dips(g1);
  REQUIRE(d1.size() == 1);
  CHECK(std::abs(g1.frequencies[static_cast<std::size_t>(d1[0])] - one.x(kWd1)) <= cell);

  const GroundTruth two{two_defects(2.6, 2.3, mhz_to_angular(-31.3), mhz_to_angular(17.9),
                                    0.08, 0.07, 37.0),
                        ModelClass::kTwo};
  const SpectrumGrid g2 = swap_spectrum(two, freq, LogAxis{});
  const auto d2 = spectrum_dips(g2);
  REQUIRE(d2.size() == 2);
  CHECK(std::abs(g2.frequencies[static_cast<std::size_t>(d2[0])] - two.x(kWd1)) <= cell);
  CHECK(std::abs(g2.frequencies[static_cast<std::size_t>(d2[1])] - two.x(kWd2)) <= cell);
}

TEST_CASE("spectrum csv layout") {
  const GroundTruth gt{no_defect(37.0), ModelClass::kNone};
  const SpectrumGrid grid = swap_spectrum(gt, LinearAxis{-1.0, 1.0, 3}, LogAxis{0.5, 2.0, 2});
  std::ostringstream os;
  write_csv(os, grid);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "frequency_rad_per_us,0.5,2");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
  }
  CHECK(rows == 3);
}
