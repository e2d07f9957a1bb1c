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
#include <limits>

#include "doctest.h"
#include "test_support.hpp"
#include "tlsbayes/harness.hpp"

using namespace tlsbayes;
using namespace tlsbayes::testing;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.particles = 600;
  cfg.estimates = 21;
  cfg.shots_per_setting = 20;
  return cfg;
}

}  // namespace

TEST_CASE("a single estimate is the prior") {
  RunConfig cfg = small_config();
  cfg.estimates = 1;
  const RunTrace trace = run_characterization(cfg);
  REQUIRE(trace.entries.size() == 1);
  CHECK_FALSE(trace.entries[0].record.has_value());
  CHECK(cfg.total_shots() == 0);
  CHECK(trace.entries[0].probabilities.p1_present == doctest::Approx(2.0 / 3.0));
  CHECK(trace.resample_count == 0);
}

TEST_CASE("shot accounting") {
  RunConfig cfg = small_config();
  const RunTrace trace = run_characterization(cfg);
  REQUIRE(trace.entries.size() == 21);
  long long shots = 0;
  for (std::size_t n = 1; n < trace.entries.size(); ++n) {
    REQUIRE(trace.entries[n].record.has_value());
    CHECK(trace.entries[n].record->shots == 20);
    shots += trace.entries[n].record->shots;
  }
  CHECK(shots == cfg.total_shots());
  CHECK(cfg.total_shots() == 400);
}

TEST_CASE("resample modes") {
  RunConfig cfg = small_config();
  cfg.resample_mode = ResampleMode::kNever;
  CHECK(run_characterization(cfg).resample_count == 0);
  cfg.resample_mode = ResampleMode::kAlways;
  CHECK(run_characterization(cfg).resample_count == 20);
}

TEST_CASE("runs are reproducible and seed dependent") {
  RunConfig cfg = small_config();
  const RunTrace a = run_characterization(cfg);
  const RunTrace b = run_characterization(cfg);
  CHECK(a.truth.x == b.truth.x);
  for (std::size_t n = 0; n < a.entries.size(); ++n) {
    REQUIRE(a.entries[n].estimate == b.entries[n].estimate);
  }
  cfg.seed = 2;
  const RunTrace c = run_characterization(cfg);
  CHECK(c.truth.x != a.truth.x);
}

TEST_CASE("seed streams are distinct") {
  const RunSeeds s0 = seeds_for_sample(1, 0);
  const RunSeeds s1 = seeds_for_sample(1, 1);
  CHECK(s0.truth != s0.measurement);
  CHECK(s0.measurement != s0.inference);
  CHECK(s0.truth != s1.truth);
}

TEST_CASE("squared_error marks absent parameters") {
  RunConfig cfg = small_config();
  cfg.true_defects = ModelClass::kOne;
  const RunTrace trace = run_characterization(cfg);
  const ErrorSeries err = squared_error(trace, trace.truth, cfg.prior, cfg.normalization);
  for (Eigen::Index n = 0; n < err.model_averaged.rows(); ++n) {
    CHECK(std::isnan(err.model_averaged(n, kG2)));
    CHECK(std::isnan(err.model_averaged(n, kWd2)));
    CHECK(std::isnan(err.model_averaged(n, kT2d2)));
    CHECK(std::isfinite(err.model_averaged(n, kWd1)));
    CHECK(std::isfinite(err.model_averaged(n, kT1q)));
  }
}

TEST_CASE("squared_error on a hand-built trace") {
  const PriorRanges prior = default_prior();
  GroundTruth truth{no_defect(37.0), ModelClass::kNone};
  RunTrace trace;
  trace.truth = truth;
  TraceEntry e;
  e.estimate = no_defect(39.0);
  e.conditional = {no_defect(38.0), ParticleVector::Zero(), ParticleVector::Zero()};
  e.stratum_weight = {0.5, 0.5, 0.0};
  trace.entries.push_back(e);
  const ErrorSeries v = squared_error(trace, truth, prior, ErrorNormalization::kPriorVariance);
  CHECK(v.model_averaged(0, kT1q) == doctest::Approx(4.0 * 12.0 / 196.0));
  CHECK(v.conditional(0, kT1q) == doctest::Approx(12.0 / 196.0));
  const ErrorSeries r = squared_error(trace, truth, prior, ErrorNormalization::kPriorRangeSquared);
  CHECK(r.model_averaged(0, kT1q) == doctest::Approx(4.0 / 196.0));
  const ErrorSeries raw = squared_error(trace, truth, prior, ErrorNormalization::kNone);
  CHECK(raw.model_averaged(0, kT1q) == 4.0);
  CHECK(std::isnan(raw.model_averaged(0, kWd1)));
}

TEST_CASE("lower_median") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(lower_median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(lower_median({4.0, 1.0, 3.0, 2.0}) == 2.0);
  CHECK(lower_median({nan, 5.0, nan}) == 5.0);
  CHECK(std::isnan(lower_median({nan})));
  CHECK(std::isnan(lower_median({})));
}

TEST_CASE("ensemble of one matches a single run") {
  RunConfig cfg = small_config();
  const EnsembleSummary s = run_ensemble(cfg, 1);
  const RunTrace trace = run_characterization(cfg);
  const ErrorSeries err = squared_error(trace, trace.truth, cfg.prior, cfg.normalization);
  REQUIRE(s.completed == 1);
  for (Eigen::Index n = 0; n < err.model_averaged.rows(); ++n) {
    for (Eigen::Index p = 0; p < kNumParams; ++p) {
      const double x = err.model_averaged(n, p);
      if (std::isnan(x)) {
        CHECK(std::isnan(s.median_error(n, p)));
        CHECK(s.error_samples(n, p) == 0);
      } else {
        CHECK(s.median_error(n, p) == x);
      }
    }
    CHECK(s.median_probability(n, 0) == trace.entries[static_cast<std::size_t>(n)].probabilities.p1_present);
  }
}

TEST_CASE("ensemble results do not depend on the thread count") {
  RunConfig cfg = small_config();
  cfg.true_defects = ModelClass::kOne;
  const EnsembleSummary one = run_ensemble(cfg, 9, 1);
  const EnsembleSummary four = run_ensemble(cfg, 9, 4);
  CHECK(one.completed == 9);
  const auto same = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double x = a.data()[i], y = b.data()[i];
      if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
    }
    return true;
  };
  CHECK(same(one.median_error, four.median_error));
  CHECK(same(one.median_conditional_error, four.median_conditional_error));
  CHECK(same(one.median_probability, four.median_probability));
}

TEST_CASE("configuration validation") {
  RunConfig cfg = small_config();
  CHECK_NOTHROW(validate(cfg));
  cfg.shots_per_setting = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = small_config();
  cfg.estimates = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = small_config();
  cfg.gamma = 0.5;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = small_config();
  cfg.shrinkage = 1.01;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = small_config();
  CHECK_THROWS_AS(run_ensemble(cfg, 0), ConfigError);
}

TEST_CASE("oracle comparison rows are well formed") {
  OracleComparisonConfig cfg;
  cfg.streams = 2;
  cfg.records = 5;
  cfg.particles = 2000;
  const auto rows = compare_with_oracle(cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.oracle_sd_g1 > 0.0);
    CHECK(row.oracle_sd_wd1 > 0.0);
    CHECK(row.oracle_p1_present >= 0.0);
    CHECK(row.oracle_p1_present <= 1.0);
    CHECK(row.truth(kT2d2) == 0.0);
  }
}
