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

#include <random>

#include "doctest.h"
#include "tlsbayes/config.hpp"
#include "tlsbayes/errors.hpp"

using namespace tlsbayes;
using nlohmann::json;

TEST_CASE("empty object gives the defaults") {
  const RunConfig cfg = run_config_from_json(json::object());
  const RunConfig def;
  CHECK(cfg.particles == def.particles);
  CHECK(cfg.shrinkage == def.shrinkage);
  CHECK(cfg.estimates == def.estimates);
  CHECK(cfg.prior.coupling.low == def.prior.coupling.low);
  CHECK(cfg.policy.freq_window.high == def.prior.defect_frequency.high);
}

TEST_CASE("human units are converted") {
  const RunConfig cfg = run_config_from_json(json::parse(R"({
    "particles": 1000,
    "prior": {"coupling_mhz": [0.3, 0.5], "defect_frequency_mhz": [-10, 10],
              "qubit_t1_us": [20, 25]},
    "resample": {"mode": "always"},
    "true_defects": 1,
    "policy": {"fallback": "centre"}
  })"));
  CHECK(cfg.particles == 1000);
  CHECK(cfg.prior.coupling.low == kTwoPi * 0.3);
  CHECK(cfg.prior.defect_frequency.high == kTwoPi * 10.0);
  CHECK(cfg.prior.qubit_t1.low == 20.0);
  CHECK(cfg.resample_mode == ResampleMode::kAlways);
  CHECK(cfg.true_defects == ModelClass::kOne);
  CHECK(cfg.policy.fallback == FrequencyFallback::kWindowCentre);
  // Windows follow the prior unless set.
  CHECK(cfg.policy.freq_window.high == kTwoPi * 10.0);
  CHECK(cfg.spectrum_frequency.low == -kTwoPi * 10.0);
}

TEST_CASE("bad configurations are rejected") {
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"particle": 10})")), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"prior": {"t1": [1, 2]}})")),
                  ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"particles": "many"})")),
                  ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"particles": 2})")), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"true_defects": 3})")), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"resample": {"mode": "often"}})")),
                  ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"schema_version": 9})")),
                  ConfigError);
  CHECK_THROWS_AS(run_config_from_json(json::parse("[1, 2]")), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("serialization round trip is bit exact") {
  RunConfig cfg;
  cfg.particles = 1234;
  cfg.shrinkage = 0.97;
  cfg.gamma = 0.013;
  cfg.seed = 0xfeedbeefcafeULL;
  cfg.prior.coupling = {mhz_to_angular(0.3371), mhz_to_angular(0.4609)};
  cfg.prior.defect_frequency = {mhz_to_angular(-55.5), mhz_to_angular(61.25)};
  cfg.prior.model_weights = {0.1, 0.3, 0.6};
  cfg.policy = default_policy(cfg.prior);
  cfg.spectrum_frequency.low = cfg.prior.defect_frequency.low;
  cfg.spectrum_frequency.high = cfg.prior.defect_frequency.high;
  cfg.normalization = ErrorNormalization::kPriorRangeSquared;
  const json j = to_json(cfg);
  const RunConfig back = run_config_from_json(json::parse(j.dump()));
  CHECK(back.particles == cfg.particles);
  CHECK(back.shrinkage == cfg.shrinkage);
  CHECK(back.gamma == cfg.gamma);
  CHECK(back.seed == cfg.seed);
  CHECK(back.prior.coupling.low == cfg.prior.coupling.low);
  CHECK(back.prior.coupling.high == cfg.prior.coupling.high);
  CHECK(back.prior.defect_frequency.low == cfg.prior.defect_frequency.low);
  CHECK(back.prior.defect_frequency.high == cfg.prior.defect_frequency.high);
  CHECK(back.prior.model_weights == cfg.prior.model_weights);
  CHECK(back.policy.freq_window.low == cfg.policy.freq_window.low);
  CHECK(back.normalization == cfg.normalization);
  CHECK(to_json(back) == j);
  CHECK(back.restrict_to_prior);
  CHECK_FALSE(run_config_from_json(json::parse(R"({"restrict_to_prior": false})")).restrict_to_prior);
}

TEST_CASE("angular_to_mhz_exact inverts converted values") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-80.0, 80.0);
  for (int n = 0; n < 10000; ++n) {
    const double w = mhz_to_angular(u(rng));
    REQUIRE(mhz_to_angular(angular_to_mhz_exact(w)) == w);
  }
}
