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

#include "tlsbayes/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace tlsbayes {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const char* where,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) {
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
    }
  }
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

Interval get_interval(const json& j, const char* key, double scale) {
  const auto v = get_as<std::vector<double>>(j, key);
  if (v.size() != 2) {
    throw ConfigError(std::string("'") + key + "' must be [low, high]");
  }
  return Interval{v[0] * scale, v[1] * scale};
}

json interval_mhz(const Interval& r) {
  return json::array({angular_to_mhz_exact(r.low), angular_to_mhz_exact(r.high)});
}

json interval_plain(const Interval& r) { return json::array({r.low, r.high}); }

ResampleMode parse_resample_mode(const std::string& s) {
  if (s == "ess") return ResampleMode::kEssThreshold;
  if (s == "always") return ResampleMode::kAlways;
  if (s == "never") return ResampleMode::kNever;
  throw ConfigError("resample mode must be ess, always or never");
}

ErrorNormalization parse_normalization(const std::string& s) {
  if (s == "prior_variance") return ErrorNormalization::kPriorVariance;
  if (s == "prior_range_squared") return ErrorNormalization::kPriorRangeSquared;
  if (s == "none") return ErrorNormalization::kNone;
  throw ConfigError(
      "error_normalization must be prior_variance, prior_range_squared or none");
}

FrequencyFallback parse_fallback(const std::string& s) {
  if (s == "uniform") return FrequencyFallback::kUniformWindow;
  if (s == "centre") return FrequencyFallback::kWindowCentre;
  throw ConfigError("policy fallback must be uniform or centre");
}

}  // namespace

const char* to_string(ResampleMode mode) {
  switch (mode) {
    case ResampleMode::kEssThreshold:
      return "ess";
    case ResampleMode::kAlways:
      return "always";
    case ResampleMode::kNever:
      return "never";
  }
  return "ess";
}

const char* to_string(ErrorNormalization normalization) {
  switch (normalization) {
    case ErrorNormalization::kPriorVariance:
      return "prior_variance";
    case ErrorNormalization::kPriorRangeSquared:
      return "prior_range_squared";
    case ErrorNormalization::kNone:
      return "none";
  }
  return "prior_variance";
}

const char* to_string(FrequencyFallback fallback) {
  switch (fallback) {
    case FrequencyFallback::kUniformWindow:
      return "uniform";
    case FrequencyFallback::kWindowCentre:
      return "centre";
  }
  return "uniform";
}

double angular_to_mhz_exact(double w) {
  double f = angular_to_mhz(w);
  if (mhz_to_angular(f) == w) return f;
  double up = f, down = f;
  for (int i = 0; i < 8; ++i) {
    up = std::nextafter(up, INFINITY);
    if (mhz_to_angular(up) == w) return up;
    down = std::nextafter(down, -INFINITY);
    if (mhz_to_angular(down) == w) return down;
  }
  return f;
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  reject_unknown(j, "configuration",
                 {"schema_version", "particles", "shrinkage",
                  "shots_per_setting", "estimates", "gamma", "resample",
                  "order_defects", "restrict_to_prior", "seed", "true_defects",
                  "error_normalization", "prior", "policy", "spectrum"});
  RunConfig cfg;
  if (j.contains("schema_version") &&
      get_as<int>(j, "schema_version") != kSchemaVersion) {
    throw ConfigError("unsupported schema_version");
  }
  if (j.contains("particles")) {
    const auto n = get_as<long long>(j, "particles");
    if (n < 3) throw ConfigError("particles must be at least 3");
    cfg.particles = static_cast<std::size_t>(n);
  }
  if (j.contains("shrinkage")) cfg.shrinkage = get_as<double>(j, "shrinkage");
  if (j.contains("shots_per_setting")) {
    cfg.shots_per_setting = get_as<int>(j, "shots_per_setting");
  }
  if (j.contains("estimates")) cfg.estimates = get_as<int>(j, "estimates");
  if (j.contains("gamma")) cfg.gamma = get_as<double>(j, "gamma");
  if (j.contains("resample")) {
    const json& r = j.at("resample");
    reject_unknown(r, "resample", {"mode", "threshold"});
    if (r.contains("mode")) {
      cfg.resample_mode = parse_resample_mode(get_as<std::string>(r, "mode"));
    }
    if (r.contains("threshold")) {
      cfg.resample_threshold = get_as<double>(r, "threshold");
    }
  }
  if (j.contains("order_defects")) {
    cfg.order_defects = get_as<bool>(j, "order_defects");
  }
  if (j.contains("restrict_to_prior")) {
    cfg.restrict_to_prior = get_as<bool>(j, "restrict_to_prior");
  }
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("true_defects")) {
    cfg.true_defects = model_class_from_count(get_as<int>(j, "true_defects"));
  }
  if (j.contains("error_normalization")) {
    cfg.normalization =
        parse_normalization(get_as<std::string>(j, "error_normalization"));
  }
  if (j.contains("prior")) {
    const json& p = j.at("prior");
    reject_unknown(p, "prior",
                   {"coupling_mhz", "defect_frequency_mhz",
                    "defect_coherence_us", "qubit_t1_us", "model_weights"});
    if (p.contains("coupling_mhz")) {
      cfg.prior.coupling = get_interval(p, "coupling_mhz", kTwoPi);
    }
    if (p.contains("defect_frequency_mhz")) {
      cfg.prior.defect_frequency =
          get_interval(p, "defect_frequency_mhz", kTwoPi);
    }
    if (p.contains("defect_coherence_us")) {
      cfg.prior.defect_coherence = get_interval(p, "defect_coherence_us", 1.0);
    }
    if (p.contains("qubit_t1_us")) {
      cfg.prior.qubit_t1 = get_interval(p, "qubit_t1_us", 1.0);
    }
    if (p.contains("model_weights")) {
      const auto w = get_as<std::vector<double>>(p, "model_weights");
      if (w.size() != 3) throw ConfigError("model_weights needs 3 entries");
      cfg.prior.model_weights = {w[0], w[1], w[2]};
    }
  }
  cfg.policy = default_policy(cfg.prior);
  if (j.contains("policy")) {
    const json& p = j.at("policy");
    reject_unknown(p, "policy", {"frequency_window_mhz", "fallback"});
    if (p.contains("frequency_window_mhz")) {
      cfg.policy.freq_window = get_interval(p, "frequency_window_mhz", kTwoPi);
    }
    if (p.contains("fallback")) {
      cfg.policy.fallback = parse_fallback(get_as<std::string>(p, "fallback"));
    }
  }
  cfg.spectrum_frequency.low = cfg.prior.defect_frequency.low;
  cfg.spectrum_frequency.high = cfg.prior.defect_frequency.high;
  if (j.contains("spectrum")) {
    const json& s = j.at("spectrum");
    reject_unknown(s, "spectrum",
                   {"frequency_mhz", "frequency_points", "time_us",
                    "time_points"});
    if (s.contains("frequency_mhz")) {
      const Interval f = get_interval(s, "frequency_mhz", kTwoPi);
      cfg.spectrum_frequency.low = f.low;
      cfg.spectrum_frequency.high = f.high;
    }
    if (s.contains("frequency_points")) {
      cfg.spectrum_frequency.points = get_as<int>(s, "frequency_points");
    }
    if (s.contains("time_us")) {
      const Interval t = get_interval(s, "time_us", 1.0);
      cfg.spectrum_time.low = t.low;
      cfg.spectrum_time.high = t.high;
    }
    if (s.contains("time_points")) {
      cfg.spectrum_time.points = get_as<int>(s, "time_points");
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " +
                      e.what());
  }
  return run_config_from_json(j);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["particles"] = cfg.particles;
  j["shrinkage"] = cfg.shrinkage;
  j["shots_per_setting"] = cfg.shots_per_setting;
  j["estimates"] = cfg.estimates;
  j["gamma"] = cfg.gamma;
  j["resample"] = {{"mode", to_string(cfg.resample_mode)},
                   {"threshold", cfg.resample_threshold}};
  j["order_defects"] = cfg.order_defects;
  j["restrict_to_prior"] = cfg.restrict_to_prior;
  j["seed"] = cfg.seed;
  j["true_defects"] = defect_count(cfg.true_defects);
  j["error_normalization"] = to_string(cfg.normalization);
  j["prior"] = {
      {"coupling_mhz", interval_mhz(cfg.prior.coupling)},
      {"defect_frequency_mhz", interval_mhz(cfg.prior.defect_frequency)},
      {"defect_coherence_us", interval_plain(cfg.prior.defect_coherence)},
      {"qubit_t1_us", interval_plain(cfg.prior.qubit_t1)},
      {"model_weights", cfg.prior.model_weights}};
  j["policy"] = {{"frequency_window_mhz", interval_mhz(cfg.policy.freq_window)},
                 {"fallback", to_string(cfg.policy.fallback)}};
  j["spectrum"] = {
      {"frequency_mhz",
       interval_mhz({cfg.spectrum_frequency.low, cfg.spectrum_frequency.high})},
      {"frequency_points", cfg.spectrum_frequency.points},
      {"time_us",
       json::array({cfg.spectrum_time.low, cfg.spectrum_time.high})},
      {"time_points", cfg.spectrum_time.points}};
  return j;
}

}  // namespace tlsbayes
