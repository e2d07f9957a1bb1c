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

// Command-line driver: spectrum, run, ensemble, oracle-compare.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 inference
// failure. Errors are reported on stderr as a single JSON object and, when
// the output directory is writable, in <out>/error.json.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tlsbayes/config.hpp"
#include "tlsbayes/harness.hpp"
#include "tlsbayes/output.hpp"

namespace fs = std::filesystem;
using namespace tlsbayes;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInference = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<int> nd;
  std::optional<int> shots_per_setting;
  std::optional<int> settings;
  std::optional<double> gamma;
  std::optional<std::size_t> particles;
  unsigned threads = 1;
  std::string out = "out";
};

RunConfig resolve_config(const Overrides& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot open config file '" + o.config_path + "'");
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  // Flags are applied on the JSON document so they pass the same checks
  // and show up in the embedded config.
  if (o.seed) j["seed"] = *o.seed;
  if (o.nd) j["true_defects"] = *o.nd;
  if (o.shots_per_setting) j["shots_per_setting"] = *o.shots_per_setting;
  if (o.settings) j["estimates"] = *o.settings + 1;
  if (o.gamma) j["gamma"] = *o.gamma;
  if (o.particles) j["particles"] = *o.particles;
  return run_config_from_json(j);
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw ConfigError("cannot write " + (dir / name).string());
  return out;
}

void report_error(const std::string& kind, const std::string& message,
                  const std::string& out_dir) {
  const nlohmann::json err = {{"error", kind}, {"message", message}};
  std::cerr << err.dump() << '\n';
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::ofstream f(fs::path(out_dir) / "error.json");
  if (f) f << err.dump(2) << '\n';
}

int cmd_spectrum(const Overrides& o) {
  const RunConfig cfg = resolve_config(o);
  const RunSeeds seeds = seeds_for_sample(cfg.seed, 0);
  const GroundTruth truth = draw_truth(cfg, seeds);
  const SpectrumGrid grid =
      swap_spectrum(truth, cfg.spectrum_frequency, cfg.spectrum_time, cfg.gamma);
  auto out = open_output(o.out, "spectrum.csv");
  write_spectrum_csv(out, grid, cfg, truth);
  std::cout << "wrote " << (fs::path(o.out) / "spectrum.csv").string() << '\n';
  return 0;
}

int cmd_run(const Overrides& o) {
  const RunConfig cfg = resolve_config(o);
  const RunTrace trace = run_characterization(cfg);
  auto out = open_output(o.out, "trace.jsonl");
  write_trace_jsonl(out, trace, cfg);
  const TraceEntry& last = trace.entries.back();
  std::cout << "wrote " << (fs::path(o.out) / "trace.jsonl").string()
            << " (true n_d=" << defect_count(trace.truth.n_d)
            << ", P1p=" << last.probabilities.p1_present
            << ", P2p=" << last.probabilities.p2_present << ")\n";
  return 0;
}

int cmd_ensemble(const Overrides& o) {
  const RunConfig cfg = resolve_config(o);
  const std::size_t samples = o.samples.value_or(100);
  const EnsembleSummary summary = run_ensemble(cfg, samples, o.threads);
  {
    auto out = open_output(o.out, "ensemble.csv");
    write_ensemble_csv(out, summary);
  }
  if (cfg.true_defects == ModelClass::kTwo) {
    auto out = open_output(o.out, "fig3.csv");
    write_fig3_csv(out, summary);
  } else {
    auto out = open_output(o.out, "fig4.csv");
    write_fig4_csv(out, summary);
  }
  {
    auto out = open_output(o.out, "fig5.csv");
    write_fig5_csv(out, summary);
  }
  std::cout << "ensemble: " << summary.completed << "/" << summary.samples
            << " runs completed, output in " << o.out << '\n';
  return 0;
}

int cmd_oracle_compare(const Overrides& o) {
  OracleComparisonConfig cfg;
  // The comparison has its own fixed scenario; only run-level knobs apply.
  if (!o.config_path.empty()) {
    const RunConfig rc = resolve_config(o);
    cfg.seed = rc.seed;
    cfg.shrinkage = rc.shrinkage;
    cfg.resample_threshold = rc.resample_threshold;
    cfg.gamma = rc.gamma;
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.samples) cfg.streams = static_cast<int>(*o.samples);
  if (o.settings) cfg.records = *o.settings;
  if (o.shots_per_setting) cfg.shots_per_record = *o.shots_per_setting;
  if (o.gamma) cfg.gamma = *o.gamma;
  if (o.particles) cfg.particles = *o.particles;
  if (cfg.streams < 1 || cfg.records < 1 || cfg.shots_per_record < 1 ||
      cfg.particles < 3 || !(cfg.gamma >= 0.0 && cfg.gamma < 0.5)) {
    throw ConfigError("invalid oracle-compare parameters");
  }
  const auto rows = compare_with_oracle(cfg);
  auto out = open_output(o.out, "oracle_compare.csv");
  write_oracle_report_csv(out, rows, cfg);
  int passed = 0;
  for (const auto& r : rows) passed += r.within_tolerance() ? 1 : 0;
  std::cout << "oracle-compare: " << passed << "/" << rows.size()
            << " streams within tolerance\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive model selection and parameter estimation for a "
               "qubit coupled to incoherent two-level defects"};
  app.require_subcommand(1);
  Overrides o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--nd", o.nd, "true number of defects")
        ->check(CLI::IsMember({0, 1, 2}));
    sub->add_option("--shots-per-setting", o.shots_per_setting,
                    "shots M_r per measurement setting");
    sub->add_option("--settings", o.settings,
                    "number of measurement settings (estimates - 1)");
    sub->add_option("--gamma", o.gamma, "readout error probability");
    sub->add_option("--particles", o.particles, "particle count N_p");
    sub->add_option("--threads", o.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "output directory");
  };

  auto* spectrum = app.add_subcommand("spectrum", "render a swap spectrum");
  auto* run = app.add_subcommand("run", "single adaptive characterization run");
  auto* ensemble = app.add_subcommand("ensemble", "ensemble of runs with medians");
  auto* oracle = app.add_subcommand("oracle-compare",
                                    "particle filter against the grid oracle");
  for (auto* sub : {spectrum, run, ensemble, oracle}) add_common(sub);
  ensemble->add_option("--samples", o.samples, "number of simulated samples");
  oracle->add_option("--samples", o.samples, "number of data streams");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what(), o.out);
    return kExitConfig;
  }

  try {
    if (*spectrum) return cmd_spectrum(o);
    if (*run) return cmd_run(o);
    if (*ensemble) return cmd_ensemble(o);
    if (*oracle) return cmd_oracle_compare(o);
  } catch (const ConfigError& e) {
    report_error("config", e.what(), o.out);
    return kExitConfig;
  } catch (const EncodingError& e) {
    report_error("config", e.what(), o.out);
    return kExitConfig;
  } catch (const DegenerateUpdateError& e) {
    report_error("inference", e.what(), o.out);
    return kExitInference;
  } catch (const InvalidStateError& e) {
    report_error("inference", e.what(), o.out);
    return kExitInference;
  } catch (const std::exception& e) {
    report_error("internal", e.what(), o.out);
    return 1;
  }
  return 0;
}
