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

#include "tlsbayes/output.hpp"

#include <cmath>
#include <ostream>

#include "tlsbayes/config.hpp"
#include "tlsbayes/physics.hpp"

namespace tlsbayes {
namespace {

using nlohmann::json;

// Round-trip precision; absent values as NaN.
class CsvNumber {
 public:
  explicit CsvNumber(double v) : v_(v) {}
  friend std::ostream& operator<<(std::ostream& os, const CsvNumber& n) {
    if (std::isnan(n.v_)) return os << "NaN";
    const auto old = os.precision(17);
    os << n.v_;
    os.precision(old);
    return os;
  }

 private:
  double v_;
};

void write_metadata_line(std::ostream& os, const json& meta) {
  os << "# " << meta.dump() << '\n';
}

json to_json(const ModelProbabilities& p) {
  return {{"P1p", p.p1_present},
          {"P2p", p.p2_present},
          {"P1a", p.p1_absent},
          {"P2a", p.p2_absent}};
}

json summary_json(const StratumSummary& s, ModelClass k) {
  json coords = json::array();
  for (Eigen::Index c : encoded_coordinates(k)) {
    coords.push_back(kParamNames[static_cast<std::size_t>(c)]);
  }
  json cov = json::array();
  for (Eigen::Index r = 0; r < s.covariance.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < s.covariance.cols(); ++c) {
      row.push_back(s.covariance(r, c));
    }
    cov.push_back(row);
  }
  return {{"defects", defect_count(k)},
          {"weight", s.weight},
          {"count", s.count},
          {"empty", s.empty},
          {"degenerate", s.degenerate},
          {"coordinates", coords},
          {"mean", std::vector<double>(s.mean.data(),
                                       s.mean.data() + s.mean.size())},
          {"covariance", cov}};
}

void write_wide_errors(std::ostream& os, const EnsembleSummary& summary,
                       std::initializer_list<Param> params) {
  write_metadata_line(os, output_metadata("figure_errors", summary.config));
  os << "n_est,shots";
  for (Param p : params) os << ',' << kParamNames[static_cast<std::size_t>(p)];
  os << ",samples\n";
  const long long m_r = summary.config.shots_per_setting;
  for (Eigen::Index n = 0; n < summary.median_error.rows(); ++n) {
    os << n + 1 << ',' << m_r * n;
    for (Param p : params) os << ',' << CsvNumber(summary.median_error(n, p));
    os << ',' << summary.completed << '\n';
  }
}

}  // namespace

json output_metadata(const std::string& kind, const RunConfig& cfg) {
  return {{"schema_version", kSchemaVersion},
          {"kind", kind},
          {"seed", cfg.seed},
          {"config", to_json(cfg)}};
}

json to_json(const ParticleVector& x) {
  json j;
  for (Eigen::Index p = 0; p < kNumParams; ++p) {
    j[std::string(kParamNames[static_cast<std::size_t>(p)])] = x(p);
  }
  return j;
}

json to_json(const GroundTruth& gt) {
  const RegimeReport regime = regime_check(gt.x);
  json defects = json::array();
  for (const DefectRegime& d : regime.defects) {
    if (!d.present) continue;
    defects.push_back({{"rate_window_ok", d.rate_window_ok},
                       {"coupling_to_rate", d.coupling_to_rate},
                       {"coupling_coherence_product",
                        d.coupling_coherence_product}});
  }
  return {{"n_d", defect_count(gt.n_d)},
          {"x", to_json(gt.x)},
          {"regime", defects}};
}

void write_spectrum_csv(std::ostream& os, const SpectrumGrid& grid,
                        const RunConfig& cfg, const GroundTruth& gt) {
  json meta = output_metadata("spectrum", cfg);
  meta["truth"] = to_json(gt);
  write_metadata_line(os, meta);
  write_csv(os, grid);
}

void write_trace_jsonl(std::ostream& os, const RunTrace& trace,
                       const RunConfig& cfg) {
  json header = output_metadata("run_trace", cfg);
  header["truth"] = to_json(trace.truth);
  os << header.dump() << '\n';
  for (std::size_t n = 0; n < trace.entries.size(); ++n) {
    const TraceEntry& e = trace.entries[n];
    json line;
    line["index"] = n;
    line["n_est"] = n + 1;
    line["shots"] = static_cast<long long>(cfg.shots_per_setting) *
                    static_cast<long long>(n);
    if (e.record) {
      line["setting"] = {{"wq_rad_per_us", e.record->setting.wq},
                         {"wq_mhz", angular_to_mhz(e.record->setting.wq)},
                         {"t_us", e.record->setting.t}};
      line["excited"] = e.record->excited;
      line["shots_at_setting"] = e.record->shots;
    } else {
      line["setting"] = nullptr;
    }
    line["estimate"] = to_json(e.estimate);
    line["conditional"] = {to_json(e.conditional[0]), to_json(e.conditional[1]),
                           to_json(e.conditional[2])};
    line["stratum_weights"] = e.stratum_weight;
    line["probabilities"] = to_json(e.probabilities);
    line["ess"] = e.ess;
    line["resampled"] = e.resampled;
    os << line.dump() << '\n';
  }
  json final_line;
  final_line["kind"] = "final";
  final_line["resample_count"] = trace.resample_count;
  json strata = json::array();
  for (ModelClass k : kModelClasses) {
    strata.push_back(summary_json(trace.final_moments[k], k));
  }
  final_line["strata"] = strata;
  os << final_line.dump() << '\n';
}

void write_ensemble_csv(std::ostream& os, const EnsembleSummary& summary) {
  json meta = output_metadata("ensemble_summary", summary.config);
  meta["samples"] = summary.samples;
  meta["completed"] = summary.completed;
  json failures = json::array();
  for (const FailureInfo& f : summary.failures) {
    failures.push_back(
        {{"sample", f.sample}, {"step", f.step}, {"message", f.message}});
  }
  meta["failures"] = failures;
  write_metadata_line(os, meta);
  os << "n_est,shots,quantity,median,samples\n";
  const long long m_r = summary.config.shots_per_setting;
  for (Eigen::Index n = 0; n < summary.median_error.rows(); ++n) {
    const long long shots = m_r * n;
    for (Eigen::Index p = 0; p < kNumParams; ++p) {
      const int count = summary.error_samples(n, p);
      if (count == 0) continue;
      const auto name = kParamNames[static_cast<std::size_t>(p)];
      os << n + 1 << ',' << shots << ",err_" << name << ','
         << CsvNumber(summary.median_error(n, p)) << ',' << count << '\n';
      os << n + 1 << ',' << shots << ",cond_err_" << name << ','
         << CsvNumber(summary.median_conditional_error(n, p)) << ',' << count
         << '\n';
    }
    for (Eigen::Index q = 0; q < 4; ++q) {
      os << n + 1 << ',' << shots << ','
         << kProbabilityNames[static_cast<std::size_t>(q)] << ','
         << CsvNumber(summary.median_probability(n, q)) << ','
         << summary.completed << '\n';
    }
  }
}

void write_fig3_csv(std::ostream& os, const EnsembleSummary& summary) {
  write_wide_errors(os, summary, {kG1, kG2, kWd1, kWd2, kT2d1, kT2d2});
}

void write_fig4_csv(std::ostream& os, const EnsembleSummary& summary) {
  write_wide_errors(os, summary, {kG1, kWd1, kT2d1, kT1q});
}

void write_fig5_csv(std::ostream& os, const EnsembleSummary& summary) {
  write_metadata_line(os,
                      output_metadata("figure_probabilities", summary.config));
  os << "shots,n_d,P1p,P2p,P1a,P2a,samples\n";
  const long long m_r = summary.config.shots_per_setting;
  for (Eigen::Index n = 0; n < summary.median_probability.rows(); ++n) {
    os << m_r * n << ',' << defect_count(summary.config.true_defects);
    for (Eigen::Index q = 0; q < 4; ++q) {
      os << ',' << CsvNumber(summary.median_probability(n, q));
    }
    os << ',' << summary.completed << '\n';
  }
}

void write_oracle_report_csv(std::ostream& os,
                             const std::vector<OracleComparisonRow>& rows,
                             const OracleComparisonConfig& cfg) {
  json meta = {{"schema_version", kSchemaVersion},
               {"kind", "oracle_compare"},
               {"seed", cfg.seed},
               {"config",
                {{"streams", cfg.streams},
                 {"records", cfg.records},
                 {"shots_per_record", cfg.shots_per_record},
                 {"particles", cfg.particles},
                 {"shrinkage", cfg.shrinkage},
                 {"resample_threshold", cfg.resample_threshold},
                 {"gamma", cfg.gamma},
                 {"grid_points_per_axis", cfg.scenario.grid_points_per_axis},
                 {"no_defect_mass", cfg.scenario.no_defect_mass},
                 {"coupling_mhz",
                  {angular_to_mhz_exact(cfg.scenario.prior.coupling.low),
                   angular_to_mhz_exact(cfg.scenario.prior.coupling.high)}},
                 {"defect_frequency_mhz",
                  {angular_to_mhz_exact(cfg.scenario.prior.defect_frequency.low),
                   angular_to_mhz_exact(
                       cfg.scenario.prior.defect_frequency.high)}},
                 {"defect_coherence_us", cfg.scenario.prior.defect_coherence.low},
                 {"qubit_t1_us", cfg.scenario.prior.qubit_t1.low}}}};
  write_metadata_line(os, meta);
  os << "stream,true_n_d,true_g1,true_wd1,smc_mean_g1,oracle_mean_g1,"
        "oracle_sd_g1,z_g1,smc_mean_wd1,oracle_mean_wd1,oracle_sd_wd1,z_wd1,"
        "smc_P1p,oracle_P1p,abs_dP1p,pass\n";
  for (const OracleComparisonRow& r : rows) {
    os << r.stream << ',' << defect_count(r.truth_class) << ','
       << CsvNumber(r.truth(kG1)) << ',' << CsvNumber(r.truth(kWd1)) << ','
       << CsvNumber(r.smc_mean_g1) << ',' << CsvNumber(r.oracle_mean_g1) << ','
       << CsvNumber(r.oracle_sd_g1) << ',' << CsvNumber(r.z_g1()) << ','
       << CsvNumber(r.smc_mean_wd1) << ',' << CsvNumber(r.oracle_mean_wd1)
       << ',' << CsvNumber(r.oracle_sd_wd1) << ',' << CsvNumber(r.z_wd1())
       << ',' << CsvNumber(r.smc_p1_present) << ','
       << CsvNumber(r.oracle_p1_present) << ','
       << CsvNumber(std::abs(r.smc_p1_present - r.oracle_p1_present)) << ','
       << (r.within_tolerance() ? 1 : 0) << '\n';
  }
}

}  // namespace tlsbayes
