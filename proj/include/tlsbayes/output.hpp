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

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlsbayes/harness.hpp"

namespace tlsbayes {

// Output files share two conventions. CSV files start with one comment line
// "# {metadata json}" carrying schema_version, kind, the full configuration
// and the master seed, followed by a header row. Trace files are JSON lines
// whose first object is the same metadata.
nlohmann::json output_metadata(const std::string& kind, const RunConfig& cfg);

nlohmann::json to_json(const ParticleVector& x);
nlohmann::json to_json(const GroundTruth& gt);

void write_spectrum_csv(std::ostream& os, const SpectrumGrid& grid,
                        const RunConfig& cfg, const GroundTruth& gt);

// Header line, one line per estimate, then a final cloud summary line.
void write_trace_jsonl(std::ostream& os, const RunTrace& trace,
                       const RunConfig& cfg);

// Long format: n_est, shots, quantity, median, samples.
void write_ensemble_csv(std::ostream& os, const EnsembleSummary& summary);

// Wide, plot-ready per-figure layouts.
//   fig3: n_d = 2 errors of g1 g2 wd1 wd2 t2d1 t2d2 against n_est.
//   fig4: n_d = 0/1 errors of g1 wd1 t2d1 t1q against n_est.
//   fig5: model probability medians against the shot count M.
void write_fig3_csv(std::ostream& os, const EnsembleSummary& summary);
void write_fig4_csv(std::ostream& os, const EnsembleSummary& summary);
void write_fig5_csv(std::ostream& os, const EnsembleSummary& summary);

void write_oracle_report_csv(std::ostream& os,
                             const std::vector<OracleComparisonRow>& rows,
                             const OracleComparisonConfig& cfg);

}  // namespace tlsbayes
