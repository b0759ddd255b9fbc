// Copyright 2026 The lergm-stein Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Simulation study: draw replicate graphs at the true parameter, estimate
// with the Stein estimator (and optionally MPLE), and summarize accuracy.

#ifndef LERGM_EXPERIMENT_HPP_
#define LERGM_EXPERIMENT_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lergm/config.hpp"
#include "lergm/diagnostics.hpp"

namespace lergm {

struct SummaryRow {
  std::string estimator;  // "SE" or "MPLE"
  std::string param;      // "W1", ..., "B1", ...
  double truth = 0.0;
  double mse = 0.0;
  double std = 0.0;  // ddof = 1; NaN with fewer than two included replicates
  int included = 0;
  int excluded = 0;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;

  const SummaryRow& find(std::string_view estimator, std::string_view param) const;
};

struct ExperimentResult {
  SummaryTable summary;
  std::vector<ReplicateRecord> records;
  std::vector<std::string> param_names;
  bool with_mple = false;
};

std::vector<std::string> parameter_names(const ModelSpec& spec);

// Non-converged or failed replicates are excluded from mse/std and counted.
SummaryTable summarize(const std::vector<ReplicateRecord>& records, const ParameterVector& truth,
                       const std::vector<std::string>& names, bool include_mple);

ExperimentResult run_experiment(const RunConfig& config);

// Floats use 17 significant digits. summary.csv and replicates.csv depend
// only on the config; wall-clock times go to timings.csv.
void write_summary_csv(std::ostream& out, const SummaryTable& table);
void write_replicates_csv(std::ostream& out, const ExperimentResult& result);
void write_timings_csv(std::ostream& out, const ExperimentResult& result);
void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result);

std::string format_double(double value);

}  // namespace lergm

#endif  // LERGM_EXPERIMENT_HPP_
