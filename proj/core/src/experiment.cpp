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

#include "lergm/experiment.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "lergm/errors.hpp"

namespace lergm {
namespace {

const EstimationResult* pick(const ReplicateRecord& rec, bool mple) {
  if (!rec.error.empty()) return nullptr;
  const auto& result = mple ? rec.mple : rec.stein;
  return result ? &*result : nullptr;
}

double coordinate(const ParameterVector& beta, std::size_t j) {
  const auto d1 = static_cast<std::size_t>(beta.within.size());
  return j < d1 ? beta.within[static_cast<Eigen::Index>(j)]
                : beta.between[static_cast<Eigen::Index>(j - d1)];
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

}  // namespace

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

const SummaryRow& SummaryTable::find(std::string_view estimator, std::string_view param) const {
  for (const auto& row : rows) {
    if (row.estimator == estimator && row.param == param) return row;
  }
  throw ArgumentError(fmt::format("no summary row for {} {}", estimator, param));
}

std::vector<std::string> parameter_names(const ModelSpec& spec) {
  std::vector<std::string> names;
  for (int j = 0; j < spec.d_within(); ++j) names.push_back(fmt::format("W{}", j + 1));
  for (int j = 0; j < spec.d_between(); ++j) names.push_back(fmt::format("B{}", j + 1));
  return names;
}

SummaryTable summarize(const std::vector<ReplicateRecord>& records, const ParameterVector& truth,
                       const std::vector<std::string>& names, bool include_mple) {
  SummaryTable table;
  for (const bool mple : {false, true}) {
    if (mple && !include_mple) continue;
    for (std::size_t j = 0; j < names.size(); ++j) {
      SummaryRow row;
      row.estimator = mple ? "MPLE" : "SE";
      row.param = names[j];
      row.truth = coordinate(truth, j);
      std::vector<double> values;
      for (const auto& rec : records) {
        const EstimationResult* est = pick(rec, mple);
        if (est && est->converged) {
          values.push_back(coordinate(est->estimate, j));
        } else {
          ++row.excluded;
        }
      }
      row.included = static_cast<int>(values.size());
      const double nan = std::numeric_limits<double>::quiet_NaN();
      if (values.empty()) {
        row.mse = nan;
        row.std = nan;
      } else {
        double sq = 0.0;
        double mean = 0.0;
        for (double v : values) {
          sq += (v - row.truth) * (v - row.truth);
          mean += v;
        }
        const double n = static_cast<double>(values.size());
        row.mse = sq / n;
        mean /= n;
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        row.std = values.size() > 1 ? std::sqrt(var / (n - 1.0)) : nan;
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

ExperimentResult run_experiment(const RunConfig& config) {
  ReplicateOptions options;
  options.n_replicates = config.replicates;
  options.sampler = config.sampler;
  options.sampler.seed = config.seed;
  options.estimator = config.estimator;
  options.run_mple = config.run_mple;
  options.threads = config.threads;

  ExperimentResult result;
  result.param_names = parameter_names(config.model);
  result.with_mple = config.run_mple;
  result.records = run_replicates(config.model, config.true_beta, options);
  result.summary =
      summarize(result.records, config.true_beta, result.param_names, config.run_mple);
  return result;
}

void write_summary_csv(std::ostream& out, const SummaryTable& table) {
  out << "estimator,param,true,mse,std,included,excluded\n";
  for (const auto& row : table.rows) {
    out << row.estimator << ',' << row.param << ',' << format_double(row.truth) << ','
        << format_double(row.mse) << ',' << format_double(row.std) << ',' << row.included << ','
        << row.excluded << '\n';
  }
}

void write_replicates_csv(std::ostream& out, const ExperimentResult& result) {
  out << "replicate,estimator,param,value,converged\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& rec : result.records) {
    for (const bool mple : {false, true}) {
      if (mple && !result.with_mple) continue;
      const EstimationResult* est = pick(rec, mple);
      for (std::size_t j = 0; j < result.param_names.size(); ++j) {
        const double value = est ? coordinate(est->estimate, j) : nan;
        out << rec.replicate << ',' << (mple ? "MPLE" : "SE") << ',' << result.param_names[j]
            << ',' << format_double(value) << ',' << (est && est->converged ? "true" : "false")
            << '\n';
      }
    }
  }
}

void write_timings_csv(std::ostream& out, const ExperimentResult& result) {
  out << "replicate,estimator,seconds,error\n";
  for (const auto& rec : result.records) {
    std::string error = rec.error;
    for (char& c : error) {
      if (c == ',' || c == '\n') c = ' ';
    }
    out << rec.replicate << ",SE," << format_double(rec.stein_seconds) << ',' << error << '\n';
    if (rec.mple) {
      out << rec.replicate << ",MPLE," << format_double(rec.mple_seconds) << ",\n";
    }
  }
}

void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "summary.csv");
    write_summary_csv(out, result.summary);
  }
  {
    auto out = open_output(dir / "replicates.csv");
    write_replicates_csv(out, result);
  }
  auto out = open_output(dir / "timings.csv");
  write_timings_csv(out, result);
}

}  // namespace lergm
