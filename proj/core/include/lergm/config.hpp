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

// Run configuration for simulation studies, read from JSON:
//
//   {
//     "blocks": [20, 20, 20] | {"count": 20, "size": 20},
//     "model": {"within": ["edges", "gwd(1)"],
//               "between": ["edges", "gwd_bipartite(1,1)", "gwd_bipartite(2,1)"]},
//     "true_beta": {"within": [1, -1], "between": [1, -1, -1]},
//     "sampler": {"burn_in": 1000, "thinning": 10, "reject_degenerate": true,
//                 "retry_cap": 1000},
//     "estimator": {"grad_tol": 1e-8, "max_iters": 500, "armijo_c1": 1e-4,
//                   "backtrack": 0.5, "radius_w": null, "radius_b": null,
//                   "init": {"within": [...], "between": [...]}},
//     "moments": {"method": "exact" | "monte-carlo", "n_samples": 10000},
//     "replicates": 30,
//     "seed": 1,
//     "run_mple": true,
//     "threads": 0,
//     "output_dir": "out"
//   }
//
// Every key except "blocks" and "model" is optional.

#ifndef LERGM_CONFIG_HPP_
#define LERGM_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "lergm/diagnostics.hpp"
#include "lergm/estimator.hpp"
#include "lergm/sampler.hpp"
#include "lergm/statistics.hpp"

namespace lergm {

struct RunConfig {
  ModelSpec model;
  ParameterVector true_beta;
  SamplerConfig sampler;
  EstimatorConfig estimator;
  ExpectationOptions moments;
  int replicates = 1;
  std::uint64_t seed = 0;
  bool run_mple = true;
  int threads = 0;
  std::filesystem::path output_dir = "out";
};

// Throws ParseError for malformed JSON or unknown keys and ArgumentError for
// inconsistent values.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

// Parses "1,-1,0.5" into a vector.
Eigen::VectorXd parse_vector(std::string_view text);

}  // namespace lergm

#endif  // LERGM_CONFIG_HPP_
