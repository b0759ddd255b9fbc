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

#include "lergm/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "lergm/errors.hpp"

namespace lergm {
namespace {

using nlohmann::json;

void reject_unknown(const json& object, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  const std::set<std::string_view> keys(allowed);
  for (const auto& item : object.items()) {
    if (!keys.count(item.key())) {
      throw ParseError(fmt::format("unknown key '{}' in {}", item.key(), where));
    }
  }
}

const json& require(const json& object, const char* key, std::string_view where) {
  if (!object.contains(key)) throw ParseError(fmt::format("missing '{}' in {}", key, where));
  return object.at(key);
}

template <typename T>
T get_or(const json& object, const char* key, T fallback) {
  if (!object.contains(key) || object.at(key).is_null()) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("bad value for '{}': {}", key, e.what()));
  }
}

std::vector<int> parse_blocks(const json& blocks) {
  std::vector<int> sizes;
  if (blocks.is_array()) {
    for (const auto& b : blocks) sizes.push_back(b.get<int>());
  } else if (blocks.is_object()) {
    reject_unknown(blocks, "blocks", {"count", "size"});
    const int count = require(blocks, "count", "blocks").get<int>();
    const int size = require(blocks, "size", "blocks").get<int>();
    if (count < 1) throw ArgumentError("block count must be >= 1");
    sizes.assign(static_cast<std::size_t>(count), size);
  } else {
    throw ParseError("'blocks' must be an array or {count, size}");
  }
  return sizes;
}

std::vector<StatisticSpec> parse_stats(const json& model, const char* key, int max_block) {
  std::vector<StatisticSpec> out;
  if (!model.contains(key)) return out;
  for (const auto& item : model.at(key)) {
    out.push_back(parse_statistic(item.get<std::string>(), max_block));
  }
  return out;
}

Eigen::VectorXd to_vector(const json& array, std::string_view what) {
  if (!array.is_array()) throw ParseError(fmt::format("'{}' must be an array", what));
  Eigen::VectorXd v(static_cast<Eigen::Index>(array.size()));
  for (std::size_t i = 0; i < array.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = array[i].get<double>();
  }
  return v;
}

ParameterVector parse_parameters(const json& object, std::string_view where) {
  reject_unknown(object, where, {"within", "between"});
  ParameterVector beta;
  beta.within = object.contains("within") ? to_vector(object.at("within"), where)
                                          : Eigen::VectorXd();
  beta.between = object.contains("between") ? to_vector(object.at("between"), where)
                                            : Eigen::VectorXd();
  return beta;
}

double radius(const json& object, const char* key) {
  const double r = get_or(object, key, std::numeric_limits<double>::infinity());
  if (!(r > 0.0)) throw ArgumentError(fmt::format("{} must be > 0", key));
  return r;
}

RunConfig build(const json& root) {
  if (!root.is_object()) throw ParseError("config must be a JSON object");
  reject_unknown(root, "config",
                 {"blocks", "model", "true_beta", "sampler", "estimator", "moments", "replicates",
                  "seed", "run_mple", "threads", "output_dir"});
  BlockPartition partition(parse_blocks(require(root, "blocks", "config")));
  const json& model = require(root, "model", "config");
  reject_unknown(model, "model", {"within", "between"});
  const int max_block = partition.max_block_size();
  auto within = parse_stats(model, "within", max_block);
  auto between = parse_stats(model, "between", max_block);
  RunConfig config{ModelSpec(std::move(partition), std::move(within), std::move(between)),
                   {}, {}, {}, {}};
  config.true_beta = root.contains("true_beta")
                         ? parse_parameters(root.at("true_beta"), "true_beta")
                         : ParameterVector::zeros(config.model);
  if (config.true_beta.within.size() == 0 && config.model.d_within() > 0) {
    config.true_beta.within = Eigen::VectorXd::Zero(config.model.d_within());
  }
  if (config.true_beta.between.size() == 0 && config.model.d_between() > 0) {
    config.true_beta.between = Eigen::VectorXd::Zero(config.model.d_between());
  }
  check_dimensions(config.model, config.true_beta);

  config.seed = get_or<std::uint64_t>(root, "seed", 0);
  if (root.contains("sampler")) {
    const json& s = root.at("sampler");
    reject_unknown(s, "sampler", {"burn_in", "thinning", "reject_degenerate", "retry_cap"});
    config.sampler.burn_in = get_or(s, "burn_in", config.sampler.burn_in);
    config.sampler.thinning = get_or(s, "thinning", config.sampler.thinning);
    config.sampler.reject_degenerate =
        get_or(s, "reject_degenerate", config.sampler.reject_degenerate);
    config.sampler.retry_cap = get_or(s, "retry_cap", config.sampler.retry_cap);
  }
  config.sampler.seed = config.seed;
  config.sampler.validate();

  if (root.contains("estimator")) {
    const json& e = root.at("estimator");
    reject_unknown(e, "estimator",
                   {"grad_tol", "max_iters", "armijo_c1", "backtrack", "radius_w", "radius_b",
                    "init"});
    EstimatorConfig& ec = config.estimator;
    ec.grad_tol = get_or(e, "grad_tol", ec.grad_tol);
    ec.max_iters = get_or(e, "max_iters", ec.max_iters);
    ec.armijo_c1 = get_or(e, "armijo_c1", ec.armijo_c1);
    ec.backtrack = get_or(e, "backtrack", ec.backtrack);
    ec.radius_w = radius(e, "radius_w");
    ec.radius_b = radius(e, "radius_b");
    if (e.contains("init")) ec.init = parse_parameters(e.at("init"), "estimator.init");
  }
  config.estimator.validate();

  if (root.contains("moments")) {
    const json& m = root.at("moments");
    reject_unknown(m, "moments", {"method", "n_samples"});
    const std::string method = get_or<std::string>(m, "method", "exact");
    if (method == "exact") {
      config.moments.method = ExpectationMethod::kExact;
    } else if (method == "monte-carlo") {
      config.moments.method = ExpectationMethod::kMonteCarlo;
    } else {
      throw ParseError(fmt::format("unknown moments method '{}'", method));
    }
    config.moments.n_samples = get_or(m, "n_samples", config.moments.n_samples);
  }
  config.moments.sampler = config.sampler;

  config.replicates = get_or(root, "replicates", 1);
  if (config.replicates < 1) throw ArgumentError("replicates must be >= 1");
  config.run_mple = get_or(root, "run_mple", true);
  config.threads = get_or(root, "threads", 0);
  config.output_dir = get_or<std::string>(root, "output_dir", "out");
  return config;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  try {
    return build(root);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("bad config value: {}", e.what()));
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

Eigen::VectorXd parse_vector(std::string_view text) {
  std::vector<double> values;
  std::string item;
  std::istringstream list{std::string(text)};
  while (std::getline(list, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw ParseError(fmt::format("bad number '{}' in '{}'", item, text));
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace lergm
