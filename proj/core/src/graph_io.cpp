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

#include "lergm/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "lergm/errors.hpp"

namespace lergm {
namespace {

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

LergmGraph read_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!skippable(line)) break;
  }
  const std::string prefix = "blocks:";
  const auto start = line.find_first_not_of(" \t");
  if (start == std::string::npos || line.compare(start, prefix.size(), prefix) != 0) {
    throw ParseError(fmt::format("line {}: expected header 'blocks: n1 ... nK'", line_no));
  }
  std::istringstream header(line.substr(start + prefix.size()));
  std::vector<int> sizes;
  std::string token;
  while (header >> token) {
    try {
      std::size_t used = 0;
      const int size = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      sizes.push_back(size);
    } catch (const std::exception&) {
      throw ParseError(fmt::format("line {}: bad block size '{}'", line_no, token));
    }
  }
  if (sizes.empty()) throw ParseError(fmt::format("line {}: no block sizes", line_no));
  LergmGraph graph{BlockPartition(std::move(sizes))};
  const int n = graph.partition().num_vertices();

  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    std::string rest;
    if (!(fields >> a >> b) || (fields >> rest)) {
      throw ParseError(fmt::format("line {}: expected 'u v'", line_no));
    }
    if (a < 1 || b < 1 || a > n || b > n) {
      throw ParseError(fmt::format("line {}: vertex out of range 1..{}", line_no, n));
    }
    if (a == b) throw ParseError(fmt::format("line {}: self-loop {}", line_no, a));
    const EdgeLabel m = graph.label_for(static_cast<int>(a - 1), static_cast<int>(b - 1));
    if (graph.edge(m)) {
      throw ParseError(fmt::format("line {}: duplicate edge {} {}", line_no, a, b));
    }
    graph.set_edge(m, true);
  }
  return graph;
}

LergmGraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open graph file '{}'", path.string()));
  return read_graph(in);
}

void write_graph(std::ostream& out, const LergmGraph& graph) {
  const BlockPartition& partition = graph.partition();
  out << "blocks:";
  for (int size : partition.block_sizes()) out << ' ' << size;
  out << '\n';
  const int n = partition.num_vertices();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (graph.edge(graph.label_for(a, b))) out << a + 1 << ' ' << b + 1 << '\n';
    }
  }
}

void write_graph_file(const std::filesystem::path& path, const LergmGraph& graph) {
  std::ofstream out(path);
  if (!out) throw ArgumentError(fmt::format("cannot write '{}'", path.string()));
  write_graph(out, graph);
}

}  // namespace lergm
