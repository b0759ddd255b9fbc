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

// Line-based text format:
//
//   blocks: 3 4 2
//   1 2
//   5 9
//
// The header lists block sizes in order; blocks take contiguous vertex ids
// starting at 1. Each following line is one present edge "u v" in global
// 1-based ids, in either order. Blank lines and lines starting with '#' are
// ignored. Duplicate edges are rejected.

#ifndef LERGM_GRAPH_IO_HPP_
#define LERGM_GRAPH_IO_HPP_

#include <filesystem>
#include <iosfwd>

#include "lergm/graph.hpp"

namespace lergm {

LergmGraph read_graph(std::istream& in);
LergmGraph read_graph_file(const std::filesystem::path& path);

// Edges are written in ascending (u, v) order with u < v.
void write_graph(std::ostream& out, const LergmGraph& graph);
void write_graph_file(const std::filesystem::path& path, const LergmGraph& graph);

}  // namespace lergm

#endif  // LERGM_GRAPH_IO_HPP_
