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

#include "lergm/graph.hpp"

#include <algorithm>
#include <utility>

#include <fmt/format.h>

#include "lergm/errors.hpp"

namespace lergm {

std::string to_string(const BlockPair& pair) {
  return fmt::format("({},{})", pair.k + 1, pair.l + 1);
}

BlockPartition::BlockPartition(std::vector<int> block_sizes)
    : sizes_(std::move(block_sizes)) {
  if (sizes_.empty()) throw ArgumentError("partition needs at least one block");
  offsets_.reserve(sizes_.size() + 1);
  offsets_.push_back(0);
  for (int size : sizes_) {
    if (size < 1) {
      throw ArgumentError(fmt::format("block size must be >= 1, got {}", size));
    }
    offsets_.push_back(offsets_.back() + size);
    max_size_ = std::max(max_size_, size);
  }
}

int BlockPartition::block_of(int vertex) const {
  if (vertex < 0 || vertex >= num_vertices()) {
    throw ArgumentError(fmt::format("vertex {} out of range", vertex));
  }
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), vertex);
  return static_cast<int>(it - offsets_.begin()) - 1;
}

int BlockPartition::num_between_pairs() const {
  const int k = num_blocks();
  return k * (k - 1) / 2;
}

int BlockPartition::between_index(int k, int l) const {
  const int n = num_blocks();
  if (k < 0 || l <= k || l >= n) {
    throw ArgumentError(fmt::format("invalid between pair ({},{})", k, l));
  }
  return k * (2 * n - k - 1) / 2 + (l - k - 1);
}

BlockPair BlockPartition::between_pair(int index) const {
  const int n = num_blocks();
  for (int k = 0; k < n; ++k) {
    const int row = n - k - 1;
    if (index < row) return {k, k + 1 + index};
    index -= row;
  }
  throw ArgumentError("between pair index out of range");
}

std::vector<BlockPair> BlockPartition::all_pairs() const {
  std::vector<BlockPair> pairs;
  const int n = num_blocks();
  pairs.reserve(static_cast<std::size_t>(n + num_between_pairs()));
  for (int k = 0; k < n; ++k) pairs.push_back({k, k});
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) pairs.push_back({k, l});
  }
  return pairs;
}

void BlockPartition::validate(const BlockPair& pair) const {
  if (pair.k < 0 || pair.l < pair.k || pair.l >= num_blocks()) {
    throw ArgumentError(
        fmt::format("invalid block pair ({},{}) for {} blocks", pair.k + 1,
                    pair.l + 1, num_blocks()));
  }
}

std::size_t BlockPartition::num_labels(const BlockPair& pair) const {
  validate(pair);
  const auto a = static_cast<std::size_t>(sizes_[pair.k]);
  if (pair.within()) return a * (a - 1) / 2;
  return a * static_cast<std::size_t>(sizes_[pair.l]);
}

std::vector<EdgeLabel> enumerate_edge_labels(const BlockPartition& partition,
                                             const BlockPair& pair) {
  partition.validate(pair);
  std::vector<EdgeLabel> labels;
  labels.reserve(partition.num_labels(pair));
  const int rows = partition.block_size(pair.k);
  if (pair.within()) {
    for (int u = 0; u < rows; ++u) {
      for (int v = u + 1; v < rows; ++v) labels.push_back({pair, u, v});
    }
  } else {
    const int cols = partition.block_size(pair.l);
    for (int u = 0; u < rows; ++u) {
      for (int v = 0; v < cols; ++v) labels.push_back({pair, u, v});
    }
  }
  return labels;
}

Subgraph::Subgraph(Kind kind, int rows, int cols)
    : kind_(kind), rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw ArgumentError("subgraph sides must be >= 1");
  const auto r = static_cast<std::size_t>(rows);
  const auto c = static_cast<std::size_t>(cols);
  if (kind == Kind::kWithin) {
    num_labels_ = r * (r - 1) / 2;
    col_offset_ = 0;
    degrees_.assign(r, 0);
  } else {
    num_labels_ = r * c;
    col_offset_ = rows;
    degrees_.assign(r + c, 0);
  }
  words_.assign((num_labels_ + 63) / 64, 0);
}

Subgraph Subgraph::within(int n) { return Subgraph(Kind::kWithin, n, n); }

Subgraph Subgraph::between(int rows, int cols) {
  return Subgraph(Kind::kBetween, rows, cols);
}

void Subgraph::set(int u, int v, bool value) {
  const std::size_t index = label_index(u, v);
  const std::uint64_t bit_mask = std::uint64_t{1} << (index & 63);
  std::uint64_t& word = words_[index >> 6];
  const bool current = (word & bit_mask) != 0;
  if (current == value) return;
  const int delta = value ? 1 : -1;
  word ^= bit_mask;
  degrees_[static_cast<std::size_t>(u)] += delta;
  degrees_[static_cast<std::size_t>(col_offset_ + v)] += delta;
  edges_ = value ? edges_ + 1 : edges_ - 1;
}

std::uint64_t Subgraph::mask() const {
  if (num_labels_ > 64) throw CapacityError("subgraph has more than 64 labels");
  return words_.empty() ? 0 : words_[0];
}

void Subgraph::assign_mask(std::uint64_t mask) {
  if (num_labels_ > 64) throw CapacityError("subgraph has more than 64 labels");
  std::size_t index = 0;
  for_each_label([&](int u, int v) {
    set(u, v, ((mask >> index) & 1u) != 0);
    ++index;
  });
}

std::vector<int> Subgraph::recomputed_degrees() const {
  std::vector<int> degrees(degrees_.size(), 0);
  for_each_label([&](int u, int v) {
    if (has(u, v)) {
      ++degrees[static_cast<std::size_t>(u)];
      ++degrees[static_cast<std::size_t>(col_offset_ + v)];
    }
  });
  return degrees;
}

LergmGraph::LergmGraph(BlockPartition partition)
    : partition_(std::move(partition)) {
  const int k_blocks = partition_.num_blocks();
  within_.reserve(static_cast<std::size_t>(k_blocks));
  for (int k = 0; k < k_blocks; ++k) {
    within_.push_back(Subgraph::within(partition_.block_size(k)));
  }
  between_.reserve(static_cast<std::size_t>(partition_.num_between_pairs()));
  for (int k = 0; k < k_blocks; ++k) {
    for (int l = k + 1; l < k_blocks; ++l) {
      between_.push_back(
          Subgraph::between(partition_.block_size(k), partition_.block_size(l)));
    }
  }
}

const Subgraph& LergmGraph::subgraph(const BlockPair& pair) const {
  partition_.validate(pair);
  if (pair.within()) return within_[static_cast<std::size_t>(pair.k)];
  return between_[static_cast<std::size_t>(
      partition_.between_index(pair.k, pair.l))];
}

Subgraph& LergmGraph::subgraph(const BlockPair& pair) {
  return const_cast<Subgraph&>(std::as_const(*this).subgraph(pair));
}

void LergmGraph::validate(const EdgeLabel& m) const {
  partition_.validate(m.pair);
  const int rows = partition_.block_size(m.pair.k);
  const int cols = partition_.block_size(m.pair.l);
  const bool ok = m.pair.within()
                      ? (m.u >= 0 && m.u < m.v && m.v < rows)
                      : (m.u >= 0 && m.u < rows && m.v >= 0 && m.v < cols);
  if (!ok) {
    throw ArgumentError(fmt::format("edge label ({},{}) invalid for pair {}",
                                    m.u, m.v, to_string(m.pair)));
  }
}

bool LergmGraph::edge(const EdgeLabel& m) const {
  validate(m);
  return subgraph(m.pair).has(m.u, m.v);
}

void LergmGraph::set_edge(const EdgeLabel& m, bool value) {
  validate(m);
  subgraph(m.pair).set(m.u, m.v, value);
}

std::pair<int, int> LergmGraph::global_endpoints(const EdgeLabel& m) const {
  validate(m);
  return {partition_.offset(m.pair.k) + m.u, partition_.offset(m.pair.l) + m.v};
}

EdgeLabel LergmGraph::label_for(int a, int b) const {
  if (a == b) throw ArgumentError("self-loops are not representable");
  if (a > b) std::swap(a, b);
  const int ka = partition_.block_of(a);
  const int kb = partition_.block_of(b);
  return {{ka, kb}, a - partition_.offset(ka), b - partition_.offset(kb)};
}

std::size_t LergmGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& sg : within_) total += sg.edge_count();
  for (const auto& sg : between_) total += sg.edge_count();
  return total;
}

LergmGraph toggle_edge(LergmGraph graph, const EdgeLabel& m, bool value) {
  graph.set_edge(m, value);
  return graph;
}

}  // namespace lergm
