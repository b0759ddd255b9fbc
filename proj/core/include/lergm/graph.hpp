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

// Block-partitioned undirected graphs.
//
// Vertices are split into K contiguous blocks. Every block k owns a
// within-block subgraph (upper-triangular, no diagonal) and every pair k < l
// owns a between-block bipartite subgraph. All indices in this API are
// 0-based; the text file format uses 1-based global vertex ids.

#ifndef LERGM_GRAPH_HPP_
#define LERGM_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lergm {

// Subgraph (k, l) with k <= l. k == l is a within-block subgraph.
struct BlockPair {
  int k = 0;
  int l = 0;

  bool within() const { return k == l; }
  friend bool operator==(const BlockPair&, const BlockPair&) = default;
};

std::string to_string(const BlockPair& pair);

class BlockPartition {
 public:
  explicit BlockPartition(std::vector<int> block_sizes);

  int num_blocks() const { return static_cast<int>(sizes_.size()); }
  int num_vertices() const { return offsets_.back(); }
  // M: the number of vertices in a largest block.
  int max_block_size() const { return max_size_; }
  int block_size(int k) const { return sizes_.at(k); }
  // Global 0-based id of the first vertex of block k.
  int offset(int k) const { return offsets_.at(k); }
  std::span<const int> block_sizes() const { return sizes_; }
  int block_of(int vertex) const;

  int num_between_pairs() const;
  // Position of pair (k, l), k < l, in row-major upper-triangular order.
  int between_index(int k, int l) const;
  BlockPair between_pair(int index) const;
  // Within blocks in order 0..K-1, then between pairs in between_index order.
  std::vector<BlockPair> all_pairs() const;

  void validate(const BlockPair& pair) const;
  std::size_t num_labels(const BlockPair& pair) const;

  friend bool operator==(const BlockPartition& a, const BlockPartition& b) {
    return a.sizes_ == b.sizes_;
  }

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int max_size_ = 0;
};

// An edge slot inside a subgraph. u and v are local indices: u indexes block k
// and v indexes block l. Within-block labels have u < v.
struct EdgeLabel {
  BlockPair pair;
  int u = 0;
  int v = 0;

  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

// Lexicographic (u, then v) enumeration of E_{k,l}.
std::vector<EdgeLabel> enumerate_edge_labels(const BlockPartition& partition,
                                             const BlockPair& pair);

// One within-block or between-block subgraph stored as packed bits with
// incrementally maintained degrees.
class Subgraph {
 public:
  enum class Kind { kWithin, kBetween };

  Subgraph() = default;
  static Subgraph within(int n);
  static Subgraph between(int rows, int cols);

  Kind kind() const { return kind_; }
  bool is_within() const { return kind_ == Kind::kWithin; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t num_labels() const { return num_labels_; }

  // Index of (u, v) in enumeration order; for within subgraphs requires u < v.
  std::size_t label_index(int u, int v) const {
    if (kind_ == Kind::kWithin) {
      const auto uu = static_cast<std::size_t>(u);
      const auto n = static_cast<std::size_t>(rows_);
      return uu * (2 * n - uu - 1) / 2 + static_cast<std::size_t>(v - u - 1);
    }
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(v);
  }

  bool bit(std::size_t index) const {
    return (words_[index >> 6] >> (index & 63)) & 1u;
  }
  bool has(int u, int v) const { return bit(label_index(u, v)); }
  void set(int u, int v, bool value);

  // Degree of u on the row side (block k) and of v on the column side
  // (block l). For within subgraphs both sides are the same vertex set.
  int row_degree(int u) const { return degrees_[static_cast<std::size_t>(u)]; }
  int col_degree(int v) const {
    return degrees_[static_cast<std::size_t>(col_offset_ + v)];
  }
  std::span<const int> row_degrees() const {
    return {degrees_.data(), static_cast<std::size_t>(rows_)};
  }
  std::span<const int> col_degrees() const {
    return {degrees_.data() + col_offset_, static_cast<std::size_t>(cols_)};
  }

  std::size_t edge_count() const { return edges_; }
  bool empty() const { return edges_ == 0; }
  bool full() const { return edges_ == num_labels_; }

  // Bit i of the mask is label i. Requires num_labels() <= 64.
  std::uint64_t mask() const;
  void assign_mask(std::uint64_t mask);

  // Visits every label (u, v) in enumeration order.
  template <typename Fn>
  void for_each_label(Fn&& fn) const {
    if (kind_ == Kind::kWithin) {
      for (int u = 0; u < rows_; ++u) {
        for (int v = u + 1; v < rows_; ++v) fn(u, v);
      }
    } else {
      for (int u = 0; u < rows_; ++u) {
        for (int v = 0; v < cols_; ++v) fn(u, v);
      }
    }
  }

  // Recomputes degrees from the bits; used to audit the caches.
  std::vector<int> recomputed_degrees() const;
  std::span<const int> degree_cache() const { return degrees_; }

  friend bool operator==(const Subgraph& a, const Subgraph& b) {
    return a.kind_ == b.kind_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.words_ == b.words_;
  }

 private:
  Subgraph(Kind kind, int rows, int cols);

  Kind kind_ = Kind::kWithin;
  int rows_ = 0;
  int cols_ = 0;
  int col_offset_ = 0;
  std::size_t num_labels_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<int> degrees_;
};

class LergmGraph {
 public:
  explicit LergmGraph(BlockPartition partition);

  const BlockPartition& partition() const { return partition_; }

  const Subgraph& subgraph(const BlockPair& pair) const;
  Subgraph& subgraph(const BlockPair& pair);
  const Subgraph& within(int k) const { return within_.at(k); }
  Subgraph& within(int k) { return within_.at(k); }
  const Subgraph& between(int index) const { return between_.at(index); }
  Subgraph& between(int index) { return between_.at(index); }

  bool edge(const EdgeLabel& m) const;
  void set_edge(const EdgeLabel& m, bool value);

  // Global 0-based endpoints of a label.
  std::pair<int, int> global_endpoints(const EdgeLabel& m) const;
  // Label for an unordered pair of distinct global 0-based vertices.
  EdgeLabel label_for(int a, int b) const;

  std::size_t edge_count() const;

  friend bool operator==(const LergmGraph& a, const LergmGraph& b) {
    return a.partition_ == b.partition_ && a.within_ == b.within_ &&
           a.between_ == b.between_;
  }

 private:
  void validate(const EdgeLabel& m) const;

  BlockPartition partition_;
  std::vector<Subgraph> within_;
  std::vector<Subgraph> between_;
};

// Value-semantic edge update: a copy of graph with label m set to value.
LergmGraph toggle_edge(LergmGraph graph, const EdgeLabel& m, bool value);

}  // namespace lergm

#endif  // LERGM_GRAPH_HPP_
