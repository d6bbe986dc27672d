#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imitodyn/rng.hpp"

namespace imitodyn {

/// Undirected interaction graph in CSR form. The complete graph with
/// self-loops is kept implicit, so it costs O(1) memory for any n.
class Graph {
public:
  static Graph complete_implicit(std::size_t n);
  /// Builds from per-node neighbor lists; lists must be symmetric.
  static Graph from_lists(std::vector<std::vector<std::uint32_t>> lists, bool self_loops,
                          std::string id);

  std::size_t n() const { return n_; }
  bool is_complete() const { return complete_; }
  bool self_loops() const { return self_loops_; }
  const std::string& id() const { return id_; }

  std::size_t degree(std::size_t u) const;
  /// Neighbors of u in sorted order; not available on the implicit complete graph.
  std::span<const std::uint32_t> neighbors(std::size_t u) const;
  std::size_t neighbor(std::size_t u, std::size_t k) const;
  std::size_t sample_neighbor(std::size_t u, Rng& rng) const;
  std::size_t num_edges() const;
  bool is_symmetric() const;

  /// Number of isolated nodes re-wired during construction (Erdos-Renyi only).
  std::size_t rewired() const { return rewired_; }

private:
  Graph() = default;

  std::size_t n_ = 0;
  bool complete_ = false;
  bool self_loops_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
  std::size_t rewired_ = 0;
  std::string id_;

  friend Graph erdos_renyi(std::size_t, double, std::uint64_t);
};

/// Every node adjacent to every node, itself included.
Graph complete(std::size_t n);

/// G(n, p) without self-loops; isolated nodes are linked to one uniformly
/// chosen other node.
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// side x side grid with 4-neighborhoods. Periodic lattices keep one slot per
/// direction, so every node has degree 4 even when side == 2.
Graph square_lattice(std::size_t side, bool periodic = true);

/// Whitespace-separated "u v" pairs, 0-based, '#' starts a comment. The node
/// count is max id + 1 unless `n` is given.
Graph from_edge_list(const std::filesystem::path& path, std::optional<std::size_t> n = {});

} // namespace imitodyn
