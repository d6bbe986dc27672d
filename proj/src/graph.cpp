#include "imitodyn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "imitodyn/error.hpp"

namespace imitodyn {

namespace {

void to_csr(std::vector<std::vector<std::uint32_t>>& lists, std::vector<std::size_t>& offsets,
            std::vector<std::uint32_t>& targets) {
  offsets.assign(lists.size() + 1, 0);
  for (std::size_t u = 0; u < lists.size(); ++u) offsets[u + 1] = offsets[u] + lists[u].size();
  targets.clear();
  targets.reserve(offsets.back());
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    targets.insert(targets.end(), l.begin(), l.end());
    std::vector<std::uint32_t>().swap(l);
  }
}

void check_size(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw InvalidArgument("graph too large for 32-bit node ids");
}

} // namespace

Graph Graph::complete_implicit(std::size_t n) {
  Graph g;
  g.n_ = n;
  g.complete_ = true;
  g.self_loops_ = true;
  g.id_ = "complete(" + std::to_string(n) + ")";
  return g;
}

Graph Graph::from_lists(std::vector<std::vector<std::uint32_t>> lists, bool self_loops,
                        std::string id) {
  check_size(lists.size());
  Graph g;
  g.n_ = lists.size();
  g.self_loops_ = self_loops;
  g.id_ = std::move(id);
  for (std::size_t u = 0; u < lists.size(); ++u) {
    if (lists[u].empty()) throw InvalidArgument("isolated node " + std::to_string(u));
    for (auto v : lists[u])
      if (v >= lists.size()) throw InvalidArgument("neighbor id out of range");
  }
  to_csr(lists, g.offsets_, g.targets_);
  if (!g.is_symmetric()) throw InvalidArgument("adjacency is not symmetric");
  return g;
}

std::size_t Graph::degree(std::size_t u) const {
  return complete_ ? n_ : offsets_[u + 1] - offsets_[u];
}

std::span<const std::uint32_t> Graph::neighbors(std::size_t u) const {
  if (complete_) throw InvalidArgument("implicit complete graph has no stored adjacency");
  return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

std::size_t Graph::neighbor(std::size_t u, std::size_t k) const {
  return complete_ ? k : targets_[offsets_[u] + k];
}

std::size_t Graph::sample_neighbor(std::size_t u, Rng& rng) const {
  if (complete_) return static_cast<std::size_t>(rng.below(n_));
  const std::size_t d = offsets_[u + 1] - offsets_[u];
  return targets_[offsets_[u] + static_cast<std::size_t>(rng.below(d))];
}

std::size_t Graph::num_edges() const {
  if (complete_) return n_ * (n_ - 1) / 2 + n_;
  // Each undirected edge appears twice, a self-loop once.
  std::size_t loops = 0;
  for (std::size_t u = 0; u < n_; ++u)
    for (auto v : neighbors(u))
      if (v == u) ++loops;
  return (targets_.size() - loops) / 2 + loops;
}

bool Graph::is_symmetric() const {
  if (complete_) return true;
  for (std::size_t u = 0; u < n_; ++u) {
    auto nu = neighbors(u);
    for (std::size_t k = 0; k < nu.size(); ++k) {
      const std::uint32_t v = nu[k];
      auto nv = neighbors(v);
      // Multiplicity of (u, v) must match that of (v, u).
      auto a = std::equal_range(nu.begin(), nu.end(), v);
      auto b = std::equal_range(nv.begin(), nv.end(), static_cast<std::uint32_t>(u));
      if (a.second - a.first != b.second - b.first) return false;
    }
  }
  return true;
}

Graph complete(std::size_t n) {
  if (n < 2) throw InvalidArgument("complete graph needs n >= 2");
  check_size(n);
  return Graph::complete_implicit(n);
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("Erdos-Renyi needs 0 < p <= 1");
  if (n < 2) throw InvalidArgument("Erdos-Renyi needs n >= 2");
  check_size(n);
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> lists(n);
  // Geometric skipping over the pairs (w < v), Batagelj & Brandes.
  const double log_q = p < 1.0 ? std::log1p(-p) : 0.0;
  long long v = 1, w = -1;
  const long long N = static_cast<long long>(n);
  while (v < N) {
    long long skip = 0;
    if (p < 1.0) {
      const double r = rng.uniform();
      skip = static_cast<long long>(std::floor(std::log1p(-r) / log_q));
    }
    w += 1 + skip;
    while (w >= v && v < N) {
      w -= v;
      ++v;
    }
    if (v < N) {
      lists[v].push_back(static_cast<std::uint32_t>(w));
      lists[w].push_back(static_cast<std::uint32_t>(v));
    }
  }
  std::size_t rewired = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (!lists[u].empty()) continue;
    std::size_t other = static_cast<std::size_t>(rng.below(n - 1));
    if (other >= u) ++other;
    lists[u].push_back(static_cast<std::uint32_t>(other));
    lists[other].push_back(static_cast<std::uint32_t>(u));
    ++rewired;
  }
  std::ostringstream id;
  id << "er(" << n << "," << p << "," << seed << ")";
  Graph g = Graph::from_lists(std::move(lists), false, id.str());
  g.rewired_ = rewired;
  return g;
}

Graph square_lattice(std::size_t side, bool periodic) {
  if (side < 2) throw InvalidArgument("square lattice needs side >= 2");
  check_size(side * side);
  const std::size_t n = side * side;
  std::vector<std::vector<std::uint32_t>> lists(n);
  auto id = [side](std::size_t r, std::size_t c) { return static_cast<std::uint32_t>(r * side + c); };
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) {
      auto& l = lists[r * side + c];
      if (periodic) {
        l.push_back(id((r + side - 1) % side, c));
        l.push_back(id((r + 1) % side, c));
        l.push_back(id(r, (c + side - 1) % side));
        l.push_back(id(r, (c + 1) % side));
      } else {
        if (r > 0) l.push_back(id(r - 1, c));
        if (r + 1 < side) l.push_back(id(r + 1, c));
        if (c > 0) l.push_back(id(r, c - 1));
        if (c + 1 < side) l.push_back(id(r, c + 1));
      }
    }
  return Graph::from_lists(std::move(lists), false,
                           "lattice(" + std::to_string(side) + (periodic ? ",periodic)" : ",open)"));
}

Graph from_edge_list(const std::filesystem::path& path, std::optional<std::size_t> n) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open edge list " + path.string());
  std::vector<std::pair<long long, long long>> edges;
  long long max_id = -1;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;
    std::string rest;
    if (!(ls >> v) || (ls >> rest))
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": expected \"u v\"");
    if (u < 0 || v < 0)
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": negative node id");
    if (u == v)
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": self-loop");
    edges.emplace_back(u, v);
    max_id = std::max({max_id, u, v});
  }
  const std::size_t nodes = n ? *n : static_cast<std::size_t>(max_id + 1);
  if (nodes < 2) throw InvalidArgument("edge list defines fewer than 2 nodes");
  check_size(nodes);
  std::vector<std::vector<std::uint32_t>> lists(nodes);
  for (auto [u, v] : edges) {
    if (static_cast<std::size_t>(std::max(u, v)) >= nodes)
      throw InvalidArgument("node id " + std::to_string(std::max(u, v)) + " out of range for n = " +
                            std::to_string(nodes));
    lists[u].push_back(static_cast<std::uint32_t>(v));
    lists[v].push_back(static_cast<std::uint32_t>(u));
  }
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return Graph::from_lists(std::move(lists), false, "file(" + path.filename().string() + ")");
}

} // namespace imitodyn
