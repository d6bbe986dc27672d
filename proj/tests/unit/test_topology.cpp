#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "imitodyn/error.hpp"
#include "imitodyn/graph.hpp"
#include "imitodyn/rng.hpp"

using namespace imitodyn;
namespace fs = std::filesystem;

namespace {
fs::path write_tmp(const std::string& name, const std::string& text) {
  auto p = fs::temp_directory_path() / ("imitodyn_test_" + name);
  std::ofstream(p) << text;
  return p;
}
} // namespace

TEST_CASE("complete graph is implicit with self-loops") {
  CHECK_THROWS_AS(complete(1), InvalidArgument);
  auto g2 = complete(2);
  CHECK(g2.self_loops());
  CHECK(g2.degree(0) == 2);
  CHECK(g2.neighbor(1, 0) == 0);
  CHECK(g2.neighbor(1, 1) == 1);
  auto g = complete(5000);
  CHECK(g.degree(17) == 5000);
  CHECK(g.is_symmetric());
  Rng rng(1);
  std::vector<int> hits(3);
  auto g3 = complete(3);
  for (int i = 0; i < 30000; ++i) ++hits[g3.sample_neighbor(0, rng)];
  for (int h : hits) CHECK(std::abs(h - 10000) < 5 * std::sqrt(30000 * (1.0 / 3) * (2.0 / 3)));
}

TEST_CASE("erdos-renyi") {
  CHECK_THROWS_AS(erdos_renyi(10, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(erdos_renyi(10, 1.5, 1), InvalidArgument);

  SUBCASE("p = 1 gives the complete graph without self-loops") {
    auto g = erdos_renyi(20, 1.0, 3);
    CHECK_FALSE(g.self_loops());
    for (std::size_t u = 0; u < 20; ++u) {
      CHECK(g.degree(u) == 19);
      for (auto v : g.neighbors(u)) CHECK(v != u);
    }
  }
  SUBCASE("determinism") {
    auto a = erdos_renyi(300, 0.05, 99), b = erdos_renyi(300, 0.05, 99);
    for (std::size_t u = 0; u < 300; ++u) {
      auto na = a.neighbors(u), nb = b.neighbors(u);
      CHECK(std::vector<std::uint32_t>(na.begin(), na.end()) == std::vector<std::uint32_t>(nb.begin(), nb.end()));
    }
  }
  SUBCASE("structure and mean degree at the reference size") {
    auto g = erdos_renyi(5000, 0.02, 7);
    CHECK(g.is_symmetric());
    double mean = 0;
    for (std::size_t u = 0; u < g.n(); ++u) {
      CHECK(g.degree(u) > 0);
      auto nb = g.neighbors(u);
      CHECK(std::is_sorted(nb.begin(), nb.end()));
      mean += g.degree(u);
    }
    mean /= g.n();
    // mean degree 2E/n with E ~ Binomial(N, p), N = n(n-1)/2
    const double N = 5000.0 * 4999 / 2;
    const double sd = 2 * std::sqrt(N * 0.02 * 0.98) / 5000;
    CHECK(std::abs(mean - 0.02 * 4999) < 3 * sd);
  }
  SUBCASE("edge count over 100 seeds") {
    const std::size_t n = 400;
    const double p = 0.02, N = n * (n - 1) / 2.0;
    double sum = 0;
    for (std::uint64_t s = 0; s < 100; ++s) sum += erdos_renyi(n, p, derive_seed(11, s)).num_edges();
    const double mean = sum / 100;
    // rewiring adds at most a handful of edges at this density
    const double sd_of_mean = std::sqrt(N * p * (1 - p)) / 10;
    CHECK(std::abs(mean - p * N) < 3 * sd_of_mean + 1.0);
  }
  SUBCASE("sparse graphs get isolated nodes rewired") {
    auto g = erdos_renyi(200, 0.002, 5);
    CHECK(g.rewired() > 0);
    for (std::size_t u = 0; u < g.n(); ++u) CHECK(g.degree(u) > 0);
    CHECK(g.is_symmetric());
  }
}

TEST_CASE("square lattice") {
  auto g = square_lattice(71, true);
  CHECK(g.n() == 5041);
  for (std::size_t u = 0; u < g.n(); ++u) CHECK(g.degree(u) == 4);
  CHECK(g.is_symmetric());
  CHECK_FALSE(g.self_loops());

  auto open2 = square_lattice(2, false);
  for (std::size_t u = 0; u < 4; ++u) CHECK(open2.degree(u) == 2);
  auto per2 = square_lattice(2, true);
  for (std::size_t u = 0; u < 4; ++u) CHECK(per2.degree(u) == 4);

  auto open5 = square_lattice(5, false);
  CHECK(open5.degree(0) == 2);
  CHECK(open5.degree(1) == 3);
  CHECK(open5.degree(12) == 4);
  CHECK(open5.num_edges() == 2 * 5 * 4);
  CHECK_THROWS_AS(square_lattice(1, true), InvalidArgument);
}

TEST_CASE("edge list files") {
  auto path = write_tmp("path.txt", "0 1\n");
  auto g = from_edge_list(path);
  CHECK(g.n() == 2);
  CHECK(g.degree(0) == 1);
  CHECK(g.num_edges() == 1);

  auto dup = from_edge_list(write_tmp("dup.txt", "# both directions\n0 1\n1 0\n1 2\n"));
  CHECK(dup.num_edges() == 2);
  CHECK(dup.degree(1) == 2);

  CHECK_THROWS_WITH_AS(from_edge_list(write_tmp("iso.txt", "0 1\n"), 3), doctest::Contains("isolated node"),
                       InvalidArgument);
  CHECK_THROWS_AS(from_edge_list(write_tmp("range.txt", "0 5\n"), 3), InvalidArgument);
  CHECK_THROWS_AS(from_edge_list(write_tmp("self.txt", "0 0\n0 1\n")), InvalidArgument);
  CHECK_THROWS_AS(from_edge_list(write_tmp("garbage.txt", "0 x\n")), InvalidArgument);
  CHECK_THROWS_AS(from_edge_list("/nonexistent/edges.txt"), InvalidArgument);
}
