#include <doctest.h>

#include <cmath>
#include <map>

#include "../support/oracles.hpp"
#include "imitodyn/engine.hpp"
#include "imitodyn/error.hpp"
#include "imitodyn/game.hpp"
#include "imitodyn/graph.hpp"
#include "imitodyn/imitation.hpp"

using namespace imitodyn;
using doctest::Approx;

namespace {
const Game& e4() {
  static const Game g = example4_game();
  return g;
}
const ImitationRule& arctan1() {
  static const ImitationRule r = arctan_rule(2, 1.0);
  return r;
}
} // namespace

TEST_CASE("transition rates") {
  SUBCASE("pure state is absorbing") {
    auto q = transition_rates(e4(), arctan1(), PopulationType({10, 0}), 1.0);
    for (double v : q) CHECK(v == 0.0);
  }
  SUBCASE("half-half with f = 1/2") {
    auto flat = make_congestion_game({Polynomial({1.0}), Polynomial({1.0})});
    auto q = transition_rates(flat, arctan1(), PopulationType({50, 50}), 1.0);
    CHECK(q[1] == Approx(12.5));
    CHECK(q[2] == Approx(12.5));
    CHECK(q[0] == 0.0);
  }
  SUBCASE("example4 at x_1 = 1/2") {
    auto q = transition_rates(e4(), arctan1(), PopulationType({50, 50}), 1.0);
    // 100 * 0.25 * f with f_21 = 0.75, f_12 = 0.25
    CHECK(q[2] == Approx(18.75));
    CHECK(q[1] == Approx(6.25));
  }
  SUBCASE("rate bound over the grid, m = 3") {
    auto g = make_congestion_game({Polynomial({0, -1}), Polynomial({1, -2}), Polynomial({0.5})});
    auto rule = arctan_rule(3, 4.0);
    for (int a = 0; a <= 30; ++a)
      for (int b = 0; a + b <= 30; ++b) {
        auto q = transition_rates(g, rule, PopulationType({a, b, 30 - a - b}), 2.0);
        double sum = 0;
        for (double v : q) sum += v;
        CHECK(sum <= 30 * 2.0 + 1e-12);
      }
  }
}

TEST_CASE("drift rates") {
  auto d = potential_drift_rates(e4(), arctan1(), PopulationType({50, 50}), 1.0);
  CHECK(d.q_plus == Approx(18.75));
  CHECK(d.q_minus == Approx(6.25));
  auto flat = make_congestion_game({Polynomial({1.0}), Polynomial({1.0})});
  auto z = potential_drift_rates(flat, arctan1(), PopulationType({30, 70}), 1.0);
  CHECK(z.q_plus == 0.0);
  CHECK(z.q_minus == 0.0);
  Game nopot(ActionSet(2), [](std::span<const double>, std::span<double> o) { o[0] = o[1] = 0; });
  CHECK_THROWS_AS(potential_drift_rates(nopot, arctan1(), PopulationType({1, 1}), 1.0), NoPotential);

  // q_plus + q_minus equals the total rate when rewards differ
  auto q = transition_rates(e4(), arctan1(), PopulationType({37, 63}), 1.0);
  auto dd = potential_drift_rates(e4(), arctan1(), PopulationType({37, 63}), 1.0);
  CHECK(dd.q_plus + dd.q_minus == Approx(q[1] + q[2]));
}

TEST_CASE("complete engine basics") {
  SimConfig cfg;
  cfg.horizon = 5;
  cfg.seed = 1;
  auto pure = simulate_complete(e4(), arctan1(), PopulationType({0, 40}), cfg);
  CHECK(pure.size() == 1);
  REQUIRE(pure.absorbed_at.has_value());
  CHECK(*pure.absorbed_at == 0.0);
  CHECK(*pure.absorbing_action == 1);

  auto t = simulate_complete(e4(), arctan1(), PopulationType({20, 20}), cfg);
  CHECK(t.times().front() == 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) {
    CHECK(t.time(k) > t.time(k - 1));
    auto a = t.counts(k - 1), b = t.counts(k);
    if (k + 1 < t.size()) {
      // every recorded jump moves exactly one player
      CHECK(std::abs(a[0] - b[0]) == 1);
      CHECK(a[0] + a[1] == b[0] + b[1]);
    }
  }
  CHECK(t.end_time() == Approx(5.0));
  CHECK(t.meta.n == 40);

  SimConfig bad;
  bad.lambda = -1;
  CHECK_THROWS_AS(simulate_complete(e4(), arctan1(), PopulationType({1, 1}), bad), InvalidArgument);
}

TEST_CASE("absorption is a trap") {
  // tiny population with a strong push toward action 0
  auto g = make_congestion_game({Polynomial({10.0}), Polynomial({0.0})});
  SimConfig cfg;
  cfg.horizon = 1000;
  cfg.seed = 3;
  cfg.stop_on_absorption = false;
  auto t = simulate_complete(g, arctan_rule(2, 10.0), PopulationType({2, 2}), cfg);
  REQUIRE(t.absorbed_at.has_value());
  CHECK(*t.absorbing_action == 0);
  const auto k = t.index_at(*t.absorbed_at);
  for (std::size_t i = k; i < t.size(); ++i) CHECK(t.counts(i)[1] == 0);
}

TEST_CASE("network engine") {
  SimConfig cfg;
  cfg.horizon = 3;
  cfg.seed = 9;
  auto g = square_lattice(6, true);
  CHECK_THROWS_AS(simulate_network(g, e4(), arctan1(), Configuration(std::vector<Action>(10, 0), 2), cfg),
                  InvalidArgument);
  auto pure = simulate_network(g, e4(), arctan1(), Configuration(std::vector<Action>(36, 1), 2), cfg);
  REQUIRE(pure.absorbed_at.has_value());
  CHECK(*pure.absorbed_at == 0.0);

  Rng rng(4);
  auto y0 = random_configuration(PopulationType({10, 26}), rng);
  CHECK(y0.type() == PopulationType({10, 26}));
  auto t = simulate_network(g, e4(), arctan1(), y0, cfg);
  CHECK(t.size() >= 30);
  for (std::size_t k = 1; k < t.size(); ++k) CHECK(t.time(k) > t.time(k - 1));
}

TEST_CASE("network engine on the complete graph reproduces the type-chain jump law") {
  // n = 4, m = 2: per-state jump direction frequencies against rate ratios
  SimConfig cfg;
  cfg.horizon = 4000;
  cfg.seed = 21;
  cfg.record_jumps = true;
  cfg.stop_on_absorption = true;
  auto g = make_congestion_game({Polynomial({1.0, 1.0}), Polynomial({1.5})});
  auto rule = arctan_rule(2, 1.0);
  std::map<std::int64_t, std::pair<int, int>> ups; // count of action 0 -> (up, down)
  std::uint64_t seed = 100;
  std::size_t events = 0;
  while (events < 20000) {
    cfg.seed = seed++;
    auto t = simulate_network(complete(4), g, rule, Configuration({0, 0, 1, 1}, 2), cfg);
    for (std::size_t k = 1; k < t.size(); ++k) {
      const auto a = t.counts(k - 1)[0], b = t.counts(k)[0];
      if (a == b) continue;
      ++events;
      (b > a ? ups[a].first : ups[a].second)++;
    }
  }
  for (auto [c, ud] : ups) {
    auto q = transition_rates(g, rule, PopulationType({c, 4 - c}), 1.0);
    const double p_up = q[2] / (q[1] + q[2]);
    const double tot = ud.first + ud.second;
    const double sd = std::sqrt(tot * p_up * (1 - p_up));
    CHECK(std::abs(ud.first - tot * p_up) < 4 * sd);
  }
}

TEST_CASE("ensemble determinism and seeding") {
  RunSpec spec{std::make_shared<const Game>(e4()), std::make_shared<const ImitationRule>(arctan1()), nullptr,
               PopulationType({30, 70}), SimConfig{}};
  spec.cfg.horizon = 10;
  auto a = ensemble(spec, 4, 77, 2);
  auto b = ensemble(spec, 4, 77, 1);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(a[i].times() == b[i].times());
    CHECK(a[i].meta.seed == derive_seed(77, i));
    CHECK(a[i].size() == b[i].size());
    for (std::size_t k = 0; k < a[i].size(); ++k) CHECK(a[i].counts(k)[0] == b[i].counts(k)[0]);
  }
  auto single = run_once(spec, derive_seed(77, 0));
  CHECK(single.times() == a[0].times());
  CHECK(a[0].times() != a[1].times());
}

TEST_CASE("stride recording past the jump cap") {
  SimConfig cfg;
  cfg.horizon = 50;
  cfg.seed = 5;
  cfg.max_recorded_jumps = 100;
  cfg.record_stride = 1.0;
  auto t = simulate_complete(e4(), arctan1(), PopulationType({300, 700}), cfg);
  CHECK(t.event_count > 1000);
  CHECK(t.size() < 100 + 60);
  CHECK(t.end_time() == Approx(50.0));
}

TEST_CASE("ensemble from x_1(0) = 0.3 settles near 3/4") {
  RunSpec spec{std::make_shared<const Game>(e4()), std::make_shared<const ImitationRule>(arctan1()), nullptr,
               PopulationType::nearest(SimplexPoint({0.3, 0.7}), 2500), SimConfig{}};
  spec.cfg.horizon = 100;
  std::vector<int> near(100);
  ensemble_for_each(spec, 100, 0xB2, [&](std::size_t k, Trajectory&& t) {
    near[k] = std::abs(t.share(t.size() - 1, 0) - 0.75) < 0.05;
  });
  int count = 0;
  for (int v : near) count += v;
  CHECK(count >= 90);
}
