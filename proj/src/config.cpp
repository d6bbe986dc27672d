#include "imitodyn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace imitodyn {

namespace {

using nlohmann::json;

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Walks a JSON object while remembering where it came from, so semantic
/// errors can point at the line of the offending key.
class Node {
public:
  Node(const json& j, const std::string& text, std::string path, std::size_t from)
      : j_(j), text_(text), path_(std::move(path)), from_(from) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(path_ + ": " + what, line_of_offset(text_, from_));
  }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

  Node at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) fail("missing required key \"" + key + "\"");
    return Node(j_.at(key), text_, path_ + "/" + key, locate(key));
  }

  Node at(std::size_t i) const {
    return Node(j_.at(i), text_, path_ + "/" + std::to_string(i), from_);
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!ok.count(it.key())) at(it.key()).fail("unknown key");
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("must be > 0");
    return v;
  }
  std::int64_t integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<std::int64_t>();
  }
  std::uint64_t unsigned_integer() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<std::int64_t>() >= 0))
      fail("expected a non-negative integer");
    return j_.get<std::uint64_t>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  std::vector<double> numbers() const {
    std::vector<double> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back(at(i).number());
    return v;
  }
  std::vector<std::vector<double>> matrix() const {
    std::vector<std::vector<double>> M;
    for (std::size_t i = 0; i < size(); ++i) M.push_back(at(i).numbers());
    return M;
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }
  double positive_or(const std::string& key, double fallback) const {
    return has(key) ? at(key).positive() : fallback;
  }

private:
  std::size_t locate(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"", from_);
    return pos == std::string::npos ? from_ : pos;
  }

  const json& j_;
  const std::string& text_;
  std::string path_;
  std::size_t from_;
};

Game parse_game(const Node& g) {
  const auto type = g.at("type").string();
  if (type == "builtin") {
    g.allow_only({"type", "name"});
    const auto name = g.at("name").string();
    if (name != "example4") g.at("name").fail("unknown builtin game \"" + name + "\"");
    return example4_game();
  }
  if (type == "congestion") {
    g.allow_only({"type", "polynomials"});
    auto polys = g.at("polynomials");
    if (polys.size() < 2) polys.fail("need at least 2 reward polynomials");
    std::vector<Polynomial> p;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      auto c = polys.at(i).numbers();
      if (c.empty()) polys.at(i).fail("empty polynomial");
      p.emplace_back(std::move(c));
    }
    return make_congestion_game(std::move(p));
  }
  if (type == "matrix") {
    g.allow_only({"type", "A"});
    auto A = g.at("A").matrix();
    for (const auto& row : A)
      if (row.size() != A.size()) g.at("A").fail("matrix must be square");
    if (A.size() < 2) g.at("A").fail("need at least 2 actions");
    return make_matrix_game(std::move(A));
  }
  g.at("type").fail("unknown game type \"" + type + "\" (builtin | congestion | matrix)");
}

ImitationRule parse_rule(const Node& r, const Game& game) {
  const auto type = r.at("type").string();
  const std::size_t m = game.num_actions();
  if (type == "arctan") {
    r.allow_only({"type", "K"});
    if (!r.has("K")) return arctan_rule(m, 1.0);
    auto K = r.at("K");
    if (K.raw().is_number()) {
      const double k = K.positive();
      return arctan_rule(m, k);
    }
    auto M = K.matrix();
    if (M.size() != m) K.fail("K must be " + std::to_string(m) + " x " + std::to_string(m));
    try {
      return arctan_rule(std::move(M));
    } catch (const InvalidArgument& e) {
      K.fail(e.what());
    }
  }
  if (type == "replicator") {
    r.allow_only({"type", "eps_margin", "R_lo", "R_hi"});
    const double eps = r.number_or("eps_margin", 1e-6);
    auto bounds = reward_bounds(game, m == 2 ? 1000 : 60);
    const double lo = r.number_or("R_lo", bounds.lo);
    const double hi = r.number_or("R_hi", bounds.hi);
    try {
      return replicator_rule(m, lo, hi, eps);
    } catch (const InvalidArgument& e) {
      r.fail(e.what());
    }
  }
  r.at("type").fail("unknown rule type \"" + type + "\" (arctan | replicator)");
}

TopologySpec parse_topology(const Node& t, std::uint64_t base_seed) {
  TopologySpec spec;
  spec.type = t.at("type").string();
  auto positive_size = [&](const char* key) {
    const auto v = t.at(key).integer();
    if (v < 2) t.at(key).fail("must be >= 2");
    return static_cast<std::size_t>(v);
  };
  if (spec.type == "complete") {
    t.allow_only({"type", "n"});
    spec.n = positive_size("n");
  } else if (spec.type == "er") {
    t.allow_only({"type", "n", "p", "seed"});
    spec.n = positive_size("n");
    spec.p = t.at("p").number();
    if (!(spec.p > 0.0 && spec.p <= 1.0)) t.at("p").fail("must lie in (0, 1]");
    spec.seed = t.has("seed") ? t.at("seed").unsigned_integer() : derive_seed(base_seed, 0xE4);
  } else if (spec.type == "lattice") {
    t.allow_only({"type", "side", "periodic"});
    spec.side = positive_size("side");
    spec.periodic = t.has("periodic") ? t.at("periodic").boolean() : true;
    spec.n = spec.side * spec.side;
  } else if (spec.type == "file") {
    t.allow_only({"type", "path", "n"});
    spec.path = t.at("path").string();
    if (t.has("n")) spec.n = positive_size("n");
  } else {
    t.at("type").fail("unknown topology \"" + spec.type + "\" (complete | er | lattice | file)");
  }
  return spec;
}

} // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  ExperimentConfig cfg;
  cfg.source = source;
  Node root(j, text, "", 0);
  root.allow_only({"game", "rule", "topology", "initial", "sim", "ensemble", "analysis", "output_dir"});

  if (root.has("ensemble")) {
    auto e = root.at("ensemble");
    e.allow_only({"runs", "base_seed"});
    if (e.has("runs")) {
      const auto r = e.at("runs").integer();
      if (r < 1) e.at("runs").fail("must be >= 1");
      cfg.runs = static_cast<std::size_t>(r);
    }
    if (e.has("base_seed")) cfg.base_seed = e.at("base_seed").unsigned_integer();
  }

  try {
    cfg.game = std::make_shared<const Game>(parse_game(root.at("game")));
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    root.at("game").fail(e.what());
  }
  cfg.rule = std::make_shared<const ImitationRule>(parse_rule(root.at("rule"), *cfg.game));
  cfg.topology = parse_topology(root.at("topology"), cfg.base_seed);
  const std::size_t m = cfg.game->num_actions();

  auto init = root.at("initial");
  init.allow_only({"x", "counts"});
  if (init.has("x") == init.has("counts")) init.fail("give exactly one of \"x\" or \"counts\"");
  if (init.has("x")) {
    auto xs = init.at("x").numbers();
    if (xs.size() != m) init.at("x").fail("expected " + std::to_string(m) + " shares");
    try {
      SimplexPoint::repaired(xs, 1e-6);
    } catch (const InvalidArgument& e) {
      init.at("x").fail(e.what());
    }
    cfg.initial_x = std::move(xs);
  } else {
    auto c = init.at("counts");
    std::vector<std::int64_t> counts;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto v = c.at(i).integer();
      if (v < 0) c.at(i).fail("counts must be >= 0");
      counts.push_back(v);
    }
    if (counts.size() != m) c.fail("expected " + std::to_string(m) + " counts");
    cfg.initial_counts = std::move(counts);
  }

  if (cfg.topology.type == "file") {
    try {
      auto g = from_edge_list(cfg.topology.path,
                              cfg.topology.n ? std::optional<std::size_t>(cfg.topology.n) : std::nullopt);
      cfg.topology.n = g.n();
    } catch (const InvalidArgument& e) {
      root.at("topology").at("path").fail(e.what());
    }
  }
  if (cfg.initial_counts) {
    std::int64_t total = 0;
    for (auto c : *cfg.initial_counts) total += c;
    if (static_cast<std::size_t>(total) != cfg.topology.nodes())
      init.at("counts").fail("counts sum to " + std::to_string(total) + " but the topology has " +
                             std::to_string(cfg.topology.nodes()) + " nodes");
  }

  if (root.has("sim")) {
    auto s = root.at("sim");
    s.allow_only({"lambda", "horizon", "record_stride", "stop_on_absorption", "record_jumps"});
    cfg.sim.lambda = s.positive_or("lambda", 1.0);
    cfg.sim.horizon = s.positive_or("horizon", 100.0);
    cfg.sim.record_stride = s.positive_or("record_stride", 0.1);
    if (s.has("stop_on_absorption")) cfg.sim.stop_on_absorption = s.at("stop_on_absorption").boolean();
    if (s.has("record_jumps")) cfg.sim.record_jumps = s.at("record_jumps").boolean();
  }

  if (root.has("analysis")) {
    auto a = root.at("analysis");
    a.allow_only({"gammas", "deltas", "kurtz", "kurtz_T", "n_sweep", "ode", "landscape"});
    auto positive_list = [&](const char* key) {
      auto v = a.at(key).numbers();
      for (std::size_t i = 0; i < v.size(); ++i)
        if (!(v[i] > 0.0)) a.at(key).at(i).fail("must be > 0");
      return v;
    };
    if (a.has("gammas")) cfg.analysis.gammas = positive_list("gammas");
    if (a.has("deltas")) cfg.analysis.deltas = positive_list("deltas");
    if (a.has("kurtz")) cfg.analysis.kurtz = a.at("kurtz").boolean();
    if (a.has("kurtz_T")) cfg.analysis.kurtz_T = a.at("kurtz_T").positive();
    if (a.has("n_sweep")) {
      auto ns = a.at("n_sweep");
      if (!cfg.topology.sweepable()) ns.fail("n_sweep needs a complete or er topology");
      for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto v = ns.at(i).integer();
        if (v < 2) ns.at(i).fail("population sizes must be >= 2");
        cfg.analysis.n_sweep.push_back(static_cast<std::size_t>(v));
      }
      if (cfg.initial_counts) ns.fail("n_sweep needs the initial condition as shares \"x\"");
    }
    if (a.has("ode")) {
      auto o = a.at("ode");
      o.allow_only({"T", "dt", "tol", "max_T"});
      if (o.has("T")) cfg.analysis.ode.T = o.at("T").positive();
      cfg.analysis.ode.dt = o.positive_or("dt", 0.01);
      cfg.analysis.ode.tol = o.positive_or("tol", 1e-8);
      cfg.analysis.ode.max_T = o.positive_or("max_T", 1e4);
    }
    if (a.has("landscape")) {
      auto l = a.at("landscape");
      l.allow_only({"grid", "refine_tol", "starts", "step_tol"});
      if (l.has("grid")) {
        const auto g = l.at("grid").integer();
        if (g < 4) l.at("grid").fail("must be >= 4");
        cfg.analysis.landscape.grid = static_cast<int>(g);
      }
      cfg.analysis.landscape.refine_tol = l.positive_or("refine_tol", 1e-10);
      if (l.has("starts")) {
        const auto s = l.at("starts").integer();
        if (s < 1) l.at("starts").fail("must be >= 1");
        cfg.analysis.landscape.starts = static_cast<int>(s);
      }
      cfg.analysis.landscape.step_tol = l.positive_or("step_tol", 1e-6);
    }
  }
  if (root.has("output_dir")) cfg.output_dir = root.at("output_dir").string();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

Game game_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), line_of_offset(text, e.byte));
  }
  return parse_game(Node(j, text, "", 0));
}

SimplexPoint ExperimentConfig::initial_point() const {
  if (initial_x) return SimplexPoint::repaired(*initial_x, 1e-6);
  const PopulationType t(*initial_counts);
  return t.point();
}

PopulationType ExperimentConfig::initial_type(std::size_t n) const {
  if (initial_counts) return PopulationType(*initial_counts);
  return PopulationType::nearest(initial_point(), static_cast<std::int64_t>(n));
}

std::shared_ptr<const Graph> ExperimentConfig::graph(std::size_t n) const {
  if (topology.type == "complete") return nullptr;
  if (topology.type == "er") return std::make_shared<const Graph>(erdos_renyi(n, topology.p, topology.seed));
  if (topology.type == "lattice")
    return std::make_shared<const Graph>(square_lattice(topology.side, topology.periodic));
  return std::make_shared<const Graph>(from_edge_list(topology.path, topology.n));
}

RunSpec ExperimentConfig::run_spec(std::size_t n) const {
  return RunSpec{game, rule, graph(n), initial_type(n), sim};
}

std::vector<std::size_t> ExperimentConfig::sizes() const {
  if (!analysis.n_sweep.empty()) return analysis.n_sweep;
  return {topology.nodes()};
}

} // namespace imitodyn
