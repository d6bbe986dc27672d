#include "imitodyn/landscape.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "imitodyn/error.hpp"
#include "imitodyn/rng.hpp"

namespace imitodyn {

const char* to_string(CriticalClass c) {
  switch (c) {
    case CriticalClass::local_max: return "local_max";
    case CriticalClass::local_min: return "local_min";
    case CriticalClass::saddle_or_degenerate: return "saddle_or_degenerate";
  }
  return "?";
}

bool is_nash(const Game& game, const SimplexPoint& x, double tol) {
  auto r = game.rewards(x.values());
  const double best = *std::max_element(r.begin(), r.end());
  const double slack = tol * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && r[i] < best - slack) return false;
  return true;
}

namespace {

constexpr double kZero = 1e-9;

int sign(double v) { return (v > 0.0) - (v < 0.0); }

CriticalPoint make_point(const Game& game, SimplexPoint loc, CriticalClass cls, bool boundary,
                         bool isolated) {
  CriticalPoint p{loc, game.potential(loc.values()), cls};
  p.on_boundary = boundary;
  p.isolated = isolated;
  p.is_ne = is_nash(game, loc);
  p.is_ess = cls == CriticalClass::local_max && isolated && p.is_ne;
  return p;
}

// ---- two actions --------------------------------------------------------

class Reduced {
public:
  explicit Reduced(const Game& game) : game_(game) {}
  double operator()(double s) const {
    const double x[2] = {s, 1.0 - s};
    double g[2];
    game_.potential_gradient(x, g);
    return g[0] - g[1];
  }

private:
  const Game& game_;
};

double bisect(const Reduced& g, double a, double b, double tol) {
  double ga = g(a);
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if (sign(gm) == sign(ga)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double golden_min_abs(const Reduced& g, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = std::abs(g(c)), fd = std::abs(g(d));
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = std::abs(g(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = std::abs(g(d));
    }
  }
  return 0.5 * (a + b);
}

SimplexPoint on_edge(double s) { return SimplexPoint({s, 1.0 - s}); }

// ---- m actions ----------------------------------------------------------

std::vector<double> project_simplex(std::vector<double> y) {
  std::vector<double> u = y;
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    css += u[k];
    const double t = (css - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  for (auto& v : y) v = std::max(v - theta, 0.0);
  const double sum = std::accumulate(y.begin(), y.end(), 0.0);
  for (auto& v : y) v /= sum;
  return y;
}

std::vector<std::size_t> support_of(const std::vector<double>& x) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 1e-12) s.push_back(i);
  return s;
}

class FaceNewton {
public:
  FaceNewton(const Game& game, std::vector<std::size_t> face)
      : game_(game), face_(std::move(face)), m_(game.num_actions()), g_(m_) {}

  /// Components g_k - g_last over the face.
  Eigen::VectorXd reduced(const std::vector<double>& x) {
    game_.potential_gradient(x, g_);
    const std::size_t d = face_.size() - 1;
    Eigen::VectorXd v(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) v[static_cast<Eigen::Index>(k)] = g_[face_[k]] - g_[face_.back()];
    return v;
  }

  std::vector<double> moved(const std::vector<double>& x, const Eigen::VectorXd& z) const {
    std::vector<double> y = x;
    for (std::size_t k = 0; k + 1 < face_.size(); ++k) {
      y[face_[k]] += z[static_cast<Eigen::Index>(k)];
      y[face_.back()] -= z[static_cast<Eigen::Index>(k)];
    }
    return y;
  }

  bool inside(const std::vector<double>& y) const {
    return std::all_of(face_.begin(), face_.end(), [&](std::size_t i) { return y[i] > 0.0; });
  }

  /// Levenberg-Marquardt on the reduced gradient, staying inside the face.
  std::vector<double> solve(std::vector<double> x, int max_iter) {
    const auto d = static_cast<Eigen::Index>(face_.size() - 1);
    if (d == 0) return x;
    Eigen::VectorXd v = reduced(x);
    double mu = -1.0;
    for (int it = 0; it < max_iter && v.lpNorm<Eigen::Infinity>() > 1e-14; ++it) {
      Eigen::MatrixXd J(d, d);
      double h = 1e-6;
      for (std::size_t i : face_) h = std::min(h, 0.25 * x[i]);
      for (Eigen::Index c = 0; c < d; ++c) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
        e[c] = h;
        J.col(c) = (reduced(moved(x, e)) - reduced(moved(x, -e))) / (2.0 * h);
      }
      const Eigen::MatrixXd JtJ = J.transpose() * J;
      if (mu < 0.0) mu = 1e-8 * std::max(1e-300, JtJ.diagonal().maxCoeff());
      bool improved = false;
      while (mu < 1e20) {
        Eigen::MatrixXd A = JtJ;
        A.diagonal().array() += mu;
        const Eigen::VectorXd step = A.ldlt().solve(-J.transpose() * v);
        auto y = moved(x, step);
        if (inside(y)) {
          Eigen::VectorXd vy = reduced(y);
          if (vy.norm() < v.norm()) {
            x = std::move(y);
            v = std::move(vy);
            mu = std::max(mu / 3.0, 1e-300);
            improved = true;
            break;
          }
        }
        mu *= 4.0;
      }
      if (!improved) break;
    }
    return x;
  }

  double residual(const std::vector<double>& x) {
    if (face_.size() < 2) return 0.0;
    return reduced(x).lpNorm<Eigen::Infinity>();
  }

private:
  const Game& game_;
  std::vector<std::size_t> face_;
  std::size_t m_;
  std::vector<double> g_;
};

/// Projected gradient ascent (dir = +1) or descent (dir = -1) with step halving.
std::vector<double> climb(const Game& game, std::vector<double> x, double dir, double step_tol,
                          int max_iter) {
  const std::size_t m = x.size();
  std::vector<double> g(m), y(m);
  double eta = 0.1;
  double phi = game.potential(x);
  for (int it = 0; it < max_iter && eta > 1e-16; ++it) {
    game.potential_gradient(x, g);
    for (std::size_t i = 0; i < m; ++i) y[i] = x[i] + dir * eta * g[i];
    y = project_simplex(y);
    double stat = 0.0;
    for (std::size_t i = 0; i < m; ++i) stat = std::max(stat, std::abs(y[i] - x[i]));
    if (stat / eta < step_tol) break;
    const double phi_y = game.potential(y);
    if (dir * (phi_y - phi) >= -1e-15 * std::max(1.0, std::abs(phi))) {
      x = y;
      phi = phi_y;
    } else {
      eta *= 0.5;
    }
  }
  return x;
}

/// Phi(x + eps d) - Phi(x) by Simpson quadrature of the directional
/// derivative, which stays accurate where Phi differences cancel.
double potential_increment(const Game& game, const std::vector<double>& x,
                           const std::vector<double>& d, double eps) {
  const std::size_t m = x.size();
  constexpr int kPanels = 8;
  std::vector<double> p(m), g(m);
  double acc = 0.0;
  for (int k = 0; k <= kPanels; ++k) {
    const double s = eps * k / kPanels;
    for (std::size_t i = 0; i < m; ++i) p[i] = x[i] + s * d[i];
    game.potential_gradient(p, g);
    double dd = 0.0;
    for (std::size_t i = 0; i < m; ++i) dd += g[i] * d[i];
    const double w = (k == 0 || k == kPanels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += w * dd;
  }
  return acc * eps / (3.0 * kPanels);
}

struct SphereClass {
  CriticalClass cls;
  bool flat;
};

SphereClass classify_sphere(const Game& game, const std::vector<double>& x, double eps, Rng& rng) {
  const std::size_t m = x.size();
  const std::size_t samples = 2 * m * m;
  std::vector<double> g(m);
  game.potential_gradient(x, g);
  double gscale = 1.0;
  for (double v : g) gscale = std::max(gscale, std::abs(v));
  const double zero = eps * 1e-12 * gscale;
  std::size_t pos = 0, neg = 0, flat = 0;
  std::vector<double> d(m);
  for (std::size_t s = 0, tries = 0; s < samples && tries < 100 * samples; ++tries) {
    auto y = uniform_simplex(rng, m);
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm += (y[i] - x[i]) * (y[i] - x[i]);
    norm = std::sqrt(norm);
    if (norm <= 2.0 * eps) continue;
    for (std::size_t i = 0; i < m; ++i) d[i] = (y[i] - x[i]) / norm;
    const double dphi = potential_increment(game, x, d, eps);
    if (dphi > zero) ++pos;
    else if (dphi < -zero) ++neg;
    else ++flat;
    ++s;
  }
  if (flat > 0) return {CriticalClass::saddle_or_degenerate, true};
  if (pos == 0 && neg > 0) return {CriticalClass::local_max, false};
  if (neg == 0 && pos > 0) return {CriticalClass::local_min, false};
  return {CriticalClass::saddle_or_degenerate, false};
}

} // namespace

Landscape find_critical_points_2action(const Game& game, int grid, double refine_tol) {
  if (game.num_actions() != 2) throw InvalidArgument("two-action scanner needs m == 2");
  if (!game.has_potential()) throw NoPotential();
  if (grid < 4) throw InvalidArgument("grid must be >= 4");
  if (!(refine_tol > 0.0)) throw InvalidArgument("refine_tol must be > 0");

  const Reduced g(game);
  const auto N = static_cast<std::size_t>(grid);
  auto s_at = [N](std::size_t k) { return static_cast<double>(k) / static_cast<double>(N); };
  std::vector<double> gv(N + 1);
  for (std::size_t k = 0; k <= N; ++k) gv[k] = g(s_at(k));

  Landscape out;
  std::vector<bool> flat(N + 1, false);
  for (std::size_t k = 0; k <= N; ++k) {
    const bool here = std::abs(gv[k]) < kZero;
    const bool left = k > 0 && std::abs(gv[k - 1]) < kZero;
    const bool right = k < N && std::abs(gv[k + 1]) < kZero;
    flat[k] = here && (left || right);
  }
  if (std::find(flat.begin(), flat.end(), true) != flat.end()) {
    out.non_isolated = true;
    out.warnings.emplace_back("non-isolated critical set: the reduced derivative vanishes on an interval");
    for (std::size_t k = 0; k <= N; ++k)
      if (flat[k])
        out.points.push_back(make_point(game, on_edge(s_at(k)), CriticalClass::saddle_or_degenerate,
                                        k == 0 || k == N, false));
  }

  std::vector<double> roots;
  for (std::size_t k = 0; k < N; ++k)
    if (!flat[k] && !flat[k + 1] && gv[k] * gv[k + 1] < 0.0)
      roots.push_back(bisect(g, s_at(k), s_at(k + 1), refine_tol));
  for (std::size_t k = 1; k < N; ++k) {
    if (flat[k]) continue;
    const double a = std::abs(gv[k]);
    if (a > std::abs(gv[k - 1]) || a > std::abs(gv[k + 1])) continue;
    if (gv[k - 1] * gv[k] < 0.0 || gv[k] * gv[k + 1] < 0.0) continue;
    const double s = golden_min_abs(g, s_at(k - 1), s_at(k + 1), refine_tol);
    if (std::abs(g(s)) < kZero) roots.push_back(s);
  }
  std::sort(roots.begin(), roots.end());
  const double merge = std::max(100.0 * refine_tol, 1e-7);
  std::vector<double> uniq;
  for (double s : roots) {
    if (s < merge || s > 1.0 - merge) continue;
    if (!uniq.empty() && s - uniq.back() < merge) continue;
    uniq.push_back(s);
  }

  const double h0 = 1.0 / static_cast<double>(N);
  auto side_step = [&](std::size_t idx) {
    double h = h0;
    const double s = uniq[idx];
    h = std::min(h, 0.5 * (idx == 0 ? s : s - uniq[idx - 1]));
    h = std::min(h, 0.5 * (idx + 1 == uniq.size() ? 1.0 - s : uniq[idx + 1] - s));
    return h;
  };
  for (std::size_t idx = 0; idx < uniq.size(); ++idx) {
    const double s = uniq[idx];
    const double h = side_step(idx);
    const int left = sign(g(s - h)), right = sign(g(s + h));
    CriticalClass cls = CriticalClass::saddle_or_degenerate;
    if (left > 0 && right < 0) cls = CriticalClass::local_max;
    else if (left < 0 && right > 0) cls = CriticalClass::local_min;
    out.points.push_back(make_point(game, on_edge(s), cls, false, true));
  }

  // Vertices: x_1 = 0 and x_1 = 1, classified by the one-sided sign.
  const double h_lo = std::min(h0, uniq.empty() ? h0 : 0.5 * uniq.front());
  const double h_hi = std::min(h0, uniq.empty() ? h0 : 0.5 * (1.0 - uniq.back()));
  if (!flat[0]) {
    const int sr = sign(g(h_lo));
    const auto cls = sr > 0   ? CriticalClass::local_min
                     : sr < 0 ? CriticalClass::local_max
                              : CriticalClass::saddle_or_degenerate;
    out.points.push_back(make_point(game, on_edge(0.0), cls, true, sr != 0));
  }
  if (!flat[N]) {
    const int sl = sign(g(1.0 - h_hi));
    const auto cls = sl > 0   ? CriticalClass::local_max
                     : sl < 0 ? CriticalClass::local_min
                              : CriticalClass::saddle_or_degenerate;
    out.points.push_back(make_point(game, on_edge(1.0), cls, true, sl != 0));
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const auto& a, const auto& b) { return a.location[0] < b.location[0]; });
  return out;
}

Landscape find_critical_points_multi(const Game& game, const MultiStartOptions& opts) {
  const std::size_t m = game.num_actions();
  if (!game.has_potential()) throw NoPotential();
  if (opts.starts < 1) throw InvalidArgument("multi-start finder needs starts >= 1");
  if (!(opts.step_tol > 0.0)) throw InvalidArgument("step_tol must be > 0");

  Rng rng(opts.seed);
  std::vector<std::vector<double>> candidates;
  for (std::size_t i = 0; i < m; ++i) candidates.push_back(SimplexPoint::vertex(m, i).vec());

  auto polish = [&](std::vector<double> x, int iters) -> std::optional<std::vector<double>> {
    auto face = support_of(x);
    for (auto& v : x)
      if (v <= 1e-12) v = 0.0;
    const double sum = std::accumulate(x.begin(), x.end(), 0.0);
    for (auto& v : x) v /= sum;
    if (face.size() < 2) return x;
    FaceNewton newton(game, face);
    auto y = newton.solve(x, iters);
    if (newton.residual(y) < opts.step_tol) return y;
    if (newton.residual(x) < opts.step_tol) return x;
    return std::nullopt;
  };

  for (int s = 0; s < opts.starts; ++s) {
    const auto start = uniform_simplex(rng, m);
    for (double dir : {+1.0, -1.0})
      if (auto c = polish(climb(game, start, dir, opts.step_tol, opts.max_iterations), 200))
        candidates.push_back(std::move(*c));
    if (auto c = polish(start, 200)) candidates.push_back(std::move(*c));
  }

  const double merge = 10.0 * opts.step_tol;
  std::vector<std::vector<double>> uniq;
  for (auto& c : candidates) {
    const bool dup = std::any_of(uniq.begin(), uniq.end(),
                                 [&](const auto& u) { return distance_inf(u, c) < merge; });
    if (!dup) uniq.push_back(std::move(c));
  }

  Landscape out;
  const double eps = 10.0 * opts.step_tol;
  for (auto& x : uniq) {
    const auto sc = classify_sphere(game, x, eps, rng);
    const bool boundary = std::any_of(x.begin(), x.end(), [](double v) { return v <= 0.0; });
    out.points.push_back(make_point(game, SimplexPoint(x, 1e-9), sc.cls, boundary, !sc.flat));
    if (sc.flat) out.non_isolated = true;
  }
  if (out.non_isolated)
    out.warnings.emplace_back("non-isolated critical set: flat directions found around a critical point");
  std::sort(out.points.begin(), out.points.end(), [](const auto& a, const auto& b) {
    return a.location.vec() < b.location.vec();
  });
  return out;
}

Landscape ess_set(const Landscape& landscape) {
  Landscape out;
  out.non_isolated = landscape.non_isolated;
  for (const auto& p : landscape.points) {
    if (!p.is_ess) continue;
    if (support(p.location).size() == 1) {
      std::ostringstream w;
      w << "pure type with action " << support(p.location).front()
        << " is a local maximum of the potential (pure types are assumed not ESS)";
      out.warnings.push_back(w.str());
    }
    out.points.push_back(p);
  }
  if (out.points.empty())
    out.warnings.emplace_back(landscape.non_isolated
                                  ? "no isolated local maximum: the critical set is degenerate"
                                  : "no isolated local maximum found");
  return out;
}

namespace {

double dist(std::span<const double> a, std::span<const double> b, Norm norm) {
  return norm == Norm::sup ? distance_inf(a, b) : distance_l2(a, b);
}

} // namespace

double time_near_set(const Trajectory& traj, const std::vector<SimplexPoint>& targets, double gamma,
                     Norm norm) {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
  if (traj.empty()) throw InvalidArgument("empty trajectory");
  std::vector<double> x(traj.num_actions());
  auto near = [&](std::size_t k) {
    traj.shares_into(k, x);
    return std::any_of(targets.begin(), targets.end(),
                       [&](const auto& c) { return dist(x, c.values(), norm) < gamma; });
  };
  const double t_end = traj.end_time();
  if (t_end <= 0.0) return near(0) ? 1.0 : 0.0;
  double inside = 0.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k)
    if (near(k)) inside += traj.time(k + 1) - traj.time(k);
  return inside / t_end;
}

std::optional<ExitTime> exit_time(const Trajectory& traj, const SimplexPoint& center, double delta,
                                  Norm norm) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be > 0");
  std::vector<double> x(traj.num_actions());
  std::optional<double> entry;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    traj.shares_into(k, x);
    const double d = dist(x, center.values(), norm);
    if (!entry) {
      if (d < 0.5 * delta) entry = traj.time(k);
    } else if (d >= delta) {
      return ExitTime{*entry, traj.time(k)};
    }
  }
  return std::nullopt;
}

Quantiles quantiles(std::vector<double> v) {
  Quantiles q;
  q.count = v.size();
  if (v.empty()) return q;
  std::sort(v.begin(), v.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  q.q10 = at(0.1);
  q.median = at(0.5);
  q.q90 = at(0.9);
  return q;
}

MetastabilityAnalyzer::MetastabilityAnalyzer(Landscape landscape, const Game& game,
                                             const ImitationRule& rule, MetastabilityOptions opts)
    : landscape_(std::move(landscape)), ess_(ess_set(landscape_)), game_(game), rule_(rule),
      opts_(std::move(opts)) {
  for (const auto& p : ess_.points) targets_.push_back(p.location);
  const std::size_t m = game.num_actions();
  for (const auto& p : landscape_.points) fixed_points_.push_back(p.location.vec());
  for (std::size_t i = 0; i < m; ++i) fixed_points_.push_back(SimplexPoint::vertex(m, i).vec());
}

RunMetrics MetastabilityAnalyzer::measure(const Trajectory& traj) const {
  const std::size_t m = game_.num_actions();
  RunMetrics rm;
  rm.seed = traj.meta.seed;
  rm.tau = traj.absorbed_at;
  rm.end_time = traj.end_time();
  rm.full_support_start = support(traj.state(0)).size() == m;
  for (double gamma : opts_.gammas)
    rm.time_near_ess.push_back(targets_.empty() ? 0.0
                                                : time_near_set(traj, targets_, gamma, opts_.gamma_norm));
  for (const auto& p : landscape_.points) {
    std::vector<std::optional<ExitTime>> row;
    for (double delta : opts_.deltas) row.push_back(exit_time(traj, p.location, delta, opts_.delta_norm));
    rm.exits.push_back(std::move(row));
  }
  if (!game_.has_potential()) return rm;

  std::vector<double> x(m);
  const std::size_t stride =
      std::max<std::size_t>(1, traj.size() / std::max<std::size_t>(1, opts_.drift_samples_per_run));
  for (std::size_t k = 0; k < traj.size(); k += stride) {
    traj.shares_into(k, x);
    const bool far = std::all_of(fixed_points_.begin(), fixed_points_.end(), [&](const auto& f) {
      return distance_inf(x, f) > opts_.drift_exclusion;
    });
    if (!far) continue;
    const auto q = potential_drift_rates(game_, rule_, traj.state(k), traj.meta.lambda);
    ++rm.drift_states;
    if (q.q_plus < q.q_minus) ++rm.drift_violations;
    if (q.q_minus > 0.0) {
      const double ratio = q.q_plus / q.q_minus;
      rm.min_drift_ratio = rm.min_drift_ratio ? std::min(*rm.min_drift_ratio, ratio) : ratio;
    }
  }
  return rm;
}

MetastabilityReport MetastabilityAnalyzer::aggregate(std::vector<RunMetrics> runs) const {
  MetastabilityReport rep;
  rep.landscape = landscape_;
  rep.warnings = landscape_.warnings;
  rep.warnings.insert(rep.warnings.end(), ess_.warnings.begin(), ess_.warnings.end());

  const std::size_t P = landscape_.points.size(), D = opts_.deltas.size(), G = opts_.gammas.size();
  std::size_t non_interior = 0, absorbed = 0;
  std::vector<double> taus;
  std::vector<std::vector<double>> tg(G);
  std::vector<std::vector<std::vector<double>>> durations(P, std::vector<std::vector<double>>(D));
  rep.censored_fraction.assign(P, std::vector<double>(D, 0.0));
  for (const auto& rm : runs) {
    if (rm.tau) {
      ++absorbed;
      taus.push_back(*rm.tau);
    }
    if (!rm.full_support_start) ++non_interior;
    for (std::size_t g = 0; g < G; ++g) tg[g].push_back(rm.time_near_ess[g]);
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t d = 0; d < D; ++d) {
        if (rm.exits[p][d]) durations[p][d].push_back(rm.exits[p][d]->duration());
        else rep.censored_fraction[p][d] += 1.0;
      }
    rep.drift_violations += rm.drift_violations;
    if (rm.min_drift_ratio)
      rep.min_drift_ratio =
          rep.min_drift_ratio ? std::min(*rep.min_drift_ratio, *rm.min_drift_ratio) : *rm.min_drift_ratio;
  }
  const double R = std::max<double>(1.0, static_cast<double>(runs.size()));
  rep.absorbed_fraction = static_cast<double>(absorbed) / R;
  rep.tau = quantiles(taus);
  for (auto& v : tg) rep.time_near_ess.push_back(quantiles(v));
  rep.exit_durations.assign(P, std::vector<Quantiles>(D));
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t d = 0; d < D; ++d) {
      rep.exit_durations[p][d] = quantiles(durations[p][d]);
      rep.censored_fraction[p][d] /= R;
    }
  if (non_interior > 0)
    rep.warnings.push_back(std::to_string(non_interior) +
                           " run(s) start without full support; absorption/metastability "
                           "statements assume an interior initial type");
  rep.runs = std::move(runs);
  return rep;
}

MetastabilityReport metastability_report(const std::vector<Trajectory>& runs,
                                         const Landscape& landscape, const Game& game,
                                         const ImitationRule& rule,
                                         const MetastabilityOptions& opts) {
  MetastabilityAnalyzer analyzer(landscape, game, rule, opts);
  std::vector<RunMetrics> metrics;
  metrics.reserve(runs.size());
  for (const auto& t : runs) metrics.push_back(analyzer.measure(t));
  return analyzer.aggregate(std::move(metrics));
}

} // namespace imitodyn
