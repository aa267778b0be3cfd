#pragma once

// Seeded generators and brute-force reference implementations shared by the
// unit and acceptance tests. Nothing here calls the code it is compared to
// beyond the plain profile evaluation and the graph accessors.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <vector>

#include "gsbm/geometry.hpp"
#include "gsbm/profile.hpp"
#include "gsbm/rng.hpp"
#include "gsbm/sampler.hpp"

namespace testing {

using namespace gsbm;

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

/// Continuous piecewise-linear profile with 2-5 knots per side and values in
/// [0.05, 0.95]. Rejects candidates whose largest gap is under 0.3.
inline Profile random_pwl_profile(Rng& rng) {
  while (true) {
    const double r = uniform(rng, 0.5, 2.0);
    auto knots = [&] {
      const int count = 2 + static_cast<int>(rng() % 4);
      std::vector<double> ts{0.0, r};
      for (int i = 2; i < count; ++i) ts.push_back(uniform(rng, 0.05, 0.95) * r);
      std::sort(ts.begin(), ts.end());
      std::vector<Knot> out;
      for (double t : ts) out.push_back({t, uniform(rng, 0.05, 0.95)});
      return out;
    };
    try {
      Profile p = Profile::piecewise_linear(knots(), knots(), r);
      if (p.max_abs_diff() >= 0.3) return p;
    } catch (const ProfileError&) {
    }
  }
}

/// Midpoint rule with `panels` uniform panels for the radially weighted
/// integral of h over [0, r].
inline double riemann_radial(const Profile& p, int d, const std::function<double(double, double)>& h,
                             int panels = 1'000'000) {
  const double r = p.r();
  const double width = r / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double t = (i + 0.5) * width;
    const auto f = p.eval(t);
    sum += h(f.in, f.out) * d * std::pow(t, d - 1) / std::pow(r, d);
  }
  return sum * width;
}

/// Argmin of f over the grid {0, step, 2 step, ..., 1}.
inline double grid_argmin(const std::function<double(double)>& f, double step = 1e-4) {
  const int count = static_cast<int>(std::lround(1.0 / step));
  double best = 0.0;
  double best_value = f(0.0);
  for (int i = 1; i <= count; ++i) {
    const double t = i * step;
    const double v = f(t);
    if (v < best_value) {
      best = t;
      best_value = v;
    }
  }
  return best;
}

inline double brute_distance(const GsbmGraph& g, VertexId u, VertexId v) {
  double acc = 0.0;
  for (int k = 0; k < g.d(); ++k) {
    double sep = std::fabs(g.position(u)[k] - g.position(v)[k]);
    sep = std::min(sep, g.box().side - sep);
    acc += sep * sep;
  }
  return std::sqrt(acc);
}

inline EdgeProbabilities brute_f(const GsbmGraph& g, double dist) {
  const double t = dist / std::pow(std::log(g.n()), 1.0 / g.d());
  if (dist <= g.visibility_radius() && t > g.profile().r()) return g.profile().eval(g.profile().r());
  return g.profile().eval(t);
}

inline bool brute_edge(const GsbmGraph& g, VertexId u, VertexId v) {
  for (VertexId w : g.neighbors(u)) {
    if (w == v) return true;
  }
  return false;
}

inline double brute_sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

/// Common-neighbor statistic, written from the two conditional
/// probabilities rather than their closed forms.
inline double brute_X(const GsbmGraph& g, const std::vector<VertexId>& block, VertexId u0, VertexId v) {
  double x = 0.0;
  for (VertexId u : block) {
    if (u == u0 || u == v) continue;
    const auto a = brute_f(g, brute_distance(g, u, u0));
    const auto b = brute_f(g, brute_distance(g, u, v));
    const double same = 0.5 * (a.in * b.in + a.out * b.out);
    const double diff = 0.5 * (a.in * b.out + a.out * b.in);
    const double alpha = brute_sign(same - diff);
    const double observed = (brute_edge(g, u, u0) && brute_edge(g, u, v)) ? 1.0 : 0.0;
    x += alpha * (observed - 0.5 * (same + diff));
  }
  return x;
}

inline double brute_Y(const GsbmGraph& g, const std::vector<VertexId>& parent, const std::vector<Label>& labels,
                      VertexId v, double eps) {
  int plus = 0, minus = 0;
  for (VertexId u : parent) {
    const auto f = brute_f(g, brute_distance(g, u, v));
    if (std::fabs(f.in - f.out) > eps) (labels[u] > 0 ? plus : minus) += labels[u] != 0;
  }
  const int group = plus >= minus ? 1 : -1;
  double y = 0.0;
  for (VertexId u : parent) {
    if (labels[u] != group) continue;
    const auto f = brute_f(g, brute_distance(g, u, v));
    if (!(std::fabs(f.in - f.out) > eps)) continue;
    const double beta = group > 0 ? brute_sign(f.in - f.out) : brute_sign(f.out - f.in);
    y += beta * ((brute_edge(g, u, v) ? 1.0 : 0.0) - 0.5 * (f.in + f.out));
  }
  return y;
}

inline double brute_tau(const GsbmGraph& g, const std::vector<Label>& sigma, VertexId v) {
  double total = 0.0;
  double magnitude = 0.0;
  for (VertexId u = 0; u < g.size(); ++u) {
    if (u == v || sigma[u] == 0) continue;
    const double dist = brute_distance(g, u, v);
    if (dist > g.visibility_radius()) continue;
    const auto f = brute_f(g, dist);
    const double term = brute_edge(g, u, v) ? std::log(f.in / f.out) : std::log((1 - f.in) / (1 - f.out));
    total += sigma[u] * term;
    magnitude += std::fabs(term);
  }
  return std::fabs(total) <= 1e-12 * magnitude ? 0.0 : total;
}

/// Components of the graph joining pairs at distance <= radius, by BFS over
/// all pairs.
inline int brute_components(const GsbmGraph& g) {
  const std::size_t n = g.size();
  std::vector<int> comp(n, -1);
  int count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(s);
    comp[s] = count;
    while (!q.empty()) {
      const std::size_t x = q.front();
      q.pop();
      for (std::size_t y = 0; y < n; ++y) {
        if (comp[y] < 0 && brute_distance(g, x, y) <= g.visibility_radius()) {
          comp[y] = count;
          q.push(y);
        }
      }
    }
    ++count;
  }
  return count;
}

inline std::vector<int> brute_component_ids(const GsbmGraph& g) {
  const std::size_t n = g.size();
  std::vector<int> comp(n, -1);
  int count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = count;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y = 0; y < n; ++y) {
        if (comp[y] < 0 && brute_distance(g, x, y) <= g.visibility_radius()) {
          comp[y] = count;
          stack.push_back(y);
        }
      }
    }
    ++count;
  }
  return comp;
}

/// Graph with explicit positions, labels and edges.
inline GsbmGraph make_graph(int d, double n, const Profile& profile, std::vector<double> positions,
                            std::vector<Label> labels, std::vector<Edge> edges, double lambda = 1.0) {
  return GsbmGraph(TorusBox::from_volume(d, n), lambda, profile, 0, std::move(positions), std::move(labels),
                   std::move(edges));
}

}  // namespace testing
