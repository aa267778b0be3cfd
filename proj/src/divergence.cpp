#include "gsbm/divergence.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gsbm/geometry.hpp"

namespace gsbm {

namespace {

GaussLegendre compute_gauss_legendre(int points) {
  GaussLegendre rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

struct PanelIntegrator {
  const std::function<double(double)>& integrand;
  const GaussLegendre& coarse;
  const GaussLegendre& fine;
  Quadrature total;

  double apply(const GaussLegendre& rule, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * integrand(mid + half * rule.nodes[i]);
    return half * sum;
  }

  void run(double a, double b, double width_scale, int depth) {
    const double q_coarse = apply(coarse, a, b);
    const double q_fine = apply(fine, a, b);
    const double gap = std::abs(q_fine - q_coarse);
    if (gap <= 1e-13 * std::abs(q_fine) + 1e-16 * (b - a) / width_scale || depth >= 20) {
      total.value += q_fine;
      total.error += gap;
      return;
    }
    const double mid = 0.5 * (a + b);
    run(a, mid, width_scale, depth + 1);
    run(mid, b, width_scale, depth + 1);
  }
};

double objective_half_sum(const Profile& profile, int d, double t) {
  return radial_integral(profile, d, [t](double fin, double fout) {
           const double s = 1.0 - t;
           return std::pow(fin, t) * std::pow(fout, s) + std::pow(fout, t) * std::pow(fin, s) +
                  std::pow(1.0 - fin, t) * std::pow(1.0 - fout, s) + std::pow(1.0 - fout, t) * std::pow(1.0 - fin, s);
         }).value /
         2.0;
}

void check_pmf(const std::vector<double>& pmf, const char* what) {
  double sum = 0.0;
  for (double x : pmf) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " has a negative or non-finite entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument(std::string(what) + " is not normalized");
}

}  // namespace

const GaussLegendre& gauss_legendre(int points) {
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  if (points < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one point");
  std::lock_guard lock(mutex);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, compute_gauss_legendre(points)).first;
  return it->second;
}

Quadrature radial_integral(const Profile& profile, int d, const std::function<double(double, double)>& h) {
  if (d < 1) throw std::invalid_argument("invalid dimension");
  const double r = profile.r();
  const double norm = d / std::pow(r, d);
  const std::function<double(double)> integrand = [&](double t) {
    const EdgeProbabilities f = profile.eval(t);
    return h(f.in, f.out) * norm * std::pow(t, d - 1);
  };
  PanelIntegrator integrator{integrand, gauss_legendre(16), gauss_legendre(32), {}};
  const std::vector<double> knots = profile.breakpoints();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) integrator.run(knots[i], knots[i + 1], r, 0);
  if (!std::isfinite(integrator.total.value)) throw std::runtime_error("quadrature did not converge");
  return integrator.total;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double left_end = lo;
  const double right_end = hi;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  double best = 0.5 * (lo + hi);
  double best_value = f(best);
  for (double end : {left_end, right_end}) {
    const double value = f(end);
    if (value < best_value) {
      best = end;
      best_value = value;
    }
  }
  return best;
}

DivergenceReport information_metric(const Profile& profile, double lambda, int d) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double mass = lambda * unit_ball_volume(d) * std::pow(profile.r(), d);
  const Quadrature q = radial_integral(profile, d, [](double fin, double fout) {
    return 1.0 - std::sqrt(fin * fout) - std::sqrt((1.0 - fin) * (1.0 - fout));
  });
  const ChDivergence ch = ch_divergence_profile(profile, d);
  return DivergenceReport{mass * q.value, ch.value, ch.t_star, mass * q.error};
}

ChDivergence ch_divergence_discrete(const std::vector<std::vector<double>>& p,
                                    const std::vector<std::vector<double>>& q, const std::vector<double>& pi) {
  if (p.size() != q.size() || p.size() != pi.size() || p.empty()) {
    throw std::invalid_argument("p, q and pi must have the same nonzero length");
  }
  check_pmf(pi, "pi");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].size() != q[i].size()) throw std::invalid_argument("p and q must share an alphabet");
    check_pmf(p[i], "p");
    check_pmf(q[i], "q");
  }
  const auto objective = [&](double t) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      double inner = 0.0;
      for (std::size_t x = 0; x < p[i].size(); ++x) inner += std::pow(p[i][x], t) * std::pow(q[i][x], 1.0 - t);
      total += pi[i] * inner;
    }
    return total;
  };
  const double t_star = golden_section_minimize(objective, 0.0, 1.0);
  return ChDivergence{1.0 - objective(t_star), t_star};
}

ChDivergence ch_divergence_profile(const Profile& profile, int d) {
  const auto objective = [&](double t) { return objective_half_sum(profile, d, t); };
  const double t_star = golden_section_minimize(objective, 0.0, 1.0);
  return ChDivergence{1.0 - objective(t_star), t_star};
}

double mgf_P(const Profile& profile, int d, double t) {
  return radial_integral(profile, d, [t](double fin, double fout) {
           return std::pow(fin, t) * std::pow(fout, 1.0 - t) + std::pow(1.0 - fin, t) * std::pow(1.0 - fout, 1.0 - t);
         }).value;
}

double mgf_Q(const Profile& profile, int d, double t) {
  return radial_integral(profile, d, [t](double fin, double fout) {
           return std::pow(fout, t) * std::pow(fin, 1.0 - t) + std::pow(1.0 - fout, t) * std::pow(1.0 - fin, 1.0 - t);
         }).value;
}

double rate_function_zero(const Profile& profile, int d) {
  return -std::log(radial_integral(profile, d, [](double fin, double fout) {
                     return std::sqrt(fin * fout) + std::sqrt((1.0 - fin) * (1.0 - fout));
                   }).value);
}

ZSample sample_Z(const Profile& profile, int d, std::uint64_t n_plus, std::uint64_t n_minus, Rng& rng) {
  const double r = profile.r();
  const double inv_d = 1.0 / d;
  ZSample out{0.0, n_plus, n_minus};
  for (std::uint64_t i = 0; i < n_plus + n_minus; ++i) {
    const double distance = r * std::pow(rng.uniform(), inv_d);
    const EdgeProbabilities f = profile.eval(distance);
    const LogRatios logs = profile.log_ratios(distance);
    if (i < n_plus) {
      out.value += rng.uniform() < f.out ? logs.edge : logs.no_edge;
    } else {
      out.value -= rng.uniform() < f.in ? logs.edge : logs.no_edge;
    }
  }
  return out;
}

ZSample sample_Z(const Profile& profile, double lambda, int d, double n, Rng& rng) {
  if (!(n > 1.0)) throw std::invalid_argument("invalid scale: n must exceed 1");
  const double half_mean = lambda * unit_ball_volume(d) * std::pow(profile.r(), d) * std::log(n) / 2.0;
  std::poisson_distribution<std::uint64_t> count(half_mean);
  const std::uint64_t n_plus = count(rng);
  const std::uint64_t n_minus = count(rng);
  return sample_Z(profile, d, n_plus, n_minus, rng);
}

}  // namespace gsbm
