#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gsbm/profile.hpp"
#include "gsbm/rng.hpp"

namespace gsbm {

struct DivergenceReport {
  double I = 0.0;
  double D_plus = 0.0;
  double t_star = 0.5;
  double quad_error = 0.0;
};

struct ChDivergence {
  double value = 0.0;
  double t_star = 0.5;
};

struct Quadrature {
  double value = 0.0;
  double error = 0.0;  // sum over panels of |Q16 - Q32|
};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int points);

/// Integral over [0, r] of h(f_in(t), f_out(t)) * d t^{d-1} / r^d.
///
/// Each profile segment is integrated with 16- and 32-point Gauss-Legendre;
/// panels where the two disagree beyond 1e-15 relative are bisected.
Quadrature radial_integral(const Profile& profile, int d, const std::function<double(double, double)>& h);

/// Minimizer of a convex function on [lo, hi] by golden-section search down
/// to an interval of width `tol`; the endpoints are compared as well.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10);

DivergenceReport information_metric(const Profile& profile, double lambda, int d);

/// 1 - min over t in [0, 1] of sum_i pi_i sum_x p_i(x)^t q_i(x)^{1-t}.
/// Each p_i and q_i must sum to 1 within 1e-9, as must pi.
ChDivergence ch_divergence_discrete(const std::vector<std::vector<double>>& p,
                                    const std::vector<std::vector<double>>& q, const std::vector<double>& pi);

/// The divergence with the radial weight, for the symmetric two-community
/// prior: 1 - min_t (mgf_P(t) + mgf_Q(t)) / 2.
ChDivergence ch_divergence_profile(const Profile& profile, int d);

/// E[e^{tP}] where P = log(f_in/f_out)(D) on an edge and
/// log((1-f_in)/(1-f_out))(D) otherwise, the edge drawn with f_out(D).
double mgf_P(const Profile& profile, int d, double t);
/// Same with the roles of f_in and f_out exchanged; mgf_Q(t) = mgf_P(1 - t).
double mgf_Q(const Profile& profile, int d, double t);

/// -log of the integral of sqrt(f_in f_out) + sqrt((1-f_in)(1-f_out)).
double rate_function_zero(const Profile& profile, int d);

struct ZSample {
  double value = 0.0;
  std::uint64_t n_plus = 0;
  std::uint64_t n_minus = 0;
};

/// Sum of n_plus draws of P and n_minus draws of Q.
ZSample sample_Z(const Profile& profile, int d, std::uint64_t n_plus, std::uint64_t n_minus, Rng& rng);

/// As above with n_plus, n_minus ~ Pois(lambda nu_d r^d log n / 2) drawn
/// first from `rng`.
ZSample sample_Z(const Profile& profile, double lambda, int d, double n, Rng& rng);

}  // namespace gsbm
