#include "gsbm/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gsbm {

namespace {

bool strictly_inside_unit(double v) { return v > 0.0 && v < 1.0; }

double interpolate(const std::vector<Knot>& knots, double t) {
  auto hi = std::upper_bound(knots.begin(), knots.end(), t,
                             [](double x, const Knot& k) { return x < k.t; });
  if (hi == knots.begin()) return knots.front().value;
  if (hi == knots.end()) return knots.back().value;
  auto lo = std::prev(hi);
  const double w = (t - lo->t) / (hi->t - lo->t);
  return lo->value + w * (hi->value - lo->value);
}

void check_knots(const std::vector<Knot>& knots, double r, const char* which) {
  if (knots.size() < 2) {
    throw ProfileError(std::string(which) + ": need at least two knots");
  }
  if (knots.front().t != 0.0 || knots.back().t != r) {
    throw ProfileError(std::string(which) + ": knots must start at 0 and end at r");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].t > knots[i - 1].t)) {
      throw ProfileError(std::string(which) + ": knot abscissas must be strictly increasing");
    }
  }
  for (const auto& k : knots) {
    if (!strictly_inside_unit(k.value)) {
      throw ProfileError(std::string(which) + ": edge probability outside (0, 1)");
    }
  }
}

// Closed sub-interval of [lo, hi] on which a linear function running from
// d_lo to d_hi stays within [-eps, eps]. Empty when first > second.
std::pair<double, double> band(double lo, double hi, double d_lo, double d_hi, double eps) {
  const double slope = (d_hi - d_lo) / (hi - lo);
  if (slope == 0.0) {
    if (std::abs(d_lo) <= eps) return {lo, hi};
    return {1.0, 0.0};
  }
  double a = lo + (-eps - d_lo) / slope;
  double b = lo + (eps - d_lo) / slope;
  if (a > b) std::swap(a, b);
  return {std::max(a, lo), std::min(b, hi)};
}

}  // namespace

double Profile::Segment::in_at(double t) const {
  if (constant || hi == lo) return in_lo;
  return in_lo + (in_hi - in_lo) * ((t - lo) / (hi - lo));
}

double Profile::Segment::out_at(double t) const {
  if (constant || hi == lo) return out_lo;
  return out_lo + (out_hi - out_lo) * ((t - lo) / (hi - lo));
}

Profile Profile::step(double a, double b, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ProfileError("support cutoff r must be positive and finite");
  if (!strictly_inside_unit(a) || !strictly_inside_unit(b)) {
    throw ProfileError("edge probability outside (0, 1)");
  }
  if (a == b) throw ProfileError("degenerate profile: f_in = f_out everywhere");
  Profile p;
  p.spec_ = StepSpec{a, b, r};
  p.r_ = r;
  p.segments_.push_back(Segment{0.0, r, a, a, b, b, true, {}});
  p.finalize();
  return p;
}

Profile Profile::piecewise_linear(std::vector<Knot> knots_in, std::vector<Knot> knots_out, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ProfileError("support cutoff r must be positive and finite");
  check_knots(knots_in, r, "f_in");
  check_knots(knots_out, r, "f_out");

  std::vector<double> cuts;
  for (const auto& k : knots_in) cuts.push_back(k.t);
  for (const auto& k : knots_out) cuts.push_back(k.t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Profile p;
  p.r_ = r;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    Segment s{lo,
              hi,
              interpolate(knots_in, lo),
              interpolate(knots_in, hi),
              interpolate(knots_out, lo),
              interpolate(knots_out, hi),
              false,
              {}};
    s.constant = s.in_lo == s.in_hi && s.out_lo == s.out_hi;
    p.segments_.push_back(s);
  }
  p.spec_ = PwlSpec{std::move(knots_in), std::move(knots_out), r};
  p.finalize();
  return p;
}

Profile Profile::from_spec(const ProfileSpec& spec) {
  return std::visit(
      [](const auto& s) -> Profile {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StepSpec>) {
          return Profile::step(s.a, s.b, s.r);
        } else {
          return Profile::piecewise_linear(s.knots_in, s.knots_out, s.r);
        }
      },
      spec);
}

void Profile::finalize() {
  double extreme = 1.0;
  for (const auto& s : segments_) {
    for (double v : {s.in_lo, s.in_hi, s.out_lo, s.out_hi}) extreme = std::min({extreme, v, 1.0 - v});
  }
  xi_ = extreme / 2.0;

  for (auto& s : segments_) {
    if (s.constant) {
      s.logs = LogRatios{std::log(s.in_lo / s.out_lo), std::log((1.0 - s.in_lo) / (1.0 - s.out_lo))};
    }
  }

  intersections_.clear();
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    const bool last = i + 1 == segments_.size();
    const double d_lo = s.diff_lo();
    const double d_hi = s.diff_hi();
    const bool zero_lo = std::abs(d_lo) <= kIntersectionTolerance;
    const bool zero_hi = std::abs(d_hi) <= kIntersectionTolerance;
    if (zero_lo && zero_hi) {
      throw ProfileError("f_in and f_out coincide on an interval of positive length");
    }
    if (zero_lo) {
      intersections_.push_back(s.lo);
    } else if (zero_hi) {
      if (last) intersections_.push_back(s.hi);
    } else if ((d_lo < 0.0) != (d_hi < 0.0)) {
      intersections_.push_back(s.lo + (s.hi - s.lo) * (d_lo / (d_lo - d_hi)));
    }
  }
  std::sort(intersections_.begin(), intersections_.end());
  intersections_.erase(std::unique(intersections_.begin(), intersections_.end(),
                                   [](double a, double b) { return b - a <= kIntersectionTolerance; }),
                       intersections_.end());
}

const Profile::Segment& Profile::segment_for(double t) const {
  if (segments_.size() == 1) return segments_.front();
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double x, const Segment& s) { return x < s.lo; });
  if (it == segments_.begin()) return segments_.front();
  return *std::prev(it);
}

std::vector<double> Profile::breakpoints() const {
  std::vector<double> out;
  out.reserve(segments_.size() + 1);
  for (const auto& s : segments_) out.push_back(s.lo);
  out.push_back(r_);
  return out;
}

EdgeProbabilities Profile::eval(double t) const {
  if (t > r_) return {};
  const auto& s = segment_for(t);
  return {s.in_at(t), s.out_at(t)};
}

LogRatios Profile::log_ratios(double t) const {
  if (t > r_) return {};
  const auto& s = segment_for(t);
  if (s.constant) return s.logs;
  const double in = s.in_at(t);
  const double out = s.out_at(t);
  return {std::log(in / out), std::log((1.0 - in) / (1.0 - out))};
}

bool Profile::distinguishes(double t, double eps) const { return std::abs(eval(t).diff()) > eps; }

double Profile::max_abs_diff() const {
  double m = 0.0;
  for (const auto& s : segments_) m = std::max({m, std::abs(s.diff_lo()), std::abs(s.diff_hi())});
  return m;
}

double Profile::indistinct_measure(double eps) const {
  double total = 0.0;
  for (const auto& s : segments_) {
    auto [a, b] = band(s.lo, s.hi, s.diff_lo(), s.diff_hi(), eps);
    if (a <= b) total += b - a;
  }
  return total;
}

double Profile::gamma(double eps) const {
  double sup = 0.0;
  bool any = false;
  for (const auto& s : segments_) {
    auto [a, b] = band(s.lo, s.hi, s.diff_lo(), s.diff_hi(), eps);
    if (a > b) continue;
    if (intersections_.empty()) throw ProfileError("gamma undefined: no intersection points");
    any = true;
    auto dist = [&](double t) {
      double best = std::numeric_limits<double>::infinity();
      for (double x : intersections_) best = std::min(best, std::abs(t - x));
      return best;
    };
    sup = std::max({sup, dist(a), dist(b)});
    for (std::size_t i = 0; i + 1 < intersections_.size(); ++i) {
      const double mid = 0.5 * (intersections_[i] + intersections_[i + 1]);
      if (mid >= a && mid <= b) sup = std::max(sup, dist(mid));
    }
  }
  return any ? sup : 0.0;
}

double Profile::default_epsilon() const {
  constexpr int kGrid = 16;
  const double top = max_abs_diff() / 2.0;
  const double bottom = max_abs_diff() / 256.0;
  for (int k = kGrid - 1; k >= 0; --k) {
    const double eps = k == kGrid - 1 ? top : bottom * std::pow(top / bottom, double(k) / (kGrid - 1));
    if (indistinct_measure(eps) < r_ / 4.0) return eps;
  }
  return bottom;
}

double distance_scale(double n, int d) {
  if (d < 1) throw std::invalid_argument("invalid dimension");
  if (!(n > 1.0)) throw std::invalid_argument("invalid scale: n must exceed 1");
  return std::pow(std::log(n), 1.0 / d);
}

EdgeProbabilities eval_scaled(const Profile& profile, double distance, double n, int d) {
  return profile.eval(distance / distance_scale(n, d));
}

ScaledProfile::ScaledProfile(const Profile& profile, double n, int d)
    : profile_(&profile), scale_(distance_scale(n, d)), radius_(profile.r() * scale_) {}

}  // namespace gsbm
