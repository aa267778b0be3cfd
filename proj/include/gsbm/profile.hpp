#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gsbm {

class ProfileError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Knot {
  double t;
  double value;
  friend bool operator==(const Knot&, const Knot&) = default;
};

struct StepSpec {
  double a;
  double b;
  double r;
  friend bool operator==(const StepSpec&, const StepSpec&) = default;
};

struct PwlSpec {
  std::vector<Knot> knots_in;
  std::vector<Knot> knots_out;
  double r;
  friend bool operator==(const PwlSpec&, const PwlSpec&) = default;
};

/// How a profile was built; kept so it can be serialized back verbatim.
using ProfileSpec = std::variant<StepSpec, PwlSpec>;

struct EdgeProbabilities {
  double in = 0.0;
  double out = 0.0;
  double diff() const { return in - out; }
};

/// Log-likelihood ratios of one pair observation: log(f_in/f_out) when the
/// edge is present, log((1-f_in)/(1-f_out)) when it is absent.
struct LogRatios {
  double edge = 0.0;
  double no_edge = 0.0;
};

/// Edge-probability pair (f_in, f_out) on [0, r], zero beyond r.
///
/// Both functions are piecewise linear (constant pieces included) over a
/// shared list of segments. Segments are left-closed/right-open, except that
/// the last one also owns t = r. Instances are immutable once built.
class Profile {
 public:
  /// f_in = a, f_out = b on [0, r]. Throws ProfileError when a == b or a
  /// value is outside (0, 1).
  static Profile step(double a, double b, double r);

  /// Linear interpolation of each knot list. Abscissas must be strictly
  /// increasing from 0 to r.
  static Profile piecewise_linear(std::vector<Knot> knots_in, std::vector<Knot> knots_out, double r);

  static Profile from_spec(const ProfileSpec& spec);

  double r() const { return r_; }
  double xi() const { return xi_; }
  std::span<const double> intersections() const { return intersections_; }
  const ProfileSpec& spec() const { return spec_; }

  /// Segment boundaries, starting at 0 and ending at r.
  std::vector<double> breakpoints() const;

  EdgeProbabilities eval(double t) const;
  LogRatios log_ratios(double t) const;

  /// true iff |f_in(t) - f_out(t)| > eps.
  bool distinguishes(double t, double eps) const;

  /// Largest distance from an intersection point among the t in [0, r] with
  /// |f_in(t) - f_out(t)| <= eps. Zero when no such t exists; throws when
  /// such t exist but there are no intersection points.
  double gamma(double eps) const;

  /// Lebesgue measure of {t in [0, r] : |f_in(t) - f_out(t)| <= eps}.
  double indistinct_measure(double eps) const;

  /// max over [0, r] of |f_in - f_out|.
  double max_abs_diff() const;

  /// Largest candidate on a 16-point log grid in [max|diff|/256, max|diff|/2]
  /// whose indistinct set has measure below r/4; the smallest candidate
  /// otherwise.
  double default_epsilon() const;

  friend bool operator==(const Profile& a, const Profile& b) { return a.spec_ == b.spec_; }

 private:
  struct Segment {
    double lo, hi;
    double in_lo, in_hi;
    double out_lo, out_hi;
    bool constant;
    LogRatios logs;  // valid when constant

    double in_at(double t) const;
    double out_at(double t) const;
    double diff_lo() const { return in_lo - out_lo; }
    double diff_hi() const { return in_hi - out_hi; }
  };

  Profile() = default;
  void finalize();
  const Segment& segment_for(double t) const;

  ProfileSpec spec_;
  double r_ = 0.0;
  double xi_ = 0.0;
  std::vector<Segment> segments_;
  std::vector<double> intersections_;
};

constexpr double kIntersectionTolerance = 1e-12;

/// f evaluated at distance / (log n)^{1/d}.
EdgeProbabilities eval_scaled(const Profile& profile, double distance, double n, int d);

/// The distance scale (log n)^{1/d}; throws for n <= 1 or d < 1.
double distance_scale(double n, int d);

/// Profile bound to a graph's length scale, for hot loops over distances.
class ScaledProfile {
 public:
  ScaledProfile(const Profile& profile, double n, int d);

  EdgeProbabilities eval(double distance) const { return profile_->eval(unscale(distance)); }
  LogRatios log_ratios(double distance) const { return profile_->log_ratios(unscale(distance)); }
  bool distinguishes(double distance, double eps) const {
    return profile_->distinguishes(unscale(distance), eps);
  }
  /// r (log n)^{1/d}.
  double visibility_radius() const { return radius_; }
  double scale() const { return scale_; }
  const Profile& profile() const { return *profile_; }

  /// distance / (log n)^{1/d}; a distance inside the closed visibility radius
  /// never maps past r through rounding.
  double unscale(double distance) const {
    const double t = distance / scale_;
    return (distance <= radius_ && t > profile_->r()) ? profile_->r() : t;
  }

 private:
  const Profile* profile_;
  double scale_;
  double radius_;
};

}  // namespace gsbm
