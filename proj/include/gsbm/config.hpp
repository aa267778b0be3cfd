#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gsbm/profile.hpp"

namespace gsbm {

/// Invalid configuration text. `messages` holds one entry per problem,
/// prefixed with its line number where one applies.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
};

/// Failure to read or write a file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to exactly `x`.
std::string format_real(double x);
std::optional<double> parse_real(std::string_view text);

/// `{ kind = "step", a = 0.9, b = 0.1, r = 1 }` or
/// `{ kind = "pwl", knots_in = [[0, 0.9], [1, 0.1]], knots_out = [...], r = 1 }`.
std::string format_profile(const ProfileSpec& spec);
/// Parses and validates a profile literal; throws ConfigError.
Profile parse_profile(std::string_view text);

enum class Mode { metric, sample, recover, sweep, genie, flipbad, connectivity };

std::string_view mode_name(Mode mode);

struct ExperimentConfig {
  Mode mode = Mode::metric;
  int d = 1;
  std::optional<double> lambda;
  std::optional<double> r;
  std::optional<ProfileSpec> profile;
  std::vector<double> n;
  std::optional<double> chi;
  std::optional<double> chi0;
  std::optional<double> delta;
  std::optional<double> eps;
  double delta_factor = 0.5;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string graph;
  bool timing = false;
  bool resume = false;

  /// The support cutoff: the profile's r when a profile is given.
  double cutoff() const;
  Profile make_profile() const;
};

/// Parses flat `key = value` text (`#` starts a comment). Applies defaults,
/// checks types and ranges, and checks the keys each mode needs. All problems
/// are reported together in one ConfigError. With `check_modes` false the
/// per-mode key requirements are left to a later check_config call.
ExperimentConfig parse_config(std::string_view text, bool check_modes = true);

/// Text that parse_config maps back to an equal configuration.
std::string serialize_config(const ExperimentConfig& config);

/// Rejects configurations that an override (for example a command-line flag)
/// made invalid.
void check_config(const ExperimentConfig& config);

}  // namespace gsbm
