#include "gsbm/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "gsbm/geometry.hpp"

namespace gsbm {

namespace {

std::string join_lines(const std::vector<std::string>& messages) {
  std::string out;
  for (const auto& m : messages) {
    if (!out.empty()) out += '\n';
    out += m;
  }
  return out;
}

struct Value {
  enum class Kind { number, string, boolean, list, table };
  Kind kind = Kind::number;
  std::string text;  // raw number text or string contents
  double number = 0.0;
  bool boolean = false;
  std::vector<Value> items;
  std::vector<std::pair<std::string, Value>> fields;
};

std::string_view kind_name(Value::Kind kind) {
  switch (kind) {
    case Value::Kind::number:
      return "number";
    case Value::Kind::string:
      return "string";
    case Value::Kind::boolean:
      return "boolean";
    case Value::Kind::list:
      return "list";
    case Value::Kind::table:
      return "table";
  }
  return "value";
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class ValueParser {
 public:
  explicit ValueParser(std::string_view text) : s_(text) {}

  Value parse_all() {
    Value v = parse_value();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected text after value: '" + std::string(s_.substr(pos_)) + "'");
    return v;
  }

 private:
  [[noreturn]] static void fail(const std::string& message) { throw std::invalid_argument(message); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !is_ident_start(s_[pos_])) fail("expected a key name");
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Value parse_value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected a value");
    const char c = s_[pos_];
    if (c == '[') return parse_list();
    if (c == '{') return parse_table();
    if (c == '"') return parse_string();
    if (is_ident_start(c)) {
      const std::string word = identifier();
      Value v;
      v.kind = Value::Kind::boolean;
      if (word == "true") {
        v.boolean = true;
      } else if (word != "false") {
        fail("expected a value, found '" + word + "' (strings need double quotes)");
      }
      return v;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == '-' || s_[pos_] == '+' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
    }
    Value v;
    v.text = std::string(s_.substr(start, pos_ - start));
    const auto parsed = parse_real(v.text);
    if (v.text.empty() || !parsed) fail("malformed number '" + v.text + "'");
    v.number = *parsed;
    return v;
  }

  Value parse_string() {
    ++pos_;
    Value v;
    v.kind = Value::Kind::string;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= s_.size()) fail("unterminated string");
        v.text += s_[pos_++];
      } else {
        v.text += c;
      }
    }
    return v;
  }

  Value parse_list() {
    ++pos_;
    Value v;
    v.kind = Value::Kind::list;
    if (consume(']')) return v;
    do {
      v.items.push_back(parse_value());
    } while (consume(','));
    expect(']');
    return v;
  }

  Value parse_table() {
    ++pos_;
    Value v;
    v.kind = Value::Kind::table;
    if (consume('}')) return v;
    do {
      std::string key = identifier();
      expect('=');
      for (const auto& field : v.fields) {
        if (field.first == key) fail("duplicate field '" + key + "'");
      }
      v.fields.emplace_back(std::move(key), parse_value());
    } while (consume(','));
    expect('}');
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void require_kind(const Value& v, Value::Kind kind, std::string_view what) {
  if (v.kind != kind) {
    throw std::invalid_argument(std::string(what) + " must be a " + std::string(kind_name(kind)) + ", found a " +
                                std::string(kind_name(v.kind)));
  }
}

double number_of(const Value& v, std::string_view what) {
  require_kind(v, Value::Kind::number, what);
  return v.number;
}

std::vector<Knot> knots_of(const Value& v, std::string_view what) {
  require_kind(v, Value::Kind::list, what);
  std::vector<Knot> knots;
  for (const Value& item : v.items) {
    require_kind(item, Value::Kind::list, std::string(what) + " entry");
    if (item.items.size() != 2) throw std::invalid_argument(std::string(what) + " entries must be [t, value] pairs");
    knots.push_back({number_of(item.items[0], what), number_of(item.items[1], what)});
  }
  return knots;
}

ProfileSpec profile_spec_of(const Value& v) {
  require_kind(v, Value::Kind::table, "profile");
  std::map<std::string, const Value*> fields;
  for (const auto& [key, value] : v.fields) fields[key] = &value;
  auto take = [&](const std::string& key) -> const Value& {
    auto it = fields.find(key);
    if (it == fields.end()) throw std::invalid_argument("profile is missing field '" + key + "'");
    const Value* value = it->second;
    fields.erase(it);
    return *value;
  };
  const Value& kind = take("kind");
  require_kind(kind, Value::Kind::string, "profile kind");
  ProfileSpec spec;
  if (kind.text == "step") {
    const double a = number_of(take("a"), "a");
    const double b = number_of(take("b"), "b");
    const double r = number_of(take("r"), "r");
    spec = StepSpec{a, b, r};
  } else if (kind.text == "pwl") {
    auto knots_in = knots_of(take("knots_in"), "knots_in");
    auto knots_out = knots_of(take("knots_out"), "knots_out");
    const double r = number_of(take("r"), "r");
    spec = PwlSpec{std::move(knots_in), std::move(knots_out), r};
  } else {
    throw std::invalid_argument("profile kind must be \"step\" or \"pwl\", found \"" + kind.text + "\"");
  }
  if (!fields.empty()) throw std::invalid_argument("profile has unknown field '" + fields.begin()->first + "'");
  Profile::from_spec(spec);  // validates; throws ProfileError
  return spec;
}

template <class Int>
Int integer_of(const Value& v, std::string_view what) {
  require_kind(v, Value::Kind::number, what);
  Int out{};
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument(std::string(what) + " must be an integer in range, found " + v.text);
  }
  return out;
}

const std::map<std::string, Mode>& mode_table() {
  static const std::map<std::string, Mode> table = {
      {"metric", Mode::metric}, {"sample", Mode::sample},   {"recover", Mode::recover},
      {"sweep", Mode::sweep},   {"genie", Mode::genie},     {"flipbad", Mode::flipbad},
      {"connectivity", Mode::connectivity}};
  return table;
}

std::string format_value_list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_real(values[i]);
  }
  return out + "]";
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : std::runtime_error(join_lines(messages)), messages_(std::move(messages)) {}

std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, ptr);
}

std::optional<double> parse_real(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return out;
}

std::string format_profile(const ProfileSpec& spec) {
  if (const auto* step = std::get_if<StepSpec>(&spec)) {
    return "{ kind = \"step\", a = " + format_real(step->a) + ", b = " + format_real(step->b) +
           ", r = " + format_real(step->r) + " }";
  }
  const auto& pwl = std::get<PwlSpec>(spec);
  auto knots = [](const std::vector<Knot>& list) {
    std::string out = "[";
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) out += ", ";
      out += "[" + format_real(list[i].t) + ", " + format_real(list[i].value) + "]";
    }
    return out + "]";
  };
  return "{ kind = \"pwl\", knots_in = " + knots(pwl.knots_in) + ", knots_out = " + knots(pwl.knots_out) +
         ", r = " + format_real(pwl.r) + " }";
}

Profile parse_profile(std::string_view text) {
  try {
    return Profile::from_spec(profile_spec_of(ValueParser(text).parse_all()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError({std::string("profile: ") + e.what()});
  }
}

std::string_view mode_name(Mode mode) {
  for (const auto& [name, m] : mode_table()) {
    if (m == mode) return name;
  }
  return "unknown";
}

double ExperimentConfig::cutoff() const {
  if (profile) return Profile::from_spec(*profile).r();
  if (r) return *r;
  throw std::logic_error("configuration has neither profile nor r");
}

Profile ExperimentConfig::make_profile() const {
  if (!profile) throw std::logic_error("configuration has no profile");
  return Profile::from_spec(*profile);
}

ExperimentConfig parse_config(std::string_view text, bool check_modes) {
  ExperimentConfig config;
  std::vector<std::string> errors;
  std::set<std::string> seen;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
      if (line[i] == '#' && !in_string) {
        line = line.substr(0, i);
        break;
      }
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(where + "expected 'key = value'");
      continue;
    }
    std::string_view key_view = line.substr(0, eq);
    while (!key_view.empty() && std::isspace(static_cast<unsigned char>(key_view.back()))) key_view.remove_suffix(1);
    const std::string key(key_view);
    if (key.empty() || !is_ident_start(key[0]) || !std::all_of(key.begin(), key.end(), is_ident_char)) {
      errors.push_back(where + "malformed key '" + key + "'");
      continue;
    }
    if (!seen.insert(key).second) {
      errors.push_back(where + "duplicate key '" + key + "'");
      continue;
    }

    try {
      const Value v = ValueParser(line.substr(eq + 1)).parse_all();
      auto positive = [&](double x) {
        if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(key + " must be positive, found " + format_real(x));
        return x;
      };
      if (key == "mode") {
        require_kind(v, Value::Kind::string, key);
        const auto it = mode_table().find(v.text);
        if (it == mode_table().end()) throw std::invalid_argument("unknown mode \"" + v.text + "\"");
        config.mode = it->second;
      } else if (key == "d") {
        const int d = integer_of<int>(v, key);
        if (d < 1 || d > kMaxDim) throw std::invalid_argument("d must be in [1, " + std::to_string(kMaxDim) + "]");
        config.d = d;
      } else if (key == "lambda") {
        config.lambda = positive(number_of(v, key));
      } else if (key == "r") {
        config.r = positive(number_of(v, key));
      } else if (key == "profile") {
        config.profile = profile_spec_of(v);
      } else if (key == "n") {
        std::vector<double> ns;
        if (v.kind == Value::Kind::list) {
          for (const Value& item : v.items) ns.push_back(number_of(item, "n entry"));
          if (ns.empty()) throw std::invalid_argument("n list must be nonempty");
        } else {
          ns.push_back(number_of(v, key));
        }
        for (double n : ns) {
          if (!(n > 1.0) || !std::isfinite(n)) throw std::invalid_argument("n must exceed 1, found " + format_real(n));
        }
        config.n = std::move(ns);
      } else if (key == "chi") {
        config.chi = positive(number_of(v, key));
      } else if (key == "chi0") {
        config.chi0 = positive(number_of(v, key));
      } else if (key == "delta") {
        const double delta = number_of(v, key);
        if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be nonnegative");
        config.delta = delta;
      } else if (key == "eps") {
        config.eps = positive(number_of(v, key));
      } else if (key == "delta_factor") {
        config.delta_factor = positive(number_of(v, key));
      } else if (key == "trials") {
        const int trials = integer_of<int>(v, key);
        if (trials < 1) throw std::invalid_argument("trials must be at least 1");
        config.trials = trials;
      } else if (key == "seed") {
        config.seed = integer_of<std::uint64_t>(v, key);
      } else if (key == "out") {
        require_kind(v, Value::Kind::string, key);
        config.out = v.text;
      } else if (key == "graph") {
        require_kind(v, Value::Kind::string, key);
        config.graph = v.text;
      } else if (key == "timing") {
        require_kind(v, Value::Kind::boolean, key);
        config.timing = v.boolean;
      } else if (key == "resume") {
        require_kind(v, Value::Kind::boolean, key);
        config.resume = v.boolean;
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      errors.push_back(where + e.what());
    }
  }

  if (!seen.count("mode")) errors.push_back("missing required key 'mode'");
  if (errors.empty() && check_modes) {
    try {
      check_config(config);
    } catch (const ConfigError& e) {
      errors.insert(errors.end(), e.messages().begin(), e.messages().end());
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return config;
}

void check_config(const ExperimentConfig& config) {
  std::vector<std::string> errors;
  const std::string mode(mode_name(config.mode));
  auto need = [&](bool present, std::string_view key) {
    if (!present) errors.push_back("mode \"" + mode + "\" requires key '" + std::string(key) + "'");
  };
  auto single_n = [&] {
    if (config.n.size() > 1) errors.push_back("mode \"" + mode + "\" takes a single n");
  };
  const bool has_graph = !config.graph.empty();

  switch (config.mode) {
    case Mode::metric:
      need(config.profile.has_value(), "profile");
      need(config.lambda.has_value(), "lambda");
      break;
    case Mode::sample:
      need(config.profile.has_value(), "profile");
      need(config.lambda.has_value(), "lambda");
      need(!config.n.empty(), "n");
      single_n();
      break;
    case Mode::recover:
      need(has_graph, "graph");
      need(config.chi.has_value(), "chi");
      need(config.delta.has_value(), "delta");
      break;
    case Mode::genie:
      if (!has_graph) {
        need(config.profile.has_value(), "profile");
        need(config.lambda.has_value(), "lambda");
        need(!config.n.empty(), "n");
        single_n();
      }
      break;
    case Mode::sweep:
      need(config.profile.has_value(), "profile");
      need(config.lambda.has_value(), "lambda");
      need(!config.n.empty(), "n");
      need(config.chi.has_value(), "chi");
      need(config.delta.has_value(), "delta");
      break;
    case Mode::flipbad:
      need(config.profile.has_value(), "profile");
      need(config.lambda.has_value(), "lambda");
      need(!config.n.empty(), "n");
      break;
    case Mode::connectivity:
      need(config.lambda.has_value(), "lambda");
      need(config.profile.has_value() || config.r.has_value(), "r");
      need(!config.n.empty(), "n");
      need(config.chi.has_value(), "chi");
      need(config.delta.has_value(), "delta");
      single_n();
      break;
  }
  if (config.profile && config.r && Profile::from_spec(*config.profile).r() != *config.r) {
    errors.push_back("r disagrees with the profile's r");
  }
  if (config.trials < 1) errors.push_back("trials must be at least 1");
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "mode = " << quote(mode_name(config.mode)) << '\n';
  out << "d = " << config.d << '\n';
  if (config.lambda) out << "lambda = " << format_real(*config.lambda) << '\n';
  if (config.r) out << "r = " << format_real(*config.r) << '\n';
  if (config.profile) out << "profile = " << format_profile(*config.profile) << '\n';
  if (config.n.size() == 1) out << "n = " << format_real(config.n[0]) << '\n';
  if (config.n.size() > 1) out << "n = " << format_value_list(config.n) << '\n';
  if (config.chi) out << "chi = " << format_real(*config.chi) << '\n';
  if (config.chi0) out << "chi0 = " << format_real(*config.chi0) << '\n';
  if (config.delta) out << "delta = " << format_real(*config.delta) << '\n';
  if (config.eps) out << "eps = " << format_real(*config.eps) << '\n';
  out << "delta_factor = " << format_real(config.delta_factor) << '\n';
  out << "trials = " << config.trials << '\n';
  out << "seed = " << config.seed << '\n';
  if (!config.out.empty()) out << "out = " << quote(config.out) << '\n';
  if (!config.graph.empty()) out << "graph = " << quote(config.graph) << '\n';
  out << "timing = " << (config.timing ? "true" : "false") << '\n';
  out << "resume = " << (config.resume ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace gsbm
