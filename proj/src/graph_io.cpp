#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gsbm/config.hpp"
#include "gsbm/sampler.hpp"

namespace gsbm {

namespace {

[[noreturn]] void bad(std::size_t line_no, const std::string& message) {
  throw std::invalid_argument("graph file line " + std::to_string(line_no) + ": " + message);
}

template <class Int>
Int parse_int(std::string_view text, std::size_t line_no, std::string_view what) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    bad(line_no, "malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return out;
}

double parse_double(std::string_view text, std::size_t line_no, std::string_view what) {
  const auto value = parse_real(text);
  if (!value) bad(line_no, "malformed " + std::string(what) + " '" + std::string(text) + "'");
  return *value;
}

std::string_view header_field(std::string_view token, std::string_view key, std::size_t line_no) {
  if (token.substr(0, key.size()) != key || token.size() <= key.size() || token[key.size()] != '=') {
    bad(line_no, "expected header field '" + std::string(key) + "='");
  }
  return token.substr(key.size() + 1);
}

}  // namespace

void write_graph(std::ostream& out, const GsbmGraph& graph) {
  out << "gsbm v1 d=" << graph.d() << " n=" << format_real(graph.n()) << " lambda=" << format_real(graph.lambda())
      << " r=" << format_real(graph.profile().r()) << " seed=" << graph.seed() << " count=" << graph.size() << '\n';
  out << "p " << format_profile(graph.profile().spec()) << '\n';
  std::string line;
  for (VertexId v = 0; v < graph.size(); ++v) {
    line = "v " + std::to_string(v);
    for (double x : graph.position(v)) {
      line += ' ';
      line += format_real(x);
    }
    line += graph.label(v) > 0 ? " 1\n" : " -1\n";
    out << line;
  }
  for (const auto& [lo, hi] : graph.edges()) out << "e " << lo << ' ' << hi << '\n';
  if (!out) throw std::runtime_error("failed writing graph");
}

GsbmGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw std::invalid_argument("graph file is empty");

  std::istringstream header(line);
  std::string tokens[8];
  for (auto& t : tokens) header >> t;
  if (tokens[0] != "gsbm" || tokens[1] != "v1") bad(line_no, "not a gsbm v1 graph file");
  const int d = parse_int<int>(header_field(tokens[2], "d", line_no), line_no, "d");
  const double n = parse_double(header_field(tokens[3], "n", line_no), line_no, "n");
  const double lambda = parse_double(header_field(tokens[4], "lambda", line_no), line_no, "lambda");
  const double r = parse_double(header_field(tokens[5], "r", line_no), line_no, "r");
  const auto seed = parse_int<std::uint64_t>(header_field(tokens[6], "seed", line_no), line_no, "seed");
  const auto count = parse_int<std::uint64_t>(header_field(tokens[7], "count", line_no), line_no, "count");
  const TorusBox box = TorusBox::from_volume(d, n);
  if (!(n > 1.0)) bad(line_no, "n must exceed 1");

  ++line_no;
  if (!std::getline(in, line) || line.rfind("p ", 0) != 0) bad(line_no, "expected the profile line 'p { ... }'");
  Profile profile = [&] {
    try {
      return parse_profile(std::string_view(line).substr(2));
    } catch (const ConfigError& e) {
      bad(line_no, e.what());
    }
  }();
  if (profile.r() != r) bad(line_no, "profile r disagrees with the header");

  std::vector<double> positions;
  std::vector<Label> labels;
  std::vector<Edge> edges;
  positions.reserve(count * d);
  labels.reserve(count);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (kind == "v") {
      if (!edges.empty()) bad(line_no, "vertex line after edge lines");
      std::string token;
      fields >> token;
      if (parse_int<std::uint64_t>(token, line_no, "vertex id") != labels.size()) {
        bad(line_no, "vertex ids must be consecutive from 0");
      }
      for (int k = 0; k < d; ++k) {
        fields >> token;
        const double x = parse_double(token, line_no, "coordinate");
        if (!(x >= 0.0 && x < box.side)) bad(line_no, "coordinate outside [0, side)");
        positions.push_back(x);
      }
      fields >> token;
      const int label = parse_int<int>(token, line_no, "label");
      if (label != 1 && label != -1) bad(line_no, "label must be 1 or -1");
      labels.push_back(static_cast<Label>(label));
    } else if (kind == "e") {
      std::string a, b;
      fields >> a >> b;
      const auto lo = parse_int<VertexId>(a, line_no, "vertex id");
      const auto hi = parse_int<VertexId>(b, line_no, "vertex id");
      if (!(lo < hi) || hi >= count) bad(line_no, "edge must satisfy lo < hi < count");
      edges.emplace_back(lo, hi);
    } else {
      bad(line_no, "unknown record '" + kind + "'");
    }
    std::string rest;
    if (fields >> rest) bad(line_no, "trailing fields");
  }
  if (labels.size() != count) throw std::invalid_argument("graph file has fewer vertices than its header states");

  GsbmGraph graph(box, lambda, std::move(profile), seed, std::move(positions), std::move(labels), std::move(edges));
  for (VertexId v = 0; v < graph.size(); ++v) {
    for (VertexId u : graph.neighbors(v)) {
      if (u > v && graph.distance(u, v) > graph.visibility_radius()) {
        throw std::invalid_argument("graph file has an edge longer than the visibility radius");
      }
    }
  }
  return graph;
}

}  // namespace gsbm
