// Command-line front end. Exit codes: 0 success, 2 configuration error,
// 3 input/output error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gsbm/config.hpp"
#include "gsbm/experiments.hpp"
#include "gsbm/partition.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kIoError = 3;

struct Options {
  std::string config_path;
  std::string out;
  std::string graph;
  std::string summary;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  unsigned workers = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gsbm::IoError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// Output goes to a file when a path is given, else to stdout.
class Sink {
 public:
  explicit Sink(const std::string& path, bool append = false) {
    if (path.empty()) return;
    file_.open(path, append ? std::ios::app : std::ios::trunc);
    if (!file_) throw gsbm::IoError("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw gsbm::IoError("failed writing output");
  }

 private:
  std::ofstream file_;
};

int run(gsbm::Mode mode, const Options& options) {
  gsbm::ExperimentConfig config = gsbm::parse_config(read_file(options.config_path), false);
  if (config.mode != mode) {
    throw gsbm::ConfigError({"config mode \"" + std::string(gsbm::mode_name(config.mode)) +
                             "\" does not match subcommand \"" + std::string(gsbm::mode_name(mode)) + "\""});
  }
  if (!options.out.empty()) config.out = options.out;
  if (!options.graph.empty()) config.graph = options.graph;
  if (options.seed) config.seed = *options.seed;
  if (options.trials) config.trials = *options.trials;
  gsbm::check_config(config);

  switch (mode) {
    case gsbm::Mode::metric: {
      Sink out(config.out);
      gsbm::run_metric(config, out.stream());
      out.close();
      break;
    }
    case gsbm::Mode::sample: {
      Sink out(config.out);
      gsbm::run_sample(config, out.stream());
      out.close();
      break;
    }
    case gsbm::Mode::recover: {
      Sink out(config.out);
      std::optional<Sink> summary;
      if (!options.summary.empty()) summary.emplace(options.summary);
      gsbm::run_recover(config, out.stream(), summary ? summary->stream() : std::cerr, std::cerr);
      out.close();
      if (summary) summary->close();
      break;
    }
    case gsbm::Mode::sweep: {
      std::size_t skip = 0;
      if (config.resume && !config.out.empty()) skip = gsbm::count_csv_rows(config.out);
      Sink out(config.out, skip > 0);
      if (skip == 0) out.stream() << gsbm::trial_csv_header(config.timing) << '\n';
      gsbm::run_sweep(config, &out.stream(), skip, options.workers);
      out.close();
      break;
    }
    case gsbm::Mode::genie: {
      Sink out(config.out);
      gsbm::run_genie(config, out.stream());
      out.close();
      break;
    }
    case gsbm::Mode::flipbad: {
      Sink out(config.out);
      gsbm::run_flipbad(config, out.stream(), options.workers);
      out.close();
      break;
    }
    case gsbm::Mode::connectivity: {
      Sink out(config.out);
      gsbm::run_connectivity(config, out.stream(), options.workers);
      out.close();
      break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric SBM simulator and two-phase exact recovery"};
  app.require_subcommand(1);
  Options options;

  const std::pair<gsbm::Mode, const char*> modes[] = {
      {gsbm::Mode::metric, "Print I, D_plus, t_star and the quadrature error"},
      {gsbm::Mode::sample, "Sample one graph and write it in graph file format"},
      {gsbm::Mode::recover, "Run exact recovery on a graph file"},
      {gsbm::Mode::sweep, "Run seeded recovery trials over a list of n"},
      {gsbm::Mode::genie, "Print tau(v, sigma*) for every vertex"},
      {gsbm::Mode::flipbad, "Count flip-bad vertices over seeded trials"},
      {gsbm::Mode::connectivity, "Check block and vertex visibility connectivity"},
  };
  std::optional<gsbm::Mode> chosen;
  for (const auto& [mode, help] : modes) {
    CLI::App* sub = app.add_subcommand(std::string(gsbm::mode_name(mode)), help);
    sub->add_option("--config", options.config_path, "Configuration file")->required();
    sub->add_option("--out", options.out, "Output path (default: stdout)");
    sub->add_option("--seed", options.seed, "Override the base seed");
    sub->add_option("--trials", options.trials, "Override the trial count");
    sub->add_option("--graph", options.graph, "Graph file (recover, genie)");
    sub->add_option("--workers", options.workers, "Worker threads (default: all cores)");
    if (mode == gsbm::Mode::recover) sub->add_option("--summary", options.summary, "Summary path (default: stderr)");
    sub->callback([&chosen, mode = mode] { chosen = mode; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    return run(*chosen, options);
  } catch (const gsbm::ConfigError& e) {
    std::cerr << "config error:\n" << e.what() << '\n';
    return kConfigError;
  } catch (const gsbm::PartitionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const gsbm::ProfileError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const gsbm::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
