#include "gsbm/experiments.hpp"

#include <bit>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "gsbm/divergence.hpp"
#include "gsbm/oracle.hpp"
#include "gsbm/partition.hpp"

namespace gsbm {

namespace {

const char* bool_text(bool b) { return b ? "true" : "false"; }

void warn_invalid(const ExperimentConfig& config, std::ostream& log) {
  if (!config.chi || !config.delta || !config.lambda) return;
  const double chi0 = config.chi0.value_or(1.25 * *config.chi);
  const ValidationReport report =
      validate_parameters(config.d, *config.lambda, config.cutoff(), *config.chi, *config.delta, chi0,
                          config.delta_factor);
  for (const auto& v : report.violations) log << "warning: " << v << '\n';
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base, double n, std::uint64_t trial) {
  return base ^ mix64(std::bit_cast<std::uint64_t>(n) ^ mix64(trial));
}

TrialResult run_trial(const ExperimentConfig& config, const Profile& profile, double I, double n, int trial) {
  TrialResult row;
  row.n = n;
  row.trial = trial;
  row.seed = trial_seed(config.seed, n, static_cast<std::uint64_t>(trial));
  row.I = I;
  const GsbmGraph graph = sample(*config.lambda, n, profile, config.d, row.seed);
  row.vertices = graph.size();

  const auto start = std::chrono::steady_clock::now();
  const RecoveryOutcome outcome = run_exact_recovery(graph, *config.chi, *config.delta, config.eps);
  row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  row.status = outcome.status;
  row.agreement = agreement(outcome.labeling.values, graph.labels());
  row.phase1_mistakes = outcome.mistakes_phase1;
  row.block_connected = outcome.status == RecoveryStatus::ok;
  row.vertex_connected = vertex_visibility_connected(graph);
  row.flip_bad_count = flip_bad_census(graph).count;
  return row;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string trial_csv_header(bool timing) {
  std::string header =
      "n,trial,seed,I,status,agreement,phase1_mistakes,flip_bad_count,block_connected,vertex_connected,vertices";
  if (timing) header += ",elapsed_ms";
  return header;
}

std::string trial_csv_row(const TrialResult& row, bool timing) {
  std::ostringstream out;
  out << format_real(row.n) << ',' << row.trial << ',' << row.seed << ',' << format_real(row.I) << ','
      << csv_field(status_name(row.status)) << ',' << format_real(row.agreement) << ',' << row.phase1_mistakes << ','
      << row.flip_bad_count << ',' << bool_text(row.block_connected) << ',' << bool_text(row.vertex_connected) << ','
      << row.vertices;
  if (timing) out << ',' << format_real(row.elapsed_ms);
  return out.str();
}

void ordered_parallel(std::size_t count, unsigned workers, const std::function<std::string(std::size_t)>& compute,
                      const std::function<void(std::size_t, const std::string&)>& emit) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) emit(i, compute(i));
    return;
  }

  std::mutex mutex;
  std::condition_variable ready;
  std::map<std::size_t, std::string> done;
  std::exception_ptr failure;
  std::size_t next = 0;

  auto work = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard lock(mutex);
        if (next >= count || failure) return;
        i = next++;
      }
      try {
        std::string row = compute(i);
        std::lock_guard lock(mutex);
        done.emplace(i, std::move(row));
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
      }
      ready.notify_one();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);

  try {
    for (std::size_t i = 0; i < count; ++i) {
      std::string row;
      {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return done.count(i) > 0 || failure; });
        if (failure && !done.count(i)) break;
        row = std::move(done[i]);
        done.erase(i);
      }
      emit(i, row);
    }
  } catch (...) {
    std::lock_guard lock(mutex);
    if (!failure) failure = std::current_exception();
  }
  {
    std::lock_guard lock(mutex);
    if (!failure) next = count;
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<TrialResult> run_sweep(const ExperimentConfig& config, std::ostream* csv, std::size_t skip_rows,
                                   unsigned workers) {
  const Profile profile = config.make_profile();
  const double I = information_metric(profile, *config.lambda, config.d).I;
  const std::size_t per_n = static_cast<std::size_t>(config.trials);
  const std::size_t total = config.n.size() * per_n;
  if (skip_rows > total) skip_rows = total;

  std::vector<TrialResult> results(total - skip_rows);
  ordered_parallel(
      total - skip_rows, workers,
      [&](std::size_t i) {
        const std::size_t row = i + skip_rows;
        results[i] = run_trial(config, profile, I, config.n[row / per_n], static_cast<int>(row % per_n));
        return trial_csv_row(results[i], config.timing);
      },
      [&](std::size_t, const std::string& line) {
        if (csv) {
          *csv << line << '\n';
          csv->flush();
          if (!*csv) throw IoError("failed writing sweep output");
        }
      });
  return results;
}

std::size_t count_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) return 0;
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++lines;
  }
  return lines == 0 ? 0 : lines - 1;
}

void run_metric(const ExperimentConfig& config, std::ostream& out) {
  const DivergenceReport report = information_metric(config.make_profile(), *config.lambda, config.d);
  out << "I,D_plus,t_star,quad_error\n"
      << format_real(report.I) << ',' << format_real(report.D_plus) << ',' << format_real(report.t_star) << ','
      << format_real(report.quad_error) << '\n';
}

void run_sample(const ExperimentConfig& config, std::ostream& out) {
  write_graph(out, sample(*config.lambda, config.n.front(), config.make_profile(), config.d, config.seed));
}

GsbmGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file '" + path + "'");
  try {
    return read_graph(in);
  } catch (const std::invalid_argument& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

void run_recover(const ExperimentConfig& config, std::ostream& out, std::ostream& summary, std::ostream& log) {
  const GsbmGraph graph = load_graph(config.graph);
  ExperimentConfig effective = config;
  effective.d = graph.d();
  effective.lambda = graph.lambda();
  effective.profile = graph.profile().spec();
  effective.r.reset();
  warn_invalid(effective, log);

  const auto start = std::chrono::steady_clock::now();
  const RecoveryOutcome outcome = run_exact_recovery(graph, *config.chi, *config.delta, config.eps);
  const double elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  out << "vertex_id,phase1_label,phase2_label,true_label\n";
  std::string line;
  for (VertexId v = 0; v < graph.size(); ++v) {
    line = std::to_string(v) + ',' + std::to_string(outcome.phase1.values[v]) + ',' +
           std::to_string(outcome.labeling.values[v]) + ',' + std::to_string(graph.label(v)) + '\n';
    out << line;
  }
  summary << "status,agreement,phase1_mistakes,elapsed_ms\n"
          << status_name(outcome.status) << ',' << format_real(agreement(outcome.labeling.values, graph.labels()))
          << ',' << outcome.mistakes_phase1 << ',' << format_real(elapsed) << '\n';
}

void run_genie(const ExperimentConfig& config, std::ostream& out) {
  const GsbmGraph graph = config.graph.empty()
                              ? sample(*config.lambda, config.n.front(), config.make_profile(), config.d, config.seed)
                              : load_graph(config.graph);
  const FlipBadReport census = flip_bad_census(graph);
  out << "vertex,tau,true_label\n";
  for (VertexId v = 0; v < graph.size(); ++v) {
    out << v << ',' << format_real(census.tau_values[v]) << ',' << int(graph.label(v)) << '\n';
  }
}

void run_flipbad(const ExperimentConfig& config, std::ostream& out, unsigned workers) {
  const Profile profile = config.make_profile();
  const std::size_t per_n = static_cast<std::size_t>(config.trials);
  out << "n,seed,count\n";
  ordered_parallel(
      config.n.size() * per_n, workers,
      [&](std::size_t i) {
        const double n = config.n[i / per_n];
        const std::uint64_t seed = trial_seed(config.seed, n, i % per_n);
        const GsbmGraph graph = sample(*config.lambda, n, profile, config.d, seed);
        return format_real(n) + ',' + std::to_string(seed) + ',' + std::to_string(flip_bad_census(graph).count);
      },
      [&](std::size_t, const std::string& line) { out << line << '\n'; });
}

void run_connectivity(const ExperimentConfig& config, std::ostream& out, unsigned workers) {
  const double n = config.n.front();
  const double r = config.cutoff();
  const TorusBox box = TorusBox::from_volume(config.d, n);
  const double radius = r * distance_scale(n, config.d);
  out << "trial,block_connected,vertex_connected,occupied_blocks\n";
  ordered_parallel(
      static_cast<std::size_t>(config.trials), workers,
      [&](std::size_t trial) {
        Rng rng(trial_seed(config.seed, n, trial));
        const std::vector<double> positions = sample_positions(*config.lambda, box, rng);
        const BlockGrid grid = build_block_grid(box, positions, r, radius, *config.chi, *config.delta);
        const VisibilityGraph h = build_visibility_graph(grid, radius);
        const CellIndex index(box, positions, radius);
        const bool vertex_connected = vertex_visibility_connected(index, radius);
        return std::to_string(trial) + ',' + bool_text(h.connected) + ',' + bool_text(vertex_connected) + ',' +
               std::to_string(h.nodes.size());
      },
      [&](std::size_t, const std::string& line) { out << line << '\n'; });
}

}  // namespace gsbm
