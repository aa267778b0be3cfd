#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gsbm/config.hpp"
#include "gsbm/recovery.hpp"

namespace gsbm {

/// Seed of trial `trial` at size n: base ^ mix64(bits(n) ^ mix64(trial)).
/// Adding trials or sizes never changes the seeds of existing rows.
std::uint64_t trial_seed(std::uint64_t base, double n, std::uint64_t trial);

struct TrialResult {
  double n = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double I = 0.0;
  RecoveryStatus status = RecoveryStatus::ok;
  double agreement = 0.0;
  std::size_t phase1_mistakes = 0;
  std::size_t flip_bad_count = 0;
  bool block_connected = false;
  bool vertex_connected = false;
  std::size_t vertices = 0;
  double elapsed_ms = 0.0;  // recovery wall time
};

/// Samples one instance and runs recovery and both censuses on it.
TrialResult run_trial(const ExperimentConfig& config, const Profile& profile, double I, double n, int trial);

std::string trial_csv_header(bool timing);
std::string trial_csv_row(const TrialResult& row, bool timing);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

/// Computes rows 0..count-1 on `workers` threads (0 = hardware concurrency)
/// and hands each to `emit` in index order as soon as its predecessors are
/// done. `emit` runs on the calling thread only.
void ordered_parallel(std::size_t count, unsigned workers, const std::function<std::string(std::size_t)>& compute,
                      const std::function<void(std::size_t, const std::string&)>& emit);

/// All (n, trial) rows in order, n outermost. Rows before `skip_rows` are
/// not recomputed; every computed row is streamed to `csv` (if given) as it
/// completes.
std::vector<TrialResult> run_sweep(const ExperimentConfig& config, std::ostream* csv = nullptr,
                                   std::size_t skip_rows = 0, unsigned workers = 0);

/// Number of data rows in an existing CSV (lines after the header).
std::size_t count_csv_rows(const std::string& path);

// Mode runners behind the command-line tool. Each writes its CSV or graph
// output to `out`; diagnostics go to `log`.
void run_metric(const ExperimentConfig& config, std::ostream& out);
void run_sample(const ExperimentConfig& config, std::ostream& out);
/// Writes the per-vertex CSV to `out` and the summary header and row to
/// `summary`.
void run_recover(const ExperimentConfig& config, std::ostream& out, std::ostream& summary, std::ostream& log);
void run_genie(const ExperimentConfig& config, std::ostream& out);
void run_flipbad(const ExperimentConfig& config, std::ostream& out, unsigned workers = 0);
void run_connectivity(const ExperimentConfig& config, std::ostream& out, unsigned workers = 0);

/// Reads a graph file, mapping open and parse failures to IoError.
GsbmGraph load_graph(const std::string& path);

}  // namespace gsbm
