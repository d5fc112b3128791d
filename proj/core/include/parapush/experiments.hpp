// Experiment runners behind the CLI subcommands. Each returns plain rows; the
// CSV writers below give them their on-disk form.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "parapush/io.hpp"
#include "parapush/mpc.hpp"
#include "parapush/parareal.hpp"
#include "parapush/scenarios.hpp"

namespace parapush {

class WorkerPool;

/// Error of Parareal iterates 0..N against the fine rollout of `controls`.
[[nodiscard]] std::vector<ConvergenceEntry> run_converge(const SceneDocument& document,
                                                         const ControlSequence& controls,
                                                         WorkerPool* pool = nullptr);

struct BenchRow {
  std::string model;
  double mean_seconds{0.0};
  double ci95_low{0.0};
  double ci95_high{0.0};
  double measured_speedup{0.0};
  double predicted_speedup{0.0};
};

struct BenchOptions {
  std::vector<int> iterations{1, 2, 3, 4};
  int repetitions{100};
};

/// Times coarse_rollout, fine_rollout and parareal_predict for every K.
/// Rows: coarse, fine, then parareal:K. The predicted speedup of a Parareal
/// row uses the per-slice costs measured from the coarse and fine rows.
[[nodiscard]] std::vector<BenchRow> run_bench(const SceneDocument& document,
                                              const ControlSequence& controls,
                                              const BenchOptions& options, WorkerPool* pool);

struct OpenloopRow {
  std::string model;
  double mean_trans_diff_mm{0.0};
  double mean_rot_diff_deg{0.0};
};

/// Published spread of the real-world pushing dataset, quoted as a reference row.
inline constexpr double kDatasetStdTransMm = 8.10;
inline constexpr double kDatasetStdRotDeg = 4.20;

/// Final-state difference from the fine model for every start in
/// openloop_starts x openloop_sequences. Rows: coarse, parareal:1..N, then
/// the dataset reference row.
[[nodiscard]] std::vector<OpenloopRow> run_openloop(const SceneDocument& document,
                                                    std::size_t starts, std::uint64_t seed,
                                                    WorkerPool* pool = nullptr);

inline constexpr const char* kBenchCsvHeader =
    "model,mean_seconds,ci95_low,ci95_high,measured_speedup,predicted_speedup";
inline constexpr const char* kOpenloopCsvHeader = "model,mean_trans_diff_mm,mean_rot_diff_deg";
inline constexpr const char* kPlanCsvHeader = "scene,model,seed,outcome,actions,planning_seconds";
inline constexpr const char* kPlanSummaryCsvHeader =
    "scene,model,episodes,success_rate,mean_planning_seconds,std_planning_seconds,mean_actions,"
    "aborted";

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);
void write_openloop_csv(std::ostream& os, const std::vector<OpenloopRow>& rows);
void write_plan_csv(std::ostream& os, const BenchmarkTable& table);
void write_plan_summary_csv(std::ostream& os, const BenchmarkTable& table);

struct RunManifest {
  std::string command;
  std::string scene_path;
  std::map<std::string, std::string> overrides;
  std::uint64_t seed{0};
  std::string output_dir;
  std::string tool_version;
  std::string timestamp;
  /// Full command line, enough to reproduce the run.
  std::vector<std::string> argv;
};

[[nodiscard]] std::string to_json(const RunManifest& manifest);
[[nodiscard]] RunManifest parse_run_manifest(const std::string& json_text);

/// UTC time as ISO 8601.
[[nodiscard]] std::string utc_timestamp();

}  // namespace parapush
