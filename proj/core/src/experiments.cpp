#include "parapush/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

#include <nlohmann/json.hpp>
#include "parapush/angle.hpp"
#include "parapush/errors.hpp"
#include "parapush/worker_pool.hpp"

namespace parapush {
namespace {

using Clock = std::chrono::steady_clock;

struct Timing {
  double mean{0.0};
  double half_width{0.0};
};

template <typename Fn>
Timing time_repeated(int repetitions, Fn&& fn) {
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(repetitions));
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = Clock::now();
    fn();
    samples.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  }
  double sum = 0.0;
  for (double s : samples) sum += s;
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double sd = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, 1.96 * sd / std::sqrt(n)};
}

}  // namespace

std::vector<ConvergenceEntry> run_converge(const SceneDocument& doc,
                                           const ControlSequence& controls, WorkerPool* pool) {
  return convergence_report(doc.scene.start_state, controls, static_cast<int>(controls.size()),
                            doc.parareal, doc.physics, doc.coarse, doc.scene, pool);
}

std::vector<BenchRow> run_bench(const SceneDocument& doc, const ControlSequence& controls,
                                const BenchOptions& options, WorkerPool* pool) {
  if (options.repetitions < 1) {
    throw InvalidArgument("bench: repetitions must be >= 1");
  }
  const int n = static_cast<int>(controls.size());
  for (int k : options.iterations) {
    if (k < 1 || k > n) {
      throw InvalidArgument("bench: every K must satisfy 1 <= K <= N=" + std::to_string(n));
    }
  }
  const State& x0 = doc.scene.start_state;

  const Timing coarse = time_repeated(options.repetitions, [&] {
    (void)coarse_rollout(x0, controls, doc.coarse, doc.scene);
  });
  const Timing fine = time_repeated(options.repetitions, [&] {
    (void)fine_rollout(x0, controls, doc.physics, doc.scene);
  });
  const double c_c = coarse.mean / n;
  const double c_f = fine.mean / n;

  std::vector<BenchRow> rows;
  auto row = [&](std::string model, const Timing& t, double predicted) {
    rows.push_back({std::move(model), t.mean, std::max(0.0, t.mean - t.half_width),
                    t.mean + t.half_width,
                    fine.mean / t.mean, predicted});
  };
  row("coarse", coarse, c_f / c_c);
  row("fine", fine, 1.0);
  for (int k : options.iterations) {
    PararealConfig cfg = doc.parareal;
    cfg.iterations = k;
    const Timing t = time_repeated(options.repetitions, [&] {
      (void)parareal_predict(x0, controls, cfg, doc.physics, doc.coarse, doc.scene, pool);
    });
    row(parareal_model(k).to_string(), t, predicted_speedup(c_c, c_f, n, k));
  }
  return rows;
}

std::vector<OpenloopRow> run_openloop(const SceneDocument& doc, std::size_t starts,
                                      std::uint64_t seed, WorkerPool* pool) {
  const std::vector<State> initial = openloop_starts(doc.scene, starts, seed);
  const std::vector<ControlSequence> sequences = openloop_sequences();
  const std::size_t n = sequences.front().size();
  const std::size_t total = initial.size() * sequences.size();

  // diffs[t][k]: final-state difference of iterate k for trajectory t.
  std::vector<std::vector<std::pair<double, double>>> diffs(total);
  auto body = [&](std::size_t t) {
    const State& x0 = initial[t / sequences.size()];
    const ControlSequence& u = sequences[t % sequences.size()];
    PararealConfig cfg = doc.parareal;
    cfg.iterations = static_cast<int>(n);
    const PararealResult par =
        parareal_predict(x0, u, cfg, doc.physics, doc.coarse, doc.scene, pool);
    const State fine = fine_rollout(x0, u, doc.physics, doc.scene).states.back();
    for (const Trajectory& it : par.per_iteration) {
      const State& s = it.states.back();
      diffs[t].emplace_back(
          norm(s.slider_pose.position() - fine.slider_pose.position()),
          rad_to_deg(std::abs(angle_diff(s.slider_pose.theta, fine.slider_pose.theta))));
    }
  };
  if (pool != nullptr) {
    pool->parallel_for(total, body);
  } else {
    for (std::size_t t = 0; t < total; ++t) body(t);
  }

  std::vector<OpenloopRow> rows;
  for (std::size_t k = 0; k <= n; ++k) {
    double trans = 0.0;
    double rot = 0.0;
    for (const auto& d : diffs) {
      trans += d[k].first;
      rot += d[k].second;
    }
    rows.push_back({k == 0 ? std::string("coarse") : parareal_model(static_cast<int>(k)).to_string(),
                    trans / static_cast<double>(total), rot / static_cast<double>(total)});
  }
  rows.push_back({"push_dataset_std", kDatasetStdTransMm, kDatasetStdRotDeg});
  return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.model << ',' << format_double(r.mean_seconds) << ',' << format_double(r.ci95_low)
       << ',' << format_double(r.ci95_high) << ',' << format_double(r.measured_speedup) << ','
       << format_double(r.predicted_speedup) << '\n';
  }
}

void write_openloop_csv(std::ostream& os, const std::vector<OpenloopRow>& rows) {
  os << kOpenloopCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.model << ',' << format_double(r.mean_trans_diff_mm) << ','
       << format_double(r.mean_rot_diff_deg) << '\n';
  }
}

void write_plan_csv(std::ostream& os, const BenchmarkTable& table) {
  os << kPlanCsvHeader << '\n';
  for (const auto& e : table.episodes) {
    os << e.scene_index << ',' << e.model.to_string() << ',' << e.seed << ','
       << to_string(e.result.outcome) << ',' << e.result.actions_executed << ','
       << format_double(e.result.wall_clock_planning) << '\n';
  }
}

void write_plan_summary_csv(std::ostream& os, const BenchmarkTable& table) {
  os << kPlanSummaryCsvHeader << '\n';
  for (const auto& c : table.cells) {
    os << c.scene_index << ',' << c.model.to_string() << ',' << c.episodes << ','
       << format_double(c.success_rate) << ',' << format_double(c.mean_planning_seconds) << ','
       << format_double(c.std_planning_seconds) << ',' << format_double(c.mean_actions) << ','
       << c.aborted << '\n';
  }
}

std::string to_json(const RunManifest& m) {
  nlohmann::json j = {{"command", m.command},         {"scene_path", m.scene_path},
                      {"overrides", m.overrides},     {"seed", m.seed},
                      {"output_dir", m.output_dir},   {"tool_version", m.tool_version},
                      {"timestamp", m.timestamp},     {"argv", m.argv}};
  return j.dump(2);
}

RunManifest parse_run_manifest(const std::string& json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.scene_path = j.value("scene_path", "");
    m.overrides = j.value("overrides", std::map<std::string, std::string>{});
    m.seed = j.value("seed", std::uint64_t{0});
    m.output_dir = j.value("output_dir", "");
    m.tool_version = j.value("tool_version", "");
    m.timestamp = j.value("timestamp", "");
    m.argv = j.value("argv", std::vector<std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::vector<FieldIssue>{{"<manifest>", e.what()}});
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace parapush
