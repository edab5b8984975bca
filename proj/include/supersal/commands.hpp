#pragma once

#include "supersal/config.hpp"
#include "supersal/gaze_io.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

namespace supersal {

// Calls fn(i) for i in [0, n) on up to `jobs` threads. fn must not throw.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

struct RunOptions {
  unsigned jobs{1};
  std::ostream* log{nullptr};  // per-clip lines, printed in manifest order
};

// Each command returns a process exit code: 0 on success, 1 when nothing could be produced.

// <out>/<cond>/<clip>.ssv1 and <out>/<cond>/weights.csv; `png` adds <out>/<cond>/png/<clip>/%06d.png.
int cmd_gen_gt(const std::filesystem::path& dataset_dir, Condition condition, const EvalConfig& config,
               const std::filesystem::path& out, const RunOptions& options, bool png = false);

// Predictions are <pred_dir>/<clip>.ssv1 or a frame directory <pred_dir>/<clip>/.
// Per condition: <out>/<cond>/{report.json, summary.csv, clips/<clip>.json, scores/<clip>__<METRIC>.scr}.
int cmd_evaluate(const std::filesystem::path& pred_dir, const std::filesystem::path& dataset_dir,
                 std::span<const Condition> conditions, const EvalConfig& config, const std::filesystem::path& out,
                 const RunOptions& options);

// Same layout as cmd_evaluate under <out>/<baseline>/ for chance, permutation, centre,
// one_human and infinite_humans.
int cmd_baselines(const std::filesystem::path& dataset_dir, std::span<const Condition> conditions,
                  const EvalConfig& config, const std::filesystem::path& out, const RunOptions& options);

// Mean-rank table over run reports: one column per (dataset, condition) plus `overall`.
int cmd_rank(std::span<const std::filesystem::path> reports, const std::filesystem::path& out_csv,
             const RunOptions& options);

// Subset experiment on one evaluated condition directory, for AUC_BORJI and SAUC.
int cmd_avg_experiment(const std::filesystem::path& condition_dir, const EvalConfig& config,
                       const std::filesystem::path& out_csv, const RunOptions& options);

int cmd_bias(const std::filesystem::path& in, const std::filesystem::path& out, const EvalConfig& config,
             const RunOptions& options);

// <out>/locations.csv; `subvolumes` adds <out>/subvolumes/<n>_<label>.ssv1|ssv3 cut from <dataset>/frames/<clip>/.
int cmd_sample(const std::filesystem::path& dataset_dir, Condition condition, std::size_t n_total,
               const EvalConfig& config, const std::filesystem::path& out, const RunOptions& options,
               bool subvolumes = false);

}  // namespace supersal
