#pragma once

#include "supersal/aggregate.hpp"
#include "supersal/config.hpp"
#include "supersal/gaze_io.hpp"
#include "supersal/ground_truth.hpp"
#include "supersal/metrics.hpp"
#include "supersal/volume.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace supersal {

struct BatteryInputs {
  const AttendedLocationSet* positives{nullptr};    // condition locations of the evaluated clip
  const AttendedLocationSet* sp{nullptr};           // for xAUC; skipped when null or empty
  const AttendedLocationSet* fix{nullptr};
  std::span<const AttendedLocationSet> donors;      // same condition, every clip (target excluded by id)
  GtParams gt_params;
  const SaliencyVolume* gt_volume{nullptr};         // built from `positives` when null
};

struct BatterySeeds {
  std::uint64_t borji{0};  // shared by AUC-Borji and balanced accuracy
  std::uint64_t sauc{0};
  std::uint64_t ig{0};
  std::uint64_t xauc{0};
};

// Seeds derived from (master, clip, condition); xAUC depends on the clip only.
BatterySeeds battery_seeds(std::uint64_t master, std::string_view clip_id, Condition condition);

struct BatteryResult {
  std::vector<MetricScore> scores;                // metrics that could be computed, kAllMetrics order
  std::vector<std::string> warnings;              // one per metric that failed
  std::map<Metric, ScoreSamples> samples;         // AUC_BORJI (all splits), SAUC, XAUC
};

BatteryResult run_battery(const SaliencyVolume& pred, const BatteryInputs& inputs, const EvalConfig& config,
                          const BatterySeeds& seeds, bool keep_samples = true);

}  // namespace supersal
