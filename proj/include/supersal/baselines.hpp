#pragma once

#include "supersal/gaze_io.hpp"
#include "supersal/ground_truth.hpp"
#include "supersal/metrics.hpp"
#include "supersal/volume.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace supersal {

// I.i.d. uniform [0, 1) voxels.
SaliencyVolume chance_map(int width, int height, int frames, std::uint64_t seed);

// Index into `donor_sets` of the donor a permutation draw would use: uniform
// over non-empty sets whose clip differs from `target_clip`. Throws NoDonorClips.
std::size_t pick_permutation_donor(std::string_view target_clip, std::span<const AttendedLocationSet> donor_sets,
                                   std::uint64_t seed);

// Ground truth of a random other clip, rescaled onto the target geometry.
SaliencyVolume permutation_map(std::string_view target_clip, std::span<const AttendedLocationSet> donor_sets,
                               const GtParams& params, const ClipGeometry& target, std::uint64_t seed);

// Static anisotropic Gaussian at the frame centre, sigma = fraction * (w, h), peak 1.
SaliencyVolume centre_map(int width, int height, int frames, double sigma_fraction = 0.25);

// Scores one prediction against a positive location set.
using BaselineEvaluator =
    std::function<std::vector<MetricScore>(const SaliencyVolume& pred, const AttendedLocationSet& positives)>;

struct HumanBaselineResult {
  std::vector<std::string> observers;             // evaluated observers, in input order
  std::vector<std::vector<MetricScore>> scores;   // one battery per evaluated observer
  std::vector<std::string> warnings;

  // Per-metric mean over observers; n_positives is summed.
  std::vector<MetricScore> mean() const;
};

// `per_observer` holds one condition set per observer of a single clip.
// One Human: each observer's ground truth predicts the pooled locations of the others.
HumanBaselineResult one_human_scores(std::span<const AttendedLocationSet> per_observer, const GtParams& params,
                                     const BaselineEvaluator& evaluate);

// Infinite Humans, leave-one-out: the others' ground truth predicts each observer.
HumanBaselineResult infinite_humans_scores(std::span<const AttendedLocationSet> per_observer, const GtParams& params,
                                           const BaselineEvaluator& evaluate);

}  // namespace supersal
