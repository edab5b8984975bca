#include "supersal/baselines.hpp"

#include "supersal/error.hpp"
#include "supersal/random.hpp"
#include "supersal/shuffling.hpp"

#include <cmath>
#include <map>

namespace supersal {

SaliencyVolume chance_map(int width, int height, int frames, std::uint64_t seed) {
  SaliencyVolume v(width, height, frames);
  Rng rng(seed);
  for (float& x : v.data()) x = rng.uniform01f();
  return v;
}

std::size_t pick_permutation_donor(std::string_view target_clip, std::span<const AttendedLocationSet> donor_sets,
                                   std::uint64_t seed) {
  std::vector<std::size_t> donors;
  for (std::size_t i = 0; i < donor_sets.size(); ++i) {
    if (donor_sets[i].clip_id != target_clip && !donor_sets[i].empty()) donors.push_back(i);
  }
  if (donors.empty()) {
    throw Error(ErrorCode::NoDonorClips, "no permutation donor for clip '" + std::string(target_clip) + "'");
  }
  Rng rng(seed);
  return donors[rng.uniform_index(donors.size())];
}

SaliencyVolume permutation_map(std::string_view target_clip, std::span<const AttendedLocationSet> donor_sets,
                               const GtParams& params, const ClipGeometry& target, std::uint64_t seed) {
  const auto& donor = donor_sets[pick_permutation_donor(target_clip, donor_sets, seed)];
  AttendedLocationSet mapped = temporal_rescale_locations(donor, donor.frames, target.frames);
  if (donor.width != target.width || donor.height != target.height) {
    mapped = rescale_space(mapped, target.width, target.height);
  }
  auto v = build_gt_volume(std::span<const AttendedLocation>(mapped.locations), params, target.width, target.height,
                           target.frames);
  v.clip_id = std::string(target_clip);
  return v;
}

SaliencyVolume centre_map(int width, int height, int frames, double sigma_fraction) {
  if (!(sigma_fraction > 0.0)) throw Error(ErrorCode::InvalidArgument, "centre sigma fraction must be positive");
  SaliencyVolume v(width, height, frames);
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  const double sx = sigma_fraction * width;
  const double sy = sigma_fraction * height;
  auto frame0 = v.frame(0);
  for (int y = 0; y < height; ++y) {
    const double dy = (y - cy) / sy;
    for (int x = 0; x < width; ++x) {
      const double dx = (x - cx) / sx;
      frame0[static_cast<std::size_t>(y) * width + x] = static_cast<float>(std::exp(-0.5 * (dx * dx + dy * dy)));
    }
  }
  for (int t = 1; t < frames; ++t) std::copy(frame0.begin(), frame0.end(), v.frame(t).begin());
  return v;
}

std::vector<MetricScore> HumanBaselineResult::mean() const {
  std::vector<Metric> order;
  std::map<Metric, std::pair<double, std::size_t>> sums;
  std::map<Metric, std::size_t> counts;
  for (const auto& battery : scores) {
    for (const auto& s : battery) {
      if (!sums.count(s.metric)) order.push_back(s.metric);
      auto& [total, n_pos] = sums[s.metric];
      total += s.value;
      n_pos += s.n_positives;
      ++counts[s.metric];
    }
  }
  std::vector<MetricScore> out;
  for (Metric m : order) {
    out.push_back({m, sums[m].first / static_cast<double>(counts[m]), sums[m].second});
  }
  return out;
}

namespace {

enum class HumanMode { One, Infinite };

HumanBaselineResult human_scores(std::span<const AttendedLocationSet> per_observer, const GtParams& params,
                                 const BaselineEvaluator& evaluate, HumanMode mode) {
  if (per_observer.size() < 2) {
    throw Error(ErrorCode::TooFewObservers, "human baselines need at least two observers");
  }
  HumanBaselineResult result;
  for (std::size_t o = 0; o < per_observer.size(); ++o) {
    const auto& self = per_observer[o];
    const std::string name = self.observers.empty() ? std::to_string(o) : self.observers.front();
    if (self.empty()) {
      result.warnings.push_back("observer '" + name + "' has no locations; skipped");
      continue;
    }
    std::vector<AttendedLocationSet> others;
    for (std::size_t k = 0; k < per_observer.size(); ++k) {
      if (k != o && !per_observer[k].empty()) others.push_back(per_observer[k]);
    }
    if (others.empty()) {
      result.warnings.push_back("no other observer has locations for '" + name + "'; skipped");
      continue;
    }
    const AttendedLocationSet pooled = merge_sets(others);
    const AttendedLocationSet& map_source = mode == HumanMode::One ? self : pooled;
    const AttendedLocationSet& positives = mode == HumanMode::One ? pooled : self;
    const auto pred = build_gt_volume(map_source, params, self.width, self.height, self.frames);
    result.observers.push_back(name);
    result.scores.push_back(evaluate(pred, positives));
  }
  return result;
}

}  // namespace

HumanBaselineResult one_human_scores(std::span<const AttendedLocationSet> per_observer, const GtParams& params,
                                     const BaselineEvaluator& evaluate) {
  return human_scores(per_observer, params, evaluate, HumanMode::One);
}

HumanBaselineResult infinite_humans_scores(std::span<const AttendedLocationSet> per_observer, const GtParams& params,
                                           const BaselineEvaluator& evaluate) {
  return human_scores(per_observer, params, evaluate, HumanMode::Infinite);
}

}  // namespace supersal
