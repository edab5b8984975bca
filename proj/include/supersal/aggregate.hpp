#pragma once

#include "supersal/metrics.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace supersal {

struct ClipScore {
  std::string clip_id;
  Metric metric{Metric::AucJudd};
  double value{0.0};
  double weight{0.0};  // number of salient locations of the clip
};

double regular_mean(std::span<const ClipScore> scores);
double weighted_mean(std::span<const ClipScore> scores);  // throws ZeroTotalWeight

struct ScoreSamples {
  std::vector<double> positives;
  std::vector<double> negatives;
};

// AUC after merging every clip's positives and negatives.
double pooled_perfect_auc(std::span<const ScoreSamples> per_clip);
double pooled_perfect_auc(std::span<const ScoreSamples* const> per_clip);

struct KsResult {
  double statistic{0.0};  // D+ = sup_x (F_a(x) - F_b(x))
  double p_value{1.0};    // exp(-2 D+^2 m n / (m + n)), clamped to [0, 1]
};

KsResult ks_test_one_sided(std::span<const double> errors_a, std::span<const double> errors_b);

struct SubsetClip {
  ClipScore score;
  const ScoreSamples* samples{nullptr};
};

struct ExperimentResult {
  std::vector<std::size_t> subset_sizes;  // one entry per drawn subset
  std::vector<double> regular_errors;     // |regular mean - pooled AUC|
  std::vector<double> weighted_errors;    // |weighted mean - pooled AUC|
  double regular_error_mean{0.0};
  double regular_error_sd{0.0};
  double weighted_error_mean{0.0};
  double weighted_error_sd{0.0};
  // Null: regular averaging errors are <= weighted ones; D+ of the weighted-error
  // CDF above the regular-error CDF.
  KsResult ks;
};

// For every subset size 2..N-1, `n_repeats` uniformly drawn clip subsets.
ExperimentResult subset_experiment(std::span<const SubsetClip> clips, std::size_t n_repeats, std::uint64_t seed);

enum class Direction { HigherBetter, LowerBetter };

std::map<Metric, Direction> standard_directions();

// Mean rank (1 = best, ties share the average rank) over every metric except xAUC.
std::map<std::string, double> rank_table(const std::map<std::string, std::map<Metric, double>>& model_scores,
                                         const std::map<Metric, Direction>& directions = standard_directions());

}  // namespace supersal
