#pragma once

#include "supersal/gaze_io.hpp"
#include "supersal/shuffling.hpp"
#include "supersal/volume.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace supersal {

enum class Metric { AucJudd, AucBorji, Sauc, Nss, Sim, Cc, Kld, Ig, BalAcc, Xauc };

inline constexpr Metric kAllMetrics[] = {Metric::AucJudd, Metric::AucBorji, Metric::Sauc, Metric::Nss,
                                         Metric::Sim,     Metric::Cc,       Metric::Kld,  Metric::Ig,
                                         Metric::BalAcc,  Metric::Xauc};

std::string_view to_string(Metric metric);  // "AUC_JUDD", "SAUC", ...
std::optional<Metric> parse_metric(std::string_view text);
bool higher_is_better(Metric metric);  // false only for KLD
bool is_auc_family(Metric metric);

struct MetricScore {
  Metric metric{Metric::AucJudd};
  double value{0.0};
  std::size_t n_positives{0};
};

enum class CcMode { Global, PerFrame };

// P(pos > neg) + 0.5 P(pos = neg). Exact: computed from integer pair counts,
// and roc_auc_from_scores(a, b) + roc_auc_from_scores(b, a) == 1 bit-exactly.
double roc_auc_from_scores(std::span<const double> pos, std::span<const double> neg);

// AUC from (2 * wins + ties, 2 * total pairs), using the complement-symmetric rounding above.
double auc_from_counts(std::uint64_t twice_wins, std::uint64_t twice_pairs);

// Streams negatives against a fixed, sorted positive set.
class AucCounter {
 public:
  explicit AucCounter(std::vector<double> positives);

  void add_negative(double score);
  void add_negatives(std::span<const double> scores) {
    for (double s : scores) add_negative(s);
  }

  std::size_t n_positives() const { return positives_.size(); }
  std::uint64_t n_negatives() const { return n_negatives_; }
  double auc() const;  // throws EmptyScoreSet if either side is empty

 private:
  std::vector<double> positives_;
  std::uint64_t twice_wins_{0};
  std::uint64_t n_negatives_{0};
};

// Balanced accuracy (TPR + TNR) / 2 at the threshold minimising |TPR - TNR|;
// a score >= threshold is classified positive; ties go to the lower threshold.
double balanced_accuracy_from_scores(std::span<const double> pos, std::span<const double> neg);

// Nearest-voxel prediction values at attended locations (AUC-family positives).
std::vector<double> location_scores(const SaliencyVolume& pred, std::span<const AttendedLocation> locations);
std::vector<double> location_scores(const SaliencyVolume& pred, std::span<const ShuffledLocation> locations);

// Random-voxel negatives shared by AUC-Borji and balanced accuracy. One Rng(seed)
// stream; for each split in order, `n_per_split` draws of uniform_index(W*H*F).
std::vector<std::vector<double>> borji_negative_scores(const SaliencyVolume& pred, std::size_t n_per_split,
                                                       std::size_t n_splits, std::uint64_t seed);

MetricScore auc_judd(const SaliencyVolume& pred, const AttendedLocationSet& gt);
MetricScore auc_borji(const SaliencyVolume& pred, const AttendedLocationSet& gt, std::size_t n_splits,
                      std::uint64_t seed);
MetricScore sauc(const SaliencyVolume& pred, const AttendedLocationSet& gt,
                 std::span<const ShuffledLocation> shuffled_negatives);
MetricScore nss(const SaliencyVolume& pred, const AttendedLocationSet& gt);
MetricScore sim(const SaliencyVolume& pred, const SaliencyVolume& gt_vol,
                NormalizationMode mode = NormalizationMode::PerFrame);
MetricScore cc(const SaliencyVolume& pred, const SaliencyVolume& gt_vol, CcMode mode = CcMode::Global);
MetricScore kld(const SaliencyVolume& pred, const SaliencyVolume& gt_vol, double eps = 1e-12,
                NormalizationMode mode = NormalizationMode::PerFrame);
MetricScore info_gain(const SaliencyVolume& pred, const AttendedLocationSet& gt, const SaliencyVolume& baseline_vol,
                      double eps = 1e-12);
MetricScore balanced_accuracy(const SaliencyVolume& pred, const AttendedLocationSet& gt, std::size_t n_splits,
                              std::uint64_t seed);

// Indices of the fixation locations used as xAUC negatives: |sp| draws without
// replacement (partial Fisher-Yates) when |fix| >= |sp|, otherwise with replacement.
std::vector<std::size_t> xauc_negative_indices(std::size_t n_sp, std::size_t n_fix, std::uint64_t seed);

// SP locations as positives against drawn fixation locations.
MetricScore xauc(const SaliencyVolume& pred, const AttendedLocationSet& sp_locs, const AttendedLocationSet& fix_locs,
                 std::uint64_t seed);
// Same draws with the roles reversed; xauc + xauc_swapped == 1 exactly.
MetricScore xauc_swapped(const SaliencyVolume& pred, const AttendedLocationSet& sp_locs,
                         const AttendedLocationSet& fix_locs, std::uint64_t seed);

}  // namespace supersal
