#include "supersal/metrics.hpp"

#include "supersal/error.hpp"
#include "supersal/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace supersal {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::AucJudd: return "AUC_JUDD";
    case Metric::AucBorji: return "AUC_BORJI";
    case Metric::Sauc: return "SAUC";
    case Metric::Nss: return "NSS";
    case Metric::Sim: return "SIM";
    case Metric::Cc: return "CC";
    case Metric::Kld: return "KLD";
    case Metric::Ig: return "IG";
    case Metric::BalAcc: return "BAL_ACC";
    case Metric::Xauc: return "XAUC";
  }
  return "AUC_JUDD";
}

std::optional<Metric> parse_metric(std::string_view text) {
  for (Metric m : kAllMetrics) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

bool higher_is_better(Metric metric) { return metric != Metric::Kld; }

bool is_auc_family(Metric metric) {
  return metric == Metric::AucJudd || metric == Metric::AucBorji || metric == Metric::Sauc || metric == Metric::Xauc;
}

double auc_from_counts(std::uint64_t twice_wins, std::uint64_t twice_pairs) {
  if (twice_pairs == 0) throw Error(ErrorCode::EmptyScoreSet, "AUC needs positives and negatives");
  const std::uint64_t twice_losses = twice_pairs - twice_wins;
  const double total = static_cast<double>(twice_pairs);
  // Always divide the smaller count so that x and 1 - x round consistently.
  if (twice_wins <= twice_losses) return static_cast<double>(twice_wins) / total;
  return 1.0 - static_cast<double>(twice_losses) / total;
}

double roc_auc_from_scores(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw Error(ErrorCode::EmptyScoreSet, "AUC needs positives and negatives");
  std::vector<double> p(pos.begin(), pos.end());
  std::vector<double> n(neg.begin(), neg.end());
  std::sort(p.begin(), p.end());
  std::sort(n.begin(), n.end());

  std::uint64_t twice_wins = 0;
  std::size_t below = 0;  // negatives strictly below the current positive value
  std::size_t i = 0;
  while (i < p.size()) {
    std::size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    while (below < n.size() && n[below] < p[i]) ++below;
    std::size_t upto = below;
    while (upto < n.size() && n[upto] == p[i]) ++upto;
    const std::uint64_t group = j - i;
    twice_wins += group * (2 * below + (upto - below));
    i = j;
  }
  return auc_from_counts(twice_wins, 2 * static_cast<std::uint64_t>(p.size()) * n.size());
}

AucCounter::AucCounter(std::vector<double> positives) : positives_(std::move(positives)) {
  std::sort(positives_.begin(), positives_.end());
}

void AucCounter::add_negative(double score) {
  ++n_negatives_;
  const auto lo = std::lower_bound(positives_.begin(), positives_.end(), score);
  if (lo == positives_.end()) return;
  const auto n = static_cast<std::uint64_t>(positives_.size());
  const auto ge = n - static_cast<std::uint64_t>(lo - positives_.begin());
  if (*lo != score) {
    twice_wins_ += 2 * ge;
    return;
  }
  const auto hi = std::upper_bound(lo, positives_.end(), score);
  const auto eq = static_cast<std::uint64_t>(hi - lo);
  twice_wins_ += 2 * (ge - eq) + eq;
}

double AucCounter::auc() const {
  return auc_from_counts(twice_wins_, 2 * static_cast<std::uint64_t>(positives_.size()) * n_negatives_);
}

double balanced_accuracy_from_scores(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw Error(ErrorCode::EmptyScoreSet, "balanced accuracy needs both classes");
  std::vector<double> p(pos.begin(), pos.end());
  std::vector<double> n(neg.begin(), neg.end());
  std::sort(p.begin(), p.end());
  std::sort(n.begin(), n.end());
  std::vector<double> thresholds;
  thresholds.reserve(p.size() + n.size());
  std::merge(p.begin(), p.end(), n.begin(), n.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const auto np = static_cast<std::int64_t>(p.size());
  const auto nn = static_cast<std::int64_t>(n.size());
  // Candidate thresholds ascending, then +inf (everything negative).
  std::int64_t best_gap = -1;
  std::int64_t best_tp = 0;
  std::int64_t best_tn = 0;
  std::size_t pi = 0;
  std::size_t ni = 0;
  auto consider = [&](std::int64_t tp, std::int64_t tn) {
    // |TPR - TNR| compared exactly on the common denominator np * nn.
    const std::int64_t gap = std::llabs(tp * nn - tn * np);
    if (best_gap < 0 || gap < best_gap) {
      best_gap = gap;
      best_tp = tp;
      best_tn = tn;
    }
  };
  for (double t : thresholds) {
    while (pi < p.size() && p[pi] < t) ++pi;
    while (ni < n.size() && n[ni] < t) ++ni;
    consider(np - static_cast<std::int64_t>(pi), static_cast<std::int64_t>(ni));
  }
  consider(0, nn);
  return 0.5 * (static_cast<double>(best_tp) / np + static_cast<double>(best_tn) / nn);
}

namespace {

int nearest_index(double v, int extent) {
  const long r = std::lround(v);
  return static_cast<int>(std::clamp<long>(r, 0, extent - 1));
}

void check_frame(const SaliencyVolume& pred, int frame) {
  if (frame < 0 || frame >= pred.frames()) {
    throw Error(ErrorCode::FrameOutOfRange,
                "location frame " + std::to_string(frame) + " outside prediction with " +
                    std::to_string(pred.frames()) + " frames");
  }
}

void check_coverage(const SaliencyVolume& pred, const AttendedLocationSet& gt) {
  if (gt.width > 0 && (gt.width != pred.width() || gt.height != pred.height())) {
    throw Error(ErrorCode::ShapeMismatch, "prediction " + std::to_string(pred.width()) + "x" +
                                              std::to_string(pred.height()) + " vs locations " +
                                              std::to_string(gt.width) + "x" + std::to_string(gt.height));
  }
  if (gt.empty()) throw Error(ErrorCode::EmptyScoreSet, "no attended locations for clip '" + gt.clip_id + "'");
}

std::size_t voxel_of(const SaliencyVolume& pred, double x, double y, int frame) {
  check_frame(pred, frame);
  return pred.index(nearest_index(x, pred.width()), nearest_index(y, pred.height()), frame);
}

void check_same_shape(const SaliencyVolume& a, const SaliencyVolume& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, "prediction and ground-truth volumes differ in shape");
}

}  // namespace

std::vector<double> location_scores(const SaliencyVolume& pred, std::span<const AttendedLocation> locations) {
  std::vector<double> out;
  out.reserve(locations.size());
  for (const auto& loc : locations) out.push_back(pred.data()[voxel_of(pred, loc.x, loc.y, loc.frame)]);
  return out;
}

std::vector<double> location_scores(const SaliencyVolume& pred, std::span<const ShuffledLocation> locations) {
  std::vector<double> out;
  out.reserve(locations.size());
  for (const auto& loc : locations) out.push_back(pred.data()[voxel_of(pred, loc.x, loc.y, loc.frame)]);
  return out;
}

std::vector<std::vector<double>> borji_negative_scores(const SaliencyVolume& pred, std::size_t n_per_split,
                                                       std::size_t n_splits, std::uint64_t seed) {
  Rng rng(seed);
  const auto total = static_cast<std::uint64_t>(pred.size());
  std::vector<std::vector<double>> splits(n_splits);
  for (auto& split : splits) {
    split.reserve(n_per_split);
    for (std::size_t i = 0; i < n_per_split; ++i) split.push_back(pred.data()[rng.uniform_index(total)]);
  }
  return splits;
}

MetricScore auc_judd(const SaliencyVolume& pred, const AttendedLocationSet& gt) {
  check_coverage(pred, gt);
  AucCounter counter(location_scores(pred, gt.locations));

  // Positive voxels grouped by frame; every other voxel of those frames is a negative.
  std::vector<std::vector<std::size_t>> by_frame(pred.frames());
  for (const auto& loc : gt.locations) {
    const std::size_t v = voxel_of(pred, loc.x, loc.y, loc.frame);
    by_frame[loc.frame].push_back(v - static_cast<std::size_t>(loc.frame) * pred.frame_size());
  }
  std::vector<std::uint8_t> is_positive(pred.frame_size(), 0);
  for (int t = 0; t < pred.frames(); ++t) {
    if (by_frame[t].empty()) continue;
    for (std::size_t i : by_frame[t]) is_positive[i] = 1;
    const auto frame = pred.frame(t);
    for (std::size_t i = 0; i < frame.size(); ++i) {
      if (!is_positive[i]) counter.add_negative(frame[i]);
    }
    for (std::size_t i : by_frame[t]) is_positive[i] = 0;
  }
  if (counter.n_negatives() == 0) throw Error(ErrorCode::EmptyScoreSet, "every voxel of the attended frames is positive");
  return {Metric::AucJudd, counter.auc(), gt.size()};
}

MetricScore auc_borji(const SaliencyVolume& pred, const AttendedLocationSet& gt, std::size_t n_splits,
                      std::uint64_t seed) {
  check_coverage(pred, gt);
  if (n_splits == 0) throw Error(ErrorCode::InvalidArgument, "n_splits must be positive");
  AucCounter base(location_scores(pred, gt.locations));
  double total = 0.0;
  for (const auto& negatives : borji_negative_scores(pred, gt.size(), n_splits, seed)) {
    AucCounter split = base;
    split.add_negatives(negatives);
    total += split.auc();
  }
  return {Metric::AucBorji, total / static_cast<double>(n_splits), gt.size()};
}

MetricScore sauc(const SaliencyVolume& pred, const AttendedLocationSet& gt,
                 std::span<const ShuffledLocation> shuffled_negatives) {
  check_coverage(pred, gt);
  if (shuffled_negatives.empty()) throw Error(ErrorCode::NoDonorClips, "no shuffled negatives");
  const auto pos = location_scores(pred, gt.locations);
  const auto neg = location_scores(pred, shuffled_negatives);
  return {Metric::Sauc, roc_auc_from_scores(pos, neg), gt.size()};
}

MetricScore nss(const SaliencyVolume& pred, const AttendedLocationSet& gt) {
  check_coverage(pred, gt);
  struct Stats {
    bool ready{false};
    double mean{0.0};
    double sd{0.0};
  };
  std::vector<Stats> stats(pred.frames());
  double total = 0.0;
  for (const auto& loc : gt.locations) {
    check_frame(pred, loc.frame);
    Stats& s = stats[loc.frame];
    if (!s.ready) {
      const auto frame = pred.frame(loc.frame);
      double sum = 0.0;
      for (float x : frame) sum += x;
      s.mean = sum / static_cast<double>(frame.size());
      double ss = 0.0;
      for (float x : frame) ss += (x - s.mean) * (x - s.mean);
      s.sd = std::sqrt(ss / static_cast<double>(frame.size()));
      s.ready = true;
    }
    if (s.sd > 0.0) total += (sample_value(pred, loc.x, loc.y, loc.frame) - s.mean) / s.sd;
  }
  return {Metric::Nss, total / static_cast<double>(gt.size()), gt.size()};
}

namespace {

// Sums of a volume per normalization unit (frame, or the whole volume).
std::vector<double> unit_sums(const SaliencyVolume& v, NormalizationMode mode) {
  if (mode == NormalizationMode::Global) {
    double s = 0.0;
    for (float x : v.data()) s += x;
    return {s};
  }
  std::vector<double> sums(v.frames(), 0.0);
  for (int t = 0; t < v.frames(); ++t) {
    for (float x : v.frame(t)) sums[t] += x;
  }
  return sums;
}

// Mean over units with GT mass of term(pred_unit, 1/pred_sum, gt_unit, 1/gt_sum, n).
// A massless prediction unit is treated as all zeros.
template <typename Term>
double mean_over_units(const SaliencyVolume& pred, const SaliencyVolume& gt_vol, NormalizationMode mode, Term term) {
  const auto pred_sums = unit_sums(pred, mode);
  const auto gt_sums = unit_sums(gt_vol, mode);
  const std::size_t unit = mode == NormalizationMode::Global ? pred.size() : pred.frame_size();
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t u = 0; u < gt_sums.size(); ++u) {
    if (!(gt_sums[u] > 0.0)) continue;
    const float* p = pred.data().data() + u * unit;
    const float* q = gt_vol.data().data() + u * unit;
    const double inv_p = pred_sums[u] > 0.0 ? 1.0 / pred_sums[u] : 0.0;
    total += term(p, inv_p, q, 1.0 / gt_sums[u], unit);
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::AllZero, "ground truth '" + gt_vol.clip_id + "' has no mass");
  return total / static_cast<double>(used);
}

}  // namespace

MetricScore sim(const SaliencyVolume& pred, const SaliencyVolume& gt_vol, NormalizationMode mode) {
  check_same_shape(pred, gt_vol);
  const double value = mean_over_units(
      pred, gt_vol, mode, [](const float* p, double inv_p, const float* q, double inv_q, std::size_t n) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::min(p[i] * inv_p, q[i] * inv_q);
        return s;
      });
  return {Metric::Sim, value, 0};
}

namespace {

// Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson(std::span<const float> a, std::span<const float> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

MetricScore cc(const SaliencyVolume& pred, const SaliencyVolume& gt_vol, CcMode mode) {
  check_same_shape(pred, gt_vol);
  if (mode == CcMode::Global) {
    const auto r = pearson(pred.data(), gt_vol.data());
    if (!r) throw Error(ErrorCode::ZeroVariance, "CC undefined for a constant volume");
    return {Metric::Cc, *r, 0};
  }
  double total = 0.0;
  std::size_t used = 0;
  for (int t = 0; t < pred.frames(); ++t) {
    if (const auto r = pearson(pred.frame(t), gt_vol.frame(t))) {
      total += *r;
      ++used;
    }
  }
  if (used == 0) throw Error(ErrorCode::ZeroVariance, "CC undefined: no frame with variance on both sides");
  return {Metric::Cc, total / static_cast<double>(used), 0};
}

MetricScore kld(const SaliencyVolume& pred, const SaliencyVolume& gt_vol, double eps, NormalizationMode mode) {
  check_same_shape(pred, gt_vol);
  const double value = mean_over_units(
      pred, gt_vol, mode, [eps](const float* p, double inv_p, const float* q, double inv_q, std::size_t n) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (q[i] > 0.0f) {
            const double qi = q[i] * inv_q;
            s += qi * std::log(qi / (p[i] * inv_p + eps) + eps);
          }
        }
        return s;
      });
  return {Metric::Kld, value, 0};
}

MetricScore info_gain(const SaliencyVolume& pred, const AttendedLocationSet& gt, const SaliencyVolume& baseline_vol,
                      double eps) {
  check_coverage(pred, gt);
  check_same_shape(pred, baseline_vol);
  const auto pred_sums = unit_sums(pred, NormalizationMode::PerFrame);
  const auto base_sums = unit_sums(baseline_vol, NormalizationMode::PerFrame);
  auto massless = [](const std::vector<double>& sums) {
    return std::none_of(sums.begin(), sums.end(), [](double s) { return s > 0.0; });
  };
  if (massless(pred_sums)) throw Error(ErrorCode::AllZero, "prediction '" + pred.clip_id + "' has no mass");
  if (massless(base_sums)) throw Error(ErrorCode::AllZero, "IG baseline has no mass");

  double total = 0.0;
  for (const auto& loc : gt.locations) {
    check_frame(pred, loc.frame);
    // Bilinear sampling commutes with the per-frame scaling.
    const double ps = pred_sums[loc.frame];
    const double bs = base_sums[loc.frame];
    const double pv = ps > 0.0 ? sample_value(pred, loc.x, loc.y, loc.frame) / ps : 0.0;
    const double bv = bs > 0.0 ? sample_value(baseline_vol, loc.x, loc.y, loc.frame) / bs : 0.0;
    total += std::log2(pv + eps) - std::log2(bv + eps);
  }
  return {Metric::Ig, total / static_cast<double>(gt.size()), gt.size()};
}

MetricScore balanced_accuracy(const SaliencyVolume& pred, const AttendedLocationSet& gt, std::size_t n_splits,
                              std::uint64_t seed) {
  check_coverage(pred, gt);
  if (n_splits == 0) throw Error(ErrorCode::InvalidArgument, "n_splits must be positive");
  const auto pos = location_scores(pred, gt.locations);
  double total = 0.0;
  for (const auto& negatives : borji_negative_scores(pred, gt.size(), n_splits, seed)) {
    total += balanced_accuracy_from_scores(pos, negatives);
  }
  return {Metric::BalAcc, total / static_cast<double>(n_splits), gt.size()};
}

std::vector<std::size_t> xauc_negative_indices(std::size_t n_sp, std::size_t n_fix, std::uint64_t seed) {
  if (n_sp == 0 || n_fix == 0) throw Error(ErrorCode::EmptyScoreSet, "xAUC needs SP and FIX locations");
  Rng rng(seed);
  std::vector<std::size_t> out;
  if (n_fix >= n_sp) {
    std::vector<std::size_t> idx(n_fix);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_sp; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n_fix - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(n_sp);
    return idx;
  }
  out.reserve(n_sp);
  for (std::size_t i = 0; i < n_sp; ++i) out.push_back(static_cast<std::size_t>(rng.uniform_index(n_fix)));
  return out;
}

namespace {

std::pair<std::vector<double>, std::vector<double>> xauc_samples(const SaliencyVolume& pred,
                                                                 const AttendedLocationSet& sp_locs,
                                                                 const AttendedLocationSet& fix_locs,
                                                                 std::uint64_t seed) {
  if (sp_locs.clip_id != fix_locs.clip_id) {
    throw Error(ErrorCode::InvalidArgument, "xAUC location sets belong to different clips");
  }
  check_coverage(pred, sp_locs);
  check_coverage(pred, fix_locs);
  auto sp = location_scores(pred, sp_locs.locations);
  std::vector<double> fix;
  for (std::size_t i : xauc_negative_indices(sp_locs.size(), fix_locs.size(), seed)) {
    const auto& loc = fix_locs.locations[i];
    fix.push_back(pred.data()[voxel_of(pred, loc.x, loc.y, loc.frame)]);
  }
  return {std::move(sp), std::move(fix)};
}

}  // namespace

MetricScore xauc(const SaliencyVolume& pred, const AttendedLocationSet& sp_locs, const AttendedLocationSet& fix_locs,
                 std::uint64_t seed) {
  const auto [sp, fix] = xauc_samples(pred, sp_locs, fix_locs, seed);
  return {Metric::Xauc, roc_auc_from_scores(sp, fix), sp.size()};
}

MetricScore xauc_swapped(const SaliencyVolume& pred, const AttendedLocationSet& sp_locs,
                         const AttendedLocationSet& fix_locs, std::uint64_t seed) {
  const auto [sp, fix] = xauc_samples(pred, sp_locs, fix_locs, seed);
  return {Metric::Xauc, roc_auc_from_scores(fix, sp), fix.size()};
}

}  // namespace supersal
