#include "supersal/aggregate.hpp"

#include "supersal/error.hpp"
#include "supersal/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace supersal {

double regular_mean(std::span<const ClipScore> scores) {
  if (scores.empty()) throw Error(ErrorCode::EmptySample, "no clip scores");
  // A summed run of equal values can drift by an ulp.
  const double v0 = scores.front().value;
  if (std::all_of(scores.begin(), scores.end(), [v0](const ClipScore& c) { return c.value == v0; })) return v0;
  double s = 0.0;
  for (const auto& c : scores) s += c.value;
  return s / static_cast<double>(scores.size());
}

double weighted_mean(std::span<const ClipScore> scores) {
  double sw = 0.0;
  double swv = 0.0;
  for (const auto& c : scores) {
    if (c.weight < 0.0) throw Error(ErrorCode::InvalidArgument, "negative weight for clip '" + c.clip_id + "'");
    sw += c.weight;
    swv += c.weight * c.value;
  }
  if (!(sw > 0.0)) throw Error(ErrorCode::ZeroTotalWeight, "weights sum to zero");
  // Equal weights reduce to the regular mean exactly, not just up to rounding.
  const double w0 = scores.front().weight;
  const double v0 = scores.front().value;
  if (std::all_of(scores.begin(), scores.end(), [w0](const ClipScore& c) { return c.weight == w0; }) ||
      std::all_of(scores.begin(), scores.end(), [v0](const ClipScore& c) { return c.value == v0; })) {
    return regular_mean(scores);
  }
  return swv / sw;
}

double pooled_perfect_auc(std::span<const ScoreSamples* const> per_clip) {
  std::vector<double> positives;
  for (const auto* c : per_clip) positives.insert(positives.end(), c->positives.begin(), c->positives.end());
  AucCounter counter(std::move(positives));
  for (const auto* c : per_clip) counter.add_negatives(c->negatives);
  return counter.auc();
}

double pooled_perfect_auc(std::span<const ScoreSamples> per_clip) {
  std::vector<const ScoreSamples*> ptrs;
  for (const auto& c : per_clip) ptrs.push_back(&c);
  return pooled_perfect_auc(std::span<const ScoreSamples* const>(ptrs));
}

KsResult ks_test_one_sided(std::span<const double> errors_a, std::span<const double> errors_b) {
  if (errors_a.empty() || errors_b.empty()) throw Error(ErrorCode::EmptySample, "KS test needs two non-empty samples");
  std::vector<double> a(errors_a.begin(), errors_a.end());
  std::vector<double> b(errors_b.begin(), errors_b.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double m = static_cast<double>(a.size());
  const double n = static_cast<double>(b.size());

  double d_plus = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    // Advance past every sample equal to the next smallest value on both sides.
    double x;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
      x = a[i];
    } else {
      x = b[j];
    }
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d_plus = std::max(d_plus, static_cast<double>(i) / m - static_cast<double>(j) / n);
  }
  const double p = std::exp(-2.0 * d_plus * d_plus * m * n / (m + n));
  return {d_plus, std::clamp(p, 0.0, 1.0)};
}

namespace {

std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

ExperimentResult subset_experiment(std::span<const SubsetClip> clips, std::size_t n_repeats, std::uint64_t seed) {
  if (clips.size() < 3) {
    throw Error(ErrorCode::TooFewClips, "subset experiment needs at least 3 clips for a non-trivial subset size");
  }
  for (const auto& c : clips) {
    if (c.samples == nullptr) throw Error(ErrorCode::InvalidArgument, "clip '" + c.score.clip_id + "' lacks samples");
  }
  const std::size_t n = clips.size();
  ExperimentResult result;
  std::vector<std::size_t> idx(n);
  std::vector<ClipScore> chosen;
  std::vector<const ScoreSamples*> chosen_samples;
  for (std::size_t k = 2; k <= n - 1; ++k) {
    for (std::size_t r = 0; r < n_repeats; ++r) {
      Rng rng(derive_seed_index(derive_seed_index(seed, k), r));
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(idx[i], idx[j]);
      }
      chosen.clear();
      chosen_samples.clear();
      for (std::size_t i = 0; i < k; ++i) {
        chosen.push_back(clips[idx[i]].score);
        chosen_samples.push_back(clips[idx[i]].samples);
      }
      const double perfect = pooled_perfect_auc(std::span<const ScoreSamples* const>(chosen_samples));
      result.subset_sizes.push_back(k);
      result.regular_errors.push_back(std::abs(regular_mean(chosen) - perfect));
      result.weighted_errors.push_back(std::abs(weighted_mean(chosen) - perfect));
    }
  }
  std::tie(result.regular_error_mean, result.regular_error_sd) = mean_sd(result.regular_errors);
  std::tie(result.weighted_error_mean, result.weighted_error_sd) = mean_sd(result.weighted_errors);
  result.ks = ks_test_one_sided(result.weighted_errors, result.regular_errors);
  return result;
}

std::map<Metric, Direction> standard_directions() {
  std::map<Metric, Direction> d;
  for (Metric m : kAllMetrics) d[m] = higher_is_better(m) ? Direction::HigherBetter : Direction::LowerBetter;
  return d;
}

std::map<std::string, double> rank_table(const std::map<std::string, std::map<Metric, double>>& model_scores,
                                         const std::map<Metric, Direction>& directions) {
  std::map<std::string, double> out;
  if (model_scores.empty()) return out;

  std::vector<Metric> metrics;
  for (const auto& [metric, value] : model_scores.begin()->second) {
    if (metric != Metric::Xauc) metrics.push_back(metric);
  }
  for (const auto& [model, scores] : model_scores) {
    std::vector<Metric> own;
    for (const auto& [metric, value] : scores) {
      if (metric != Metric::Xauc) own.push_back(metric);
      if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "non-finite score for model '" + model + "'");
    }
    if (own != metrics) throw Error(ErrorCode::InconsistentMetricSets, "model '" + model + "' has a different metric set");
  }
  if (metrics.empty()) throw Error(ErrorCode::InconsistentMetricSets, "no rankable metrics");

  std::vector<std::string> models;
  for (const auto& [model, scores] : model_scores) {
    models.push_back(model);
    out[model] = 0.0;
  }
  for (Metric metric : metrics) {
    const auto dir_it = directions.find(metric);
    const bool higher = dir_it == directions.end() || dir_it->second == Direction::HigherBetter;
    std::vector<std::pair<double, std::size_t>> vals;
    for (std::size_t i = 0; i < models.size(); ++i) {
      const double v = model_scores.at(models[i]).at(metric);
      vals.emplace_back(higher ? -v : v, i);
    }
    std::sort(vals.begin(), vals.end());
    std::size_t i = 0;
    while (i < vals.size()) {
      std::size_t j = i;
      while (j < vals.size() && vals[j].first == vals[i].first) ++j;
      const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
      for (std::size_t k = i; k < j; ++k) out[models[vals[k].second]] += rank;
      i = j;
    }
  }
  for (auto& [model, total] : out) total /= static_cast<double>(metrics.size());
  return out;
}

}  // namespace supersal
