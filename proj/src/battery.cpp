#include "supersal/battery.hpp"

#include "supersal/error.hpp"
#include "supersal/random.hpp"
#include "supersal/shuffling.hpp"

#include <optional>

namespace supersal {

BatterySeeds battery_seeds(std::uint64_t master, std::string_view clip_id, Condition condition) {
  const std::string_view cond = to_string(condition);
  return {derive_seed(master, clip_id, cond, std::string_view("borji")),
          derive_seed(master, clip_id, cond, std::string_view("sauc")),
          derive_seed(master, clip_id, cond, std::string_view("ig")),
          derive_seed(master, clip_id, std::string_view("xauc"))};
}

BatteryResult run_battery(const SaliencyVolume& pred, const BatteryInputs& inputs, const EvalConfig& config,
                          const BatterySeeds& seeds, bool keep_samples) {
  if (inputs.positives == nullptr) throw Error(ErrorCode::InvalidArgument, "battery needs a positive set");
  const AttendedLocationSet& pos = *inputs.positives;
  if (pos.empty()) throw Error(ErrorCode::EmptyScoreSet, "no positives for clip '" + pos.clip_id + "'");
  const ClipGeometry geometry{pred.width(), pred.height(), pred.frames(), inputs.gt_params.fps};

  BatteryResult result;
  auto attempt = [&](Metric metric, auto&& compute) {
    try {
      result.scores.push_back(compute());
    } catch (const Error& e) {
      result.warnings.push_back(std::string(to_string(metric)) + " skipped: " + e.what());
    }
  };

  std::optional<SaliencyVolume> own_gt;
  const SaliencyVolume* gt_vol = inputs.gt_volume;
  if (gt_vol == nullptr) {
    own_gt = build_gt_volume(pos, inputs.gt_params, pred.width(), pred.height(), pred.frames());
    gt_vol = &*own_gt;
  }

  std::vector<ShuffledLocation> shuffled;
  try {
    shuffled = sample_shuffled_negatives(geometry, pos.clip_id, inputs.donors, pos.size(), seeds.sauc,
                                         config.shuffle_mode);
  } catch (const Error& e) {
    result.warnings.push_back(std::string("shuffled negatives unavailable: ") + e.what());
  }

  attempt(Metric::AucJudd, [&] { return auc_judd(pred, pos); });
  attempt(Metric::AucBorji, [&] {
    auto score = auc_borji(pred, pos, config.borji_splits, seeds.borji);
    if (keep_samples) {
      ScoreSamples s;
      s.positives = location_scores(pred, pos.locations);
      for (auto& split : borji_negative_scores(pred, pos.size(), config.borji_splits, seeds.borji)) {
        s.negatives.insert(s.negatives.end(), split.begin(), split.end());
      }
      result.samples[Metric::AucBorji] = std::move(s);
    }
    return score;
  });
  attempt(Metric::Sauc, [&] {
    if (shuffled.empty()) throw Error(ErrorCode::NoDonorClips, "no shuffled negatives");
    auto score = sauc(pred, pos, shuffled);
    if (keep_samples) {
      result.samples[Metric::Sauc] = {location_scores(pred, pos.locations), location_scores(pred, shuffled)};
    }
    return score;
  });
  attempt(Metric::Nss, [&] { return nss(pred, pos); });
  attempt(Metric::Sim, [&] {
    auto s = sim(pred, *gt_vol, config.distribution_mode);
    s.n_positives = pos.size();
    return s;
  });
  attempt(Metric::Cc, [&] {
    auto s = cc(pred, *gt_vol, config.cc_mode);
    s.n_positives = pos.size();
    return s;
  });
  attempt(Metric::Kld, [&] {
    auto s = kld(pred, *gt_vol, config.kld_eps, config.distribution_mode);
    s.n_positives = pos.size();
    return s;
  });
  attempt(Metric::Ig, [&] {
    std::size_t pool = 0;
    for (const auto& d : inputs.donors) {
      if (d.clip_id != pos.clip_id) pool += d.size();
    }
    const std::size_t n = std::min(config.ig_baseline_locations, pool);
    if (n == 0) throw Error(ErrorCode::NoDonorClips, "no donor locations for the IG baseline");
    const auto draws = sample_shuffled_negatives(geometry, pos.clip_id, inputs.donors, n, seeds.ig,
                                                 config.shuffle_mode);
    std::vector<AttendedLocation> locs;
    locs.reserve(draws.size());
    for (const auto& d : draws) locs.push_back({0, d.x, d.y, d.frame});
    const auto baseline = build_gt_volume(std::span<const AttendedLocation>(locs), inputs.gt_params, pred.width(),
                                          pred.height(), pred.frames());
    return info_gain(pred, pos, baseline, config.ig_eps);
  });
  attempt(Metric::BalAcc, [&] { return balanced_accuracy(pred, pos, config.borji_splits, seeds.borji); });
  attempt(Metric::Xauc, [&] {
    if (inputs.sp == nullptr || inputs.fix == nullptr || inputs.sp->empty() || inputs.fix->empty()) {
      throw Error(ErrorCode::EmptyScoreSet, "xAUC needs SP and FIX locations");
    }
    auto score = xauc(pred, *inputs.sp, *inputs.fix, seeds.xauc);
    if (keep_samples) {
      ScoreSamples s;
      s.positives = location_scores(pred, inputs.sp->locations);
      for (std::size_t i : xauc_negative_indices(inputs.sp->size(), inputs.fix->size(), seeds.xauc)) {
        const auto& l = inputs.fix->locations[i];
        s.negatives.push_back(location_scores(pred, std::span<const AttendedLocation>(&l, 1)).front());
      }
      result.samples[Metric::Xauc] = std::move(s);
    }
    return score;
  });
  return result;
}

}  // namespace supersal
