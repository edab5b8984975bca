#include "supersal/shuffling.hpp"

#include "supersal/error.hpp"
#include "supersal/random.hpp"

#include <algorithm>

namespace supersal {

int rescale_frame(int f, int src_frames, int dst_frames) {
  if (src_frames < 1 || dst_frames < 1) throw Error(ErrorCode::InvalidArgument, "frame counts must be >= 1");
  const long long mapped = static_cast<long long>(f) * dst_frames / src_frames;
  return static_cast<int>(std::clamp<long long>(mapped, 0, dst_frames - 1));
}

AttendedLocationSet temporal_rescale_locations(const AttendedLocationSet& src, int src_frames, int dst_frames) {
  AttendedLocationSet out = src;
  out.frames = dst_frames;
  for (auto& loc : out.locations) loc.frame = rescale_frame(loc.frame, src_frames, dst_frames);
  return out;
}

namespace {

ShuffledLocation map_to_target(const AttendedLocationSet& donor, const AttendedLocation& loc,
                               const ClipGeometry& target, std::size_t donor_index) {
  ShuffledLocation out{loc.x, loc.y, rescale_frame(loc.frame, donor.frames, target.frames), donor_index};
  if (donor.width != target.width && donor.width > 0) {
    out.x = (loc.x + 0.5) * target.width / donor.width - 0.5;
  }
  if (donor.height != target.height && donor.height > 0) {
    out.y = (loc.y + 0.5) * target.height / donor.height - 0.5;
  }
  out.x = std::clamp(out.x, 0.0, static_cast<double>(target.width - 1));
  out.y = std::clamp(out.y, 0.0, static_cast<double>(target.height - 1));
  return out;
}

}  // namespace

std::vector<ShuffledLocation> sample_shuffled_negatives(const ClipGeometry& target, std::string_view target_clip,
                                                        std::span<const AttendedLocationSet> all_sets, std::size_t n,
                                                        std::uint64_t seed, ShuffleMode mode) {
  if (target.frames < 1 || target.width < 1 || target.height < 1) {
    throw Error(ErrorCode::InvalidArgument, "target geometry must be positive");
  }
  std::vector<std::size_t> donors;
  std::vector<std::uint64_t> prefix;  // cumulative location counts over `donors`
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < all_sets.size(); ++i) {
    if (all_sets[i].clip_id == target_clip || all_sets[i].empty()) continue;
    donors.push_back(i);
    total += all_sets[i].size();
    prefix.push_back(total);
  }
  if (donors.empty()) {
    throw Error(ErrorCode::NoDonorClips, "no donor locations for clip '" + std::string(target_clip) + "'");
  }

  Rng rng(seed);
  std::vector<ShuffledLocation> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t d = 0;
    std::uint64_t within = 0;
    if (mode == ShuffleMode::Pooled) {
      const std::uint64_t pick = rng.uniform_index(total);
      d = static_cast<std::size_t>(std::upper_bound(prefix.begin(), prefix.end(), pick) - prefix.begin());
      within = pick - (d == 0 ? 0 : prefix[d - 1]);
    } else {
      d = static_cast<std::size_t>(rng.uniform_index(donors.size()));
      within = rng.uniform_index(all_sets[donors[d]].size());
    }
    const auto& set = all_sets[donors[d]];
    out.push_back(map_to_target(set, set.locations[within], target, donors[d]));
  }
  return out;
}

}  // namespace supersal
