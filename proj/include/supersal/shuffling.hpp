#pragma once

#include "supersal/gaze_io.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace supersal {

enum class ShuffleMode {
  Pooled,          // uniform over the pooled multiset of donor locations
  PerClipUniform,  // uniform donor clip first, then uniform location within it
};

struct ShuffledLocation {
  double x{0.0};
  double y{0.0};
  int frame{0};
  std::size_t donor{0};  // index into the `all_sets` span the draw came from
};

// floor(f * dst / src), clamped to [0, dst - 1].
int rescale_frame(int f, int src_frames, int dst_frames);

AttendedLocationSet temporal_rescale_locations(const AttendedLocationSet& src, int src_frames, int dst_frames);

// Draws `n` locations with replacement from every set whose clip_id differs from
// `target.clip_id`, mapped onto the target's frame count (and, when donor
// resolution differs, its spatial grid). Throws NoDonorClips if no donor has
// locations.
std::vector<ShuffledLocation> sample_shuffled_negatives(const ClipGeometry& target, std::string_view target_clip,
                                                        std::span<const AttendedLocationSet> all_sets, std::size_t n,
                                                        std::uint64_t seed, ShuffleMode mode = ShuffleMode::Pooled);

}  // namespace supersal
