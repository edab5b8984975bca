#pragma once

#include "supersal/gaze_io.hpp"
#include "supersal/image_io.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace supersal {

struct VoxelLocation {
  std::size_t clip{0};  // index into the pools passed to the sampler
  int x{0};
  int y{0};
  int frame{0};

  friend bool operator==(const VoxelLocation&, const VoxelLocation&) = default;
};

struct TrainingSet {
  std::vector<VoxelLocation> positives;
  std::vector<VoxelLocation> negatives;
};

// Unique attended voxels (nearest pixel) of a pool, first occurrence order.
std::vector<VoxelLocation> unique_voxels(const AttendedLocationSet& pool, std::size_t clip_index = 0);

// n_total / 2 positives from the de-duplicated pooled voxels (without replacement
// when enough exist), then per clip as many uniform negatives as positives were
// drawn there, rejecting attended voxels. Each negative gets `max_attempts`
// tries before NegativeSamplingExhausted.
TrainingSet sample_training_locations(std::span<const AttendedLocationSet> pools, std::size_t n_total,
                                      std::uint64_t seed, std::size_t max_attempts = 1000);

inline TrainingSet sample_training_locations(const AttendedLocationSet& pool, std::size_t n_total, std::uint64_t seed,
                                             std::size_t max_attempts = 1000) {
  return sample_training_locations(std::span<const AttendedLocationSet>(&pool, 1), n_total, seed, max_attempts);
}

// `clip_id,x,y,frame,label` with label pos|neg.
void write_training_csv(std::ostream& out, const TrainingSet& set, std::span<const std::string> clip_ids);

struct SubvolumeSpec {
  int width{128};
  int height{128};
  int frames{15};  // odd; centred on `centre_frame`
  int centre_x{0};
  int centre_y{0};
  int centre_frame{0};
};

// Frame-major, then row-major, channels interleaved.
struct PixelBlock {
  int width{0};
  int height{0};
  int frames{0};
  int channels{1};
  std::vector<std::uint8_t> data;

  std::uint8_t at(int x, int y, int t, int c = 0) const {
    return data[((static_cast<std::size_t>(t) * height + y) * width + x) * channels + c];
  }
};

// Decoded frame images of one clip, all the same size and channel count.
class FrameSequence {
 public:
  explicit FrameSequence(std::vector<Image> frames);
  static FrameSequence load(const std::filesystem::path& dir);

  int width() const { return frames_.front().width; }
  int height() const { return frames_.front().height; }
  int channels() const { return frames_.front().channels; }
  int size() const { return static_cast<int>(frames_.size()); }
  const Image& operator[](int t) const { return frames_[t]; }

 private:
  std::vector<Image> frames_;
};

// Reflect-101 index: -1 -> 1, n -> n - 2 (the edge sample is not repeated).
int reflect_index(int i, int n);

// Block centred on `spec.centre_*`; spatial window covers [c - size/2, c - size/2 + size).
PixelBlock extract_subvolume(const FrameSequence& frames, const SubvolumeSpec& spec);
PixelBlock extract_subvolume(const std::filesystem::path& frames_dir, const SubvolumeSpec& spec);

// Grayscale blocks as SSV1 (values / 255); RGB blocks as SSV3: `SSV3`, u32 LE
// width, height, frames, then width*height*frames RGB byte triplets.
void write_subvolume(const PixelBlock& block, const std::filesystem::path& path);

}  // namespace supersal
