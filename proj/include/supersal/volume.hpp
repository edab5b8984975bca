#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace supersal {

// Width x height x frames grid of non-negative saliency values, frame-major then
// row-major. Pixel centres sit at integer coordinates.
class SaliencyVolume {
 public:
  SaliencyVolume() = default;
  SaliencyVolume(int width, int height, int frames, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  int frames() const { return frames_; }
  std::size_t frame_size() const { return static_cast<std::size_t>(width_) * height_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const SaliencyVolume& other) const {
    return width_ == other.width_ && height_ == other.height_ && frames_ == other.frames_;
  }

  std::size_t index(int x, int y, int t) const {
    return (static_cast<std::size_t>(t) * height_ + y) * width_ + x;
  }
  float& at(int x, int y, int t) { return data_[index(x, y, t)]; }
  float at(int x, int y, int t) const { return data_[index(x, y, t)]; }

  std::span<float> frame(int t) { return {data_.data() + static_cast<std::size_t>(t) * frame_size(), frame_size()}; }
  std::span<const float> frame(int t) const {
    return {data_.data() + static_cast<std::size_t>(t) * frame_size(), frame_size()};
  }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  std::string clip_id;

 private:
  int width_{0};
  int height_{0};
  int frames_{0};
  std::vector<float> data_;
};

enum class NormalizationMode { PerFrame, Global };

// Throws NegativeValue if any voxel is negative or non-finite.
void validate_volume(const SaliencyVolume& v);

// SSV1 file or a directory of 8-bit grayscale frames named %06d.{pgm,png}.
SaliencyVolume read_volume(const std::filesystem::path& path);
SaliencyVolume read_ssv1(const std::filesystem::path& path);
SaliencyVolume read_frame_directory(const std::filesystem::path& dir);

void write_volume(const SaliencyVolume& v, const std::filesystem::path& path);

// Per-frame bilinear interpolation with edge clamping.
SaliencyVolume resize_volume(const SaliencyVolume& v, int new_width, int new_height);

// Scales to unit sum per frame or over the whole volume. Throws AllZero when a
// normalization unit has no mass.
SaliencyVolume normalize_distribution(const SaliencyVolume& v, NormalizationMode mode);

// Double-precision variant, same layout as the volume. With `zero_frames_ok`
// massless frames stay zero instead of throwing (per-frame mode only).
std::vector<double> normalized_values(const SaliencyVolume& v, NormalizationMode mode, bool zero_frames_ok = false);

// Bilinear value at (x, y) of `frame`, coordinates clamped to the frame.
double sample_value(const SaliencyVolume& v, double x, double y, int frame);

}  // namespace supersal
