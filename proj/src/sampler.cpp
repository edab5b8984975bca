#include "supersal/sampler.hpp"

#include "supersal/error.hpp"
#include "supersal/random.hpp"
#include "supersal/volume.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

namespace supersal {

namespace {

int nearest(double v, int extent) { return static_cast<int>(std::clamp<long>(std::lround(v), 0, extent - 1)); }

std::uint64_t voxel_key(int x, int y, int frame, int width, int height) {
  return (static_cast<std::uint64_t>(frame) * height + y) * width + x;
}

}  // namespace

std::vector<VoxelLocation> unique_voxels(const AttendedLocationSet& pool, std::size_t clip_index) {
  std::vector<VoxelLocation> out;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& loc : pool.locations) {
    const VoxelLocation v{clip_index, nearest(loc.x, pool.width), nearest(loc.y, pool.height), loc.frame};
    if (seen.insert(voxel_key(v.x, v.y, v.frame, pool.width, pool.height)).second) out.push_back(v);
  }
  return out;
}

TrainingSet sample_training_locations(std::span<const AttendedLocationSet> pools, std::size_t n_total,
                                      std::uint64_t seed, std::size_t max_attempts) {
  if (n_total == 0 || n_total % 2 != 0) throw Error(ErrorCode::InvalidArgument, "n_total must be even and positive");
  std::vector<VoxelLocation> candidates;
  std::vector<std::unordered_set<std::uint64_t>> occupied(pools.size());
  for (std::size_t c = 0; c < pools.size(); ++c) {
    const auto& pool = pools[c];
    for (const auto& v : unique_voxels(pool, c)) {
      occupied[c].insert(voxel_key(v.x, v.y, v.frame, pool.width, pool.height));
      candidates.push_back(v);
    }
  }
  if (candidates.empty()) throw Error(ErrorCode::EmptyLocations, "no positive locations to sample from");

  const std::size_t half = n_total / 2;
  Rng rng(seed);
  TrainingSet set;
  set.positives.reserve(half);
  if (candidates.size() >= half) {
    for (std::size_t i = 0; i < half; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(candidates.size() - i));
      std::swap(candidates[i], candidates[j]);
      set.positives.push_back(candidates[i]);
    }
  } else {
    for (std::size_t i = 0; i < half; ++i) set.positives.push_back(candidates[rng.uniform_index(candidates.size())]);
  }

  std::vector<std::size_t> per_clip(pools.size(), 0);
  for (const auto& p : set.positives) ++per_clip[p.clip];
  set.negatives.reserve(half);
  for (std::size_t c = 0; c < pools.size(); ++c) {
    const auto& pool = pools[c];
    const auto n_voxels = static_cast<std::uint64_t>(pool.width) * pool.height * pool.frames;
    for (std::size_t k = 0; k < per_clip[c]; ++k) {
      bool placed = false;
      for (std::size_t attempt = 0; attempt < max_attempts && !placed; ++attempt) {
        const std::uint64_t v = rng.uniform_index(n_voxels);
        if (occupied[c].count(v)) continue;
        const auto x = static_cast<int>(v % pool.width);
        const auto y = static_cast<int>((v / pool.width) % pool.height);
        const auto f = static_cast<int>(v / (static_cast<std::uint64_t>(pool.width) * pool.height));
        set.negatives.push_back({c, x, y, f});
        placed = true;
      }
      if (!placed) {
        throw Error(ErrorCode::NegativeSamplingExhausted,
                    "clip '" + pool.clip_id + "': no free voxel after " + std::to_string(max_attempts) + " attempts");
      }
    }
  }
  return set;
}

void write_training_csv(std::ostream& out, const TrainingSet& set, std::span<const std::string> clip_ids) {
  out << "clip_id,x,y,frame,label\n";
  auto rows = [&](const std::vector<VoxelLocation>& locs, const char* label) {
    for (const auto& l : locs) {
      out << clip_ids[l.clip] << ',' << l.x << ',' << l.y << ',' << l.frame << ',' << label << '\n';
    }
  };
  rows(set.positives, "pos");
  rows(set.negatives, "neg");
}

FrameSequence::FrameSequence(std::vector<Image> frames) : frames_(std::move(frames)) {
  if (frames_.empty()) throw Error(ErrorCode::EmptyClip, "frame sequence is empty");
  for (const auto& f : frames_) {
    if (f.width != frames_.front().width || f.height != frames_.front().height ||
        f.channels != frames_.front().channels) {
      throw Error(ErrorCode::InconsistentFrameSize, "frames differ in size or channel count");
    }
  }
}

FrameSequence FrameSequence::load(const std::filesystem::path& dir) {
  std::vector<Image> frames;
  for (const auto& path : list_frame_files(dir)) frames.push_back(read_image(path));
  if (frames.empty()) throw Error(ErrorCode::EmptyClip, dir.string() + ": no frames");
  return FrameSequence(std::move(frames));
}

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

PixelBlock extract_subvolume(const FrameSequence& frames, const SubvolumeSpec& spec) {
  if (spec.width < 1 || spec.height < 1 || spec.frames < 1 || spec.frames % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "subvolume needs positive size and an odd frame count");
  }
  PixelBlock block{spec.width, spec.height, spec.frames, frames.channels(), {}};
  block.data.resize(static_cast<std::size_t>(spec.width) * spec.height * spec.frames * block.channels);
  const int x0 = spec.centre_x - spec.width / 2;
  const int y0 = spec.centre_y - spec.height / 2;
  const int t0 = spec.centre_frame - spec.frames / 2;
  const int ch = block.channels;
  std::size_t k = 0;
  for (int t = 0; t < spec.frames; ++t) {
    const Image& img = frames[reflect_index(t0 + t, frames.size())];
    for (int y = 0; y < spec.height; ++y) {
      const int sy = reflect_index(y0 + y, img.height);
      for (int x = 0; x < spec.width; ++x) {
        const int sx = reflect_index(x0 + x, img.width);
        const std::uint8_t* px = img.pixels.data() + (static_cast<std::size_t>(sy) * img.width + sx) * ch;
        for (int c = 0; c < ch; ++c) block.data[k++] = px[c];
      }
    }
  }
  return block;
}

PixelBlock extract_subvolume(const std::filesystem::path& frames_dir, const SubvolumeSpec& spec) {
  return extract_subvolume(FrameSequence::load(frames_dir), spec);
}

void write_subvolume(const PixelBlock& block, const std::filesystem::path& path) {
  if (block.channels == 1) {
    SaliencyVolume v(block.width, block.height, block.frames);
    std::transform(block.data.begin(), block.data.end(), v.data().begin(),
                   [](std::uint8_t b) { return static_cast<float>(b) / 255.0f; });
    write_volume(v, path);
    return;
  }
  if (block.channels != 3) throw Error(ErrorCode::InvalidArgument, "subvolumes must be gray or RGB");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  unsigned char header[16] = {'S', 'S', 'V', '3'};
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(block.width), static_cast<std::uint32_t>(block.height),
                                 static_cast<std::uint32_t>(block.frames)};
  for (int d = 0; d < 3; ++d) {
    for (int b = 0; b < 4; ++b) header[4 + 4 * d + b] = static_cast<unsigned char>(dims[d] >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(reinterpret_cast<const char*>(block.data.data()), static_cast<std::streamsize>(block.data.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace supersal
