#include "supersal/volume.hpp"

#include "supersal/error.hpp"
#include "supersal/image_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace supersal {

SaliencyVolume::SaliencyVolume(int width, int height, int frames, float fill)
    : width_(width), height_(height), frames_(frames) {
  if (width <= 0 || height <= 0 || frames <= 0) {
    throw Error(ErrorCode::InvalidArgument, "volume dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(width) * height * frames, fill);
}

void validate_volume(const SaliencyVolume& v) {
  for (float x : v.data()) {
    if (!(x >= 0.0f) || !std::isfinite(x)) {
      throw Error(ErrorCode::NegativeValue, "volume '" + v.clip_id + "' has a negative or non-finite value");
    }
  }
}

namespace {

constexpr std::array<char, 4> kMagic{'S', 'S', 'V', '1'};
constexpr std::size_t kHeaderSize = 16;

std::uint32_t load_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32le(unsigned char* p, std::uint32_t v) {
  p[0] = static_cast<unsigned char>(v);
  p[1] = static_cast<unsigned char>(v >> 8);
  p[2] = static_cast<unsigned char>(v >> 16);
  p[3] = static_cast<unsigned char>(v >> 24);
}

}  // namespace

SaliencyVolume read_ssv1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());

  unsigned char header[kHeaderSize];
  in.read(reinterpret_cast<char*>(header), kHeaderSize);
  if (in.gcount() >= 4 && std::memcmp(header, kMagic.data(), 4) != 0) {
    throw Error(ErrorCode::BadMagic, path.string());
  }
  if (in.gcount() != static_cast<std::streamsize>(kHeaderSize)) {
    throw Error(ErrorCode::TruncatedFile, path.string() + ": short header");
  }
  const std::uint32_t w = load_u32le(header + 4);
  const std::uint32_t h = load_u32le(header + 8);
  const std::uint32_t f = load_u32le(header + 12);
  if (w == 0 || h == 0 || f == 0 || w > 1u << 20 || h > 1u << 20 || f > 1u << 24) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": bad dimensions");
  }

  SaliencyVolume v(static_cast<int>(w), static_cast<int>(h), static_cast<int>(f));
  v.clip_id = path.stem().string();
  auto& data = v.data();
  const std::size_t n_bytes = data.size() * sizeof(float);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(n_bytes));
  if (static_cast<std::size_t>(in.gcount()) != n_bytes) {
    throw Error(ErrorCode::TruncatedFile, path.string() + ": expected " + std::to_string(data.size()) + " values");
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (float& x : data) {
      auto bits = std::bit_cast<std::uint32_t>(x);
      bits = (bits >> 24) | ((bits >> 8) & 0xff00u) | ((bits << 8) & 0xff0000u) | (bits << 24);
      x = std::bit_cast<float>(bits);
    }
  }
  validate_volume(v);
  return v;
}

SaliencyVolume read_frame_directory(const std::filesystem::path& dir) {
  const auto files = list_frame_files(dir);
  if (files.empty()) throw Error(ErrorCode::EmptyClip, dir.string() + ": no frames");
  SaliencyVolume v;
  for (std::size_t t = 0; t < files.size(); ++t) {
    const Image img = read_image(files[t]);
    if (img.channels != 1) throw Error(ErrorCode::InvalidArgument, files[t].string() + ": expected grayscale");
    if (t == 0) {
      v = SaliencyVolume(img.width, img.height, static_cast<int>(files.size()));
    } else if (img.width != v.width() || img.height != v.height()) {
      throw Error(ErrorCode::InconsistentFrameSize, files[t].string());
    }
    auto frame = v.frame(static_cast<int>(t));
    for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = static_cast<float>(img.pixels[i]) / 255.0f;
  }
  v.clip_id = dir.filename().string();
  return v;
}

SaliencyVolume read_volume(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return read_frame_directory(path);
  return read_ssv1(path);
}

void write_volume(const SaliencyVolume& v, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  unsigned char header[kHeaderSize];
  std::memcpy(header, kMagic.data(), 4);
  store_u32le(header + 4, static_cast<std::uint32_t>(v.width()));
  store_u32le(header + 8, static_cast<std::uint32_t>(v.height()));
  store_u32le(header + 12, static_cast<std::uint32_t>(v.frames()));
  out.write(reinterpret_cast<const char*>(header), kHeaderSize);

  std::vector<unsigned char> buf(v.size() * 4);
  for (std::size_t i = 0; i < v.size(); ++i) store_u32le(buf.data() + 4 * i, std::bit_cast<std::uint32_t>(v.data()[i]));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

namespace {

struct AxisTap {
  int lo;
  int hi;
  double frac;  // weight of `hi`
};

// Source taps for each destination index, pixel centres aligned, edges clamped.
std::vector<AxisTap> axis_taps(int src, int dst) {
  std::vector<AxisTap> taps(dst);
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    double s = (i + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src - 1));
    const int lo = static_cast<int>(std::floor(s));
    const int hi = std::min(lo + 1, src - 1);
    taps[i] = {lo, hi, s - lo};
  }
  return taps;
}

}  // namespace

SaliencyVolume resize_volume(const SaliencyVolume& v, int new_width, int new_height) {
  if (new_width < 1 || new_height < 1) throw Error(ErrorCode::InvalidArgument, "resize dimensions must be >= 1");
  if (new_width == v.width() && new_height == v.height()) return v;

  SaliencyVolume out(new_width, new_height, v.frames());
  out.clip_id = v.clip_id;
  const auto xs = axis_taps(v.width(), new_width);
  const auto ys = axis_taps(v.height(), new_height);
  for (int t = 0; t < v.frames(); ++t) {
    for (int y = 0; y < new_height; ++y) {
      const auto& ty = ys[y];
      for (int x = 0; x < new_width; ++x) {
        const auto& tx = xs[x];
        const double top = (1.0 - tx.frac) * v.at(tx.lo, ty.lo, t) + tx.frac * v.at(tx.hi, ty.lo, t);
        const double bottom = (1.0 - tx.frac) * v.at(tx.lo, ty.hi, t) + tx.frac * v.at(tx.hi, ty.hi, t);
        out.at(x, y, t) = static_cast<float>((1.0 - ty.frac) * top + ty.frac * bottom);
      }
    }
  }
  return out;
}

std::vector<double> normalized_values(const SaliencyVolume& v, NormalizationMode mode, bool zero_frames_ok) {
  std::vector<double> out(v.data().begin(), v.data().end());
  if (mode == NormalizationMode::Global) {
    double total = 0.0;
    for (double x : out) total += x;
    if (!(total > 0.0)) throw Error(ErrorCode::AllZero, "volume '" + v.clip_id + "' has no mass");
    for (double& x : out) x /= total;
    return out;
  }
  const std::size_t n = v.frame_size();
  for (int t = 0; t < v.frames(); ++t) {
    double* frame = out.data() + static_cast<std::size_t>(t) * n;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += frame[i];
    if (!(total > 0.0)) {
      if (zero_frames_ok) continue;
      throw Error(ErrorCode::AllZero, "frame " + std::to_string(t) + " of '" + v.clip_id + "' has no mass");
    }
    for (std::size_t i = 0; i < n; ++i) frame[i] /= total;
  }
  return out;
}

SaliencyVolume normalize_distribution(const SaliencyVolume& v, NormalizationMode mode) {
  const auto values = normalized_values(v, mode);
  SaliencyVolume out = v;
  std::transform(values.begin(), values.end(), out.data().begin(), [](double x) { return static_cast<float>(x); });
  return out;
}

double sample_value(const SaliencyVolume& v, double x, double y, int frame) {
  if (frame < 0 || frame >= v.frames()) {
    throw Error(ErrorCode::FrameOutOfRange, "frame " + std::to_string(frame) + " of " + std::to_string(v.frames()));
  }
  x = std::clamp(x, 0.0, static_cast<double>(v.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(v.height() - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, v.width() - 1);
  const int y1 = std::min(y0 + 1, v.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = (1.0 - fx) * v.at(x0, y0, frame) + fx * v.at(x1, y0, frame);
  const double bottom = (1.0 - fx) * v.at(x0, y1, frame) + fx * v.at(x1, y1, frame);
  return (1.0 - fy) * top + fy * bottom;
}

}  // namespace supersal
