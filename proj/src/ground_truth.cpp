#include "supersal/ground_truth.hpp"

#include "supersal/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace supersal {

namespace {

void check_params(const GtParams& p) {
  if (!(p.sigma_space_deg > 0.0) || !(p.sigma_time_s > 0.0) || !(p.pixels_per_degree > 0.0) || !(p.fps > 0.0) ||
      !(p.truncation_radius_sigmas > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ground-truth parameters must be strictly positive");
  }
}

// Taps of a sub-pixel centred Gaussian over pixel indices [first, first + size).
struct SpatialTaps {
  int first{0};
  std::vector<double> weights;
};

SpatialTaps spatial_taps(double centre, double sigma, double radius, int extent) {
  SpatialTaps taps;
  const int lo = std::max(0, static_cast<int>(std::ceil(centre - radius)));
  const int hi = std::min(extent - 1, static_cast<int>(std::floor(centre + radius)));
  taps.first = lo;
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (int i = lo; i <= hi; ++i) {
    const double d = i - centre;
    taps.weights.push_back(std::exp(-d * d * inv));
  }
  return taps;
}

}  // namespace

std::vector<double> gaussian_taps(double sigma, double radius) {
  const int r = static_cast<int>(std::floor(radius));
  std::vector<double> taps(2 * static_cast<std::size_t>(r) + 1);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (int d = -r; d <= r; ++d) taps[d + r] = std::exp(-static_cast<double>(d) * d * inv);
  return taps;
}

SaliencyVolume build_gt_volume(std::span<const AttendedLocation> locations, const GtParams& params, int width,
                               int height, int frames) {
  check_params(params);
  SaliencyVolume out(width, height, frames);

  const double sigma_s = params.sigma_space_px();
  const double sigma_t = params.sigma_time_frames();
  const double radius_s = params.truncation_radius_sigmas * sigma_s;
  const auto temporal = gaussian_taps(sigma_t, params.truncation_radius_sigmas * sigma_t);
  const int rt = static_cast<int>(temporal.size() / 2);

  // Group by frame, keeping input order inside each frame.
  std::vector<std::size_t> order(locations.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const auto& loc : locations) {
    if (loc.frame < 0 || loc.frame >= frames) {
      throw Error(ErrorCode::FrameOutOfRange, "location frame " + std::to_string(loc.frame));
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return locations[a].frame < locations[b].frame; });

  // Spatial sum for one source frame, then spread over neighbouring frames.
  std::vector<double> plane(out.frame_size(), 0.0);
  std::size_t k = 0;
  while (k < order.size()) {
    const int f = locations[order[k]].frame;
    int x_min = width;
    int x_max = -1;
    int y_min = height;
    int y_max = -1;
    for (; k < order.size() && locations[order[k]].frame == f; ++k) {
      const auto& loc = locations[order[k]];
      const auto tx = spatial_taps(loc.x, sigma_s, radius_s, width);
      const auto ty = spatial_taps(loc.y, sigma_s, radius_s, height);
      if (tx.weights.empty() || ty.weights.empty()) continue;
      x_min = std::min(x_min, tx.first);
      x_max = std::max(x_max, tx.first + static_cast<int>(tx.weights.size()) - 1);
      y_min = std::min(y_min, ty.first);
      y_max = std::max(y_max, ty.first + static_cast<int>(ty.weights.size()) - 1);
      for (std::size_t j = 0; j < ty.weights.size(); ++j) {
        double* row = plane.data() + static_cast<std::size_t>(ty.first + j) * width + tx.first;
        const double wy = ty.weights[j];
        for (std::size_t i = 0; i < tx.weights.size(); ++i) row[i] += wy * tx.weights[i];
      }
    }
    if (x_max < 0) continue;

    const int t_lo = std::max(0, f - rt);
    const int t_hi = std::min(frames - 1, f + rt);
    for (int t = t_lo; t <= t_hi; ++t) {
      const double wt = temporal[t - f + rt];
      for (int y = y_min; y <= y_max; ++y) {
        const double* src = plane.data() + static_cast<std::size_t>(y) * width;
        float* dst = &out.at(0, y, t);
        for (int x = x_min; x <= x_max; ++x) dst[x] += static_cast<float>(wt * src[x]);
      }
    }
    for (int y = y_min; y <= y_max; ++y) {
      std::fill_n(plane.data() + static_cast<std::size_t>(y) * width + x_min, x_max - x_min + 1, 0.0);
    }
  }
  return out;
}

SaliencyVolume build_gt_volume(const AttendedLocationSet& locs, const GtParams& params, int width, int height,
                               int frames) {
  if (locs.empty()) throw Error(ErrorCode::EmptyLocations, "no attended locations for clip '" + locs.clip_id + "'");
  auto v = build_gt_volume(std::span<const AttendedLocation>(locs.locations), params, width, height, frames);
  v.clip_id = locs.clip_id;
  return v;
}

}  // namespace supersal
