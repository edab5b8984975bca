#include "supersal/postprocess.hpp"

#include "supersal/error.hpp"
#include "supersal/ground_truth.hpp"

#include <algorithm>
#include <cmath>

namespace supersal {

SaliencyVolume gravity_centre_bias(const SaliencyVolume& v, double pixels_per_degree, const GravityBiasParams& params) {
  if (!(pixels_per_degree > 0.0)) throw Error(ErrorCode::InvalidArgument, "pixels_per_degree must be positive");
  if (!(params.bias_weight >= 0.0 && params.bias_weight <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "bias weight must lie in [0, 1]");
  }
  const double sigma = degrees_to_pixels(params.sigma_deg, pixels_per_degree);
  const auto kernel = gaussian_taps(sigma, params.truncation_radius_sigmas * sigma);
  const int r = static_cast<int>(kernel.size() / 2);
  const int w = v.width();
  const int h = v.height();

  SaliencyVolume out = v;
  std::vector<double> bias(v.frame_size());
  for (int t = 0; t < v.frames(); ++t) {
    const auto frame = v.frame(t);
    double mass = 0.0;
    double mx = 0.0;
    double my = 0.0;
    float peak = 0.0f;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double s = frame[static_cast<std::size_t>(y) * w + x];
        mass += s;
        mx += s * x;
        my += s * y;
        peak = std::max(peak, static_cast<float>(s));
      }
    }
    if (!(mass > 0.0)) continue;
    const int cx = static_cast<int>(std::clamp<long>(std::lround(mx / mass), 0, w - 1));
    const int cy = static_cast<int>(std::clamp<long>(std::lround(my / mass), 0, h - 1));

    // Blurred unit impulse; only the min-max range matters after rescaling.
    double b_min = 0.0;
    double b_max = 0.0;
    bool covers_frame = cx - r <= 0 && cx + r >= w - 1 && cy - r <= 0 && cy + r >= h - 1;
    b_min = covers_frame ? 1.0 : 0.0;
    for (int y = 0; y < h; ++y) {
      const int dy = y - cy;
      const double gy = std::abs(dy) <= r ? kernel[dy + r] : 0.0;
      for (int x = 0; x < w; ++x) {
        const int dx = x - cx;
        const double g = std::abs(dx) <= r ? gy * kernel[dx + r] : 0.0;
        bias[static_cast<std::size_t>(y) * w + x] = g;
        b_max = std::max(b_max, g);
        if (covers_frame) b_min = std::min(b_min, g);
      }
    }

    const double range = b_max - b_min;
    const double wb = params.bias_weight;
    auto dst = out.frame(t);
    for (std::size_t i = 0; i < dst.size(); ++i) {
      const double scaled = range > 0.0 ? (bias[i] - b_min) / range * peak : static_cast<double>(peak);
      dst[i] = static_cast<float>((1.0 - wb) * frame[i] + wb * scaled);
    }
  }
  return out;
}

}  // namespace supersal
