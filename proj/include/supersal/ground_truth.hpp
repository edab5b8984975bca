#pragma once

#include "supersal/gaze_io.hpp"
#include "supersal/volume.hpp"

#include <span>
#include <vector>

namespace supersal {

struct GtParams {
  double sigma_space_deg{1.0};
  double sigma_time_s{1.0 / 3.0};
  double pixels_per_degree{0.0};
  double fps{0.0};
  double truncation_radius_sigmas{3.0};

  double sigma_space_px() const { return sigma_space_deg * pixels_per_degree; }
  double sigma_time_frames() const { return sigma_time_s * fps; }
};

inline double degrees_to_pixels(double deg, double ppd) { return deg * ppd; }

// Unnormalized Gaussian weights exp(-d^2 / 2 sigma^2) for integer offsets
// d in [-floor(radius), floor(radius)], index 0 at d = -floor(radius).
std::vector<double> gaussian_taps(double sigma, double radius);

// Sum of separable spatio-temporal Gaussians (peak 1) at each location,
// evaluated within truncation_radius_sigmas * sigma per axis. Not normalized.
SaliencyVolume build_gt_volume(std::span<const AttendedLocation> locations, const GtParams& params, int width,
                               int height, int frames);

// Throws EmptyLocations for an empty set.
SaliencyVolume build_gt_volume(const AttendedLocationSet& locs, const GtParams& params, int width, int height,
                               int frames);

}  // namespace supersal
