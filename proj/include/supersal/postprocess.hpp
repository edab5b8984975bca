#pragma once

#include "supersal/volume.hpp"

namespace supersal {

struct GravityBiasParams {
  double bias_weight{0.4};
  double sigma_deg{3.0};
  double truncation_radius_sigmas{3.0};
};

// Adaptive centre bias: per frame, a Gaussian at the (rounded) intensity centre
// of mass, min-max scaled to [0, frame max], mixed as
// (1 - w) * frame + w * bias. Zero frames pass through.
SaliencyVolume gravity_centre_bias(const SaliencyVolume& v, double pixels_per_degree,
                                   const GravityBiasParams& params = {});

}  // namespace supersal
