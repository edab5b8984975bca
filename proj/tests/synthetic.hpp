#pragma once

// Synthetic eye-tracking corpora. Every observer of a clip tracks the same
// moving target during pursuit segments and rests on one of a few static
// hotspots during fixations, so human ground truth predicts other observers
// far better than a centre prior.

#include "supersal/gaze_io.hpp"
#include "supersal/random.hpp"
#include "supersal/volume.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace synth {

struct ClipSpec {
  std::string id;
  int width{64};
  int height{36};
  int frames{25};
  double fps{25.0};
  int observers{3};
  double sp_fraction{0.4};  // share of 100 ms segments spent in pursuit
  double sample_rate_hz{250.0};
  double path_amplitude{0.38};  // target excursion, fraction of the frame size
  double hotspot_spread{0.8};   // hotspots fall in the central fraction of the frame
};

// Target position at time t (seconds); a Lissajous path that keeps well away
// from the frame centre for most of the clip.
inline void target_at(const ClipSpec& c, std::uint64_t clip_seed, double t, double& x, double& y) {
  const double phase = static_cast<double>(clip_seed % 1000) / 1000.0 * 6.283185307179586;
  x = c.width * (0.5 + c.path_amplitude * std::cos(1.3 * t + phase));
  y = c.height * (0.5 + c.path_amplitude * std::sin(2.1 * t + 0.7 * phase));
}

inline std::vector<std::pair<double, double>> hotspots(const ClipSpec& c, std::uint64_t clip_seed) {
  supersal::Rng rng(supersal::derive_seed_index(clip_seed, 77));
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < 3; ++i) {
    const double lo = 0.5 - c.hotspot_spread / 2;
    out.emplace_back(c.width * (lo + c.hotspot_spread * rng.uniform01()),
                     c.height * (lo + c.hotspot_spread * rng.uniform01()));
  }
  return out;
}

inline supersal::GazeRecording make_recording(const ClipSpec& c, int observer, std::uint64_t seed) {
  const std::uint64_t clip_seed = supersal::derive_seed(seed, c.id);
  supersal::Rng rng(supersal::derive_seed_index(clip_seed, observer + 1));
  const auto spots = hotspots(c, clip_seed);
  supersal::GazeRecording rec;
  rec.clip_id = c.id;
  rec.observer_id = "o" + std::to_string(observer);
  const double duration_ms = 1000.0 * c.frames / c.fps;
  const double dt = 1000.0 / c.sample_rate_hz;
  const double noise = 0.02 * c.width;
  supersal::GazeLabel label = supersal::GazeLabel::Fix;
  std::size_t spot = 0;
  double segment_end = -1.0;
  for (int k = 0;; ++k) {
    const double t = k * dt;
    if (t >= duration_ms) break;
    if (t >= segment_end) {
      segment_end = t + 100.0;
      const double u = rng.uniform01();
      if (u < c.sp_fraction) {
        label = supersal::GazeLabel::Sp;
      } else if (u < c.sp_fraction + 0.1) {
        label = supersal::GazeLabel::Saccade;
      } else {
        label = supersal::GazeLabel::Fix;
        spot = rng.uniform_index(spots.size());
      }
    }
    double x, y;
    if (label == supersal::GazeLabel::Sp || label == supersal::GazeLabel::Saccade) {
      target_at(c, clip_seed, t / 1000.0, x, y);
    } else {
      x = spots[spot].first;
      y = spots[spot].second;
    }
    x += noise * rng.normal();
    y += noise * rng.normal();
    rec.samples.push_back({t, x, y, label, 1.0});
  }
  return rec;
}

inline void write_recording(const supersal::GazeRecording& rec, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << "t_ms,x,y,label,confidence\n";
  out.precision(17);
  for (const auto& s : rec.samples) {
    out << s.t_ms << "," << s.x << "," << s.y << "," << supersal::to_string(s.label) << "," << s.confidence << "\n";
  }
}

inline void write_dataset(const std::filesystem::path& root, const std::vector<ClipSpec>& clips, std::uint64_t seed) {
  std::filesystem::create_directories(root / "gaze");
  std::ofstream manifest(root / "clips.csv");
  manifest << "clip_id,width,height,frames,fps\n";
  for (const auto& c : clips) {
    manifest << c.id << "," << c.width << "," << c.height << "," << c.frames << "," << c.fps << "\n";
    for (int o = 0; o < c.observers; ++o) {
      write_recording(make_recording(c, o, seed), root / "gaze" / (c.id + "__o" + std::to_string(o) + ".csv"));
    }
  }
}

// A model that sees the target: Gaussian blob on the target path with
// amplitude `signal`, over uniform noise in [0, 1).
inline supersal::SaliencyVolume model_prediction(const ClipSpec& c, std::uint64_t seed, double signal) {
  const std::uint64_t clip_seed = supersal::derive_seed(seed, c.id);
  supersal::Rng rng(supersal::derive_seed(seed, c.id, std::string_view("model")));
  supersal::SaliencyVolume v(c.width, c.height, c.frames);
  const double sigma = 0.06 * c.width;
  for (int t = 0; t < c.frames; ++t) {
    double tx, ty;
    target_at(c, clip_seed, (t + 0.5) / c.fps, tx, ty);
    for (int y = 0; y < c.height; ++y) {
      for (int x = 0; x < c.width; ++x) {
        const double d2 = (x - tx) * (x - tx) + (y - ty) * (y - ty);
        v.at(x, y, t) = static_cast<float>(rng.uniform01() + signal * std::exp(-0.5 * d2 / (sigma * sigma)));
      }
    }
  }
  v.clip_id = c.id;
  return v;
}

}  // namespace synth
