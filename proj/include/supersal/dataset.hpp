#pragma once

#include "supersal/config.hpp"
#include "supersal/gaze_io.hpp"
#include "supersal/ground_truth.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace supersal {

struct ClipInfo {
  std::string clip_id;
  ClipGeometry geometry;  // native resolution
};

// Dataset layout:
//   <root>/clips.csv                 clip_id,width,height,frames,fps
//   <root>/gaze/<clip>__<obs>.csv    one gaze recording per (clip, observer)
//   <root>/frames/<clip>/%06d.png    optional frame images (sampler only)
struct Dataset {
  std::filesystem::path root;
  std::vector<ClipInfo> clips;                                   // manifest order
  std::map<std::string, std::vector<GazeRecording>> recordings;  // by clip, observers sorted by file name
  std::map<std::string, std::string> failures;                   // clip -> first load error
  std::vector<std::string> warnings;

  const ClipInfo* find(std::string_view clip_id) const;
  const std::vector<GazeRecording>& recordings_of(std::string_view clip_id) const;
};

std::vector<ClipInfo> read_manifest(const std::filesystem::path& path);

// Gaze files that fail to parse mark their clip as failed instead of throwing.
Dataset load_dataset(const std::filesystem::path& root);

// Geometry of the evaluation grid for a clip and the matching ground-truth parameters.
ClipGeometry eval_geometry(const ClipInfo& clip, const EvalConfig& config);
GtParams gt_params_for(const ClipInfo& clip, const EvalConfig& config);

// Condition locations on the evaluation grid, pooled over observers.
AttendedLocationSet clip_locations(const Dataset& dataset, const ClipInfo& clip, Condition condition,
                                   const EvalConfig& config);

// One set per observer, same grid as clip_locations.
std::vector<AttendedLocationSet> observer_locations(const Dataset& dataset, const ClipInfo& clip, Condition condition,
                                                    const EvalConfig& config);

}  // namespace supersal
