#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace supersal {

enum class GazeLabel { Fix, Sp, Saccade, Noise };

// Evaluation condition: smooth-pursuit samples, fixation samples, or fixation onsets.
enum class Condition { Sp, Fix, Onset };

std::string_view to_string(GazeLabel label);
std::string_view to_string(Condition condition);  // "sp", "fix", "onset"
std::optional<GazeLabel> parse_label(std::string_view text);
std::optional<Condition> parse_condition(std::string_view text);

struct GazeSample {
  double t_ms{0.0};
  double x{0.0};  // pixels, may be off-screen
  double y{0.0};
  GazeLabel label{GazeLabel::Noise};
  double confidence{1.0};
};

struct GazeRecording {
  std::string clip_id;
  std::string observer_id;
  std::vector<GazeSample> samples;  // strictly increasing t_ms
};

// A maximal run of identically labelled samples.
struct GazeEvent {
  GazeLabel label{GazeLabel::Noise};
  double onset_ms{0.0};
  double offset_ms{0.0};  // time of the first sample after the run
  double mean_x{0.0};
  double mean_y{0.0};
  std::size_t first_sample{0};
  std::size_t n_samples{0};
};

struct ClipGeometry {
  int width{0};
  int height{0};
  int frames{0};
  double fps{0.0};
};

struct AttendedLocation {
  std::uint32_t observer{0};  // index into AttendedLocationSet::observers
  double x{0.0};
  double y{0.0};
  int frame{0};
};

struct AttendedLocationSet {
  std::string clip_id;
  Condition condition{Condition::Sp};
  int width{0};
  int height{0};
  int frames{0};
  std::vector<std::string> observers;
  std::vector<AttendedLocation> locations;
  std::vector<std::string> warnings;

  bool empty() const { return locations.empty(); }
  std::size_t size() const { return locations.size(); }
};

GazeRecording parse_gaze_csv(std::istream& in, std::string clip_id, std::string observer_id);

// Reads `<clip_id>__<observer_id>.csv`; ids are taken from the file name.
GazeRecording read_gaze_file(const std::filesystem::path& path);

// Splits a gaze file stem into (clip_id, observer_id); nullopt if the stem has no "__".
std::optional<std::pair<std::string, std::string>> split_gaze_stem(std::string_view stem);

std::vector<GazeEvent> extract_events(const GazeRecording& rec);

// Frame on screen at time t_ms: floor(t_ms * fps / 1000), clamped to [0, frames - 1].
int time_to_frame(double t_ms, double fps, int frames);

// Samples with confidence below `min_confidence` are dropped before anything else.
AttendedLocationSet condition_locations(std::span<const GazeRecording> recs, Condition condition,
                                        const ClipGeometry& geometry, double min_confidence = 0.0);

// Concatenates sets of the same clip and condition, merging observer tables.
AttendedLocationSet merge_sets(std::span<const AttendedLocationSet> sets);

// Maps pixel coordinates to a new resolution (pixel centres aligned), clamped to the new bounds.
AttendedLocationSet rescale_space(const AttendedLocationSet& set, int new_width, int new_height);

}  // namespace supersal
