#include "supersal/gaze_io.hpp"

#include "supersal/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace supersal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::InconsistentFrameSize: return "InconsistentFrameSize";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::FrameOutOfRange: return "FrameOutOfRange";
    case ErrorCode::EmptyLocations: return "EmptyLocations";
    case ErrorCode::NoDonorClips: return "NoDonorClips";
    case ErrorCode::EmptyScoreSet: return "EmptyScoreSet";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::TooFewObservers: return "TooFewObservers";
    case ErrorCode::ZeroTotalWeight: return "ZeroTotalWeight";
    case ErrorCode::TooFewClips: return "TooFewClips";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::InconsistentMetricSets: return "InconsistentMetricSets";
    case ErrorCode::NegativeSamplingExhausted: return "NegativeSamplingExhausted";
    case ErrorCode::EmptyClip: return "EmptyClip";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string_view to_string(GazeLabel label) {
  switch (label) {
    case GazeLabel::Fix: return "FIX";
    case GazeLabel::Sp: return "SP";
    case GazeLabel::Saccade: return "SACCADE";
    case GazeLabel::Noise: return "NOISE";
  }
  return "NOISE";
}

std::string_view to_string(Condition condition) {
  switch (condition) {
    case Condition::Sp: return "sp";
    case Condition::Fix: return "fix";
    case Condition::Onset: return "onset";
  }
  return "sp";
}

std::optional<GazeLabel> parse_label(std::string_view text) {
  if (text == "FIX") return GazeLabel::Fix;
  if (text == "SP") return GazeLabel::Sp;
  if (text == "SACCADE") return GazeLabel::Saccade;
  if (text == "NOISE") return GazeLabel::Noise;
  return std::nullopt;
}

std::optional<Condition> parse_condition(std::string_view text) {
  if (text == "sp") return Condition::Sp;
  if (text == "fix") return Condition::Fix;
  if (text == "onset") return Condition::Onset;
  return std::nullopt;
}

namespace {

constexpr std::string_view kHeader = "t_ms,x,y,label,confidence";

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw Error(ErrorCode::MalformedRow,
                "line " + std::to_string(line_no) + ": cannot parse number '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

GazeRecording parse_gaze_csv(std::istream& in, std::string clip_id, std::string observer_id) {
  if (clip_id.empty() || observer_id.empty()) {
    throw Error(ErrorCode::InvalidArgument, "clip_id and observer_id must be non-empty");
  }
  GazeRecording rec{std::move(clip_id), std::move(observer_id), {}};

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim_cr(line);
    if (!have_header) {
      if (row.starts_with("\xEF\xBB\xBF")) row.remove_prefix(3);
      if (row != kHeader) {
        throw Error(ErrorCode::MalformedRow, "expected header '" + std::string(kHeader) + "'");
      }
      have_header = true;
      continue;
    }
    if (row.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = row.find(',', start);
      if (comma == std::string_view::npos) {
        fields.push_back(row.substr(start));
        break;
      }
      fields.push_back(row.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 5) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected 5 fields, got " +
                                               std::to_string(fields.size()));
    }

    GazeSample s;
    s.t_ms = parse_number(fields[0], line_no);
    s.x = parse_number(fields[1], line_no);
    s.y = parse_number(fields[2], line_no);
    const auto label = parse_label(fields[3]);
    if (!label) {
      throw Error(ErrorCode::UnknownLabel,
                  "line " + std::to_string(line_no) + ": '" + std::string(fields[3]) + "'");
    }
    s.label = *label;
    s.confidence = parse_number(fields[4], line_no);

    if (!std::isfinite(s.t_ms) || s.t_ms < 0.0 || !std::isfinite(s.x) || !std::isfinite(s.y) ||
        !(s.confidence >= 0.0 && s.confidence <= 1.0)) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": value out of range");
    }
    if (!rec.samples.empty() && !(s.t_ms > rec.samples.back().t_ms)) {
      throw Error(ErrorCode::NonMonotoneTime, "line " + std::to_string(line_no) + ": t_ms " +
                                                  std::string(fields[0]) + " does not increase");
    }
    rec.samples.push_back(s);
  }
  if (!have_header) throw Error(ErrorCode::MalformedRow, "missing header");
  return rec;
}

std::optional<std::pair<std::string, std::string>> split_gaze_stem(std::string_view stem) {
  const std::size_t sep = stem.find("__");
  if (sep == std::string_view::npos || sep == 0 || sep + 2 >= stem.size()) return std::nullopt;
  return std::pair{std::string(stem.substr(0, sep)), std::string(stem.substr(sep + 2))};
}

GazeRecording read_gaze_file(const std::filesystem::path& path) {
  const auto ids = split_gaze_stem(path.stem().string());
  if (!ids) {
    throw Error(ErrorCode::InvalidArgument,
                path.string() + ": file name must be <clip_id>__<observer_id>.csv");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse_gaze_csv(in, ids->first, ids->second);
}

std::vector<GazeEvent> extract_events(const GazeRecording& rec) {
  std::vector<GazeEvent> events;
  const auto& s = rec.samples;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i + 1;
    while (j < s.size() && s[j].label == s[i].label) ++j;

    GazeEvent e;
    e.label = s[i].label;
    e.first_sample = i;
    e.n_samples = j - i;
    e.onset_ms = s[i].t_ms;
    if (j < s.size()) {
      e.offset_ms = s[j].t_ms;
    } else if (s.size() >= 2) {
      e.offset_ms = s[j - 1].t_ms + (s[s.size() - 1].t_ms - s[s.size() - 2].t_ms);
    } else {
      e.offset_ms = s[j - 1].t_ms + 1.0;
    }
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      sx += s[k].x;
      sy += s[k].y;
    }
    e.mean_x = sx / static_cast<double>(e.n_samples);
    e.mean_y = sy / static_cast<double>(e.n_samples);
    events.push_back(e);
    i = j;
  }
  return events;
}

int time_to_frame(double t_ms, double fps, int frames) {
  const double f = std::floor(t_ms * fps / 1000.0);
  if (f <= 0.0) return 0;
  if (f >= static_cast<double>(frames - 1)) return frames - 1;
  return static_cast<int>(f);
}

namespace {

double clamp_coord(double v, int extent) {
  return std::clamp(v, 0.0, static_cast<double>(extent - 1));
}

}  // namespace

AttendedLocationSet condition_locations(std::span<const GazeRecording> recs, Condition condition,
                                        const ClipGeometry& geometry, double min_confidence) {
  if (!(geometry.fps > 0.0) || geometry.frames <= 0 || geometry.width <= 0 || geometry.height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "clip geometry must be positive");
  }
  AttendedLocationSet out;
  out.condition = condition;
  out.width = geometry.width;
  out.height = geometry.height;
  out.frames = geometry.frames;
  if (!recs.empty()) out.clip_id = recs.front().clip_id;

  for (const auto& rec : recs) {
    if (rec.clip_id != out.clip_id) {
      throw Error(ErrorCode::InvalidArgument, "recordings of different clips: " + out.clip_id + ", " + rec.clip_id);
    }
    const auto observer = static_cast<std::uint32_t>(out.observers.size());
    out.observers.push_back(rec.observer_id);

    const GazeRecording* source = &rec;
    GazeRecording filtered;
    if (min_confidence > 0.0) {
      filtered.clip_id = rec.clip_id;
      filtered.observer_id = rec.observer_id;
      for (const auto& s : rec.samples) {
        if (s.confidence >= min_confidence) filtered.samples.push_back(s);
      }
      source = &filtered;
    }

    auto emit = [&](double x, double y, double t_ms) {
      out.locations.push_back({observer, clamp_coord(x, geometry.width), clamp_coord(y, geometry.height),
                               time_to_frame(t_ms, geometry.fps, geometry.frames)});
    };

    if (condition == Condition::Onset) {
      for (const auto& e : extract_events(*source)) {
        if (e.label == GazeLabel::Fix) emit(e.mean_x, e.mean_y, e.onset_ms);
      }
    } else {
      const GazeLabel wanted = condition == Condition::Sp ? GazeLabel::Sp : GazeLabel::Fix;
      for (const auto& s : source->samples) {
        if (s.label == wanted) emit(s.x, s.y, s.t_ms);
      }
    }
  }
  if (out.locations.empty()) {
    out.warnings.push_back("EmptyConditionSet: no " + std::string(to_string(condition)) +
                           " locations for clip '" + out.clip_id + "'");
  }
  return out;
}

AttendedLocationSet merge_sets(std::span<const AttendedLocationSet> sets) {
  AttendedLocationSet out;
  if (sets.empty()) return out;
  out.clip_id = sets.front().clip_id;
  out.condition = sets.front().condition;
  out.width = sets.front().width;
  out.height = sets.front().height;
  out.frames = sets.front().frames;

  std::map<std::string, std::uint32_t> index;
  for (const auto& set : sets) {
    if (set.clip_id != out.clip_id || set.frames != out.frames || set.width != out.width ||
        set.height != out.height) {
      throw Error(ErrorCode::InvalidArgument, "cannot merge location sets of different clips");
    }
    std::vector<std::uint32_t> remap(set.observers.size());
    for (std::size_t i = 0; i < set.observers.size(); ++i) {
      auto [it, inserted] = index.try_emplace(set.observers[i], static_cast<std::uint32_t>(out.observers.size()));
      if (inserted) out.observers.push_back(set.observers[i]);
      remap[i] = it->second;
    }
    for (auto loc : set.locations) {
      loc.observer = remap.empty() ? 0 : remap[loc.observer];
      out.locations.push_back(loc);
    }
  }
  return out;
}

AttendedLocationSet rescale_space(const AttendedLocationSet& set, int new_width, int new_height) {
  if (new_width <= 0 || new_height <= 0) throw Error(ErrorCode::InvalidArgument, "dimensions must be positive");
  AttendedLocationSet out = set;
  out.width = new_width;
  out.height = new_height;
  if (new_width == set.width && new_height == set.height) return out;
  const double sx = static_cast<double>(new_width) / set.width;
  const double sy = static_cast<double>(new_height) / set.height;
  for (auto& loc : out.locations) {
    loc.x = clamp_coord((loc.x + 0.5) * sx - 0.5, new_width);
    loc.y = clamp_coord((loc.y + 0.5) * sy - 0.5, new_height);
  }
  return out;
}

}  // namespace supersal
