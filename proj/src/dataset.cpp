#include "supersal/dataset.hpp"

#include "supersal/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

namespace supersal {

const ClipInfo* Dataset::find(std::string_view clip_id) const {
  for (const auto& c : clips) {
    if (c.clip_id == clip_id) return &c;
  }
  return nullptr;
}

const std::vector<GazeRecording>& Dataset::recordings_of(std::string_view clip_id) const {
  static const std::vector<GazeRecording> none;
  const auto it = recordings.find(std::string(clip_id));
  return it == recordings.end() ? none : it->second;
}

namespace {

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_field(const std::string& text, const std::string& where) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::MalformedRow, where + ": cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<ClipInfo> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedRow, path.string() + ": empty manifest");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "clip_id,width,height,frames,fps") {
    throw Error(ErrorCode::MalformedRow, path.string() + ": expected header clip_id,width,height,frames,fps");
  }
  std::vector<ClipInfo> clips;
  std::set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    if (f.size() != 5) throw Error(ErrorCode::MalformedRow, where + ": expected 5 fields");
    ClipInfo c;
    c.clip_id = f[0];
    c.geometry.width = parse_field<int>(f[1], where);
    c.geometry.height = parse_field<int>(f[2], where);
    c.geometry.frames = parse_field<int>(f[3], where);
    c.geometry.fps = parse_field<double>(f[4], where);
    if (c.clip_id.empty() || c.clip_id.find("__") != std::string::npos) {
      throw Error(ErrorCode::MalformedRow, where + ": clip_id must be non-empty and must not contain '__'");
    }
    if (c.geometry.width <= 0 || c.geometry.height <= 0 || c.geometry.frames <= 0 || !(c.geometry.fps > 0.0)) {
      throw Error(ErrorCode::MalformedRow, where + ": geometry must be positive");
    }
    if (!seen.insert(c.clip_id).second) throw Error(ErrorCode::MalformedRow, where + ": duplicate clip " + c.clip_id);
    clips.push_back(std::move(c));
  }
  return clips;
}

Dataset load_dataset(const std::filesystem::path& root) {
  Dataset ds;
  ds.root = root;
  ds.clips = read_manifest(root / "clips.csv");

  const auto gaze_dir = root / "gaze";
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(gaze_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(gaze_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
  } else {
    ds.warnings.push_back("no gaze directory at " + gaze_dir.string());
  }
  std::sort(files.begin(), files.end());

  for (const auto& path : files) {
    const auto ids = split_gaze_stem(path.stem().string());
    if (!ids) {
      ds.warnings.push_back("ignoring " + path.filename().string() + ": expected <clip_id>__<observer_id>.csv");
      continue;
    }
    if (!ds.find(ids->first)) {
      ds.warnings.push_back("ignoring " + path.filename().string() + ": clip not in manifest");
      continue;
    }
    if (ds.failures.count(ids->first)) continue;
    try {
      ds.recordings[ids->first].push_back(read_gaze_file(path));
    } catch (const Error& e) {
      ds.failures[ids->first] = path.filename().string() + ": " + e.what();
      ds.recordings.erase(ids->first);
    }
  }
  return ds;
}

ClipGeometry eval_geometry(const ClipInfo& clip, const EvalConfig& config) {
  ClipGeometry g = clip.geometry;
  if (config.eval_width > 0 && config.eval_height > 0) {
    g.width = config.eval_width;
    g.height = config.eval_height;
  }
  return g;
}

GtParams gt_params_for(const ClipInfo& clip, const EvalConfig& config) {
  const ClipGeometry g = eval_geometry(clip, config);
  GtParams p;
  p.sigma_space_deg = config.sigma_space_deg;
  p.sigma_time_s = config.sigma_time_s;
  p.truncation_radius_sigmas = config.truncation_radius_sigmas;
  p.fps = g.fps;
  p.pixels_per_degree = config.pixels_per_degree * static_cast<double>(g.width) / clip.geometry.width;
  return p;
}

AttendedLocationSet clip_locations(const Dataset& dataset, const ClipInfo& clip, Condition condition,
                                   const EvalConfig& config) {
  auto native = condition_locations(dataset.recordings_of(clip.clip_id), condition, clip.geometry,
                                    config.min_confidence);
  native.clip_id = clip.clip_id;
  const ClipGeometry g = eval_geometry(clip, config);
  return rescale_space(native, g.width, g.height);
}

std::vector<AttendedLocationSet> observer_locations(const Dataset& dataset, const ClipInfo& clip, Condition condition,
                                                    const EvalConfig& config) {
  const ClipGeometry g = eval_geometry(clip, config);
  std::vector<AttendedLocationSet> out;
  for (const auto& rec : dataset.recordings_of(clip.clip_id)) {
    auto native = condition_locations(std::span<const GazeRecording>(&rec, 1), condition, clip.geometry,
                                      config.min_confidence);
    native.clip_id = clip.clip_id;
    out.push_back(rescale_space(native, g.width, g.height));
  }
  return out;
}

}  // namespace supersal
