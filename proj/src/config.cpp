#include "supersal/config.hpp"

#include "supersal/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace supersal {

std::string_view to_string(Averaging a) { return a == Averaging::Weighted ? "weighted" : "regular"; }

Averaging EvalConfig::averaging_for(Condition c) const {
  switch (c) {
    case Condition::Sp: return averaging_sp;
    case Condition::Fix: return averaging_fix;
    case Condition::Onset: return averaging_onset;
  }
  return averaging_sp;
}

void EvalConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::ConfigError, what);
  };
  require(pixels_per_degree > 0.0, "pixels_per_degree must be set to a positive value");
  require(eval_width >= 0 && eval_height >= 0, "eval_width/eval_height must be >= 0");
  require((eval_width == 0) == (eval_height == 0), "eval_width and eval_height must both be set or both be 0");
  require(sigma_space_deg > 0.0 && sigma_time_s > 0.0 && truncation_radius_sigmas > 0.0, "sigmas must be positive");
  require(borji_splits > 0, "borji_splits must be positive");
  require(kld_eps > 0.0 && ig_eps > 0.0, "eps values must be positive");
  require(ig_baseline_locations > 0, "ig_baseline_locations must be positive");
  require(min_confidence >= 0.0 && min_confidence <= 1.0, "min_confidence must lie in [0, 1]");
  require(baseline_repetitions > 0, "baseline_repetitions must be positive");
  require(centre_sigma_fraction > 0.0, "centre_sigma_fraction must be positive");
  require(bias_weight >= 0.0 && bias_weight <= 1.0, "bias_weight must lie in [0, 1]");
  require(bias_sigma_deg > 0.0, "bias_sigma_deg must be positive");
  require(subset_repeats > 0, "subset_repeats must be positive");
  require(!model.empty() && !dataset.empty(), "model and dataset names must be non-empty");
  for (const std::string* name : {&model, &dataset}) {
    require(name->find_first_of("#\n\r=,\"/") == std::string::npos && name->find_first_of(" \t") != 0 &&
                name->find_last_of(" \t") != name->size() - 1,
            "model and dataset names must not contain '#', '=', ',', '\"', '/', newlines or edge whitespace");
  }
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_num(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::ConfigError, std::string(key) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

Averaging parse_averaging(std::string_view key, std::string_view v) {
  if (v == "weighted") return Averaging::Weighted;
  if (v == "regular") return Averaging::Regular;
  throw Error(ErrorCode::ConfigError, std::string(key) + ": expected weighted|regular");
}

struct Field {
  std::function<std::string(const EvalConfig&)> get;
  std::function<void(EvalConfig&, std::string_view)> set;
};

template <typename T>
Field number_field(T EvalConfig::*member) {
  return {[member](const EvalConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          },
          [member](EvalConfig& c, std::string_view v) { c.*member = parse_num<T>("value", v); }};
}

Field averaging_field(Averaging EvalConfig::*member) {
  return {[member](const EvalConfig& c) { return std::string(to_string(c.*member)); },
          [member](EvalConfig& c, std::string_view v) { c.*member = parse_averaging("averaging", v); }};
}

// Key order here is the serialization order.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"pixels_per_degree", number_field(&EvalConfig::pixels_per_degree)},
      {"eval_width", number_field(&EvalConfig::eval_width)},
      {"eval_height", number_field(&EvalConfig::eval_height)},
      {"sigma_space_deg", number_field(&EvalConfig::sigma_space_deg)},
      {"sigma_time_s", number_field(&EvalConfig::sigma_time_s)},
      {"truncation_radius_sigmas", number_field(&EvalConfig::truncation_radius_sigmas)},
      {"seed", number_field(&EvalConfig::seed)},
      {"borji_splits", number_field(&EvalConfig::borji_splits)},
      {"kld_eps", number_field(&EvalConfig::kld_eps)},
      {"ig_eps", number_field(&EvalConfig::ig_eps)},
      {"ig_baseline_locations", number_field(&EvalConfig::ig_baseline_locations)},
      {"distribution_mode",
       {[](const EvalConfig& c) {
          return std::string(c.distribution_mode == NormalizationMode::PerFrame ? "per_frame" : "global");
        },
        [](EvalConfig& c, std::string_view v) {
          if (v == "per_frame") {
            c.distribution_mode = NormalizationMode::PerFrame;
          } else if (v == "global") {
            c.distribution_mode = NormalizationMode::Global;
          } else {
            throw Error(ErrorCode::ConfigError, "distribution_mode: expected per_frame|global");
          }
        }}},
      {"cc_mode",
       {[](const EvalConfig& c) { return std::string(c.cc_mode == CcMode::Global ? "global" : "per_frame"); },
        [](EvalConfig& c, std::string_view v) {
          if (v == "global") {
            c.cc_mode = CcMode::Global;
          } else if (v == "per_frame") {
            c.cc_mode = CcMode::PerFrame;
          } else {
            throw Error(ErrorCode::ConfigError, "cc_mode: expected global|per_frame");
          }
        }}},
      {"shuffle_mode",
       {[](const EvalConfig& c) { return std::string(c.shuffle_mode == ShuffleMode::Pooled ? "pooled" : "per_clip"); },
        [](EvalConfig& c, std::string_view v) {
          if (v == "pooled") {
            c.shuffle_mode = ShuffleMode::Pooled;
          } else if (v == "per_clip") {
            c.shuffle_mode = ShuffleMode::PerClipUniform;
          } else {
            throw Error(ErrorCode::ConfigError, "shuffle_mode: expected pooled|per_clip");
          }
        }}},
      {"averaging_sp", averaging_field(&EvalConfig::averaging_sp)},
      {"averaging_fix", averaging_field(&EvalConfig::averaging_fix)},
      {"averaging_onset", averaging_field(&EvalConfig::averaging_onset)},
      {"min_confidence", number_field(&EvalConfig::min_confidence)},
      {"baseline_repetitions", number_field(&EvalConfig::baseline_repetitions)},
      {"centre_sigma_fraction", number_field(&EvalConfig::centre_sigma_fraction)},
      {"bias_weight", number_field(&EvalConfig::bias_weight)},
      {"bias_sigma_deg", number_field(&EvalConfig::bias_sigma_deg)},
      {"subset_repeats", number_field(&EvalConfig::subset_repeats)},
      {"model", {[](const EvalConfig& c) { return c.model; }, [](EvalConfig& c, std::string_view v) { c.model = v; }}},
      {"dataset",
       {[](const EvalConfig& c) { return c.dataset; }, [](EvalConfig& c, std::string_view v) { c.dataset = v; }}},
  };
  return table;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

EvalConfig parse_config(std::string_view text) {
  EvalConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
    if (it == table.end()) throw Error(ErrorCode::ConfigError, "unknown key '" + std::string(key) + "'");
    try {
      it->second.set(config, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, std::string(key) + ": " + e.what());
    }
  }
  return config;
}

EvalConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const EvalConfig& config) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(config) + "\n";
  return out;
}

}  // namespace supersal
