#pragma once

#include "supersal/gaze_io.hpp"
#include "supersal/ground_truth.hpp"
#include "supersal/metrics.hpp"
#include "supersal/shuffling.hpp"
#include "supersal/volume.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace supersal {

enum class Averaging { Regular, Weighted };

std::string_view to_string(Averaging a);

// Run configuration. Text form is one `key = value` per line, `#` comments;
// to_text() emits every key and parse_config() accepts any subset.
struct EvalConfig {
  double pixels_per_degree{0.0};  // at the clip's native resolution; required
  int eval_width{0};              // 0 = native
  int eval_height{0};

  double sigma_space_deg{1.0};
  double sigma_time_s{1.0 / 3.0};
  double truncation_radius_sigmas{3.0};

  std::uint64_t seed{0};
  std::size_t borji_splits{100};
  double kld_eps{1e-12};
  double ig_eps{1e-12};
  std::size_t ig_baseline_locations{20000};
  NormalizationMode distribution_mode{NormalizationMode::PerFrame};
  CcMode cc_mode{CcMode::Global};
  ShuffleMode shuffle_mode{ShuffleMode::Pooled};

  Averaging averaging_sp{Averaging::Weighted};
  Averaging averaging_fix{Averaging::Regular};
  Averaging averaging_onset{Averaging::Regular};

  double min_confidence{0.0};
  std::size_t baseline_repetitions{5};
  double centre_sigma_fraction{0.25};
  double bias_weight{0.4};
  double bias_sigma_deg{3.0};
  std::size_t subset_repeats{100};

  std::string model{"model"};
  std::string dataset{"dataset"};

  Averaging averaging_for(Condition c) const;
  void validate() const;  // throws ConfigError

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

EvalConfig parse_config(std::string_view text);
EvalConfig read_config(const std::filesystem::path& path);
std::string to_text(const EvalConfig& config);

}  // namespace supersal
