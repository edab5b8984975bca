#pragma once

#include "supersal/aggregate.hpp"
#include "supersal/config.hpp"
#include "supersal/gaze_io.hpp"
#include "supersal/metrics.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace supersal {

// Writes to `<path>.tmp` and renames over `path`; creates parent directories.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

struct ClipReport {
  std::string clip_id;
  Condition condition{Condition::Sp};
  std::string model;
  std::string dataset;
  std::size_t weight{0};  // salient locations of the clip in this condition
  std::vector<MetricScore> scores;
  std::vector<std::string> warnings;

  const MetricScore* find(Metric m) const;
};

// {"clip_id", "condition", "model", "dataset", "weight",
//  "metrics": {"AUC_JUDD": {"value": v, "n_positives": n}, ...}, "warnings": [...]}
std::string clip_report_json(const ClipReport& report);
ClipReport parse_clip_report(const std::string& json);

// Score dump: `SCR1`, u64 LE n_pos, u64 LE n_neg, then f32 LE positives followed by negatives.
void write_score_dump(const std::filesystem::path& path, const ScoreSamples& samples);
ScoreSamples read_score_dump(const std::filesystem::path& path);

struct AggregateRow {
  Metric metric{Metric::AucJudd};
  std::size_t n_clips{0};
  double regular_mean{0.0};
  std::optional<double> weighted_mean;  // absent when every weight is zero
  std::optional<double> pooled_auc;     // AUC metrics with score dumps
  double reported{0.0};                 // the configured averaging for the condition
};

// One row per metric that at least one clip reported, in kAllMetrics order.
std::vector<AggregateRow> aggregate_reports(const std::vector<ClipReport>& reports, Averaging averaging,
                                            const std::map<Metric, double>& pooled = {});

// `model,dataset,condition,metric,n_clips,regular_mean,weighted_mean,pooled_auc,reported`
std::string summary_csv(const std::string& model, const std::string& dataset, Condition condition,
                        const std::vector<AggregateRow>& rows);

struct RunReport {
  std::string model;
  std::string dataset;
  Condition condition{Condition::Sp};
  Averaging averaging{Averaging::Regular};
  std::vector<std::string> clips;                // evaluated, manifest order
  std::map<std::string, std::string> failed;     // clip -> reason
  std::vector<AggregateRow> aggregate;
  std::vector<std::string> warnings;
};

std::string run_report_json(const RunReport& report);
RunReport parse_run_report(const std::string& json);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace supersal
