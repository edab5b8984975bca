#include "supersal/report.hpp"

#include "supersal/error.hpp"

#include "json.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace supersal {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const MetricScore* ClipReport::find(Metric m) const {
  for (const auto& s : scores) {
    if (s.metric == m) return &s;
  }
  return nullptr;
}

namespace {

Condition condition_from(const json& j) {
  auto c = parse_condition(j.get<std::string>());
  if (!c) throw Error(ErrorCode::IoError, "bad condition in report: " + j.get<std::string>());
  return *c;
}

}  // namespace

std::string clip_report_json(const ClipReport& r) {
  ordered_json j;
  j["clip_id"] = r.clip_id;
  j["condition"] = std::string(to_string(r.condition));
  j["model"] = r.model;
  j["dataset"] = r.dataset;
  j["weight"] = r.weight;
  ordered_json metrics = ordered_json::object();
  for (const auto& s : r.scores) {
    metrics[std::string(to_string(s.metric))] = {{"value", s.value}, {"n_positives", s.n_positives}};
  }
  j["metrics"] = std::move(metrics);
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

ClipReport parse_clip_report(const std::string& text) {
  try {
    const json j = json::parse(text);
    ClipReport r;
    r.clip_id = j.at("clip_id").get<std::string>();
    r.condition = condition_from(j.at("condition"));
    r.model = j.at("model").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.weight = j.at("weight").get<std::size_t>();
    for (Metric m : kAllMetrics) {
      const auto it = j.at("metrics").find(std::string(to_string(m)));
      if (it == j.at("metrics").end()) continue;
      r.scores.push_back({m, it->at("value").get<double>(), it->at("n_positives").get<std::size_t>()});
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("malformed clip report: ") + e.what());
  }
}

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void put_f32(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

}  // namespace

void write_score_dump(const fs::path& path, const ScoreSamples& s) {
  std::string out = "SCR1";
  out.reserve(20 + 4 * (s.positives.size() + s.negatives.size()));
  put_u64(out, s.positives.size());
  put_u64(out, s.negatives.size());
  for (double v : s.positives) put_f32(out, v);
  for (double v : s.negatives) put_f32(out, v);
  write_file_atomic(path, out);
}

ScoreSamples read_score_dump(const fs::path& path) {
  const std::string data = read_file(path);
  if (data.size() < 20) throw Error(ErrorCode::TruncatedFile, "score dump too short: " + path.string());
  if (data.compare(0, 4, "SCR1") != 0) throw Error(ErrorCode::BadMagic, "not a score dump: " + path.string());
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  const std::uint64_t n_pos = get_u64(p + 4);
  const std::uint64_t n_neg = get_u64(p + 12);
  if ((data.size() - 20) / 4 < n_pos + n_neg || n_pos + n_neg < n_pos) {
    throw Error(ErrorCode::TruncatedFile, "score dump truncated: " + path.string());
  }
  auto value = [&](std::uint64_t i) {
    const unsigned char* q = p + 20 + 4 * i;
    const std::uint32_t bits = q[0] | (q[1] << 8) | (q[2] << 16) | (static_cast<std::uint32_t>(q[3]) << 24);
    return static_cast<double>(std::bit_cast<float>(bits));
  };
  ScoreSamples s;
  s.positives.resize(n_pos);
  s.negatives.resize(n_neg);
  for (std::uint64_t i = 0; i < n_pos; ++i) s.positives[i] = value(i);
  for (std::uint64_t i = 0; i < n_neg; ++i) s.negatives[i] = value(n_pos + i);
  return s;
}

std::vector<AggregateRow> aggregate_reports(const std::vector<ClipReport>& reports, Averaging averaging,
                                            const std::map<Metric, double>& pooled) {
  std::vector<AggregateRow> rows;
  for (Metric m : kAllMetrics) {
    std::vector<ClipScore> scores;
    for (const auto& r : reports) {
      if (const auto* s = r.find(m)) scores.push_back({r.clip_id, m, s->value, static_cast<double>(r.weight)});
    }
    if (scores.empty()) continue;
    AggregateRow row;
    row.metric = m;
    row.n_clips = scores.size();
    row.regular_mean = regular_mean(scores);
    try {
      row.weighted_mean = weighted_mean(scores);
    } catch (const Error&) {
    }
    if (auto it = pooled.find(m); it != pooled.end()) row.pooled_auc = it->second;
    row.reported = averaging == Averaging::Weighted && row.weighted_mean ? *row.weighted_mean : row.regular_mean;
    rows.push_back(row);
  }
  return rows;
}

std::string summary_csv(const std::string& model, const std::string& dataset, Condition condition,
                        const std::vector<AggregateRow>& rows) {
  std::string out = "model,dataset,condition,metric,n_clips,regular_mean,weighted_mean,pooled_auc,reported\n";
  for (const auto& r : rows) {
    out += model + "," + dataset + "," + std::string(to_string(condition)) + "," + std::string(to_string(r.metric)) +
           "," + std::to_string(r.n_clips) + "," + format_double(r.regular_mean) + "," +
           (r.weighted_mean ? format_double(*r.weighted_mean) : "") + "," +
           (r.pooled_auc ? format_double(*r.pooled_auc) : "") + "," + format_double(r.reported) + "\n";
  }
  return out;
}

std::string run_report_json(const RunReport& r) {
  ordered_json j;
  j["model"] = r.model;
  j["dataset"] = r.dataset;
  j["condition"] = std::string(to_string(r.condition));
  j["averaging"] = std::string(to_string(r.averaging));
  j["clips"] = r.clips;
  ordered_json failed = ordered_json::object();
  for (const auto& [clip, why] : r.failed) failed[clip] = why;
  j["failed"] = std::move(failed);
  ordered_json agg = ordered_json::object();
  for (const auto& row : r.aggregate) {
    ordered_json e;
    e["n_clips"] = row.n_clips;
    e["regular_mean"] = row.regular_mean;
    e["weighted_mean"] = row.weighted_mean ? ordered_json(*row.weighted_mean) : ordered_json(nullptr);
    e["pooled_auc"] = row.pooled_auc ? ordered_json(*row.pooled_auc) : ordered_json(nullptr);
    e["reported"] = row.reported;
    agg[std::string(to_string(row.metric))] = std::move(e);
  }
  j["aggregate"] = std::move(agg);
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

RunReport parse_run_report(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunReport r;
    r.model = j.at("model").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.condition = condition_from(j.at("condition"));
    r.averaging = j.at("averaging").get<std::string>() == "weighted" ? Averaging::Weighted : Averaging::Regular;
    r.clips = j.at("clips").get<std::vector<std::string>>();
    for (const auto& [clip, why] : j.at("failed").items()) r.failed[clip] = why.get<std::string>();
    for (Metric m : kAllMetrics) {
      const auto it = j.at("aggregate").find(std::string(to_string(m)));
      if (it == j.at("aggregate").end()) continue;
      AggregateRow row;
      row.metric = m;
      row.n_clips = it->at("n_clips").get<std::size_t>();
      row.regular_mean = it->at("regular_mean").get<double>();
      if (!it->at("weighted_mean").is_null()) row.weighted_mean = it->at("weighted_mean").get<double>();
      if (!it->at("pooled_auc").is_null()) row.pooled_auc = it->at("pooled_auc").get<double>();
      row.reported = it->at("reported").get<double>();
      r.aggregate.push_back(row);
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("malformed run report: ") + e.what());
  }
}

}  // namespace supersal
