#include "supersal/commands.hpp"

#include "supersal/baselines.hpp"
#include "supersal/battery.hpp"
#include "supersal/dataset.hpp"
#include "supersal/error.hpp"
#include "supersal/ground_truth.hpp"
#include "supersal/image_io.hpp"
#include "supersal/postprocess.hpp"
#include "supersal/random.hpp"
#include "supersal/report.hpp"
#include "supersal/sampler.hpp"
#include "supersal/volume.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace supersal {

namespace fs = std::filesystem;

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

std::ostream& log_of(const RunOptions& options) {
  static std::ostream null_stream(nullptr);
  return options.log ? *options.log : null_stream;
}

std::string cond_name(Condition c) { return std::string(to_string(c)); }

struct ClipTask {
  std::optional<ClipReport> report;
  std::string failure;
  bool too_few_observers{false};
};

// Everything a per-clip worker reads; built once per condition, read-only afterwards.
struct ConditionContext {
  const Dataset* dataset{nullptr};
  const EvalConfig* config{nullptr};
  Condition condition{Condition::Sp};
  std::vector<AttendedLocationSet> sets;  // manifest order; empty for failed clips
  std::vector<AttendedLocationSet> sp_sets;
  std::vector<AttendedLocationSet> fix_sets;
};

std::vector<AttendedLocationSet> all_clip_sets(const Dataset& ds, Condition c, const EvalConfig& config) {
  std::vector<AttendedLocationSet> out;
  out.reserve(ds.clips.size());
  for (const auto& clip : ds.clips) {
    if (ds.failures.count(clip.clip_id)) {
      const ClipGeometry g = eval_geometry(clip, config);
      AttendedLocationSet empty;
      empty.clip_id = clip.clip_id;
      empty.condition = c;
      empty.width = g.width;
      empty.height = g.height;
      empty.frames = g.frames;
      out.push_back(std::move(empty));
    } else {
      out.push_back(clip_locations(ds, clip, c, config));
    }
  }
  return out;
}

ConditionContext make_context(const Dataset& ds, Condition c, const EvalConfig& config) {
  ConditionContext ctx;
  ctx.dataset = &ds;
  ctx.config = &config;
  ctx.condition = c;
  ctx.sets = all_clip_sets(ds, c, config);
  ctx.sp_sets = c == Condition::Sp ? ctx.sets : all_clip_sets(ds, Condition::Sp, config);
  ctx.fix_sets = c == Condition::Fix ? ctx.sets : all_clip_sets(ds, Condition::Fix, config);
  return ctx;
}

// Empty when the clip can be processed.
std::string clip_problem(const ConditionContext& ctx, std::size_t i) {
  const auto& id = ctx.dataset->clips[i].clip_id;
  if (auto it = ctx.dataset->failures.find(id); it != ctx.dataset->failures.end()) return "gaze data: " + it->second;
  if (ctx.sets[i].empty()) return "no " + cond_name(ctx.condition) + " locations";
  return {};
}

BatteryResult battery_for(const ConditionContext& ctx, std::size_t i, const SaliencyVolume& pred,
                          const AttendedLocationSet& positives, bool with_xauc, bool keep_samples) {
  const ClipInfo& clip = ctx.dataset->clips[i];
  BatteryInputs in;
  in.positives = &positives;
  if (with_xauc) {
    in.sp = &ctx.sp_sets[i];
    in.fix = &ctx.fix_sets[i];
  }
  in.donors = ctx.sets;
  in.gt_params = gt_params_for(clip, *ctx.config);
  return run_battery(pred, in, *ctx.config, battery_seeds(ctx.config->seed, clip.clip_id, ctx.condition),
                     keep_samples);
}

ClipReport make_report(const ConditionContext& ctx, std::size_t i, const std::string& model,
                       std::vector<MetricScore> scores, const std::vector<std::string>& warnings) {
  ClipReport r;
  r.clip_id = ctx.dataset->clips[i].clip_id;
  r.condition = ctx.condition;
  r.model = model;
  r.dataset = ctx.config->dataset;
  r.weight = ctx.sets[i].size();
  r.scores = std::move(scores);
  r.warnings = ctx.sets[i].warnings;
  r.warnings.insert(r.warnings.end(), warnings.begin(), warnings.end());
  return r;
}

fs::path dump_path(const fs::path& dir, const std::string& clip, Metric m) {
  return dir / "scores" / (clip + "__" + std::string(to_string(m)) + ".scr");
}

void write_clip_outputs(const fs::path& dir, const ClipReport& r, const std::map<Metric, ScoreSamples>& samples) {
  for (const auto& [m, s] : samples) write_score_dump(dump_path(dir, r.clip_id, m), s);
  write_file_atomic(dir / "clips" / (r.clip_id + ".json"), clip_report_json(r));
}

// Pooled AUC over every clip's dump; positives are held in memory, negatives streamed.
std::map<Metric, double> pooled_from_dumps(const fs::path& dir, const std::vector<std::string>& clips) {
  std::map<Metric, double> out;
  if (clips.empty()) return out;
  for (Metric m : {Metric::AucBorji, Metric::Sauc, Metric::Xauc}) {
    const bool complete = std::all_of(clips.begin(), clips.end(),
                                      [&](const std::string& c) { return fs::exists(dump_path(dir, c, m)); });
    if (!complete) continue;
    std::vector<double> positives;
    for (const auto& c : clips) {
      const auto s = read_score_dump(dump_path(dir, c, m));
      positives.insert(positives.end(), s.positives.begin(), s.positives.end());
    }
    AucCounter counter(std::move(positives));
    for (const auto& c : clips) counter.add_negatives(read_score_dump(dump_path(dir, c, m)).negatives);
    try {
      out[m] = counter.auc();
    } catch (const Error&) {
    }
  }
  return out;
}

int finish_condition(const fs::path& dir, const std::string& model, const ConditionContext& ctx,
                     const std::vector<ClipTask>& tasks, const RunOptions& options) {
  std::ostream& log = log_of(options);
  RunReport run;
  run.model = model;
  run.dataset = ctx.config->dataset;
  run.condition = ctx.condition;
  run.averaging = ctx.config->averaging_for(ctx.condition);
  run.warnings = ctx.dataset->warnings;
  std::vector<ClipReport> reports;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& id = ctx.dataset->clips[i].clip_id;
    const auto& t = tasks[i];
    if (t.report) {
      log << model << " " << cond_name(ctx.condition) << " " << id << ": " << t.report->scores.size()
          << " metrics, " << t.report->weight << " locations\n";
      for (const auto& w : t.report->warnings) log << "  warning: " << w << "\n";
      run.clips.push_back(id);
      reports.push_back(*t.report);
    } else {
      log << model << " " << cond_name(ctx.condition) << " " << id << ": skipped: " << t.failure << "\n";
      run.failed[id] = t.failure;
    }
  }
  run.aggregate = aggregate_reports(reports, run.averaging, pooled_from_dumps(dir, run.clips));
  write_file_atomic(dir / "summary.csv", summary_csv(model, run.dataset, ctx.condition, run.aggregate));
  write_file_atomic(dir / "report.json", run_report_json(run));
  return reports.empty() ? 1 : 0;
}

SaliencyVolume load_prediction(const fs::path& pred_dir, const ClipInfo& clip, const ClipGeometry& g) {
  fs::path p = pred_dir / (clip.clip_id + ".ssv1");
  if (!fs::exists(p)) p = pred_dir / clip.clip_id;
  if (!fs::exists(p)) throw Error(ErrorCode::IoError, "missing prediction for '" + clip.clip_id + "'");
  SaliencyVolume v = read_volume(p);
  validate_volume(v);
  if (v.frames() != g.frames) {
    throw Error(ErrorCode::ShapeMismatch, "prediction has " + std::to_string(v.frames()) + " frames, clip has " +
                                              std::to_string(g.frames));
  }
  if (v.width() != g.width || v.height() != g.height) v = resize_volume(v, g.width, g.height);
  return v;
}

void write_heatmaps(const SaliencyVolume& v, const fs::path& dir) {
  const auto& d = v.data();
  const float peak = d.empty() ? 0.0f : *std::max_element(d.begin(), d.end());
  for (int t = 0; t < v.frames(); ++t) {
    Image img{v.width(), v.height(), 1, std::vector<std::uint8_t>(v.frame_size())};
    const auto f = v.frame(t);
    for (std::size_t k = 0; k < f.size(); ++k) {
      img.pixels[k] = peak > 0 ? static_cast<std::uint8_t>(std::lround(255.0 * f[k] / peak)) : 0;
    }
    char name[32];
    std::snprintf(name, sizeof name, "%06d.png", t);
    fs::create_directories(dir);
    write_png(dir / name, img);
  }
}

}  // namespace

int cmd_gen_gt(const fs::path& dataset_dir, Condition condition, const EvalConfig& config, const fs::path& out,
               const RunOptions& options, bool png) {
  config.validate();
  const Dataset ds = load_dataset(dataset_dir);
  const ConditionContext ctx{&ds, &config, condition, all_clip_sets(ds, condition, config), {}, {}};
  const fs::path dir = out / cond_name(condition);

  std::vector<std::string> failures(ds.clips.size());
  parallel_for(ds.clips.size(), options.jobs, [&](std::size_t i) {
    try {
      if (auto p = clip_problem(ctx, i); !p.empty()) {
        failures[i] = p;
        return;
      }
      const ClipInfo& clip = ds.clips[i];
      const ClipGeometry g = eval_geometry(clip, config);
      auto vol = build_gt_volume(ctx.sets[i], gt_params_for(clip, config), g.width, g.height, g.frames);
      vol.clip_id = clip.clip_id;
      fs::create_directories(dir);
      write_volume(vol, dir / (clip.clip_id + ".ssv1"));
      if (png) write_heatmaps(vol, dir / "png" / clip.clip_id);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  std::ostream& log = log_of(options);
  for (const auto& w : ds.warnings) log << "warning: " << w << "\n";
  std::string weights = "clip_id,condition,n_locations,n_observers\n";
  std::size_t ok = 0;
  for (std::size_t i = 0; i < ds.clips.size(); ++i) {
    const auto& id = ds.clips[i].clip_id;
    for (const auto& w : ctx.sets[i].warnings) log << id << ": warning: " << w << "\n";
    if (!failures[i].empty()) {
      log << "gen-gt " << cond_name(condition) << " " << id << ": skipped: " << failures[i] << "\n";
      continue;
    }
    ++ok;
    weights += id + "," + cond_name(condition) + "," + std::to_string(ctx.sets[i].size()) + "," +
               std::to_string(ctx.sets[i].observers.size()) + "\n";
    log << "gen-gt " << cond_name(condition) << " " << id << ": " << ctx.sets[i].size() << " locations\n";
  }
  write_file_atomic(dir / "weights.csv", weights);
  return ok == 0 ? 1 : 0;
}

int cmd_evaluate(const fs::path& pred_dir, const fs::path& dataset_dir, std::span<const Condition> conditions,
                 const EvalConfig& config, const fs::path& out, const RunOptions& options) {
  config.validate();
  const Dataset ds = load_dataset(dataset_dir);
  bool any = false;
  for (Condition c : conditions) {
    const ConditionContext ctx = make_context(ds, c, config);
    const fs::path dir = out / cond_name(c);
    std::vector<ClipTask> tasks(ds.clips.size());
    parallel_for(ds.clips.size(), options.jobs, [&](std::size_t i) {
      ClipTask& t = tasks[i];
      try {
        if (auto p = clip_problem(ctx, i); !p.empty()) {
          t.failure = p;
          return;
        }
        const ClipInfo& clip = ds.clips[i];
        const SaliencyVolume pred = load_prediction(pred_dir, clip, eval_geometry(clip, config));
        auto b = battery_for(ctx, i, pred, ctx.sets[i], true, true);
        if (b.scores.empty()) throw Error(ErrorCode::EmptyScoreSet, "no metric could be computed");
        auto r = make_report(ctx, i, config.model, std::move(b.scores), b.warnings);
        write_clip_outputs(dir, r, b.samples);
        t.report = std::move(r);
      } catch (const std::exception& e) {
        t.failure = e.what();
      }
    });
    if (finish_condition(dir, config.model, ctx, tasks, options) == 0) any = true;
  }
  return any ? 0 : 1;
}

namespace {

enum class Baseline { Chance, Permutation, Centre, OneHuman, InfiniteHumans };

constexpr std::pair<Baseline, const char*> kBaselines[] = {{Baseline::Chance, "chance"},
                                                           {Baseline::Permutation, "permutation"},
                                                           {Baseline::Centre, "centre"},
                                                           {Baseline::OneHuman, "one_human"},
                                                           {Baseline::InfiniteHumans, "infinite_humans"}};

// Mean of each metric over repetitions; the metric set and warnings come from the first.
std::vector<MetricScore> average_repetitions(const std::vector<std::vector<MetricScore>>& reps) {
  std::vector<MetricScore> out = reps.front();
  for (auto& s : out) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& rep : reps) {
      for (const auto& r : rep) {
        if (r.metric == s.metric) {
          sum += r.value;
          ++n;
        }
      }
    }
    s.value = sum / static_cast<double>(n);
  }
  return out;
}

ClipReport run_baseline(Baseline which, const ConditionContext& ctx, std::size_t i, const std::string& model,
                        std::map<Metric, ScoreSamples>& samples) {
  const EvalConfig& config = *ctx.config;
  const ClipInfo& clip = ctx.dataset->clips[i];
  const ClipGeometry g = eval_geometry(clip, config);
  const GtParams params = gt_params_for(clip, config);

  if (which == Baseline::OneHuman || which == Baseline::InfiniteHumans) {
    const auto observers = observer_locations(*ctx.dataset, clip, ctx.condition, config);
    const BaselineEvaluator evaluate = [&](const SaliencyVolume& pred, const AttendedLocationSet& positives) {
      return battery_for(ctx, i, pred, positives, false, false).scores;
    };
    const auto result = which == Baseline::OneHuman ? one_human_scores(observers, params, evaluate)
                                                    : infinite_humans_scores(observers, params, evaluate);
    if (result.scores.empty()) throw Error(ErrorCode::TooFewObservers, "no observer could be evaluated");
    return make_report(ctx, i, model, result.mean(), result.warnings);
  }

  const std::size_t reps = which == Baseline::Centre ? 1 : std::max<std::size_t>(1, config.baseline_repetitions);
  const std::uint64_t base = derive_seed(config.seed, clip.clip_id, cond_name(ctx.condition), std::string(model));
  std::vector<std::vector<MetricScore>> scores;
  std::vector<std::string> warnings;
  for (std::size_t r = 0; r < reps; ++r) {
    const std::uint64_t seed = derive_seed_index(base, r);
    SaliencyVolume pred;
    if (which == Baseline::Chance) {
      pred = chance_map(g.width, g.height, g.frames, seed);
    } else if (which == Baseline::Permutation) {
      pred = permutation_map(clip.clip_id, ctx.sets, params, g, seed);
    } else {
      pred = centre_map(g.width, g.height, g.frames, config.centre_sigma_fraction);
    }
    auto b = battery_for(ctx, i, pred, ctx.sets[i], true, r == 0);
    if (b.scores.empty()) throw Error(ErrorCode::EmptyScoreSet, "no metric could be computed");
    if (r == 0) {
      samples = std::move(b.samples);
      warnings = b.warnings;
    }
    scores.push_back(std::move(b.scores));
  }
  return make_report(ctx, i, model, average_repetitions(scores), warnings);
}

}  // namespace

int cmd_baselines(const fs::path& dataset_dir, std::span<const Condition> conditions, const EvalConfig& config,
                  const fs::path& out, const RunOptions& options) {
  config.validate();
  const Dataset ds = load_dataset(dataset_dir);
  bool any = false;
  for (Condition c : conditions) {
    const ConditionContext ctx = make_context(ds, c, config);
    for (const auto& [which, name] : kBaselines) {
      const std::string model = name;
      const fs::path dir = out / model / cond_name(c);
      std::vector<ClipTask> tasks(ds.clips.size());
      parallel_for(ds.clips.size(), options.jobs, [&](std::size_t i) {
        ClipTask& t = tasks[i];
        try {
          if (auto p = clip_problem(ctx, i); !p.empty()) {
            t.failure = p;
            return;
          }
          std::map<Metric, ScoreSamples> samples;
          auto r = run_baseline(which, ctx, i, model, samples);
          write_clip_outputs(dir, r, samples);
          t.report = std::move(r);
        } catch (const Error& e) {
          t.failure = e.what();
          t.too_few_observers = e.code() == ErrorCode::TooFewObservers;
        } catch (const std::exception& e) {
          t.failure = e.what();
        }
      });
      const bool none = std::none_of(tasks.begin(), tasks.end(), [](const ClipTask& t) { return t.report.has_value(); });
      if (none && std::any_of(tasks.begin(), tasks.end(), [](const ClipTask& t) { return t.too_few_observers; })) {
        log_of(options) << model << " " << cond_name(c) << ": omitted, no clip has two observers with data\n";
        continue;
      }
      if (finish_condition(dir, model, ctx, tasks, options) == 0) any = true;
    }
  }
  return any ? 0 : 1;
}

int cmd_rank(std::span<const fs::path> reports, const fs::path& out_csv, const RunOptions& options) {
  if (reports.empty()) throw Error(ErrorCode::InvalidArgument, "rank needs at least one report");
  // column "<dataset>:<condition>" -> model -> metric -> reported value
  std::map<std::string, std::map<std::string, std::map<Metric, double>>> columns;
  for (const auto& path : reports) {
    const RunReport r = parse_run_report(read_file(path));
    const std::string column = r.dataset + ":" + cond_name(r.condition);
    auto& models = columns[column];
    if (models.count(r.model)) {
      throw Error(ErrorCode::InvalidArgument, "model '" + r.model + "' appears twice in column " + column);
    }
    auto& scores = models[r.model];
    for (const auto& row : r.aggregate) scores[row.metric] = row.reported;
  }

  std::map<std::string, std::map<std::string, double>> ranks;  // model -> column -> mean rank
  for (const auto& [column, models] : columns) {
    for (const auto& [model, rank] : rank_table(models)) ranks[model][column] = rank;
  }

  std::string csv = "model";
  for (const auto& [column, models] : columns) csv += "," + column;
  csv += ",overall\n";
  for (const auto& [model, by_column] : ranks) {
    csv += model;
    double sum = 0.0;
    for (const auto& [column, models] : columns) {
      csv += ",";
      if (auto it = by_column.find(column); it != by_column.end()) {
        csv += format_double(it->second);
        sum += it->second;
      }
    }
    csv += "," + format_double(sum / static_cast<double>(by_column.size())) + "\n";
  }
  write_file_atomic(out_csv, csv);
  log_of(options) << "rank: " << ranks.size() << " models, " << columns.size() << " columns\n";
  return 0;
}

int cmd_avg_experiment(const fs::path& condition_dir, const EvalConfig& config, const fs::path& out_csv,
                       const RunOptions& options) {
  std::ostream& log = log_of(options);
  const RunReport run = parse_run_report(read_file(condition_dir / "report.json"));
  std::vector<ClipReport> clip_reports;
  for (const auto& id : run.clips) {
    clip_reports.push_back(parse_clip_report(read_file(condition_dir / "clips" / (id + ".json"))));
  }

  std::string csv =
      "metric,condition,n_clips,n_subsets,regular_error_mean,regular_error_sd,weighted_error_mean,"
      "weighted_error_sd,ks_statistic,ks_p_value\n";
  std::size_t rows = 0;
  for (Metric m : {Metric::AucBorji, Metric::Sauc}) {
    std::vector<ScoreSamples> samples;
    std::vector<ClipScore> scores;
    bool complete = true;
    for (const auto& r : clip_reports) {
      const MetricScore* s = r.find(m);
      const fs::path dump = dump_path(condition_dir, r.clip_id, m);
      if (s == nullptr || !fs::exists(dump)) {
        complete = false;
        break;
      }
      scores.push_back({r.clip_id, m, s->value, static_cast<double>(r.weight)});
      samples.push_back(read_score_dump(dump));
    }
    if (!complete) {
      log << "avg-experiment: " << to_string(m) << " skipped, score dumps incomplete\n";
      continue;
    }
    std::vector<SubsetClip> clips;
    for (std::size_t k = 0; k < scores.size(); ++k) clips.push_back({scores[k], &samples[k]});
    const auto res = subset_experiment(
        clips, config.subset_repeats,
        derive_seed(config.seed, std::string_view("subsets"), to_string(m), cond_name(run.condition)));
    csv += std::string(to_string(m)) + "," + cond_name(run.condition) + "," + std::to_string(clips.size()) + "," +
           std::to_string(res.subset_sizes.size()) + "," + format_double(res.regular_error_mean) + "," +
           format_double(res.regular_error_sd) + "," + format_double(res.weighted_error_mean) + "," +
           format_double(res.weighted_error_sd) + "," + format_double(res.ks.statistic) + "," +
           format_double(res.ks.p_value) + "\n";
    log << "avg-experiment: " << to_string(m) << " regular " << format_double(res.regular_error_mean)
        << ", weighted " << format_double(res.weighted_error_mean) << ", p " << format_double(res.ks.p_value)
        << "\n";
    ++rows;
  }
  write_file_atomic(out_csv, csv);
  return rows == 0 ? 1 : 0;
}

int cmd_bias(const fs::path& in, const fs::path& out, const EvalConfig& config, const RunOptions& options) {
  config.validate();
  SaliencyVolume v = read_volume(in);
  validate_volume(v);
  const GravityBiasParams params{config.bias_weight, config.bias_sigma_deg, config.truncation_radius_sigmas};
  SaliencyVolume biased = gravity_centre_bias(v, config.pixels_per_degree, params);
  biased.clip_id = v.clip_id;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_volume(biased, out);
  log_of(options) << "bias: " << v.width() << "x" << v.height() << "x" << v.frames() << " -> " << out.string()
                  << "\n";
  return 0;
}

int cmd_sample(const fs::path& dataset_dir, Condition condition, std::size_t n_total, const EvalConfig& config,
               const fs::path& out, const RunOptions& options, bool subvolumes) {
  config.validate();
  std::ostream& log = log_of(options);
  const Dataset ds = load_dataset(dataset_dir);
  EvalConfig native = config;
  native.eval_width = 0;
  native.eval_height = 0;

  std::vector<AttendedLocationSet> pools;
  std::vector<std::string> ids;
  for (const auto& clip : ds.clips) {
    if (auto it = ds.failures.find(clip.clip_id); it != ds.failures.end()) {
      log << "sample: " << clip.clip_id << " skipped: " << it->second << "\n";
      continue;
    }
    pools.push_back(clip_locations(ds, clip, condition, native));
    ids.push_back(clip.clip_id);
  }
  const TrainingSet set = sample_training_locations(pools, n_total, config.seed);
  std::ostringstream csv;
  write_training_csv(csv, set, ids);
  write_file_atomic(out / "locations.csv", csv.str());
  log << "sample: " << set.positives.size() << " positives, " << set.negatives.size() << " negatives\n";

  if (subvolumes) {
    struct Item {
      const VoxelLocation* loc;
      std::size_t number;
      const char* label;
    };
    std::map<std::size_t, std::vector<Item>> by_clip;
    std::size_t number = 0;
    for (const auto& l : set.positives) by_clip[l.clip].push_back({&l, number++, "pos"});
    for (const auto& l : set.negatives) by_clip[l.clip].push_back({&l, number++, "neg"});
    for (const auto& [clip, items] : by_clip) {
      const FrameSequence frames = FrameSequence::load(ds.root / "frames" / ids[clip]);
      for (const auto& it : items) {
        SubvolumeSpec spec;
        spec.centre_x = it.loc->x;
        spec.centre_y = it.loc->y;
        spec.centre_frame = it.loc->frame;
        const PixelBlock block = extract_subvolume(frames, spec);
        char name[48];
        std::snprintf(name, sizeof name, "%06zu_%s.%s", it.number, it.label, block.channels == 1 ? "ssv1" : "ssv3");
        fs::create_directories(out / "subvolumes");
        write_subvolume(block, out / "subvolumes" / name);
      }
    }
  }
  return 0;
}

}  // namespace supersal
