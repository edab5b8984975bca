// One line per acceptance criterion; exit status is the number of failures.

#include "supersal/battery.hpp"
#include "supersal/commands.hpp"
#include "supersal/config.hpp"
#include "supersal/error.hpp"
#include "supersal/ground_truth.hpp"
#include "supersal/metrics.hpp"
#include "supersal/postprocess.hpp"
#include "supersal/random.hpp"
#include "supersal/report.hpp"
#include "supersal/volume.hpp"

#include "instances.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>

using namespace supersal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass{false};
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const fs::path kScratch = fs::temp_directory_path() / "supersal_acceptance";

// 1. Oracle equivalence on random small instances.
Outcome oracle_equivalence() {
  Stopwatch sw;
  double worst = 0.0;
  std::string worst_metric = "-";
  auto track = [&](const char* name, double got, double want) {
    const double err = std::abs(got - want);
    if (!(err <= worst) || std::isnan(err)) {
      worst = std::isnan(err) ? INFINITY : err;
      worst_metric = name;
    }
  };
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto in = inst::random_instance(50000 + s);
    track("AUC_JUDD", auc_judd(in.pred, in.gt).value, oracle::judd(in.pred, in.gt));
    track("AUC_BORJI", auc_borji(in.pred, in.gt, 100, s).value, oracle::borji(in.pred, in.gt, 100, s));
    track("SAUC", sauc(in.pred, in.gt, in.shuffled).value, oracle::shuffled_auc(in.pred, in.gt, in.shuffled));
    track("XAUC", xauc(in.pred, in.gt, in.fix, s).value, oracle::xauc(in.pred, in.gt, in.fix, s));
    track("NSS", nss(in.pred, in.gt).value, oracle::nss(in.pred, in.gt));
    track("SIM", sim(in.pred, in.gt_vol).value, oracle::sim(in.pred, in.gt_vol));
    track("CC", cc(in.pred, in.gt_vol).value, oracle::cc(in.pred, in.gt_vol));
    track("KLD", kld(in.pred, in.gt_vol, 1e-12).value, oracle::kld(in.pred, in.gt_vol, 1e-12));
    track("IG", info_gain(in.pred, in.gt, in.baseline, 1e-12).value,
          oracle::info_gain(in.pred, in.gt, in.baseline, 1e-12));
    track("BAL_ACC", balanced_accuracy(in.pred, in.gt, 100, s).value,
          oracle::borji_balanced_accuracy(in.pred, in.gt, 100, s));
  }
  const double t = sw.seconds();
  return {worst <= 1e-9 && t < 60.0,
          "200 instances, max |err| " + num(worst) + " (" + worst_metric + "), " + num(t) + " s"};
}

// 2. AUC-family scores under strictly increasing transforms.
Outcome monotone_invariance() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto in = inst::random_instance(60000 + s);
    const auto sq = inst::transformed(in.pred, [](float x) { return x * x; });
    const auto up = inst::transformed(in.pred, [](float x) { return x + 3.0f; });
    auto scores = [&](const SaliencyVolume& v) {
      return std::vector<double>{auc_judd(v, in.gt).value, auc_borji(v, in.gt, 100, s).value,
                                 sauc(v, in.gt, in.shuffled).value, xauc(v, in.gt, in.fix, s).value};
    };
    const auto a = scores(in.pred), b = scores(sq), c = scores(up);
    for (std::size_t k = 0; k < a.size(); ++k) {
      worst = std::max({worst, std::abs(a[k] - b[k]), std::abs(a[k] - c[k])});
    }
  }
  return {worst <= 1e-12, "50 instances, v^2 and v+3, max |diff| " + num(worst)};
}

EvalConfig corpus_config() {
  EvalConfig c;
  c.pixels_per_degree = 3.0;
  c.seed = 2024;
  c.dataset = "synthetic";
  c.model = "target_model";
  return c;
}

// 3. Weighted averaging estimates the pooled AUC better than the plain mean.
Outcome averaging_experiment() {
  Stopwatch sw;
  const fs::path root = kScratch / "averaging";
  fs::remove_all(root);
  std::vector<synth::ClipSpec> clips;
  for (int k = 0; k < 20; ++k) {
    synth::ClipSpec c;
    c.id = "clip" + std::to_string(k);
    c.width = 96;
    c.height = 54;
    c.frames = 100;
    c.observers = 1 + k / 4;
    c.sp_fraction = 0.04 * std::pow(20.0, k / 19.0);
    clips.push_back(c);
  }
  synth::write_dataset(root / "data", clips, 31);
  fs::create_directories(root / "pred");
  for (int k = 0; k < 20; ++k) {
    const double signal = 0.2 + 2.0 * ((k * 7) % 20) / 19.0;
    write_volume(synth::model_prediction(clips[k], 31, signal), root / "pred" / (clips[k].id + ".ssv1"));
  }
  EvalConfig config = corpus_config();
  const Condition sp[] = {Condition::Sp};
  if (cmd_evaluate(root / "pred", root / "data", sp, config, root / "eval", RunOptions{}) != 0) {
    return {false, "evaluation produced no clips"};
  }
  const RunReport run = parse_run_report(read_file(root / "eval" / "sp" / "report.json"));
  double lo = INFINITY, hi = 0.0;
  for (const auto& id : run.clips) {
    const auto r = parse_clip_report(read_file(root / "eval" / "sp" / "clips" / (id + ".json")));
    lo = std::min(lo, static_cast<double>(r.weight));
    hi = std::max(hi, static_cast<double>(r.weight));
  }
  if (cmd_avg_experiment(root / "eval" / "sp", config, root / "avg.csv", RunOptions{}) != 0) {
    return {false, "subset experiment failed"};
  }
  // metric,condition,n_clips,n_subsets,reg_mean,reg_sd,w_mean,w_sd,ks_d,ks_p
  std::istringstream csv(read_file(root / "avg.csv"));
  std::string line;
  std::getline(csv, line);
  bool pass = run.clips.size() == 20 && hi / lo >= 100.0;
  std::string detail = std::to_string(run.clips.size()) + " clips, positives " + num(lo) + ".." + num(hi);
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 10) return {false, "malformed row: " + line};
    const double reg = std::stod(f[4]), wtd = std::stod(f[6]), p = std::stod(f[9]);
    pass = pass && wtd < reg && p < 0.01;
    detail += "; " + f[0] + " regular " + num(reg) + " weighted " + num(wtd) + " p " + num(p);
    ++rows;
  }
  const double t = sw.seconds();
  pass = pass && rows == 2 && t < 300.0;
  return {pass, detail + ", " + num(t) + " s"};
}

// 4. Swapping SP and FIX with paired draws gives complementary scores.
Outcome xauc_symmetry() {
  std::size_t bad = 0, n = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto in = inst::random_instance(70000 + s);
    const double a = xauc(in.pred, in.gt, in.fix, s).value;
    const double b = xauc_swapped(in.pred, in.gt, in.fix, s).value;
    bad += a + b != 1.0;
    ++n;
  }
  // Larger continuous-valued maps with unequal set sizes in both directions.
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    SaliencyVolume v(80, 45, 10);
    for (float& x : v.data()) x = rng.uniform01f();
    auto sp = inst::random_locations(rng, 80, 45, 10, 100 + rng.uniform_index(3000), Condition::Sp);
    auto fix = inst::random_locations(rng, 80, 45, 10, 100 + rng.uniform_index(3000), Condition::Fix);
    bad += xauc(v, sp, fix, trial).value + xauc_swapped(v, sp, fix, trial).value != 1.0;
    ++n;
  }
  return {bad == 0, std::to_string(n) + " cases, " + std::to_string(bad) + " not summing to exactly 1"};
}

// 5. Baseline ordering on multi-observer synthetic data.
Outcome baseline_ordering() {
  const fs::path root = kScratch / "baselines";
  fs::remove_all(root);
  std::vector<synth::ClipSpec> clips;
  for (int k = 0; k < 6; ++k) {
    synth::ClipSpec c;
    c.id = "clip" + std::to_string(k);
    c.width = 80;
    c.height = 45;
    c.frames = 50;
    c.observers = 6;
    c.sp_fraction = 0.3 + 0.05 * k;
    c.path_amplitude = 0.25;  // viewers favour the middle of the frame
    c.hotspot_spread = 0.5;
    clips.push_back(c);
  }
  synth::write_dataset(root / "data", clips, 77);
  EvalConfig config = corpus_config();
  config.borji_splits = 20;
  const Condition conds[] = {Condition::Sp, Condition::Fix};
  if (cmd_baselines(root / "data", conds, config, root / "out", RunOptions{}) != 0) {
    return {false, "baselines produced no clips"};
  }
  bool pass = true;
  std::string detail;
  for (const char* cond : {"sp", "fix"}) {
    std::map<std::string, double> judd;
    for (const char* b : {"chance", "centre", "one_human", "infinite_humans"}) {
      const auto r = parse_run_report(read_file(root / "out" / b / cond / "report.json"));
      for (const auto& row : r.aggregate) {
        if (row.metric == Metric::AucJudd) judd[b] = row.reported;
      }
    }
    if (judd.size() != 4) return {false, std::string(cond) + ": AUC_JUDD missing from a baseline report"};
    pass = pass && judd["infinite_humans"] >= judd["one_human"] && judd["one_human"] >= judd["centre"] &&
           judd["centre"] >= judd["chance"] && std::abs(judd["chance"] - 0.5) <= 0.01;
    detail += (detail.empty() ? "" : "; ") + std::string(cond) + " infinite " + num(judd["infinite_humans"]) +
              " one " + num(judd["one_human"]) + " centre " + num(judd["centre"]) + " chance " +
              num(judd["chance"]);
  }
  return {pass, detail};
}

// 6. Gravity centre bias stays within [0.6 * input, input max].
Outcome gravity_bounds() {
  Rng rng(12);
  std::size_t violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 16 + static_cast<int>(rng.uniform_index(100));
    const int h = 16 + static_cast<int>(rng.uniform_index(60));
    SaliencyVolume v(w, h, 1);
    const int kind = trial % 3;
    for (float& x : v.data()) {
      const double u = rng.uniform01();
      x = static_cast<float>(kind == 0 ? u : kind == 1 ? (u < 0.05 ? 10 * u : 0.0) : std::pow(u, 8) * 255);
    }
    if (kind == 1) v.data()[rng.uniform_index(v.size())] = 1.0f;
    const double ppd = 1.0 + 5.0 * rng.uniform01();
    const auto out = gravity_centre_bias(v, ppd);
    const float peak = *std::max_element(v.data().begin(), v.data().end());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const float in = v.data()[i];
      violations += out.data()[i] < static_cast<float>(0.6 * in) || out.data()[i] > peak;
    }
  }
  // Impulses, including off-centre ones near the border.
  std::size_t moved = 0;
  for (int trial = 0; trial < 20; ++trial) {
    SaliencyVolume v(64, 36, 1);
    const int x = static_cast<int>(rng.uniform_index(64)), y = static_cast<int>(rng.uniform_index(36));
    v.at(x, y, 0) = 0.7f;
    const auto out = gravity_centre_bias(v, 2.0);
    const auto& d = out.data();
    moved += static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin()) != v.index(x, y, 0);
  }
  return {violations == 0 && moved == 0, "100 frames, " + std::to_string(violations) + " bound violations; " +
                                             std::to_string(moved) + " of 20 impulses moved"};
}

// 7. Single Gaussian evaluated one sigma away on each axis.
Outcome gaussian_check() {
  GtParams p;
  p.pixels_per_degree = 4.0;  // sigma 4 px
  p.fps = 30.0;               // sigma 10 frames
  AttendedLocationSet s;
  s.clip_id = "g";
  s.locations = {{0, 20, 20, 20}};
  const auto v = build_gt_volume(s, p, 41, 41, 41);
  const double peak = v.at(20, 20, 20);
  double worst = 0.0;
  for (auto [x, y, t] : {std::tuple{24, 20, 20}, {16, 20, 20}, {20, 24, 20}, {20, 16, 20}, {20, 20, 30}, {20, 20, 10}}) {
    worst = std::max(worst, std::abs(v.at(x, y, t) - std::exp(-0.5) * peak));
  }
  return {worst <= 1e-4 && peak == 1.0, "peak " + num(peak) + ", max |err| at 1 sigma " + num(worst)};
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path());
  }
  return out;
}

void run_commands(const fs::path& data, const fs::path& out, unsigned jobs) {
  EvalConfig config = corpus_config();
  config.borji_splits = 10;
  config.ig_baseline_locations = 2000;
  config.subset_repeats = 10;
  const RunOptions opt{jobs, nullptr};
  const Condition conds[] = {Condition::Sp, Condition::Fix};
  cmd_gen_gt(data, Condition::Sp, config, out / "gt", opt, true);
  cmd_evaluate(out / "gt" / "sp", data, conds, config, out / "eval", opt);
  cmd_baselines(data, conds, config, out / "base", opt);
  const std::vector<fs::path> reports{out / "eval" / "sp" / "report.json", out / "eval" / "fix" / "report.json",
                                      out / "base" / "centre" / "sp" / "report.json",
                                      out / "base" / "centre" / "fix" / "report.json"};
  cmd_rank(reports, out / "rank.csv", opt);
  cmd_avg_experiment(out / "eval" / "sp", config, out / "avg.csv", opt);
  cmd_bias(out / "gt" / "sp" / "clip0.ssv1", out / "biased.ssv1", config, opt);
  cmd_sample(data, Condition::Sp, 100, config, out / "sample", opt);
}

// 8. Byte-exact volume files and deterministic commands.
Outcome bit_exact_io() {
  const fs::path root = kScratch / "io";
  fs::remove_all(root);
  fs::create_directories(root);
  Rng rng(8);
  std::size_t bad_roundtrips = 0;
  for (int trial = 0; trial < 30; ++trial) {
    SaliencyVolume v(1 + static_cast<int>(rng.uniform_index(40)), 1 + static_cast<int>(rng.uniform_index(30)),
                     1 + static_cast<int>(rng.uniform_index(8)));
    for (float& x : v.data()) {
      const double u = rng.uniform01();
      x = static_cast<float>(trial % 2 ? u : std::ldexp(u, static_cast<int>(rng.uniform_index(200)) - 140));
    }
    write_volume(v, root / "a.ssv1");
    const auto back = read_volume(root / "a.ssv1");
    write_volume(back, root / "b.ssv1");
    bad_roundtrips += read_file(root / "a.ssv1") != read_file(root / "b.ssv1") ||
                      std::memcmp(v.data().data(), back.data().data(), v.size() * sizeof(float)) != 0;
  }

  std::vector<synth::ClipSpec> clips;
  for (int k = 0; k < 4; ++k) {
    synth::ClipSpec c;
    c.id = "clip" + std::to_string(k);
    c.width = 48;
    c.height = 27;
    c.frames = 20;
    clips.push_back(c);
  }
  synth::write_dataset(root / "data", clips, 4);
  run_commands(root / "data", root / "run1", 1);
  run_commands(root / "data", root / "run2", 2);
  const auto a = tree(root / "run1"), b = tree(root / "run2");
  std::size_t differing = a.size() == b.size() ? 0 : 1;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    differing += it == b.end() || it->second != bytes;
  }
  return {bad_roundtrips == 0 && differing == 0 && a.size() > 50,
          "30 SSV1 roundtrips, " + std::to_string(bad_roundtrips) + " mismatched; rerun of all commands: " +
              std::to_string(a.size()) + " files, " + std::to_string(differing) + " differing"};
}

// 9. Full battery at evaluation scale on one worker.
Outcome throughput() {
  SaliencyVolume pred(640, 360, 500);
  Rng rng(99);
  for (float& x : pred.data()) x = rng.uniform01f();
  std::vector<AttendedLocationSet> sets;
  for (int k = 0; k < 3; ++k) {
    Rng r(100 + k);
    auto s = inst::random_locations(r, 640, 360, 500, 10000, Condition::Sp);
    s.clip_id = "clip" + std::to_string(k);
    sets.push_back(std::move(s));
  }
  Rng rf(200);
  auto fix = inst::random_locations(rf, 640, 360, 500, 12000, Condition::Fix);
  fix.clip_id = "clip0";
  EvalConfig config;
  config.pixels_per_degree = 13.35;
  config.borji_splits = 100;
  BatteryInputs in;
  in.positives = &sets[0];
  in.sp = &sets[0];
  in.fix = &fix;
  in.donors = sets;
  in.gt_params.pixels_per_degree = config.pixels_per_degree;
  in.gt_params.fps = 29.97;
  Stopwatch sw;
  const auto r = run_battery(pred, in, config, battery_seeds(1, "clip0", Condition::Sp), true);
  const double t = sw.seconds();
  std::string detail = std::to_string(r.scores.size()) + " metrics, " + num(t) + " s";
  for (const auto& w : r.warnings) detail += "; " + w;
  return {r.scores.size() == 10 && t < 120.0, detail};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"metric oracle equivalence", oracle_equivalence},
      {"monotone-transform invariance", monotone_invariance},
      {"weighted averaging beats regular averaging", averaging_experiment},
      {"xAUC symmetry", xauc_symmetry},
      {"baseline ordering", baseline_ordering},
      {"gravity centre bias bounds", gravity_bounds},
      {"Gaussian ground truth at 1 sigma", gaussian_check},
      {"bit-exact I/O and reruns", bit_exact_io},
      {"throughput budget", throughput},
  };
  fs::remove_all(kScratch);
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(kScratch);
  return failures;
}
