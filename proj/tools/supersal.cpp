#include "supersal/commands.hpp"
#include "supersal/config.hpp"
#include "supersal/error.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace supersal;

std::vector<Condition> parse_conditions(const std::vector<std::string>& names) {
  std::vector<Condition> out;
  for (const auto& n : names) {
    auto c = parse_condition(n);
    if (!c) throw Error(ErrorCode::InvalidArgument, "unknown condition '" + n + "' (sp|fix|onset)");
    out.push_back(*c);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Video saliency evaluation with smooth-pursuit and fixation ground truth"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string out = "out";
  std::vector<std::string> conditions{"sp"};
  bool quiet = false;

  auto common = [&](CLI::App* cmd, bool with_out = true) {
    cmd->add_option("--config", config_path, "Key-value config file");
    cmd->add_option("--seed", seed, "Master seed (overrides the config)");
    cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    if (with_out) cmd->add_option("--out", out, "Output directory");
    cmd->add_flag("--quiet", quiet, "No per-clip log");
  };

  std::string dataset_dir, pred_dir, in_path;
  std::vector<std::string> report_files;
  std::size_t n_total = 0;
  bool png = false, subvolumes = false;

  auto* gen_gt = app.add_subcommand("gen-gt", "Build ground-truth volumes per clip");
  gen_gt->add_option("dataset", dataset_dir, "Dataset directory")->required();
  gen_gt->add_option("--condition", conditions, "sp|fix|onset")->expected(1);
  gen_gt->add_flag("--png", png, "Also write per-frame PNG heatmaps");
  common(gen_gt);

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions with the full metric battery");
  evaluate->add_option("predictions", pred_dir, "Prediction directory")->required();
  evaluate->add_option("dataset", dataset_dir, "Dataset directory")->required();
  evaluate->add_option("--condition", conditions, "sp|fix|onset, repeatable")->take_all();
  common(evaluate);

  auto* baselines = app.add_subcommand("baselines", "Score chance, permutation, centre and human baselines");
  baselines->add_option("dataset", dataset_dir, "Dataset directory")->required();
  baselines->add_option("--condition", conditions, "sp|fix|onset, repeatable")->take_all();
  common(baselines);

  auto* rank = app.add_subcommand("rank", "Mean-rank table over run reports");
  rank->add_option("reports", report_files, "report.json files")->required();
  std::string rank_out = "ranks.csv";
  rank->add_option("--out", rank_out, "Output CSV");
  common(rank, false);

  auto* avg = app.add_subcommand("avg-experiment", "Regular vs weighted averaging against pooled AUC");
  avg->add_option("condition_dir", in_path, "Evaluated condition directory (holds report.json)")->required();
  std::string avg_out = "averaging.csv";
  avg->add_option("--out", avg_out, "Output CSV");
  common(avg, false);

  auto* bias = app.add_subcommand("bias", "Apply the adaptive gravity centre bias to a volume");
  bias->add_option("input", in_path, "Input SSV1 or frame directory")->required();
  std::string bias_out;
  bias->add_option("output", bias_out, "Output SSV1")->required();
  common(bias, false);

  auto* sample = app.add_subcommand("sample", "Draw balanced training locations");
  sample->add_option("dataset", dataset_dir, "Dataset directory")->required();
  sample->add_option("--condition", conditions, "sp|fix|onset")->expected(1);
  sample->add_option("-n,--count", n_total, "Total locations, half positive")->required();
  sample->add_flag("--subvolumes", subvolumes, "Also cut pixel subvolumes from <dataset>/frames");
  common(sample);

  CLI11_PARSE(app, argc, argv);

  try {
    EvalConfig config = config_path.empty() ? EvalConfig{} : read_config(config_path);
    if (seed) config.seed = *seed;
    RunOptions options{jobs, quiet ? nullptr : &std::cerr};
    const auto conds = parse_conditions(conditions);

    if (app.got_subcommand(gen_gt)) return cmd_gen_gt(dataset_dir, conds.front(), config, out, options, png);
    if (app.got_subcommand(evaluate)) return cmd_evaluate(pred_dir, dataset_dir, conds, config, out, options);
    if (app.got_subcommand(baselines)) return cmd_baselines(dataset_dir, conds, config, out, options);
    if (app.got_subcommand(rank)) {
      std::vector<std::filesystem::path> paths(report_files.begin(), report_files.end());
      return cmd_rank(paths, rank_out, options);
    }
    if (app.got_subcommand(avg)) return cmd_avg_experiment(in_path, config, avg_out, options);
    if (app.got_subcommand(bias)) return cmd_bias(in_path, bias_out, config, options);
    if (app.got_subcommand(sample)) return cmd_sample(dataset_dir, conds.front(), n_total, config, out, options,
                                                      subvolumes);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
