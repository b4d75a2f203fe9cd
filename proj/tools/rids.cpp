// rids command line: generate labeled scenario datasets, train and evaluate
// classifiers, and replay scenarios through the detection pipeline.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rids/attack_sim.hpp"
#include "rids/csv.hpp"
#include "rids/eval.hpp"
#include "rids/log.hpp"
#include "rids/model_io.hpp"
#include "rids/pipeline.hpp"
#include "rids/scenario.hpp"

namespace fs = std::filesystem;

namespace {

rids::ScenarioConfig load_config_or_die(const std::string& path) {
  rids::ScenarioConfig cfg = rids::parse_config(rids::read_text_file(path));
  auto errors = rids::validate_config(cfg);
  if (!errors.empty()) {
    for (const auto& e : errors) std::cerr << path << ": " << e << '\n';
    throw CLI::RuntimeError(1);
  }
  return cfg;
}

int cmd_generate(const std::string& config_path, const std::string& out_dir,
                 std::optional<uint64_t> seed_override) {
  rids::ScenarioConfig cfg = load_config_or_die(config_path);
  if (seed_override) cfg.seed = *seed_override;
  fs::create_directories(out_dir);
  auto frames = rids::gen_scenario(cfg);
  rids::Manifest m = rids::write_dataset(out_dir, cfg, frames);
  rids::log_info("wrote " + std::to_string(frames.size()) + " frames to " +
                 out_dir);
  std::cout << rids::format_manifest(m);
  return 0;
}

int cmd_train(const std::string& data_dir, const std::string& model_name,
              const std::string& out_path, std::optional<uint64_t> seed_opt,
              const std::string& features_out) {
  auto kind = rids::model_kind_from(model_name);
  if (!kind) {
    std::cerr << "model must be logreg, tree or forest\n";
    return 1;
  }
  rids::Dataset ds = rids::load_dataset(data_dir);
  const uint64_t seed = seed_opt.value_or(ds.manifest.seed);
  auto vectors = rids::build_training_set(ds.frames, ds.manifest.aps);
  rids::log_info("training on " + std::to_string(vectors.size()) + " vectors");
  if (!features_out.empty())
    rids::write_text_file(features_out, rids::features_to_csv(vectors));

  rids::TrainResult result = rids::train_and_evaluate(*kind, vectors, seed);
  if (auto dir = fs::path(out_path).parent_path(); !dir.empty())
    fs::create_directories(dir);
  rids::save_model_file(out_path, result.model);

  const std::string text = rids::report_to_text(result.report, model_name);
  rids::write_text_file(out_path + ".report.txt", text);
  rids::write_text_file(out_path + ".report.csv",
                        rids::report_to_csv(result.report));
  std::cout << text;
  std::cout << "model file: " << out_path << " ("
            << fs::file_size(out_path) << " bytes)\n";
  return 0;
}

int cmd_eval(const std::string& data_dir, const std::string& model_path) {
  rids::Dataset ds = rids::load_dataset(data_dir);
  rids::AnyModel model = rids::load_model_file(model_path);
  auto vectors = rids::build_training_set(ds.frames, ds.manifest.aps);
  rids::EvalReport report = std::visit(
      [&](const auto& m) {
        return rids::evaluate(m, std::span<const rids::LabeledVector>(vectors));
      },
      model);
  std::cout << rids::report_to_text(report, rids::model_kind_name(model));
  return 0;
}

int cmd_replay(const std::string& config_path, const std::string& model_path,
               bool assert_mode, const std::string& alarm_log) {
  rids::ScenarioConfig cfg = load_config_or_die(config_path);
  rids::AnyModel model = rids::load_model_file(model_path);
  rids::ReplayOptions opts;
  opts.alarm_log_path = alarm_log;
  rids::RunReport report = rids::replay_scenario(cfg, model, opts);

  std::cout << report.canonical();
  std::printf("classify ms: max %.3f mean %.3f\n", report.max_classify_ms,
              report.batches
                  ? report.total_classify_ms / static_cast<double>(report.batches)
                  : 0.0);
  std::printf("wall ms: %.1f\n", report.wall_ms);
  for (const auto& outcome : report.attacks) {
    std::printf("attack %zu %s: trigger latency %s quanta, alarm %s\n",
                outcome.attack_index + 1, rids::to_string(outcome.label),
                outcome.trigger_latency_quanta
                    ? std::to_string(*outcome.trigger_latency_quanta).c_str()
                    : "-",
                outcome.alarm_matched ? "matched" : "MISSING");
  }
  if (assert_mode) {
    std::string messages;
    if (!rids::check_scenario_assertions(report, cfg, &messages)) {
      std::cerr << messages;
      return 1;
    }
    std::cout << "all scenario assertions passed\n";
  }
  return 0;
}

int cmd_inspect(const std::string& path, size_t limit) {
  std::vector<rids::Frame> frames;
  if (fs::is_directory(path)) {
    frames = rids::load_dataset(path).frames;
  } else if (path.ends_with(".csv")) {
    frames = rids::frames_from_csv(rids::read_text_file(path));
  } else {
    frames = rids::decode_stream(rids::read_binary_file(path));
  }
  std::cout << rids::kCsvHeader << '\n';
  for (size_t i = 0; i < frames.size() && i < limit; ++i)
    std::cout << rids::frame_to_csv_row(frames[i]) << '\n';
  std::array<uint64_t, rids::kAttackLabelCount> counts{};
  for (const auto& f : frames) ++counts[static_cast<size_t>(f.label)];
  std::cout << "-- " << frames.size() << " frames";
  for (int c = 0; c < rids::kAttackLabelCount; ++c)
    if (counts[static_cast<size_t>(c)])
      std::cout << ", " << rids::kAttackLabelNames[c] << " "
                << counts[static_cast<size_t>(c)];
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIDS: WLAN intrusion detection laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_path, data_dir, model_name = "tree";
  std::string model_path, features_out, alarm_log, inspect_path;
  std::optional<uint64_t> seed;
  bool assert_mode = false;
  size_t limit = 20;

  auto* generate = app.add_subcommand("generate", "generate a labeled dataset");
  generate->add_option("--config", config_path, "scenario config file")
      ->required();
  generate->add_option("--out", out_path, "output directory")->required();
  generate->add_option("--seed", seed, "override the config seed");

  auto* train = app.add_subcommand("train", "train and evaluate a classifier");
  train->add_option("--data", data_dir, "dataset directory")->required();
  train->add_option("--model", model_name, "logreg|tree|forest");
  train->add_option("--out", out_path, "model file to write")->required();
  train->add_option("--seed", seed, "training seed (default: dataset seed)");
  train->add_option("--features-out", features_out, "write feature CSV here");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on a dataset");
  eval_cmd->add_option("--data", data_dir, "dataset directory")->required();
  eval_cmd->add_option("--model-file", model_path, "trained model")->required();

  auto* replay = app.add_subcommand("replay", "run a scenario end to end");
  replay->add_option("--config", config_path, "scenario config file")
      ->required();
  replay->add_option("--model-file", model_path, "trained model")->required();
  replay->add_flag("--assert", assert_mode,
                   "exit nonzero unless scenario expectations hold");
  replay->add_option("--alarm-log", alarm_log, "append alarms to this file");

  auto* inspect = app.add_subcommand("inspect", "pretty-print a dataset");
  inspect->add_option("path", inspect_path, "dataset dir, .bin or .csv file")
      ->required();
  inspect->add_option("--limit", limit, "rows to print");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(config_path, out_path, seed);
    if (train->parsed())
      return cmd_train(data_dir, model_name, out_path, seed, features_out);
    if (eval_cmd->parsed()) return cmd_eval(data_dir, model_path);
    if (replay->parsed())
      return cmd_replay(config_path, model_path, assert_mode, alarm_log);
    if (inspect->parsed()) return cmd_inspect(inspect_path, limit);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
