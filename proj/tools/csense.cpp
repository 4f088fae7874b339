// csense — coexistence sensing workbench.
//
// Subcommands cover the full experimental workflow: simulate energy traces,
// prepare chunk datasets, train and evaluate classifiers, sweep chunk widths,
// compare detection methods, and run the online duty-cycle controller.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csense/pipeline.hpp"

namespace {

using namespace csense;
using pipeline::json;

json section(const json& cfg, const std::string& key) {
  return cfg.contains(key) ? cfg.at(key) : json::object();
}

int cmd_simulate(const std::string& config_path, const std::string& out,
                 int ap_count, double duration, long long seed) {
  json cfg = config_path.empty() ? json::object()
                                 : pipeline::load_config(config_path);
  json sj = section(cfg, "scenario");
  if (ap_count >= 0) sj["ap_count"] = ap_count;
  if (duration > 0) sj["duration_s"] = duration;
  if (seed >= 0) sj["seed"] = static_cast<std::uint64_t>(seed);
  if (ap_count >= 0 && !sj.contains("placements")) sj.erase("placements");
  const auto scenario = pipeline::scenario_from_json(sj);
  const auto trace = sim::simulate_trace(scenario);
  sim::write_trace(trace, out);
  std::cerr << "simulate: wrote " << trace.values.size() << " samples (label "
            << trace.label << ") to " << out << "\n";
  return 0;
}

int cmd_prepare(const std::vector<std::string>& trace_paths,
                const std::string& name, std::size_t width, std::size_t k,
                long long seed) {
  std::vector<sim::EnergyTrace> traces;
  for (const auto& p : trace_paths) traces.push_back(sim::read_trace(p));
  const auto prepared = pipeline::prepare_dataset(
      std::move(traces), width, k,
      seed >= 0 ? static_cast<std::uint64_t>(seed) : 0);
  pipeline::write_prepared(prepared, name);
  std::cerr << "prepare: " << prepared.dataset.train.size() << " train / "
            << prepared.dataset.test.size() << " test chunks (w=" << width
            << ", k=" << k << ") -> " << name << "_{TRAIN,TEST,META}\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& dataset_name,
              const std::string& ckpt, const std::string& report_path,
              const std::string& family, long long seed, long long epochs) {
  json cfg = config_path.empty() ? json::object()
                                 : pipeline::load_config(config_path);
  auto prepared = pipeline::read_prepared(dataset_name);

  json mj = section(cfg, "model");
  if (!family.empty()) mj["family"] = family;
  mj["width"] = prepared.dataset.w;
  mj["classes"] = prepared.dataset.k;
  auto spec = pipeline::model_from_json(mj);
  spec.class_base = prepared.class_base;

  json tj = section(cfg, "train");
  if (seed >= 0) tj["seed"] = static_cast<std::uint64_t>(seed);
  if (epochs > 0) tj["epochs"] = static_cast<std::size_t>(epochs);
  const auto tc = pipeline::train_from_json(tj);

  auto model = models::build_model(
      spec, rng::derive_seed(tc.seed, 0xb11d));
  const auto report =
      pipeline::run_train(model, prepared.dataset, tc, ckpt, report_path);
  std::fprintf(stderr,
               "train: %zu epochs, final test accuracy %.4f (best %.4f at "
               "epoch %zu), %.1f s\n",
               report.history.size(), report.final_test_accuracy,
               report.best_test_accuracy, report.best_epoch,
               report.wall_time_s);
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& dataset_name,
             const std::string& report_path, bool on_train) {
  auto loaded = models::load_checkpoint(model_path);
  auto prepared = pipeline::read_prepared(dataset_name);
  const auto& chunks =
      on_train ? prepared.dataset.train : prepared.dataset.test;
  const auto result = models::evaluate(loaded.model, chunks);
  if (!report_path.empty()) pipeline::write_eval_report(result, report_path);
  std::fprintf(stderr, "eval: accuracy %.6f over %zu chunks\n", result.accuracy,
               chunks.size());
  for (std::size_t t = 0; t < result.k; ++t) {
    std::fprintf(stderr, "eval: confusion[%zu] =", t);
    for (std::size_t p = 0; p < result.k; ++p)
      std::fprintf(stderr, " %zu", result.at(t, p));
    std::fprintf(stderr, "\n");
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out,
              const std::string& widths_csv, long long seed) {
  json cfg = config_path.empty() ? json::object()
                                 : pipeline::load_config(config_path);
  json sj = section(cfg, "sweep");
  pipeline::SweepConfig sc;
  if (sj.contains("widths"))
    sc.widths = sj.at("widths").get<std::vector<std::size_t>>();
  if (!widths_csv.empty()) {
    sc.widths.clear();
    std::size_t pos = 0;
    while (pos < widths_csv.size()) {
      std::size_t next = widths_csv.find(',', pos);
      if (next == std::string::npos) next = widths_csv.size();
      sc.widths.push_back(std::stoul(widths_csv.substr(pos, next - pos)));
      pos = next + 1;
    }
  }
  sc.classes = sj.value("classes", sc.classes);
  sc.samples_per_class = sj.value("samples_per_class", sc.samples_per_class);
  sc.epochs = sj.value("epochs", sc.epochs);
  sc.lr = sj.value("lr", sc.lr);
  sc.seed = sj.value("seed", sc.seed);
  if (seed >= 0) sc.seed = static_cast<std::uint64_t>(seed);
  const auto points = pipeline::run_sweep(sc, &std::cerr);
  pipeline::write_sweep_report(points, out);
  std::cerr << "sweep: wrote " << points.size() << " rows to " << out << "\n";
  return 0;
}

int cmd_compare(const std::string& config_path, const std::string& out,
                const std::string& ac_file, long long seed) {
  json cfg = config_path.empty() ? json::object()
                                 : pipeline::load_config(config_path);
  json cj = section(cfg, "compare");
  pipeline::CompareConfig cc;
  cc.width = cj.value("width", cc.width);
  cc.train_duration_s = cj.value("train_duration_s", cc.train_duration_s);
  cc.eval_duration_s = cj.value("eval_duration_s", cc.eval_duration_s);
  cc.epochs = cj.value("epochs", cc.epochs);
  cc.lr = cj.value("lr", cc.lr);
  cc.seed = cj.value("seed", cc.seed);
  cc.ac_file = cj.value("ac_file", cc.ac_file);
  if (!ac_file.empty()) cc.ac_file = ac_file;
  if (seed >= 0) cc.seed = static_cast<std::uint64_t>(seed);
  const auto result = pipeline::run_comparison(cc, &std::cerr);
  pipeline::write_compare_report(result, out);
  std::cerr << "compare: wrote " << result.rows.size() << " rows to " << out
            << "\n";
  return 0;
}

int cmd_online(const std::string& model_path, const std::string& input,
               const std::string& events, double rate, int initial_ap) {
  pipeline::OnlineOptions opts;
  opts.model_path = model_path;
  opts.input_path = input;
  opts.events_path = events;
  opts.sample_rate = rate;
  opts.initial_ap_count = initial_ap;
  const auto summary = pipeline::run_online(opts);
  std::fprintf(stderr,
               "online: %llu chunks, %llu transitions, collection %.3f s, "
               "mean inference %.4f s, latency %.3f s\n",
               static_cast<unsigned long long>(summary.chunks),
               static_cast<unsigned long long>(summary.transitions),
               summary.collection_time_s, summary.mean_inference_s,
               summary.detection_latency_s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coexistence sensing workbench (LTE-U / Wi-Fi)"};
  app.require_subcommand(1);

  std::string config, out, name, model_path, dataset_name, report_path;
  std::string family, widths_csv, ac_file, input = "-", events;
  std::vector<std::string> trace_paths;
  int ap_count = -1, initial_ap = 1;
  double duration = -1.0, rate = 192.0;
  long long seed = -1, epochs = -1;
  std::size_t width = 512, classes = 2;
  bool on_train = false;

  auto* s_sim = app.add_subcommand("simulate", "generate a labeled energy trace");
  s_sim->add_option("--config", config, "JSON config with a scenario section");
  s_sim->add_option("--out", out, "output trace CSV")->required();
  s_sim->add_option("--ap-count", ap_count, "number of Wi-Fi APs (0..2)");
  s_sim->add_option("--duration", duration, "seconds of simulated time");
  s_sim->add_option("--seed", seed, "RNG seed");

  auto* s_prep = app.add_subcommand("prepare", "traces -> UCR-style dataset");
  s_prep->add_option("--traces", trace_paths, "input trace CSVs")->required();
  s_prep->add_option("--name", name, "output dataset name prefix")->required();
  s_prep->add_option("--width", width, "chunk width w");
  s_prep->add_option("--classes", classes, "class count k");
  s_prep->add_option("--seed", seed, "shuffle seed");

  auto* s_train = app.add_subcommand("train", "train a classifier");
  s_train->add_option("--config", config, "JSON config with model/train sections");
  s_train->add_option("--dataset", dataset_name, "dataset name prefix")->required();
  s_train->add_option("--model-out", model_path, "checkpoint path")->required();
  s_train->add_option("--report", report_path, "per-epoch CSV report");
  s_train->add_option("--family", family, "fc2 | vgg1d | fcn");
  s_train->add_option("--seed", seed, "training seed");
  s_train->add_option("--epochs", epochs, "epoch budget");

  auto* s_eval = app.add_subcommand("eval", "evaluate a checkpoint");
  s_eval->add_option("--model", model_path, "checkpoint path")->required();
  s_eval->add_option("--dataset", dataset_name, "dataset name prefix")->required();
  s_eval->add_option("--report", report_path, "output CSV");
  s_eval->add_flag("--train-half", on_train, "evaluate the train half instead");

  auto* s_sweep = app.add_subcommand("sweep", "chunk-width accuracy sweep");
  s_sweep->add_option("--config", config, "JSON config with a sweep section");
  s_sweep->add_option("--out", out, "output CSV")->required();
  s_sweep->add_option("--widths", widths_csv, "comma-separated widths");
  s_sweep->add_option("--seed", seed, "master seed");

  auto* s_cmp = app.add_subcommand("compare", "ED vs ML detection matrix");
  s_cmp->add_option("--config", config, "JSON config with a compare section");
  s_cmp->add_option("--out", out, "output CSV")->required();
  s_cmp->add_option("--ac-file", ac_file, "externally supplied AC rows");
  s_cmp->add_option("--seed", seed, "master seed");

  auto* s_on = app.add_subcommand("online", "stream samples through the CSAT loop");
  s_on->add_option("--model", model_path, "checkpoint path")->required();
  s_on->add_option("--input", input, "dBm values file, named pipe, or '-'");
  s_on->add_option("--events", events, "NDJSON events output (default stdout)");
  s_on->add_option("--rate", rate, "samples per second");
  s_on->add_option("--initial-ap-count", initial_ap, "starting confirmed count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (s_sim->parsed())
      return cmd_simulate(config, out, ap_count, duration, seed);
    if (s_prep->parsed())
      return cmd_prepare(trace_paths, name, width, classes, seed);
    if (s_train->parsed())
      return cmd_train(config, dataset_name, model_path, report_path, family,
                       seed, epochs);
    if (s_eval->parsed())
      return cmd_eval(model_path, dataset_name, report_path, on_train);
    if (s_sweep->parsed()) return cmd_sweep(config, out, widths_csv, seed);
    if (s_cmp->parsed()) return cmd_compare(config, out, ac_file, seed);
    if (s_on->parsed())
      return cmd_online(model_path, input, events, rate, initial_ap);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
