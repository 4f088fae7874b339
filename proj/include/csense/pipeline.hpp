#pragma once

// Workflow orchestration shared by the CLI subcommands and the integration
// tests: simulate -> prepare -> train -> eval, the chunk-width sweep and the
// ED/ML comparison matrix. Every run is a pure function of its config and
// seeds; reports use fixed decimal formatting so reruns are byte-identical.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "csense/checkpoint.hpp"
#include "csense/csat.hpp"
#include "csense/dataprep.hpp"
#include "csense/detect.hpp"
#include "csense/models.hpp"
#include "csense/rng.hpp"
#include "csense/sim.hpp"

#include <json.hpp>

namespace csense::pipeline {

using nlohmann::json;

// --- config parsing ----------------------------------------------------------

inline sim::Sight sight_from_name(const std::string& s) {
  if (s == "LOS" || s == "los") return sim::Sight::LOS;
  if (s == "NLOS" || s == "nlos") return sim::Sight::NLOS;
  throw std::invalid_argument("config: sight must be LOS or NLOS, got '" + s +
                              "'");
}

inline std::string sight_name(sim::Sight s) {
  return s == sim::Sight::LOS ? "LOS" : "NLOS";
}

inline sim::ScenarioConfig scenario_from_json(const json& j) {
  sim::ScenarioConfig cfg;
  cfg.ap_count = j.value("ap_count", 1);
  cfg.duration_s = j.value("duration_s", 60.0);
  cfg.sample_rate = j.value("sample_rate", 192.0);
  cfg.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("traffic") && j.at("traffic") != "full_buffer")
    throw std::invalid_argument("config: only full_buffer traffic is modeled");
  if (j.contains("placements")) {
    for (const auto& pj : j.at("placements")) {
      sim::Placement p;
      p.distance_ft = pj.value("distance_ft", 6.0);
      p.sight = sight_from_name(pj.value("sight", std::string("LOS")));
      cfg.placements.push_back(p);
    }
  } else {
    cfg.placements = sim::default_placements(cfg.ap_count);
  }
  cfg.validate();
  return cfg;
}

inline models::TrainConfig train_from_json(const json& j) {
  models::TrainConfig cfg;
  const std::string opt = j.value("optimizer", std::string("sgd"));
  if (opt == "sgd")
    cfg.optimizer = models::TrainConfig::Optimizer::Sgd;
  else if (opt == "adam")
    cfg.optimizer = models::TrainConfig::Optimizer::Adam;
  else
    throw std::invalid_argument("config: optimizer must be sgd or adam");
  cfg.lr = j.value("lr", 1e-4);
  cfg.momentum = j.value("momentum", 0.9);
  cfg.weight_decay = j.value("weight_decay", 1e-4);
  cfg.batch_size = j.value("batch_size", std::size_t{32});
  cfg.epochs = j.value("epochs", std::size_t{100});
  cfg.plateau_patience = j.value("plateau_patience", 50);
  cfg.plateau_factor = j.value("plateau_factor", 0.5);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.target_test_accuracy = j.value("target_test_accuracy", -1.0);
  cfg.validate();
  return cfg;
}

inline models::ModelSpec model_from_json(const json& j) {
  models::ModelSpec spec;
  spec.family = models::family_from_name(j.value("family", std::string("fcn")));
  spec.width = j.value("width", std::size_t{512});
  spec.classes = j.value("classes", std::size_t{2});
  spec.vgg_weight_layers = j.value("vgg_weight_layers", 6);
  spec.fc_hidden = j.value("fc_hidden", std::size_t{128});
  spec.validate();
  return spec;
}

inline json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config: " + path + ": " + e.what());
  }
  return j;
}

// --- prepare -----------------------------------------------------------------

// Dataset labels must live in [0, k); traces are labeled with the AP count.
// A contiguous label set {base, ..., base+k-1} is shifted down by base
// (e.g. the 1-vs-2-AP task has base 1, the 0/1/2 task base 0).
inline int infer_class_base(const std::vector<sim::EnergyTrace>& traces,
                            std::size_t k) {
  std::set<int> labels;
  for (const auto& t : traces) labels.insert(t.label);
  if (labels.empty()) throw std::invalid_argument("prepare: no traces");
  const int base = *labels.begin();
  if (labels.size() != k || *labels.rbegin() != base + static_cast<int>(k) - 1)
    throw std::invalid_argument(
        "prepare: trace labels do not form a contiguous set of " +
        std::to_string(k) + " classes");
  return base;
}

struct Prepared {
  data::Dataset dataset;
  int class_base = 0;
};

inline Prepared prepare_dataset(std::vector<sim::EnergyTrace> traces,
                                std::size_t w, std::size_t k,
                                std::uint64_t seed) {
  Prepared out;
  out.class_base = infer_class_base(traces, k);
  for (auto& t : traces) t.label -= out.class_base;
  out.dataset = data::build_dataset(traces, w, k, seed);
  return out;
}

inline void write_prepared(const Prepared& p, const std::string& name) {
  data::write_dataset(p.dataset, name);
  // extend the sidecar with the label mapping
  auto meta = json::parse(std::ifstream(name + "_META"), nullptr, true);
  meta["class_base"] = p.class_base;
  std::ofstream os(name + "_META");
  os << meta.dump(2) << '\n';
}

inline Prepared read_prepared(const std::string& name) {
  Prepared p;
  p.dataset = data::read_dataset(name);
  const auto meta = json::parse(std::ifstream(name + "_META"));
  p.class_base = meta.value("class_base", 0);
  return p;
}

// --- train / eval ------------------------------------------------------------

inline models::TrainReport run_train(models::Model& model,
                                     const data::Dataset& dataset,
                                     const models::TrainConfig& cfg,
                                     const std::string& checkpoint_path = {},
                                     const std::string& report_path = {}) {
  model.stats = dataset.stats;
  auto report = models::train(model, dataset, cfg);
  if (!checkpoint_path.empty())
    models::save_checkpoint(model, checkpoint_path,
                            optimizer_name(cfg.optimizer));
  if (!report_path.empty()) models::write_train_report(report, report_path);
  return report;
}

inline void write_eval_report(const models::EvalResult& res,
                              const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("eval: cannot open " + path);
  char buf[64];
  std::snprintf(buf, sizeof buf, "accuracy,%.9g\n", res.accuracy);
  os << buf;
  for (std::size_t t = 0; t < res.k; ++t) {
    os << "confusion," << t;
    for (std::size_t p = 0; p < res.k; ++p) os << ',' << res.at(t, p);
    os << '\n';
  }
}

// --- width sweep ---------------------------------------------------------

struct SweepConfig {
  std::vector<std::size_t> widths = {1,  2,   4,   8,   16,  32,  64,
                                     128, 256, 384, 512, 1024, 2048};
  std::size_t classes = 3;
  std::size_t samples_per_class = 48000;
  std::size_t epochs = 6;
  models::TrainConfig::Optimizer optimizer =
      models::TrainConfig::Optimizer::Adam;
  double lr = 1e-3;
  double target_test_accuracy = 0.999;
  std::uint64_t seed = 1;
  double sample_rate = 192.0;
};

struct SweepPoint {
  std::size_t width = 0;
  std::size_t classes = 0;
  double test_accuracy = 0.0;
};

inline std::vector<SweepPoint> run_sweep(const SweepConfig& cfg,
                                         std::ostream* log = nullptr) {
  if (cfg.widths.empty()) throw std::invalid_argument("sweep: no widths");
  for (std::size_t w : cfg.widths)
    if (w < 1 || w > 2048)
      throw std::invalid_argument("sweep: widths must lie in [1, 2048]");

  // identical source traces for every width: w is the only variable
  const double duration =
      static_cast<double>(cfg.samples_per_class) / cfg.sample_rate;
  const std::size_t max_w =
      *std::max_element(cfg.widths.begin(), cfg.widths.end());
  if (cfg.samples_per_class < max_w)
    throw std::invalid_argument("sweep: traces shorter than the widest chunk");

  std::vector<sim::EnergyTrace> traces;
  for (std::size_t c = 0; c < cfg.classes; ++c)
    traces.push_back(sim::simulate_trace(sim::make_scenario(
        static_cast<int>(c), duration, rng::derive_seed(cfg.seed, 100 + c),
        cfg.sample_rate)));

  std::vector<SweepPoint> points;
  for (std::size_t w : cfg.widths) {
    auto prepared =
        prepare_dataset(traces, w, cfg.classes, rng::derive_seed(cfg.seed, w));

    models::ModelSpec spec;
    spec.family = models::Family::FCN;
    spec.width = w;
    spec.classes = cfg.classes;
    spec.class_base = prepared.class_base;
    auto model = models::build_model(spec, rng::derive_seed(cfg.seed, w * 31 + 7));

    models::TrainConfig tc;
    tc.optimizer = cfg.optimizer;
    tc.lr = cfg.lr;
    tc.epochs = cfg.epochs;
    tc.seed = rng::derive_seed(cfg.seed, w * 131 + 11);
    tc.target_test_accuracy = cfg.target_test_accuracy;
    auto report = run_train(model, prepared.dataset, tc);

    // best-checkpoint accuracy (the deployment policy keeps the best epoch)
    points.push_back({w, cfg.classes, report.best_test_accuracy});
    if (log)
      *log << "sweep: w=" << w << " test_accuracy=" << report.best_test_accuracy
           << " (" << report.history.size() << " epochs, "
           << report.wall_time_s << " s)\n";
  }
  return points;
}

inline void write_sweep_report(const std::vector<SweepPoint>& points,
                               const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("sweep: cannot open " + path);
  os << "w,k,test_accuracy\n";
  char buf[64];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.9g\n", p.width, p.classes,
                  p.test_accuracy);
    os << buf;
  }
}

// --- ED / ML comparison matrix ------------------------------------------

// Cases follow the two-AP configuration study: AP1 at 6 ft, AP2 at 15 ft.
//   A: both APs on, B: only the 6 ft AP, C: only the 15 ft AP.
inline sim::ScenarioConfig case_scenario(char case_id, sim::Sight sight,
                                         double duration_s, std::uint64_t seed,
                                         double sample_rate = 192.0) {
  sim::ScenarioConfig cfg;
  cfg.duration_s = duration_s;
  cfg.sample_rate = sample_rate;
  cfg.seed = seed;
  switch (case_id) {
    case 'A':
      cfg.ap_count = 2;
      cfg.placements = {{6.0, sight}, {15.0, sight}};
      break;
    case 'B':
      cfg.ap_count = 1;
      cfg.placements = {{6.0, sight}};
      break;
    case 'C':
      cfg.ap_count = 1;
      cfg.placements = {{15.0, sight}};
      break;
    default:
      throw std::invalid_argument("case must be A, B or C");
  }
  cfg.validate();
  return cfg;
}

struct CompareConfig {
  std::size_t width = 512;
  double train_duration_s = 400.0;  // per single-AP training trace
  double eval_duration_s = 240.0;
  std::size_t epochs = 8;
  double lr = 1e-3;
  models::TrainConfig::Optimizer optimizer =
      models::TrainConfig::Optimizer::Adam;
  double target_test_accuracy = 0.997;
  std::uint64_t seed = 2;
  double sample_rate = 192.0;
  std::string ac_file;  // optional externally supplied AC rows
};

struct CompareRow {
  std::string method;  // ED, AC-external, ML_t, ML_r
  char case_id = 'A';
  std::string sight;
  bool has_metrics = false;
  double accuracy = 0.0;
  double pd = 0.0;
  bool pd_defined = false;
  double pfa = 0.0;
  bool pfa_defined = false;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  double ml_test_accuracy = 0.0;  // on the held-out dataset half
  detect::EdThresholds thresholds;
};

namespace detail {

struct RawChunks {
  std::vector<std::vector<double>> chunks;
  std::vector<int> ap_counts;
};

inline RawChunks chunk_scenario(const sim::EnergyTrace& trace, std::size_t w) {
  RawChunks out;
  for (auto& win : data::chunk_trace(trace, w)) {
    out.chunks.push_back(std::move(win.values));
    out.ap_counts.push_back(trace.label);
  }
  return out;
}

inline CompareRow make_row(const std::string& method, char case_id,
                           const std::string& sight,
                           const std::vector<int>& preds,
                           const std::vector<int>& truth, int target_ap) {
  const auto rep = detect::detection_metrics(preds, truth, target_ap);
  CompareRow row;
  row.method = method;
  row.case_id = case_id;
  row.sight = sight;
  row.has_metrics = true;
  row.accuracy = rep.accuracy;
  row.pd = rep.pd;
  row.pd_defined = rep.target_present;
  row.pfa = rep.pfa;
  row.pfa_defined = rep.others_present;
  return row;
}

}  // namespace detail

inline CompareResult run_comparison(const CompareConfig& cfg,
                                    std::ostream* log = nullptr) {
  const std::size_t w = cfg.width;
  const int target_ap = 2;

  // Training traces span both sights and both distances; the two-AP class
  // gets double duration so the chunk counts stay balanced.
  std::vector<sim::EnergyTrace> traces;
  std::uint64_t sid = 0;
  for (sim::Sight sight : {sim::Sight::LOS, sim::Sight::NLOS}) {
    for (double dist : {6.0, 15.0}) {
      sim::ScenarioConfig one;
      one.ap_count = 1;
      one.placements = {{dist, sight}};
      one.duration_s = cfg.train_duration_s;
      one.sample_rate = cfg.sample_rate;
      one.seed = rng::derive_seed(cfg.seed, 500 + sid++);
      traces.push_back(sim::simulate_trace(one));
    }
    sim::ScenarioConfig two;
    two.ap_count = 2;
    two.placements = {{6.0, sight}, {15.0, sight}};
    two.duration_s = 2.0 * cfg.train_duration_s;
    two.sample_rate = cfg.sample_rate;
    two.seed = rng::derive_seed(cfg.seed, 500 + sid++);
    traces.push_back(sim::simulate_trace(two));
  }

  auto prepared = prepare_dataset(traces, w, 2, rng::derive_seed(cfg.seed, 9));

  models::ModelSpec spec;
  spec.family = models::Family::FCN;
  spec.width = w;
  spec.classes = 2;
  spec.class_base = prepared.class_base;
  auto model = models::build_model(spec, rng::derive_seed(cfg.seed, 21));

  models::TrainConfig tc;
  tc.optimizer = cfg.optimizer;
  tc.lr = cfg.lr;
  tc.epochs = cfg.epochs;
  tc.seed = rng::derive_seed(cfg.seed, 33);
  tc.target_test_accuracy = cfg.target_test_accuracy;
  auto report = run_train(model, prepared.dataset, tc);
  if (log)
    *log << "compare: model test accuracy " << report.final_test_accuracy
         << " after " << report.history.size() << " epochs\n";

  // ED thresholds from the raw (denormalized) training chunks
  std::vector<std::vector<double>> train_raw;
  std::vector<int> train_labels;
  for (const auto& chunk : prepared.dataset.train) {
    train_raw.push_back(data::denormalize(chunk.values, prepared.dataset.stats));
    train_labels.push_back(chunk.label);
  }
  auto thresholds = detect::calibrate_ed_thresholds(train_raw, train_labels, 2);

  CompareResult result;
  result.ml_test_accuracy = report.final_test_accuracy;
  result.thresholds = thresholds;

  // optional externally supplied auto-correlation rows, keyed (case, sight)
  std::map<std::pair<char, std::string>, CompareRow> ac_rows;
  if (!cfg.ac_file.empty()) {
    std::ifstream is(cfg.ac_file);
    if (!is)
      throw std::runtime_error("compare: cannot open AC file " + cfg.ac_file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#' || line.rfind("scenario", 0) == 0)
        continue;
      char case_id;
      char sight[8];
      double acc, pd, pfa;
      if (std::sscanf(line.c_str(), " %c,%7[^,],%lf,%lf,%lf", &case_id, sight,
                      &acc, &pd, &pfa) != 5)
        throw std::runtime_error("compare: " + cfg.ac_file + ":" +
                                 std::to_string(lineno) + ": bad AC row");
      CompareRow row;
      row.method = "AC-external";
      row.case_id = case_id;
      row.sight = sight;
      row.has_metrics = true;
      row.accuracy = acc;
      row.pd = pd;
      row.pd_defined = true;
      row.pfa = pfa;
      row.pfa_defined = true;
      ac_rows[{case_id, row.sight}] = row;
    }
  }

  std::uint64_t eval_sid = 900;
  for (char case_id : {'A', 'B', 'C'}) {
    for (sim::Sight sight : {sim::Sight::LOS, sim::Sight::NLOS}) {
      const auto scen = case_scenario(case_id, sight, cfg.eval_duration_s,
                                      rng::derive_seed(cfg.seed, eval_sid++),
                                      cfg.sample_rate);
      const auto trace = sim::simulate_trace(scen);
      const auto raw = detail::chunk_scenario(trace, w);
      const std::string sight_str = sight_name(sight);

      std::vector<int> ed_preds, ml_preds;
      for (const auto& chunk : raw.chunks) {
        ed_preds.push_back(detect::ed_classify(chunk, thresholds) +
                           prepared.class_base);
        ml_preds.push_back(
            detect::ml_classify(model, chunk, prepared.dataset.stats).label +
            prepared.class_base);
      }
      result.rows.push_back(detail::make_row("ED", case_id, sight_str, ed_preds,
                                             raw.ap_counts, target_ap));
      auto it = ac_rows.find({case_id, sight_str});
      if (it != ac_rows.end()) {
        result.rows.push_back(it->second);
      } else {
        CompareRow blank;
        blank.method = "AC-external";
        blank.case_id = case_id;
        blank.sight = sight_str;
        result.rows.push_back(blank);
      }
      result.rows.push_back(detail::make_row("ML_t", case_id, sight_str,
                                             ml_preds, raw.ap_counts,
                                             target_ap));

      // ML_r: the same trace streamed through the online path
      // (non-overlapping windows)
      csat::CsatController controller(w, cfg.sample_rate);
      std::vector<int> rt_preds, rt_truth;
      for (double v : trace.values) {
        if (auto chunk = controller.ingest_sample(v)) {
          rt_preds.push_back(
              detect::ml_classify(model, *chunk, prepared.dataset.stats).label +
              prepared.class_base);
          rt_truth.push_back(trace.label);
        }
      }
      result.rows.push_back(detail::make_row("ML_r", case_id, sight_str,
                                             rt_preds, rt_truth, target_ap));
      if (log) {
        const auto& ed = result.rows[result.rows.size() - 4];
        const auto& mt = result.rows[result.rows.size() - 2];
        *log << "compare: case " << case_id << " " << sight_str << " ED "
             << ed.accuracy << " ML_t " << mt.accuracy << "\n";
      }
    }
  }
  return result;
}

inline void write_compare_report(const CompareResult& result,
                                 const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("compare: cannot open " + path);
  os << "method,scenario,sight,accuracy,pd,pfa\n";
  char buf[64];
  for (const auto& row : result.rows) {
    os << row.method << ',' << row.case_id << ',' << row.sight << ',';
    if (row.has_metrics) {
      std::snprintf(buf, sizeof buf, "%.9g", row.accuracy);
      os << buf;
    }
    os << ',';
    if (row.has_metrics && row.pd_defined) {
      std::snprintf(buf, sizeof buf, "%.9g", row.pd);
      os << buf;
    }
    os << ',';
    if (row.has_metrics && row.pfa_defined) {
      std::snprintf(buf, sizeof buf, "%.9g", row.pfa);
      os << buf;
    }
    os << '\n';
  }
}

// --- online controller ---------------------------------------------------

struct OnlineOptions {
  std::string model_path;
  std::string input_path = "-";   // file or - for stdin
  std::string events_path;        // empty -> stdout
  double sample_rate = 192.0;
  int initial_ap_count = 1;
  std::size_t queue_capacity = 16;
};

struct OnlineSummary {
  std::uint64_t samples = 0;
  std::uint64_t dropped = 0;
  std::uint64_t chunks = 0;
  std::uint64_t transitions = 0;
  double collection_time_s = 0.0;
  double mean_inference_s = 0.0;
  double max_inference_s = 0.0;
  double mean_overhead_s = 0.0;
  double detection_latency_s = 0.0;
};

inline OnlineSummary run_online(const OnlineOptions& opts) {
  auto loaded = models::load_checkpoint(opts.model_path);
  auto& model = loaded.model;
  const std::size_t w = model.spec.width;
  const data::NormStats stats = model.stats;

  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (opts.input_path != "-") {
    file_in.open(opts.input_path);
    if (!file_in)
      throw std::runtime_error("online: cannot open " + opts.input_path);
    in = &file_in;
  }
  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!opts.events_path.empty()) {
    file_out.open(opts.events_path);
    if (!file_out)
      throw std::runtime_error("online: cannot open " + opts.events_path);
    out = &file_out;
  }

  struct QueuedChunk {
    std::vector<double> values;
    double time_s = 0.0;  // sample-clock time at chunk completion
    std::chrono::steady_clock::time_point ready;
  };
  csat::BoundedQueue<QueuedChunk> queue(opts.queue_capacity);
  csat::CsatController controller(w, opts.sample_rate, opts.initial_ap_count);

  std::thread ingest([&] {
    std::string line;
    while (std::getline(*in, line)) {
      if (line.empty() || line[0] == '#') continue;
      char* end = nullptr;
      double v = std::strtod(line.c_str(), &end);
      if (end == line.c_str()) v = std::numeric_limits<double>::quiet_NaN();
      if (auto chunk = controller.ingest_sample(v))
        queue.push({std::move(*chunk), controller.time_s(),
                    std::chrono::steady_clock::now()});
    }
    queue.close();
  });

  OnlineSummary summary;
  double inference_total = 0.0, overhead_total = 0.0;
  while (auto item = queue.pop()) {
    const auto t_start = std::chrono::steady_clock::now();
    const auto pred = detect::ml_classify(model, item->values, stats);
    const auto t_inferred = std::chrono::steady_clock::now();
    const int predicted_ap = pred.label + model.spec.class_base;
    const auto transition = controller.step_inference(predicted_ap);
    if (transition) ++summary.transitions;

    json event = {{"time_s", item->time_s},
                  {"predicted_class", predicted_ap},
                  {"confirmed_class", controller.state().confirmed},
                  {"duty_cycle", controller.state().duty_cycle}};
    *out << event.dump() << '\n';

    const auto t_done = std::chrono::steady_clock::now();
    const double infer_s =
        std::chrono::duration<double>(t_inferred - t_start).count();
    const double overhead_s =
        std::chrono::duration<double>(t_done - item->ready).count() - infer_s;
    inference_total += infer_s;
    overhead_total += std::max(0.0, overhead_s);
    summary.max_inference_s = std::max(summary.max_inference_s, infer_s);
    ++summary.chunks;
  }
  ingest.join();

  summary.samples = controller.state().samples_seen;
  summary.dropped = controller.state().samples_dropped;
  summary.collection_time_s = static_cast<double>(w) / opts.sample_rate;
  if (summary.chunks > 0) {
    summary.mean_inference_s =
        inference_total / static_cast<double>(summary.chunks);
    summary.mean_overhead_s =
        overhead_total / static_cast<double>(summary.chunks);
  }
  summary.detection_latency_s = csat::detection_latency(
      w, opts.sample_rate, summary.mean_inference_s, summary.mean_overhead_s);

  json sj = {{"type", "summary"},
             {"samples", summary.samples},
             {"dropped", summary.dropped},
             {"chunks", summary.chunks},
             {"transitions", summary.transitions},
             {"collection_time_s", summary.collection_time_s},
             {"mean_inference_s", summary.mean_inference_s},
             {"max_inference_s", summary.max_inference_s},
             {"mean_overhead_s", summary.mean_overhead_s},
             {"detection_latency_s", summary.detection_latency_s}};
  *out << sj.dump() << '\n';
  return summary;
}

}  // namespace csense::pipeline
