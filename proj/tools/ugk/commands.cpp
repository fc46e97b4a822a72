#include "commands.hpp"

#include <iostream>

#include <json.hpp>

#include "gradcheck_suite.hpp"
#include "ugk/csv.hpp"
#include "ugk/dataset.hpp"
#include "ugk/flops.hpp"
#include "ugk/train.hpp"

namespace ugk::cli {

namespace fs = std::filesystem;

RunConfig resolve_config(const Options& o) {
  RunConfig cfg = o.config_file ? load_run_config(*o.config_file) : RunConfig{};
  if (o.seed) cfg.seed = *o.seed;
  if (o.target) cfg.target = parse_target(*o.target);
  if (o.out) cfg.out_dir = *o.out;
  if (o.data) cfg.data_dir = *o.data;
  if (o.threads) cfg.threads = *o.threads;
  if (o.epochs) cfg.model.max_epochs = *o.epochs;
  if (o.edge_mask) cfg.model.ablations.edge_mask |= parse_relation_list(*o.edge_mask);
  cfg.finalize();
  return cfg;
}

namespace {

std::string hash_comment(const RunConfig& cfg) { return "config_hash=" + cfg.hash(); }

ModelConfig with_variant(ModelConfig m, const Ablations& v) {
  m.ablations.static_graph |= v.static_graph;
  m.ablations.homogeneous |= v.homogeneous;
  m.ablations.edge_mask |= v.edge_mask;
  m.ablations.no_warmup |= v.no_warmup;
  m.ablations.single_hour |= v.single_hour;
  return m;
}

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (c == ':' || c == ',' || c == '/' || c == ' ') c = '_';
  }
  return s;
}

BlockLoadOptions load_options(const RunConfig& cfg) {
  BlockLoadOptions opts;
  opts.variable = cfg.target;
  opts.graph = cfg.graph;
  opts.threads = cfg.resolved_threads();
  opts.cache_root = cfg.out_dir / "graphs";
  return opts;
}

std::vector<BlockData> load_blocks(const RunConfig& cfg, const std::vector<std::string>& ids) {
  const BlockLoadOptions opts = load_options(cfg);
  std::vector<BlockData> blocks;
  for (const auto& id : ids) blocks.push_back(load_block(cfg.data_dir, id, opts));
  return blocks;
}

std::vector<std::string> split_ids(const DatasetSplit& split, const std::string& which) {
  if (which == "train") return split.train;
  if (which == "val") return split.val;
  if (which == "test") return split.test;
  std::vector<std::string> all = split.train;
  all.insert(all.end(), split.val.begin(), split.val.end());
  all.insert(all.end(), split.test.begin(), split.test.end());
  std::sort(all.begin(), all.end());
  return all;
}

std::string split_csv(const RunConfig& cfg, const DatasetSplit& split) {
  std::string s = "# " + hash_comment(cfg) + "\nblock,split\n";
  for (const auto& [name, ids] : {std::pair{"train", &split.train}, {"val", &split.val}, {"test", &split.test}}) {
    for (const auto& id : *ids) s += id + "," + name + "\n";
  }
  return s;
}

void write_run_json(const RunConfig& cfg, const fs::path& path) {
  nlohmann::ordered_json j;
  j["config_hash"] = cfg.hash();
  j["config"] = nlohmann::ordered_json::parse(run_config_to_json(cfg));
  write_text_file(path, j.dump(2) + "\n");
}

struct TrainedModel {
  std::unique_ptr<UrbanGraphModel> model;
  TrainResult result;
};

TrainedModel train_on_split(const RunConfig& cfg, const ModelConfig& model_cfg, const DatasetSplit& split,
                            const Options& o, const std::string& label) {
  const auto train = load_blocks(cfg, split.train);
  const auto val = load_blocks(cfg, split.val);
  TrainedModel tm;
  tm.model = std::make_unique<UrbanGraphModel>(model_cfg);
  TrainOptions topts;
  if (!o.quiet) {
    topts.on_epoch = [&](const HistoryRow& row) {
      std::cout << label << " epoch " << row.epoch << " train_mse " << format_double(row.train_mse) << " val_mse "
                << format_double(row.val_mse) << " val_r2 " << (row.val_r2 ? format_double(*row.val_r2) : "nan")
                << " lr " << format_double(row.lr) << "\n";
    };
  }
  tm.result = train_model(*tm.model, train, val, topts);
  return tm;
}

// Hash of everything a checkpoint must agree with to be reusable: training
// schedule settings are reset so `--epochs` and friends do not matter.
std::string checkpoint_hash(const RunConfig& cfg) {
  RunConfig c = cfg;
  const ModelConfig defaults;
  c.model.lr = defaults.lr;
  c.model.batch_size = defaults.batch_size;
  c.model.weight_decay = defaults.weight_decay;
  c.model.plateau_factor = defaults.plateau_factor;
  c.model.plateau_patience = defaults.plateau_patience;
  c.model.early_stop_patience = defaults.early_stop_patience;
  c.model.max_epochs = defaults.max_epochs;
  return c.hash();
}

nn::CheckpointData make_checkpoint(const RunConfig& cfg, const UrbanGraphModel& model) {
  nn::CheckpointData data = nn::capture_checkpoint(model.parameters(), nullptr);
  data.config_hash = checkpoint_hash(cfg);
  data.graph_hash = hash_hex(cfg.graph.hash());
  data.target_mean = model.scaling.mean;
  data.target_scale = model.scaling.scale;
  return data;
}

std::unique_ptr<UrbanGraphModel> load_model(const RunConfig& cfg, const Options& o) {
  const fs::path path = o.checkpoint ? fs::path(*o.checkpoint) : cfg.out_dir / "checkpoint.ugk";
  const nn::CheckpointData data = nn::read_checkpoint(path);
  const std::string graph_hash = hash_hex(cfg.graph.hash());
  if (data.graph_hash != graph_hash) {
    throw Error(ErrorCode::ConfigHashMismatch, "checkpoint was trained on graphs with config " + data.graph_hash +
                                                   ", the graph cache uses " + graph_hash);
  }
  if (data.config_hash != checkpoint_hash(cfg)) {
    throw Error(ErrorCode::ConfigHashMismatch,
                "checkpoint config hash " + data.config_hash + " differs from this run's " + checkpoint_hash(cfg));
  }
  auto model = std::make_unique<UrbanGraphModel>(cfg.model);
  nn::load_parameters(model->parameters(), data);
  model->scaling = {data.target_mean, data.target_scale};
  return model;
}

}  // namespace

int run_synth(const RunConfig& cfg, const Options&) {
  generate_synthetic(cfg.data_dir, cfg.synthetic, cfg.hash());
  std::cout << "wrote " << cfg.synthetic.blocks << " blocks to " << cfg.data_dir.string() << "\n";
  return 0;
}

int run_build_graphs(const RunConfig& cfg, const Options&) {
  const auto ids = list_blocks(cfg.data_dir);
  const fs::path cache = cfg.out_dir / "graphs";
  std::string manifest = "# " + hash_comment(cfg) + "\nblock,graph_hash,steps,edges\n";
  std::size_t hits = 0;
  for (const auto& id : ids) {
    const fs::path dir = block_directory(cfg.data_dir, id);
    const GridScene scene = load_scene(dir);
    const auto weather = load_weather(dir / "weather.csv");
    const Matrix features = compute_static_features(scene, cfg.graph.eps).values;
    const auto res = load_or_build_graphs(cache, scene, features, weather, cfg.graph, cfg.resolved_threads());
    std::size_t edges = 0;
    for (const auto& g : res.graphs) edges += g.num_edges();
    manifest += id + "," + res.hash + "," + std::to_string(res.graphs.size()) + "," + std::to_string(edges) + "\n";
    hits += res.hit ? 1 : 0;
  }
  write_text_file(cache / "manifest.csv", manifest);
  std::cout << ids.size() << " blocks, " << hits << " cache hits, " << ids.size() - hits << " built\n";
  return 0;
}

int run_train(const RunConfig& cfg, const Options& o) {
  const DatasetSplit split = split_dataset(list_blocks(cfg.data_dir), cfg.seed);
  ModelConfig model_cfg = cfg.model;
  if (o.ablate) model_cfg = with_variant(model_cfg, parse_ablation(*o.ablate));
  RunConfig effective = cfg;
  effective.model = model_cfg;

  TrainedModel tm = train_on_split(effective, model_cfg, split, o, "train");
  nn::write_checkpoint(effective.out_dir / "checkpoint.ugk", make_checkpoint(effective, *tm.model));
  write_text_file(effective.out_dir / "history.csv", format_history_csv(tm.result.history, effective.hash()));
  write_text_file(effective.out_dir / "split.csv", split_csv(effective, split));
  write_run_json(effective, effective.out_dir / "run.json");
  std::cout << "best epoch " << tm.result.best_epoch << " val_mse " << format_double(tm.result.best_val_mse) << "\n";
  return 0;
}

int run_eval(const RunConfig& cfg, const Options& o) {
  const auto model = load_model(cfg, o);
  const DatasetSplit split = split_dataset(list_blocks(cfg.data_dir), cfg.seed);
  const auto blocks = load_blocks(cfg, split_ids(split, o.split));
  if (blocks.empty()) throw Error(ErrorCode::EmptySplit, o.split + " split is empty");
  const MetricsReport report = evaluate_model(*model, blocks);
  write_text_file(cfg.out_dir / "metrics.csv", format_metrics_csv(report, cfg.hash()));
  write_text_file(cfg.out_dir / "metrics_per_hour.csv", format_per_hour_csv(report, cfg.hash()));
  std::cout << "mae " << format_double(report.overall.mae) << " rmse " << format_double(report.overall.rmse)
            << " r2 " << (report.overall.r2 ? format_double(*report.overall.r2) : "nan") << "\n";
  return 0;
}

int run_predict(const RunConfig& cfg, const Options& o) {
  const auto model = load_model(cfg, o);
  const DatasetSplit split = split_dataset(list_blocks(cfg.data_dir), cfg.seed);
  BlockLoadOptions opts = load_options(cfg);
  opts.load_targets = false;
  std::size_t written = 0;
  for (const auto& id : split_ids(split, o.split)) {
    BlockData block = load_block(cfg.data_dir, id, opts);
    block.target.variable = cfg.target;
    const PredictionBlock pred = predict_blocks(*model, std::span<const BlockData>(&block, 1)).front();
    const fs::path dir = cfg.out_dir / "predictions" / id / std::string(target_name(cfg.target));
    for (std::size_t h = 0; h < pred.values.cols; ++h) {
      Matrix grid(block.scene.rows, block.scene.cols);
      for (std::size_t v = 0; v < grid.values.size(); ++v) grid.values[v] = pred.values(v, h);
      const std::string hh = (h < 10 ? "h0" : "h") + std::to_string(h) + ".csv";
      write_grid_csv(dir / hh, grid, hash_comment(cfg));
      ++written;
    }
  }
  std::cout << "wrote " << written << " prediction grids\n";
  return 0;
}

int run_gradcheck(const RunConfig& cfg, const Options&) {
  const auto rows = run_gradcheck_suite(cfg.seed);
  std::string csv = "# " + hash_comment(cfg) + "\ncase,checked,kinks,max_rel_error,max_abs_error,worst,pass\n";
  bool ok = true;
  for (const auto& r : rows) {
    const bool pass = r.report.passed(kGradcheckTolerance);
    ok = ok && pass;
    csv += r.name + "," + std::to_string(r.report.checked) + "," + std::to_string(r.report.kinks) + "," + format_double(r.report.max_rel_error) + "," +
           format_double(r.report.max_abs_error) + "," + r.report.worst + "," + (pass ? "1" : "0") + "\n";
    std::cout << (pass ? "PASS " : "FAIL ") << r.name << " max_rel_error " << format_double(r.report.max_rel_error)
              << "\n";
  }
  write_text_file(cfg.out_dir / "gradcheck.csv", csv);
  return ok ? 0 : 1;
}

int run_flops(const RunConfig& cfg, const Options& o) {
  ModelConfig model_cfg = cfg.model;
  GraphStats stats;
  if (o.paper_scale) {
    model_cfg = ModelConfig{};
    SyntheticSpec spec = cfg.synthetic;
    spec.rows = spec.cols = 50;
    spec.hours = model_cfg.t_pred;
    const std::string id = "paper_scale";
    const GridScene scene = random_scene(spec, id);
    const auto weather = random_weather(spec, id);
    const auto graphs = build_graph_sequence(scene, compute_static_features(scene, cfg.graph.eps).values, weather,
                                             cfg.graph, cfg.resolved_threads());
    stats = graph_stats(graphs, model_cfg);
  } else {
    const auto ids = list_blocks(cfg.data_dir);
    const auto blocks = load_blocks(cfg, ids);
    for (const auto& b : blocks) {
      const GraphStats s = graph_stats(b.graphs, model_cfg);
      stats.num_nodes = std::max(stats.num_nodes, s.num_nodes);
      for (std::size_t r = 0; r < kNumRelations; ++r) stats.edges_per_step[r] += s.edges_per_step[r] / static_cast<double>(blocks.size());
    }
  }
  const FlopReport report = count_flops(model_cfg, stats);
  std::string csv = "# " + hash_comment(cfg) + "\nterm,macs\n";
  for (const auto& t : report.terms) csv += t.name + "," + format_double(t.macs) + "\n";
  csv += "total_macs," + format_double(report.macs) + "\n";
  csv += "total_flops," + format_double(report.flops) + "\n";
  write_text_file(cfg.out_dir / (o.paper_scale ? "flops_paper_scale.csv" : "flops.csv"), csv);
  std::cout << "nodes " << stats.num_nodes << " macs " << format_double(report.macs) << " flops "
            << format_double(report.flops) << "\n";
  return 0;
}

int run_ablate(const RunConfig& cfg, const Options& o) {
  const Ablations variant = parse_ablation(*o.ablate);
  const DatasetSplit split = split_dataset(list_blocks(cfg.data_dir), cfg.seed);
  const auto test = load_blocks(cfg, split.test);
  const fs::path dir = cfg.out_dir / ("ablate_" + file_safe(*o.ablate));

  struct Arm {
    std::string name;
    ModelConfig model;
  };
  const std::array<Arm, 2> arms{Arm{"base", cfg.model}, Arm{"variant", with_variant(cfg.model, variant)}};
  std::string report = "# " + hash_comment(cfg) + "\narm,variant,best_epoch,mae,rmse,r2\n";
  for (const auto& arm : arms) {
    RunConfig run = cfg;
    run.model = arm.model;
    TrainedModel tm = train_on_split(run, arm.model, split, o, arm.name);
    const MetricsReport m = evaluate_model(*tm.model, test);
    write_text_file(dir / (arm.name + "_history.csv"), format_history_csv(tm.result.history, run.hash()));
    write_text_file(dir / (arm.name + "_per_hour.csv"), format_per_hour_csv(m, run.hash()));
    report += arm.name + "," + (arm.name == "base" ? std::string("none") : *o.ablate) + "," +
              std::to_string(tm.result.best_epoch) + "," + format_double(m.overall.mae) + "," +
              format_double(m.overall.rmse) + "," + (m.overall.r2 ? format_double(*m.overall.r2) : "nan") + "\n";
    std::cout << arm.name << " r2 " << (m.overall.r2 ? format_double(*m.overall.r2) : "nan") << "\n";
  }
  write_text_file(dir / "report.csv", report);
  return 0;
}

}  // namespace ugk::cli
