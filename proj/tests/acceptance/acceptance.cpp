// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.
//
//   ugk_acceptance <path-to-ugk> [--only N[,N...]]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "../support.hpp"
#include "gradcheck_suite.hpp"
#include "ugk/csv.hpp"
#include "ugk/dataset.hpp"
#include "ugk/flops.hpp"
#include "ugk/metrics.hpp"
#include "ugk/model.hpp"
#include "ugk/solar.hpp"
#include "ugk/synthetic.hpp"
#include "ugk/train.hpp"

namespace fs = std::filesystem;
using namespace ugk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// --- 1 -----------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  const GraphConfig cfg;
  std::size_t comparisons = 0, mismatches = 0, edges = 0;
  auto compare = [&](EdgeList fast, EdgeList slow) {
    ++comparisons;
    edges += slow.size();
    if (test::sorted(std::move(fast)) != test::sorted(std::move(slow))) ++mismatches;
  };
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = Rng::named(seed, "acceptance/oracle");
    const GridScene scene = test::random_test_scene(20, 20, rng);
    const Matrix x = compute_static_features(scene, cfg.eps).values;
    for (int k = 0; k < 4; ++k) {
      const WeatherRecord w = test::weather_row(rng.uniform(50, 1200), rng.uniform(0, 10), rng.uniform(0, 360));
      const SunState sun{rng.uniform(5, 85), rng.uniform(0, 360)};
      compare(build_shadow_edges(scene, sun, cfg), bruteforce_edges(scene, x, w, sun, cfg, RelationKind::Shadow));
      compare(build_vegetation_edges(scene, w, cfg),
              bruteforce_edges(scene, x, w, sun, cfg, RelationKind::VegetationActivity));
      compare(build_wind_edges(scene, w, cfg),
              bruteforce_edges(scene, x, w, sun, cfg, RelationKind::ConvectiveDiffusion));
      compare(build_similarity_edges(x, cfg.k_similarity),
              bruteforce_edges(scene, x, w, sun, cfg, RelationKind::SemanticSimilarity));
      compare(build_internal_edges(scene), bruteforce_edges(scene, x, w, sun, cfg, RelationKind::InternalContiguity));
    }
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < 60.0,
          std::to_string(comparisons) + " edge sets (" + std::to_string(edges) + " edges), " +
              std::to_string(mismatches) + " mismatches, " + fmt(elapsed) + " s"};
}

// --- 2 -----------------------------------------------------------------------

Outcome spot_checks() {
  const GraphConfig cfg;
  std::vector<std::string> failed;
  auto check = [&](const std::string& name, double got, double want) {
    if (std::abs(got - want) > 1e-12) failed.push_back(name + "=" + fmt(got));
  };
  // 12 m at 45 degrees on 4 m cells.
  check("shadow_length", shadow_length(12.0, SunState{45.0, 180.0}, 4.0, cfg.r_max_building_grids), 3.0);
  check("shadow_azimuth", shadow_azimuth(SunState{30.0, 135.0}), 315.0);
  check("vegetation_radius", vegetation_radius(2000.0, cfg), 6.0);
  check("wind_alpha", wind_alpha(1.0, 8.0, cfg), 1.3);

  Rng rng(5);
  const GridScene scene = test::random_test_scene(20, 20, rng);
  const EdgeList sim = build_similarity_edges(compute_static_features(scene).values, cfg.k_similarity);
  std::vector<std::size_t> out(scene.num_nodes(), 0);
  for (const Edge& e : sim) ++out[e.src];
  const bool degree_ok = std::all_of(out.begin(), out.end(), [](std::size_t d) { return d == 8; });
  if (!degree_ok) failed.push_back("similarity out-degree");
  std::string detail = failed.empty() ? "all exact" : "";
  for (const auto& f : failed) detail += f + " ";
  return {failed.empty(), detail};
}

// --- 3 -----------------------------------------------------------------------

Outcome gradients() {
  const auto start = Clock::now();
  const auto cases = cli::run_gradcheck_suite(0);
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    ok &= c.report.passed(cli::kGradcheckTolerance);
    detail += c.name + "=" + fmt(c.report.max_rel_error) + " ";
  }
  const double elapsed = seconds_since(start);
  return {ok && elapsed < 120.0 && cases.size() == 7, detail + fmt(elapsed) + " s"};
}

// --- 4, 5 ----------------------------------------------------------------------

struct Toy {
  GridScene scene;
  std::vector<WeatherRecord> weather;
  std::vector<HeteroGraph> graphs;
  Matrix features;
};

Toy toy(std::size_t side, std::size_t hours, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.rows = spec.cols = side;
  spec.hours = hours;
  Toy t;
  t.scene = random_scene(spec, "toy");
  t.weather = random_weather(spec, "toy");
  t.graphs = build_graph_sequence(t.scene, compute_static_features(t.scene).values, t.weather, spec.graph);
  t.features = block_node_features(t.scene);
  return t;
}

ModelConfig toy_config(std::size_t hours) {
  ModelConfig cfg;
  cfg.hidden_dim = 6;
  cfg.t_pred = hours;
  cfg.seed = 11;
  return cfg;
}

Matrix run(const UrbanGraphModel& model, const Toy& t) {
  return model.forward(prepare_sequence(t.graphs, t.weather, t.features, model.config())).to_matrix();
}

void copy_into(UrbanGraphModel& dst, const std::string& dst_name, const UrbanGraphModel& src,
               const std::string& src_name) {
  const nn::Tensor from = src.parameters().find(src_name);
  nn::Tensor to = dst.parameters().find(dst_name);
  if (from.shape() != to.shape()) throw Error(ErrorCode::ShapeMismatch, dst_name);
  std::copy(from.data().begin(), from.data().end(), to.mutable_data().begin());
}

Outcome ablation_identities() {
  const Toy t = toy(10, 5, 2);
  std::vector<std::string> failed;

  ModelConfig hcfg = toy_config(5);
  hcfg.ablations.homogeneous = true;
  const UrbanGraphModel homogeneous(hcfg);
  UrbanGraphModel tied(toy_config(5));
  for (const auto& p : homogeneous.parameters().entries()) copy_into(tied, p.name, homogeneous, p.name);
  for (std::size_t l = 0; l < tied.config().rgcn_layers; ++l) {
    const std::string layer = "rgcn" + std::to_string(l);
    for (std::size_t r = 1; r < kNumRelations; ++r) {
      copy_into(tied, layer + ".w_rel" + std::to_string(r), homogeneous, layer + ".w_rel0");
    }
  }
  Toy merged = t;
  for (auto& g : merged.graphs) g = merge_relations(g);
  if (run(homogeneous, t) != run(tied, merged)) failed.push_back("homogeneous");

  ModelConfig scfg = toy_config(5);
  scfg.ablations.static_graph = true;
  Toy constant = t;
  for (auto& g : constant.graphs) g = t.graphs[0];
  if (run(UrbanGraphModel(scfg), t) != run(UrbanGraphModel(toy_config(5)), constant)) failed.push_back("static");

  for (RelationKind r : kAllRelations) {
    ModelConfig dcfg = toy_config(5);
    dcfg.ablations.edge_mask.set(relation_index(r));
    UrbanGraphModel zeroed(toy_config(5));
    for (std::size_t l = 0; l < zeroed.config().rgcn_layers; ++l) {
      auto w = zeroed.parameters().find("rgcn" + std::to_string(l) + ".w_rel" + std::to_string(relation_index(r)));
      for (double& v : w.mutable_data()) v = 0.0;
    }
    if (run(UrbanGraphModel(dcfg), t) != run(zeroed, t)) failed.push_back("drop:" + std::string(relation_name(r)));
  }
  std::string detail = failed.empty() ? "homogeneous, static and 5 drop variants bit-identical" : "differs:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

Outcome equivariance() {
  const Toy t = toy(9, 4, 3);
  const UrbanGraphModel model(toy_config(4));
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::vector<std::uint32_t> perm(t.features.rows);
    std::iota(perm.begin(), perm.end(), 0u);
    Rng rng(seed);
    rng.shuffle(std::span<std::uint32_t>(perm));
    auto permute_rows = [&](const Matrix& m) {
      Matrix out(m.rows, m.cols);
      for (std::size_t v = 0; v < m.rows; ++v) {
        for (std::size_t c = 0; c < m.cols; ++c) out(perm[v], c) = m(v, c);
      }
      return out;
    };
    Toy p = t;
    p.features = permute_rows(t.features);
    for (auto& g : p.graphs) {
      HeteroGraph q;
      q.num_nodes = g.num_nodes;
      for (std::size_t r = 0; r < kNumRelations; ++r) {
        EdgeList e;
        for (const Edge& x : g.relation(static_cast<RelationKind>(r))) e.push_back({perm[x.src], perm[x.dst]});
        std::sort(e.begin(), e.end());
        q.edges[r] = std::make_shared<const EdgeList>(std::move(e));
      }
      g = std::move(q);
    }
    auto diff = [&](const Matrix& a, const Matrix& b) {
      for (std::size_t i = 0; i < a.values.size(); ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    };
    for (const auto& layer : model.rgcn_layers()) {
      if (layer.self_weight.rows() != t.features.cols) continue;
      diff(permute_rows(nn::rgcn_forward(nn::Tensor::from_matrix(t.features), t.graphs[0], layer, false).to_matrix()),
           nn::rgcn_forward(nn::Tensor::from_matrix(p.features), p.graphs[0], layer, false).to_matrix());
    }
    diff(permute_rows(run(model, t)), run(model, p));
  }
  return {worst <= 1e-10, "max deviation " + fmt(worst) + " over 5 permutations"};
}

// --- 6 -----------------------------------------------------------------------

struct ArmResult {
  std::string name;
  double r2 = 0.0;
  double seconds = 0.0;
  std::size_t best_epoch = 0;
};

Outcome synthetic_end_to_end() {
  const fs::path root = test::scratch_dir("acceptance_e2e");
  SyntheticSpec spec;  // 16 blocks, 20 x 20, 12 hours, sigma 0.1
  spec.seed = 0;
  generate_synthetic(root, spec);
  const DatasetSplit split = split_dataset(list_blocks(root), spec.seed);
  BlockLoadOptions opts;
  opts.graph = spec.graph;
  auto load = [&](const std::vector<std::string>& ids) {
    std::vector<BlockData> out;
    for (const auto& id : ids) out.push_back(load_block(root, id, opts));
    return out;
  };
  const auto train = load(split.train), val = load(split.val), test = load(split.test);

  ModelConfig base;
  base.hidden_dim = 32;
  base.head_mode = HeadMode::Multi;
  base.batch_size = 1;
  base.max_epochs = 200;
  base.seed = spec.seed;

  std::vector<ArmResult> arms;
  for (const std::string variant : {"none", "static_graph", "drop:Shadow"}) {
    ModelConfig cfg = base;
    if (variant != "none") cfg.ablations = parse_ablation(variant);
    const auto start = Clock::now();
    UrbanGraphModel model(cfg);
    const TrainResult result = train_model(model, train, val);
    const MetricsReport m = evaluate_model(model, test);
    arms.push_back({variant, m.overall.r2.value_or(-1e9), seconds_since(start), result.best_epoch});
    std::cout << "  [6] " << variant << ": test r2 " << fmt(arms.back().r2) << ", best epoch "
              << result.best_epoch << ", " << fmt(arms.back().seconds) << " s" << std::endl;
  }
  bool ok = arms[0].r2 >= 0.90 && arms[1].r2 < arms[0].r2 && arms[2].r2 < arms[0].r2;
  for (const auto& a : arms) ok &= a.seconds < 600.0;
  return {ok, "r2 full " + fmt(arms[0].r2) + ", static_graph " + fmt(arms[1].r2) + ", drop:Shadow " +
                  fmt(arms[2].r2)};
}

// --- 7 -----------------------------------------------------------------------

Outcome flops_sanity() {
  const ModelConfig cfg;
  SyntheticSpec spec;
  spec.rows = spec.cols = 50;
  spec.hours = cfg.t_pred;
  const GridScene scene = random_scene(spec, "paper_scale");
  const auto weather = random_weather(spec, "paper_scale");
  const auto graphs = build_graph_sequence(scene, compute_static_features(scene).values, weather, spec.graph);
  const FlopReport report = count_flops(cfg, graph_stats(graphs, cfg));
  const double ratio = report.macs / 9.13e9;
  return {ratio >= 0.5 && ratio <= 2.0,
          "macs " + fmt(report.macs) + " (flops " + fmt(report.flops) + "), ratio to 9.13e9 " + fmt(ratio)};
}

// --- 8 -----------------------------------------------------------------------

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_text_file(e.path());
  }
  return files;
}

Outcome determinism(const fs::path& ugk_binary) {
  const fs::path work = test::scratch_dir("acceptance_determinism");
  write_text_file(work / "run.json", R"({
  "seed": 5,
  "synthetic": {"blocks": 10, "rows": 10, "cols": 10, "hours": 4},
  "model": {"hidden_dim": 8, "t_pred": 4, "batch_size": 2, "max_epochs": 3}
})");
  const std::vector<std::string> commands = {
      "synth", "build-graphs", "train", "eval", "predict --split all", "gradcheck", "flops", "flops --paper-scale",
      "ablate drop:Shadow"};

  std::vector<std::string> failed;
  for (const auto& sub : commands) {
    std::map<std::string, std::string> runs[2];
    for (int attempt = 0; attempt < 2; ++attempt) {
      // Every run starts from a dataset produced by the same synth call.
      const fs::path data = work / "data", out = work / "out", log = work / "stdout.txt";
      const std::string base = ugk_binary.string() + " %s --config " + (work / "run.json").string() + " --data " +
                               data.string() + " --out " + out.string() + " --quiet";
      auto invoke = [&](const std::string& s) {
        std::string cmd = base;
        cmd.replace(cmd.find("%s"), 2, s);
        return std::system((cmd + " > " + log.string() + " 2>&1").c_str());
      };
      fs::remove_all(data);
      fs::remove_all(out);
      if (sub != "synth") {
        invoke("synth");
        if (sub == "eval" || sub == "predict --split all") invoke("train");
      }
      const int status = invoke(sub);
      auto files = snapshot(out);
      if (sub == "synth") files = snapshot(data);
      files["<stdout>"] = read_text_file(log);
      files["<status>"] = std::to_string(status);
      runs[attempt] = std::move(files);
    }
    if (runs[0] != runs[1] || runs[0]["<status>"] != "0") failed.push_back(sub);
  }
  std::string detail = std::to_string(commands.size() - failed.size()) + "/" + std::to_string(commands.size()) +
                       " subcommands byte-identical";
  for (const auto& f : failed) detail += "; differs or failed: " + f;
  return {failed.empty(), detail};
}

// --- 9 -----------------------------------------------------------------------

Outcome metric_correctness() {
  Rng rng(9);
  TargetField tf;
  tf.num_nodes = 80;
  tf.num_hours = 12;
  for (std::size_t i = 0; i < 80 * 12; ++i) tf.values.push_back(26.0 + 6.0 * rng.uniform() + 0.25 * (i % 12));
  for (std::size_t v = 0; v < 80; ++v) tf.valid_mask.push_back(v % 7 == 3 ? 0 : 1);
  PredictionBlock identity;
  identity.values = Matrix(80, 12);
  identity.values.values = tf.values;
  const MetricsReport id = compute_metrics(identity, tf);
  const bool identity_ok = id.overall.mae == 0.0 && id.overall.rmse == 0.0 && id.overall.r2 == 1.0;

  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t v = 0; v < 80; ++v) {
    if (!tf.valid_mask[v]) continue;
    for (std::size_t h = 0; h < 12; ++h, ++n) sum += tf.at(v, h);
  }
  PredictionBlock mean = identity;
  std::fill(mean.values.values.begin(), mean.values.values.end(), sum / static_cast<double>(n));
  const bool mean_ok = compute_metrics(mean, tf).overall.r2 == 0.0;

  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng noise(seed);
    PredictionBlock p = identity;
    for (double& x : p.values.values) x += 1.3 * noise.normal();
    const MetricsReport r = compute_metrics(p, tf);
    worst = std::max(worst, std::abs(*pool_hours(r.per_hour).r2 - *r.overall.r2));
  }
  return {identity_ok && mean_ok && worst <= 1e-9, std::string("identity ") + (identity_ok ? "exact" : "off") +
                                                       ", mean predictor " + (mean_ok ? "exact" : "off") +
                                                       ", pooled r2 deviation " + fmt(worst)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: ugk_acceptance <ugk-binary> [--only N[,N...]]\n";
    return 2;
  }
  const fs::path ugk_binary = fs::absolute(argv[1]);
  std::vector<int> only;
  if (argc >= 4 && std::string(argv[2]) == "--only") {
    for (auto f : split_fields(argv[3])) only.push_back(static_cast<int>(parse_int(f)));
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"geometric oracle equivalence", oracle_equivalence},
      {"closed-form spot checks", spot_checks},
      {"gradient correctness", gradients},
      {"exact ablation identities", ablation_identities},
      {"permutation equivariance", equivariance},
      {"synthetic end-to-end", synthetic_end_to_end},
      {"FLOPs sanity", flops_sanity},
      {"determinism", [&] { return determinism(ugk_binary); }},
      {"metric correctness", metric_correctness},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first << "): " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
