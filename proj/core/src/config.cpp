#include "ugk/config.hpp"

#include <json.hpp>

#include "ugk/csv.hpp"
#include "ugk/parallel.hpp"
#include "ugk/rng.hpp"

namespace ugk {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw Error(ErrorCode::InvalidConfig, name_ + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.push_back(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidConfig, name_ + "." + key + ": " + e.what());
    }
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw Error(ErrorCode::InvalidConfig, "unknown key " + name_ + "." + key);
      }
    }
  }

 private:
  const json& j_;
  std::string name_;
  std::vector<std::string> seen_;
};

void read_graph(const json& j, GraphConfig& g) {
  Section s(j, "graph");
  s.get("k_similarity", g.k_similarity);
  s.get("eps", g.eps);
  s.get("r_max_building_grids", g.r_max_building_grids);
  s.get("r_max_tree_grids", g.r_max_tree_grids);
  s.get("shadow_width_deg", g.shadow_width_deg);
  s.get("r_base_vegetation_grids", g.r_base_vegetation_grids);
  s.get("lambda_wind", g.lambda_wind);
  s.get("v_max_ms", g.v_max_ms);
  s.get("r_local_grids", g.r_local_grids);
  s.get("weights_enabled", g.weights_enabled);
  s.get("attributes_enabled", g.attributes_enabled);
  s.get("w_base", g.w_base);
  s.get("lambda_sim", g.lambda_sim);
  s.get("lambda_phys", g.lambda_phys);
  s.get("beta_shadow", g.beta_shadow);
  s.get("gamma_tree", g.gamma_tree);
  s.finish();
}

void read_model(const json& j, ModelConfig& m) {
  Section s(j, "model");
  s.get("node_dim", m.node_dim);
  s.get("hidden_dim", m.hidden_dim);
  s.get("rgcn_layers", m.rgcn_layers);
  s.get("lstm_layers", m.lstm_layers);
  std::string head = std::string(head_mode_name(m.head_mode));
  s.get("head_mode", head);
  m.head_mode = parse_head_mode(head);
  s.get("t_pred", m.t_pred);
  s.get("use_edge_weights", m.use_edge_weights);
  s.get("lr", m.lr);
  s.get("batch_size", m.batch_size);
  s.get("weight_decay", m.weight_decay);
  s.get("plateau_factor", m.plateau_factor);
  s.get("plateau_patience", m.plateau_patience);
  s.get("early_stop_patience", m.early_stop_patience);
  s.get("max_epochs", m.max_epochs);
  std::string mask = format_relation_list(m.ablations.edge_mask);
  s.get("edge_mask", mask);
  m.ablations.edge_mask = parse_relation_list(mask);
  s.get("static_graph", m.ablations.static_graph);
  s.get("homogeneous", m.ablations.homogeneous);
  s.get("no_warmup", m.ablations.no_warmup);
  s.get("single_hour", m.ablations.single_hour);
  s.finish();
}

void read_synthetic(const json& j, SyntheticSpec& sp) {
  Section s(j, "synthetic");
  s.get("blocks", sp.blocks);
  s.get("rows", sp.rows);
  s.get("cols", sp.cols);
  s.get("hours", sp.hours);
  s.get("start_clock", sp.start_clock);
  s.get("a", sp.a);
  s.get("b", sp.b);
  s.get("c", sp.c);
  s.get("d", sp.d);
  s.get("sigma", sp.sigma);
  s.get("cell_size_m", sp.cell_size_m);
  s.get("latitude_deg", sp.latitude_deg);
  s.get("longitude_deg", sp.longitude_deg);
  s.get("utc_offset_h", sp.utc_offset_h);
  s.get("day_of_year", sp.day_of_year);
  s.finish();
}

}  // namespace

void RunConfig::finalize() {
  model.seed = seed;
  synthetic.seed = seed;
  synthetic.graph = graph;
  graph.validate();
  model.validate();
  synthetic.validate();
}

std::string RunConfig::hash() const {
  const std::string text = "target=" + std::string(target_name(target)) + ";seed=" + std::to_string(seed) +
                           "|graph:" + graph.canonical() + "|model:" + model.canonical();
  return hash_hex(fnv1a64(text));
}

std::size_t RunConfig::resolved_threads() const { return threads == 0 ? default_threads() : threads; }

RunConfig parse_run_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  Section top(j, "config");
  std::string data_dir = cfg.data_dir.string(), out_dir = cfg.out_dir.string();
  std::string target = std::string(target_name(cfg.target));
  top.get("data_dir", data_dir);
  top.get("out_dir", out_dir);
  top.get("target", target);
  top.get("seed", cfg.seed);
  top.get("threads", cfg.threads);
  json graph = json::object(), model = json::object(), synthetic = json::object();
  top.get("graph", graph);
  top.get("model", model);
  top.get("synthetic", synthetic);
  top.finish();
  cfg.data_dir = data_dir;
  cfg.out_dir = out_dir;
  cfg.target = parse_target(target);
  read_graph(graph, cfg.graph);
  read_model(model, cfg.model);
  read_synthetic(synthetic, cfg.synthetic);
  cfg.finalize();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_text_file(path)); }

std::string run_config_to_json(const RunConfig& cfg) {
  ordered_json j;
  j["data_dir"] = cfg.data_dir.string();
  j["out_dir"] = cfg.out_dir.string();
  j["target"] = std::string(target_name(cfg.target));
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  const GraphConfig& g = cfg.graph;
  j["graph"] = {{"k_similarity", g.k_similarity},
                {"eps", g.eps},
                {"r_max_building_grids", g.r_max_building_grids},
                {"r_max_tree_grids", g.r_max_tree_grids},
                {"shadow_width_deg", g.shadow_width_deg},
                {"r_base_vegetation_grids", g.r_base_vegetation_grids},
                {"lambda_wind", g.lambda_wind},
                {"v_max_ms", g.v_max_ms},
                {"r_local_grids", g.r_local_grids},
                {"weights_enabled", g.weights_enabled},
                {"attributes_enabled", g.attributes_enabled},
                {"w_base", g.w_base},
                {"lambda_sim", g.lambda_sim},
                {"lambda_phys", g.lambda_phys},
                {"beta_shadow", g.beta_shadow},
                {"gamma_tree", g.gamma_tree}};
  const ModelConfig& m = cfg.model;
  j["model"] = {{"node_dim", m.node_dim},
                {"hidden_dim", m.hidden_dim},
                {"rgcn_layers", m.rgcn_layers},
                {"lstm_layers", m.lstm_layers},
                {"head_mode", std::string(head_mode_name(m.head_mode))},
                {"t_pred", m.t_pred},
                {"use_edge_weights", m.use_edge_weights},
                {"lr", m.lr},
                {"batch_size", m.batch_size},
                {"weight_decay", m.weight_decay},
                {"plateau_factor", m.plateau_factor},
                {"plateau_patience", m.plateau_patience},
                {"early_stop_patience", m.early_stop_patience},
                {"max_epochs", m.max_epochs},
                {"edge_mask", format_relation_list(m.ablations.edge_mask)},
                {"static_graph", m.ablations.static_graph},
                {"homogeneous", m.ablations.homogeneous},
                {"no_warmup", m.ablations.no_warmup},
                {"single_hour", m.ablations.single_hour}};
  const SyntheticSpec& s = cfg.synthetic;
  j["synthetic"] = {{"blocks", s.blocks},
                    {"rows", s.rows},
                    {"cols", s.cols},
                    {"hours", s.hours},
                    {"start_clock", s.start_clock},
                    {"a", s.a},
                    {"b", s.b},
                    {"c", s.c},
                    {"d", s.d},
                    {"sigma", s.sigma},
                    {"cell_size_m", s.cell_size_m},
                    {"latitude_deg", s.latitude_deg},
                    {"longitude_deg", s.longitude_deg},
                    {"utc_offset_h", s.utc_offset_h},
                    {"day_of_year", s.day_of_year}};
  return j.dump(2) + "\n";
}

}  // namespace ugk
