#include "ugk/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ugk/csv.hpp"
#include "ugk/geometry.hpp"
#include "ugk/parallel.hpp"
#include "ugk/rng.hpp"

namespace ugk {
namespace {

const EdgeList& empty_edges() {
  static const EdgeList kEmpty;
  return kEmpty;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view relation_name(RelationKind r) {
  switch (r) {
    case RelationKind::Shadow: return "Shadow";
    case RelationKind::VegetationActivity: return "VegetationActivity";
    case RelationKind::ConvectiveDiffusion: return "ConvectiveDiffusion";
    case RelationKind::SemanticSimilarity: return "SemanticSimilarity";
    case RelationKind::InternalContiguity: return "InternalContiguity";
  }
  return "?";
}

RelationKind parse_relation(std::string_view text) {
  const std::string key = lower(trim(text));
  for (RelationKind r : kAllRelations) {
    if (lower(relation_name(r)) == key || std::to_string(relation_index(r)) == key) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown relation '" + std::string(text) + "'");
}

RelationMask parse_relation_list(std::string_view text) {
  RelationMask mask;
  if (trim(text).empty()) return mask;
  for (auto field : split_fields(text)) {
    if (trim(field).empty()) continue;
    mask.set(relation_index(parse_relation(field)));
  }
  return mask;
}

std::string format_relation_list(const RelationMask& mask) {
  std::string out;
  for (RelationKind r : kAllRelations) {
    if (!mask.test(relation_index(r))) continue;
    if (!out.empty()) out += ',';
    out += relation_name(r);
  }
  return out;
}

const EdgeList& HeteroGraph::relation(RelationKind r) const {
  const auto& p = edges[relation_index(r)];
  return p ? *p : empty_edges();
}

std::size_t HeteroGraph::num_edges() const {
  std::size_t n = 0;
  for (RelationKind r : kAllRelations) n += relation(r).size();
  return n;
}

bool HeteroGraph::has_weights() const {
  return std::any_of(weights.begin(), weights.end(), [](const auto& w) { return !w.empty(); });
}

bool HeteroGraph::has_attributes() const {
  return std::any_of(attributes.begin(), attributes.end(), [](const auto& a) { return !a.empty(); });
}

void HeteroGraph::validate() const {
  for (RelationKind r : kAllRelations) {
    const EdgeList& list = relation(r);
    const std::size_t ri = relation_index(r);
    for (std::size_t e = 0; e < list.size(); ++e) {
      const Edge& edge = list[e];
      if (edge.src >= num_nodes || edge.dst >= num_nodes) {
        throw Error(ErrorCode::InvalidArgument, std::string(relation_name(r)) + ": node index out of range");
      }
      if (edge.src == edge.dst) throw Error(ErrorCode::InvalidArgument, std::string(relation_name(r)) + ": self-loop");
      if (e > 0 && !(list[e - 1] < edge)) {
        throw Error(ErrorCode::InvalidArgument, std::string(relation_name(r)) + ": edges unsorted or duplicated");
      }
    }
    if (!weights[ri].empty() && weights[ri].size() != list.size()) {
      throw Error(ErrorCode::ShapeMismatch, "weights not aligned with edges");
    }
    if (!attributes[ri].empty() && attributes[ri].size() != list.size()) {
      throw Error(ErrorCode::ShapeMismatch, "attributes not aligned with edges");
    }
  }
}

void GraphConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, "graph: " + what); };
  if (k_similarity == 0) fail("k_similarity must be positive");
  if (!(eps > 0.0)) fail("eps must be positive");
  if (!(r_max_building_grids > 0.0 && r_max_tree_grids > 0.0 && r_base_vegetation_grids > 0.0 &&
        r_local_grids > 0.0)) {
    fail("all radii must be positive");
  }
  if (!(shadow_width_deg > 0.0 && shadow_width_deg <= 90.0)) fail("shadow width must lie in (0, 90]");
  if (!(v_max_ms > 0.0)) fail("v_max must be positive");
  if (!(lambda_wind >= 0.0 && lambda_wind < 1.0)) fail("lambda_wind must lie in [0, 1)");
}

std::string GraphConfig::canonical() const {
  std::string s;
  auto add = [&](std::string_view key, const std::string& value) {
    s += key;
    s += '=';
    s += value;
    s += ';';
  };
  add("k_similarity", std::to_string(k_similarity));
  add("eps", format_double(eps));
  add("r_max_building_grids", format_double(r_max_building_grids));
  add("r_max_tree_grids", format_double(r_max_tree_grids));
  add("shadow_width_deg", format_double(shadow_width_deg));
  add("r_base_vegetation_grids", format_double(r_base_vegetation_grids));
  add("lambda_wind", format_double(lambda_wind));
  add("v_max_ms", format_double(v_max_ms));
  add("r_local_grids", format_double(r_local_grids));
  add("weights_enabled", weights_enabled ? "1" : "0");
  add("attributes_enabled", attributes_enabled ? "1" : "0");
  add("w_base", format_double(w_base));
  add("lambda_sim", format_double(lambda_sim));
  add("lambda_phys", format_double(lambda_phys));
  add("beta_shadow", format_double(beta_shadow));
  add("gamma_tree", format_double(gamma_tree));
  return s;
}

std::uint64_t GraphConfig::hash() const { return fnv1a64(canonical()); }

double feature_distance_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double vegetation_radius(double ghi_wh_m2, const GraphConfig& cfg) {
  return cfg.r_base_vegetation_grids * std::clamp(ghi_wh_m2 / 1000.0, 0.5, 1.2);
}

double wind_alpha(double cos_dtheta, double wind_speed_ms, const GraphConfig& cfg) {
  const double v = std::clamp(wind_speed_ms, 0.0, cfg.v_max_ms);
  return 1.0 + cfg.lambda_wind * cos_dtheta * (v / cfg.v_max_ms);
}

std::pair<double, double> downwind_unit(const WeatherRecord& weather) {
  return unit_from_bearing(weather.wind_dir_deg + 180.0);
}

StaticRelations build_static_relations(const GridScene& scene, const Matrix& features, const GraphConfig& cfg) {
  StaticRelations s;
  s.similarity = std::make_shared<const EdgeList>(build_similarity_edges(features, cfg.k_similarity));
  s.internal = std::make_shared<const EdgeList>(build_internal_edges(scene));
  return s;
}

HeteroGraph build_graph(const GridScene& scene, const StaticRelations& statics, const WeatherRecord& weather,
                        const SunState& sun, const GraphConfig& cfg) {
  HeteroGraph g;
  g.num_nodes = scene.num_nodes();
  g.hour_index = weather.hour_index;
  g.edges[relation_index(RelationKind::Shadow)] = std::make_shared<const EdgeList>(build_shadow_edges(scene, sun, cfg));
  g.edges[relation_index(RelationKind::VegetationActivity)] =
      std::make_shared<const EdgeList>(build_vegetation_edges(scene, weather, cfg));
  g.edges[relation_index(RelationKind::ConvectiveDiffusion)] =
      std::make_shared<const EdgeList>(build_wind_edges(scene, weather, cfg));
  g.edges[relation_index(RelationKind::SemanticSimilarity)] = statics.similarity;
  g.edges[relation_index(RelationKind::InternalContiguity)] = statics.internal;
  if (cfg.weights_enabled) g.weights = compute_edge_weights(g, scene, weather, cfg);
  if (cfg.attributes_enabled) g.attributes = compute_edge_attributes(g, scene, weather);
  return g;
}

HeteroGraph build_graph(const GridScene& scene, const Matrix& features, const WeatherRecord& weather,
                        const SunState& sun, const GraphConfig& cfg) {
  return build_graph(scene, build_static_relations(scene, features, cfg), weather, sun, cfg);
}

std::vector<HeteroGraph> build_graph_sequence(const GridScene& scene, const Matrix& features,
                                              std::span<const WeatherRecord> weather, const GraphConfig& cfg,
                                              std::size_t threads) {
  if (weather.empty()) throw Error(ErrorCode::LengthMismatch, "weather sequence is empty");
  cfg.validate();
  const StaticRelations statics = build_static_relations(scene, features, cfg);
  std::vector<HeteroGraph> out(weather.size());
  parallel_for(weather.size(), threads, [&](std::size_t t) {
    out[t] = build_graph(scene, statics, weather[t], sun_for(weather[t], scene), cfg);
  });
  return out;
}

std::array<std::vector<double>, kNumRelations> compute_edge_weights(const HeteroGraph& graph,
                                                                     const GridScene& scene,
                                                                     const WeatherRecord& /*weather*/,
                                                                     const GraphConfig& cfg) {
  double tree_max = 0.0;
  for (const auto& c : scene.cells) tree_max = std::max(tree_max, c.canopy_height_m);

  std::array<std::vector<double>, kNumRelations> out;
  for (RelationKind r : kAllRelations) {
    const EdgeList& list = graph.relation(r);
    auto& w = out[relation_index(r)];
    w.reserve(list.size());
    const double lambda = r == RelationKind::SemanticSimilarity ? cfg.lambda_sim : cfg.lambda_phys;
    // Every shadow edge present in an hour's graph is an active shadow.
    const double beta = r == RelationKind::Shadow ? cfg.beta_shadow : 1.0;
    for (const Edge& e : list) {
      const double dx = static_cast<double>(scene.col_of(e.dst)) - static_cast<double>(scene.col_of(e.src));
      const double dy = static_cast<double>(scene.row_of(e.src)) - static_cast<double>(scene.row_of(e.dst));
      const double d_grids = grid_distance(dx, dy);
      double gamma = 1.0;
      if (r == RelationKind::VegetationActivity && tree_max > 0.0) {
        gamma = 1.0 + cfg.gamma_tree * (scene.cells[e.src].canopy_height_m / tree_max);
      }
      w.push_back(cfg.w_base / (1.0 + lambda * d_grids) * beta * gamma);
    }
  }
  return out;
}

std::array<std::vector<EdgeAttributes>, kNumRelations> compute_edge_attributes(const HeteroGraph& graph,
                                                                               const GridScene& scene,
                                                                               const WeatherRecord& weather) {
  const auto downwind = downwind_unit(weather);
  std::array<std::vector<EdgeAttributes>, kNumRelations> out;
  for (RelationKind r : kAllRelations) {
    const EdgeList& list = graph.relation(r);
    auto& attrs = out[relation_index(r)];
    attrs.reserve(list.size());
    for (const Edge& e : list) {
      const double dx = static_cast<double>(scene.col_of(e.dst)) - static_cast<double>(scene.col_of(e.src));
      const double dy = static_cast<double>(scene.row_of(e.src)) - static_cast<double>(scene.row_of(e.dst));
      attrs.push_back({grid_distance(dx, dy), dx, dy, cos_between(dx, dy, downwind),
                       static_cast<double>(relation_index(r))});
    }
  }
  return out;
}

HeteroGraph drop_relations(const HeteroGraph& graph, const RelationMask& dropped) {
  HeteroGraph out = graph;
  for (RelationKind r : kAllRelations) {
    const std::size_t ri = relation_index(r);
    if (!dropped.test(ri)) continue;
    out.edges[ri] = std::make_shared<const EdgeList>();
    out.weights[ri].clear();
    out.attributes[ri].clear();
  }
  return out;
}

HeteroGraph merge_relations(const HeteroGraph& graph) {
  EdgeList merged;
  merged.reserve(graph.num_edges());
  for (RelationKind r : kAllRelations) {
    const EdgeList& list = graph.relation(r);
    merged.insert(merged.end(), list.begin(), list.end());
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  HeteroGraph out;
  out.num_nodes = graph.num_nodes;
  out.hour_index = graph.hour_index;
  out.edges[0] = std::make_shared<const EdgeList>(std::move(merged));
  for (std::size_t ri = 1; ri < kNumRelations; ++ri) out.edges[ri] = std::make_shared<const EdgeList>();
  return out;
}

}  // namespace ugk
