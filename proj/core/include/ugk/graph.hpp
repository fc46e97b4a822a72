#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ugk/scene.hpp"
#include "ugk/solar.hpp"

namespace ugk {

/// The five typed relations. Integer values are the serialized relation ids.
enum class RelationKind : std::uint8_t {
  Shadow = 0,
  VegetationActivity = 1,
  ConvectiveDiffusion = 2,
  SemanticSimilarity = 3,
  InternalContiguity = 4,
};

inline constexpr std::size_t kNumRelations = 5;
inline constexpr std::array<RelationKind, kNumRelations> kAllRelations = {
    RelationKind::Shadow, RelationKind::VegetationActivity, RelationKind::ConvectiveDiffusion,
    RelationKind::SemanticSimilarity, RelationKind::InternalContiguity};

inline constexpr std::size_t relation_index(RelationKind r) { return static_cast<std::size_t>(r); }

/// Set of relations, indexed by relation id.
using RelationMask = std::bitset<kNumRelations>;

std::string_view relation_name(RelationKind r);
/// Accepts the relation names above (case-insensitive) or their integer ids.
RelationKind parse_relation(std::string_view text);
/// Comma-separated list of relation names; an empty string is the empty set.
RelationMask parse_relation_list(std::string_view text);
std::string format_relation_list(const RelationMask& mask);

struct Edge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;

  auto operator<=>(const Edge&) const = default;
};

using EdgeList = std::vector<Edge>;

/// [distance (grids), dx east (grids), dy north (grids), cos of angle to the
/// downwind direction, relation id].
using EdgeAttributes = std::array<double, 5>;

/// One timestep's typed edge sets over a fixed node set. Edge lists are
/// shared, so the static relations of a sequence are one object.
struct HeteroGraph {
  std::size_t num_nodes = 0;
  int hour_index = 0;
  std::array<std::shared_ptr<const EdgeList>, kNumRelations> edges;
  /// Either empty or aligned with `edges` (per relation).
  std::array<std::vector<double>, kNumRelations> weights;
  std::array<std::vector<EdgeAttributes>, kNumRelations> attributes;

  const EdgeList& relation(RelationKind r) const;
  std::size_t num_edges() const;
  std::size_t num_edges(RelationKind r) const { return relation(r).size(); }
  bool has_weights() const;
  bool has_attributes() const;

  /// No self-loops, no duplicates, indices in range, lists sorted.
  void validate() const;
};

struct GraphConfig {
  std::size_t k_similarity = 8;
  double eps = 1e-6;
  double r_max_building_grids = 15.0;
  double r_max_tree_grids = 5.0;
  double shadow_width_deg = 25.0;
  double r_base_vegetation_grids = 5.0;
  double lambda_wind = 0.3;
  double v_max_ms = 8.0;
  double r_local_grids = 3.0;
  bool weights_enabled = false;
  bool attributes_enabled = false;
  double w_base = 1.0;
  double lambda_sim = 0.005;
  double lambda_phys = 0.01;
  double beta_shadow = 1.2;
  double gamma_tree = 0.2;

  void validate() const;
  /// Stable text form of every field; the basis of hash().
  std::string canonical() const;
  std::uint64_t hash() const;
};

// --- edge rules --------------------------------------------------------------

/// Squared Euclidean distance between two feature rows.
double feature_distance_sq(std::span<const double> a, std::span<const double> b);

/// R_base * clip(ghi / 1000, 0.5, 1.2), in grids.
double vegetation_radius(double ghi_wh_m2, const GraphConfig& cfg);

/// 1 + lambda_wind * cos_dtheta * (v / v_max), with v clamped to [0, v_max].
double wind_alpha(double cos_dtheta, double wind_speed_ms, const GraphConfig& cfg);

/// Downwind compass bearing (wind_dir + 180) as a unit vector (east, north).
std::pair<double, double> downwind_unit(const WeatherRecord& weather);

/// Directed edges from each node to its k nearest rows of `features`
/// (Euclidean, ties by smaller node index). Uses a k-d tree over distinct rows.
EdgeList build_similarity_edges(const Matrix& features, std::size_t k);

/// Moore edges out of every internal node (non-border, all four von Neumann
/// neighbours share its category).
EdgeList build_internal_edges(const GridScene& scene);

EdgeList build_shadow_edges(const GridScene& scene, const SunState& sun, const GraphConfig& cfg);
EdgeList build_vegetation_edges(const GridScene& scene, const WeatherRecord& weather, const GraphConfig& cfg);
EdgeList build_wind_edges(const GridScene& scene, const WeatherRecord& weather, const GraphConfig& cfg);

/// O(N^2) literal evaluation of one relation's rule over every ordered pair.
/// Test oracle for the indexed builders.
EdgeList bruteforce_edges(const GridScene& scene, const Matrix& features, const WeatherRecord& weather,
                          const SunState& sun, const GraphConfig& cfg, RelationKind relation);

// --- graph assembly ------------------------------------------------------------

struct StaticRelations {
  std::shared_ptr<const EdgeList> similarity;
  std::shared_ptr<const EdgeList> internal;
};

StaticRelations build_static_relations(const GridScene& scene, const Matrix& features, const GraphConfig& cfg);

HeteroGraph build_graph(const GridScene& scene, const Matrix& features, const WeatherRecord& weather,
                        const SunState& sun, const GraphConfig& cfg);

/// Same, reusing precomputed static relations.
HeteroGraph build_graph(const GridScene& scene, const StaticRelations& statics, const WeatherRecord& weather,
                        const SunState& sun, const GraphConfig& cfg);

/// One graph per weather row; static relations are built once and shared.
/// Timesteps are built on up to `threads` workers and returned in hour order.
std::vector<HeteroGraph> build_graph_sequence(const GridScene& scene, const Matrix& features,
                                              std::span<const WeatherRecord> weather, const GraphConfig& cfg,
                                              std::size_t threads = 1);

/// Per-relation weights w = w_base / (1 + lambda * d / d_grid) * beta * gamma.
std::array<std::vector<double>, kNumRelations> compute_edge_weights(const HeteroGraph& graph,
                                                                     const GridScene& scene,
                                                                     const WeatherRecord& weather,
                                                                     const GraphConfig& cfg);

std::array<std::vector<EdgeAttributes>, kNumRelations> compute_edge_attributes(const HeteroGraph& graph,
                                                                               const GridScene& scene,
                                                                               const WeatherRecord& weather);

// --- ablation transforms ---------------------------------------------------------

/// Copy of `graph` with the relations in `dropped` emptied.
HeteroGraph drop_relations(const HeteroGraph& graph, const RelationMask& dropped);

/// Every edge relabelled into relation 0 with duplicates removed; weights are
/// discarded (the merged relation is unweighted).
HeteroGraph merge_relations(const HeteroGraph& graph);

// --- cache files -------------------------------------------------------------

/// Header: "# ugk-graph num_nodes=N hour=H config=HASH"; then one line per
/// edge "relation_id,src,dst[,weight[,a1,a2,a3,a4,a5]]" sorted by
/// (relation, src, dst).
std::string serialize_graph(const HeteroGraph& graph, std::string_view config_hash);

struct GraphFile {
  HeteroGraph graph;
  std::string config_hash;
};

GraphFile parse_graph(std::string_view text);
void write_graph_file(const std::filesystem::path& path, const HeteroGraph& graph, std::string_view config_hash);
GraphFile read_graph_file(const std::filesystem::path& path);

}  // namespace ugk
