// O(N^2) reference builders. No spatial index, no pruning: every ordered pair
// (i, j), i != j, is tested against the rule exactly as stated. Only the
// grid-geometry primitives are shared with the indexed builders.

#include <algorithm>
#include <cmath>

#include "ugk/geometry.hpp"
#include "ugk/graph.hpp"

namespace ugk {
namespace {

struct Offset {
  double dx;
  double dy;
};

Offset offset(const GridScene& scene, std::size_t i, std::size_t j) {
  return {static_cast<double>(scene.col_of(j)) - static_cast<double>(scene.col_of(i)),
          static_cast<double>(scene.row_of(i)) - static_cast<double>(scene.row_of(j))};
}

bool is_internal(const GridScene& scene, std::size_t i) {
  const std::size_t r = scene.row_of(i), c = scene.col_of(i);
  if (r == 0 || c == 0 || r + 1 == scene.rows || c + 1 == scene.cols) return false;
  const Category cat = scene.cells[i].category;
  return scene.cell(r - 1, c).category == cat && scene.cell(r + 1, c).category == cat &&
         scene.cell(r, c - 1).category == cat && scene.cell(r, c + 1).category == cat;
}

bool moore_adjacent(const GridScene& scene, std::size_t i, std::size_t j) {
  const long dr = static_cast<long>(scene.row_of(i)) - static_cast<long>(scene.row_of(j));
  const long dc = static_cast<long>(scene.col_of(i)) - static_cast<long>(scene.col_of(j));
  return std::max(std::abs(dr), std::abs(dc)) == 1;
}

}  // namespace

EdgeList bruteforce_edges(const GridScene& scene, const Matrix& features, const WeatherRecord& weather,
                          const SunState& sun, const GraphConfig& cfg, RelationKind relation) {
  const std::size_t n = scene.num_nodes();
  EdgeList edges;

  if (relation == RelationKind::SemanticSimilarity) {
    if (features.rows <= cfg.k_similarity) throw Error(ErrorCode::TooFewNodes, "oracle k-NN");
    const std::size_t d = features.cols;
    std::vector<std::pair<double, std::uint32_t>> all;
    for (std::size_t i = 0; i < features.rows; ++i) {
      all.clear();
      std::span<const double> a(features.values.data() + i * d, d);
      for (std::size_t j = 0; j < features.rows; ++j) {
        if (j == i) continue;
        std::span<const double> b(features.values.data() + j * d, d);
        all.emplace_back(feature_distance_sq(a, b), static_cast<std::uint32_t>(j));
      }
      std::sort(all.begin(), all.end());
      std::vector<std::uint32_t> picked;
      for (std::size_t c = 0; c < cfg.k_similarity; ++c) picked.push_back(all[c].second);
      std::sort(picked.begin(), picked.end());
      for (auto j : picked) edges.push_back({static_cast<std::uint32_t>(i), j});
    }
    return edges;
  }

  const double shadow_dir = sun.is_up() ? std::fmod(sun.azimuth_deg + 180.0, 360.0) : 0.0;
  const double veg_radius = cfg.r_base_vegetation_grids * std::clamp(weather.ghi_wh_m2 / 1000.0, 0.5, 1.2);
  const auto downwind = unit_from_bearing(weather.wind_dir_deg + 180.0);
  const double v_norm = std::clamp(weather.wind_speed_ms, 0.0, cfg.v_max_ms) / cfg.v_max_ms;

  for (std::size_t i = 0; i < n; ++i) {
    const CellRecord& src = scene.cells[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const CellRecord& dst = scene.cells[j];
      const Offset o = offset(scene, i, j);
      const double d = grid_distance(o.dx, o.dy);
      bool linked = false;
      switch (relation) {
        case RelationKind::InternalContiguity:
          linked = is_internal(scene, i) && moore_adjacent(scene, i, j);
          break;
        case RelationKind::Shadow: {
          if (!sun.is_up() || dst.category == Category::Building) break;
          double h = 0.0, cap = 0.0;
          if (src.category == Category::Building) {
            h = src.building_height_m;
            cap = cfg.r_max_building_grids;
          } else if (src.category == Category::Tree) {
            h = src.canopy_height_m;
            cap = cfg.r_max_tree_grids;
          } else {
            break;
          }
          double length = 0.0;
          if (sun.elevation_deg < 90.0) {
            length = std::min(h / (tan_deg(sun.elevation_deg) * scene.cell_size_m), cap);
          }
          const double deviation = wrap180(bearing_deg(o.dx, o.dy) - shadow_dir);
          linked = d > 0.0 && d <= length && std::abs(deviation) <= cfg.shadow_width_deg / 2.0;
          break;
        }
        case RelationKind::VegetationActivity:
          linked = src.category == Category::Tree && d <= veg_radius;
          break;
        case RelationKind::ConvectiveDiffusion: {
          if (src.category == Category::Building || dst.category == Category::Building) break;
          const double alpha = 1.0 + cfg.lambda_wind * cos_between(o.dx, o.dy, downwind) * v_norm;
          linked = d / alpha <= cfg.r_local_grids;
          break;
        }
        case RelationKind::SemanticSimilarity:
          break;
      }
      if (linked) edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  return edges;
}

}  // namespace ugk
