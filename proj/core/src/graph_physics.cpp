// Grid-indexed builders for the internal, shadow, vegetation and wind
// relations. Each scans only the bounding box a rule can reach; the predicate
// evaluated on each candidate is the same one the brute-force oracle applies
// to every pair.

#include <algorithm>
#include <cmath>

#include "ugk/geometry.hpp"
#include "ugk/graph.hpp"

namespace ugk {
namespace {

// Visits in-bounds cells of the (2R+1)^2 box around (r, c) in row-major
// order, skipping the centre. fn(j, dx, dy) with dx east, dy north.
template <class Fn>
void for_each_in_box(const GridScene& scene, std::size_t r, std::size_t c, long radius, Fn&& fn) {
  const long rows = static_cast<long>(scene.rows);
  const long cols = static_cast<long>(scene.cols);
  const long r0 = static_cast<long>(r), c0 = static_cast<long>(c);
  for (long nr = std::max(0L, r0 - radius); nr <= std::min(rows - 1, r0 + radius); ++nr) {
    for (long nc = std::max(0L, c0 - radius); nc <= std::min(cols - 1, c0 + radius); ++nc) {
      if (nr == r0 && nc == c0) continue;
      const std::size_t j = scene.index(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc));
      fn(j, static_cast<double>(nc - c0), static_cast<double>(r0 - nr));
    }
  }
}

long box_radius(double reach) { return static_cast<long>(std::floor(reach)); }

}  // namespace

EdgeList build_internal_edges(const GridScene& scene) {
  EdgeList edges;
  if (scene.rows < 3 || scene.cols < 3) return edges;
  for (std::size_t r = 1; r + 1 < scene.rows; ++r) {
    for (std::size_t c = 1; c + 1 < scene.cols; ++c) {
      const Category cat = scene.cell(r, c).category;
      if (scene.cell(r - 1, c).category != cat || scene.cell(r + 1, c).category != cat ||
          scene.cell(r, c - 1).category != cat || scene.cell(r, c + 1).category != cat) {
        continue;
      }
      const auto src = static_cast<std::uint32_t>(scene.index(r, c));
      for_each_in_box(scene, r, c, 1, [&](std::size_t j, double, double) {
        edges.push_back({src, static_cast<std::uint32_t>(j)});
      });
    }
  }
  return edges;
}

EdgeList build_shadow_edges(const GridScene& scene, const SunState& sun, const GraphConfig& cfg) {
  EdgeList edges;
  if (!sun.is_up()) return edges;
  const double direction = shadow_azimuth(sun);
  const double half_width = cfg.shadow_width_deg / 2.0;
  for (std::size_t i = 0; i < scene.num_nodes(); ++i) {
    const CellRecord& src = scene.cells[i];
    double length = 0.0;
    if (src.category == Category::Building) {
      length = shadow_length(src.building_height_m, sun, scene.cell_size_m, cfg.r_max_building_grids);
    } else if (src.category == Category::Tree) {
      length = shadow_length(src.canopy_height_m, sun, scene.cell_size_m, cfg.r_max_tree_grids);
    } else {
      continue;
    }
    if (!(length > 0.0)) continue;
    const auto s = static_cast<std::uint32_t>(i);
    for_each_in_box(scene, scene.row_of(i), scene.col_of(i), box_radius(length),
                    [&](std::size_t j, double dx, double dy) {
                      if (scene.cells[j].category == Category::Building) return;
                      if (grid_distance(dx, dy) > length) return;
                      if (std::abs(wrap180(bearing_deg(dx, dy) - direction)) > half_width) return;
                      edges.push_back({s, static_cast<std::uint32_t>(j)});
                    });
  }
  return edges;
}

EdgeList build_vegetation_edges(const GridScene& scene, const WeatherRecord& weather, const GraphConfig& cfg) {
  EdgeList edges;
  const double radius = vegetation_radius(weather.ghi_wh_m2, cfg);
  for (std::size_t i = 0; i < scene.num_nodes(); ++i) {
    if (scene.cells[i].category != Category::Tree) continue;
    const auto s = static_cast<std::uint32_t>(i);
    for_each_in_box(scene, scene.row_of(i), scene.col_of(i), box_radius(radius),
                    [&](std::size_t j, double dx, double dy) {
                      if (grid_distance(dx, dy) <= radius) edges.push_back({s, static_cast<std::uint32_t>(j)});
                    });
  }
  return edges;
}

EdgeList build_wind_edges(const GridScene& scene, const WeatherRecord& weather, const GraphConfig& cfg) {
  EdgeList edges;
  const auto downwind = downwind_unit(weather);
  const double alpha_max = wind_alpha(1.0, weather.wind_speed_ms, cfg);
  // d / alpha <= R implies d <= R * alpha_max up to rounding; one extra ring covers it.
  const long reach = box_radius(cfg.r_local_grids * alpha_max) + 1;
  for (std::size_t i = 0; i < scene.num_nodes(); ++i) {
    if (scene.cells[i].category == Category::Building) continue;
    const auto s = static_cast<std::uint32_t>(i);
    for_each_in_box(scene, scene.row_of(i), scene.col_of(i), reach, [&](std::size_t j, double dx, double dy) {
      if (scene.cells[j].category == Category::Building) return;
      const double alpha = wind_alpha(cos_between(dx, dy, downwind), weather.wind_speed_ms, cfg);
      if (grid_distance(dx, dy) / alpha <= cfg.r_local_grids) edges.push_back({s, static_cast<std::uint32_t>(j)});
    });
  }
  return edges;
}

}  // namespace ugk
