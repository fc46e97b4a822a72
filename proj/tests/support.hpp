#pragma once

#include <filesystem>
#include <string>

#include "ugk/graph.hpp"
#include "ugk/rng.hpp"
#include "ugk/scene.hpp"

namespace ugk::test {

inline GridScene uniform_scene(std::size_t rows, std::size_t cols, Category cat = Category::Pavement,
                               double height = 0.0) {
  GridScene s;
  s.rows = rows;
  s.cols = cols;
  s.block_id = "test";
  s.latitude_deg = 1.35;
  s.longitude_deg = 103.8;
  s.utc_offset_h = 8.0;
  CellRecord cell;
  cell.category = cat;
  if (cat == Category::Building) cell.building_height_m = height;
  if (cat == Category::Tree) cell.canopy_height_m = height;
  s.cells.assign(rows * cols, cell);
  return s;
}

inline void set_cell(GridScene& s, std::size_t r, std::size_t c, Category cat, double height = 0.0) {
  CellRecord& cell = s.cells[s.index(r, c)];
  cell = CellRecord{};
  cell.category = cat;
  if (cat == Category::Building) cell.building_height_m = height;
  if (cat == Category::Tree) cell.canopy_height_m = height;
}

/// Mixed scene: random ground materials with a sprinkling of buildings and trees.
inline GridScene random_test_scene(std::size_t rows, std::size_t cols, Rng& rng) {
  GridScene s = uniform_scene(rows, cols);
  for (std::size_t i = 0; i < s.num_nodes(); ++i) {
    const double u = rng.uniform();
    if (u < 0.18) {
      set_cell(s, s.row_of(i), s.col_of(i), Category::Building, rng.uniform(3.0, 60.0));
    } else if (u < 0.30) {
      set_cell(s, s.row_of(i), s.col_of(i), Category::Tree, rng.uniform(2.0, 20.0));
    } else {
      set_cell(s, s.row_of(i), s.col_of(i), static_cast<Category>(1 + rng.below(5)));
    }
  }
  return s;
}

inline WeatherRecord weather_row(double ghi, double wind_speed, double wind_dir, int clock = 12) {
  WeatherRecord w;
  w.clock_hour = clock;
  w.ghi_wh_m2 = ghi;
  w.wind_speed_ms = wind_speed;
  w.wind_dir_deg = wind_dir;
  w.air_temp_c = 30.0;
  w.rel_humidity_pct = 70.0;
  return w;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ugk_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline EdgeList sorted(EdgeList e) {
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace ugk::test
