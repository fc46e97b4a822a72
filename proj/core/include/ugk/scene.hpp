#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ugk/common.hpp"

namespace ugk {

/// Land-cover category of one grid cell. Ground materials keep the class ids
/// 1..5 used by the source land-cover table; `class.csv` stores these integer
/// values directly.
enum class Category : std::uint8_t {
  Building = 0,
  Pavement = 1,
  TerreBattue = 2,
  LoamySoil = 3,
  UnsealedSoil = 4,
  DeepWater = 5,
  Tree = 6,
};

inline constexpr std::size_t kNumGroundMaterials = 5;

inline bool is_ground_material(Category c) {
  return c != Category::Building && c != Category::Tree;
}

std::string_view category_name(Category c);

struct CellRecord {
  Category category = Category::Pavement;
  double building_height_m = 0.0;
  double canopy_height_m = 0.0;

  bool operator==(const CellRecord&) const = default;
};

/// Rasterized urban block. Row 0 is the northernmost row, column 0 the
/// westernmost column; node index = row * cols + col.
struct GridScene {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double cell_size_m = 4.0;
  std::vector<CellRecord> cells;
  std::string block_id;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  // Only consulted when weather rows carry no solar angles.
  double utc_offset_h = 0.0;
  int day_of_year = 172;

  std::size_t num_nodes() const { return rows * cols; }
  std::size_t index(std::size_t r, std::size_t c) const { return r * cols + c; }
  std::size_t row_of(std::size_t node) const { return node / cols; }
  std::size_t col_of(std::size_t node) const { return node % cols; }
  const CellRecord& cell(std::size_t r, std::size_t c) const { return cells[index(r, c)]; }

  /// Throws Error on any invariant violation.
  void validate() const;

  bool operator==(const GridScene&) const = default;
};

struct WeatherRecord {
  int hour_index = 0;
  int clock_hour = 0;
  double ghi_wh_m2 = 0.0;
  double wind_speed_ms = 0.0;
  /// Meteorological convention: direction the wind blows from, clockwise from north.
  double wind_dir_deg = 0.0;
  double air_temp_c = 0.0;
  double rel_humidity_pct = 0.0;
  std::optional<double> solar_elev_deg;
  std::optional<double> solar_azim_deg;

  void validate() const;
  bool operator==(const WeatherRecord&) const = default;
};

enum class TargetVariable { UTCI, PET, AT, MRT, WS, RH };

std::string_view target_name(TargetVariable v);
TargetVariable parse_target(std::string_view name);

struct TargetField {
  TargetVariable variable = TargetVariable::UTCI;
  std::size_t num_nodes = 0;
  std::size_t num_hours = 0;
  /// Node-major: values[node * num_hours + hour].
  std::vector<double> values;
  /// False exactly at Building nodes.
  std::vector<std::uint8_t> valid_mask;

  double at(std::size_t node, std::size_t hour) const { return values[node * num_hours + hour]; }
};

inline constexpr std::size_t kStaticFeatureCount = 8;

struct StaticFeatureMatrix {
  Matrix values;  // |V| x 8, normalized to [0, 1]
  Matrix raw;     // |V| x 8, before normalization
  std::array<std::string, kStaticFeatureCount> feature_names;
};

// --- I/O -------------------------------------------------------------------

GridScene load_scene(const std::filesystem::path& dir);
void save_scene(const GridScene& scene, const std::filesystem::path& dir);

std::vector<WeatherRecord> load_weather(const std::filesystem::path& file);
void save_weather(const std::vector<WeatherRecord>& weather, const std::filesystem::path& file);

/// Reads targets/<VAR>/hHH.csv for hours [0, num_hours).
TargetField load_target(const std::filesystem::path& block_dir, TargetVariable variable,
                        const GridScene& scene, std::size_t num_hours);
void save_target(const TargetField& target, const GridScene& scene,
                 const std::filesystem::path& block_dir);

std::vector<std::uint8_t> valid_node_mask(const GridScene& scene);

// --- features --------------------------------------------------------------

/// Column-wise scaling to [0, 1]: (x - lo) / max(hi - lo, eps) with
/// lo = min(0, column min). For the non-negative static features this is
/// max-scaling, which leaves constant one-hot columns at 1 instead of
/// collapsing them to 0.
Matrix normalize_columns(const Matrix& raw, double eps = 1e-6);

/// [building_height, canopy_height, one-hot of the 5 ground materials, is_built].
StaticFeatureMatrix compute_static_features(const GridScene& scene, double eps = 1e-6);

/// Appends the mean of each node's existing Moore neighbours, giving |V| x 2d.
Matrix augment_neighbor_features(const GridScene& scene, const Matrix& features);

// --- splits ----------------------------------------------------------------

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

/// Per-block 70/20/10 split: sizes round(0.7n), round(0.2n), remainder.
DatasetSplit split_dataset(std::vector<std::string> block_ids, std::uint64_t seed);

}  // namespace ugk
