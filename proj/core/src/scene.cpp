#include "ugk/scene.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ugk/csv.hpp"
#include "ugk/rng.hpp"

namespace ugk {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<TargetVariable, 6> kAllTargets = {
    TargetVariable::UTCI, TargetVariable::PET, TargetVariable::AT,
    TargetVariable::MRT,  TargetVariable::WS,  TargetVariable::RH};

Matrix read_layer(const fs::path& dir, const char* name, const GridScene& scene) {
  const fs::path file = dir / name;
  if (!fs::exists(file)) throw Error(ErrorCode::MissingLayer, file.string());
  Matrix grid = read_grid_csv(file);
  if (grid.rows != scene.rows || grid.cols != scene.cols) {
    throw Error(ErrorCode::DimensionMismatch,
                file.string() + " is " + std::to_string(grid.rows) + "x" + std::to_string(grid.cols) +
                    ", meta says " + std::to_string(scene.rows) + "x" + std::to_string(scene.cols));
  }
  return grid;
}

std::string hour_file(std::size_t hour) {
  std::string s = std::to_string(hour);
  if (s.size() < 2) s.insert(0, 2 - s.size(), '0');
  return "h" + s + ".csv";
}

}  // namespace

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Building: return "Building";
    case Category::Pavement: return "Pavement";
    case Category::TerreBattue: return "TerreBattue";
    case Category::LoamySoil: return "LoamySoil";
    case Category::UnsealedSoil: return "UnsealedSoil";
    case Category::DeepWater: return "DeepWater";
    case Category::Tree: return "Tree";
  }
  return "?";
}

std::string_view target_name(TargetVariable v) {
  switch (v) {
    case TargetVariable::UTCI: return "UTCI";
    case TargetVariable::PET: return "PET";
    case TargetVariable::AT: return "AT";
    case TargetVariable::MRT: return "MRT";
    case TargetVariable::WS: return "WS";
    case TargetVariable::RH: return "RH";
  }
  return "?";
}

TargetVariable parse_target(std::string_view name) {
  for (auto v : kAllTargets) {
    if (target_name(v) == name) return v;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown target variable '" + std::string(name) + "'");
}

void GridScene::validate() const {
  if (rows < 2 || cols < 2) throw Error(ErrorCode::InvalidScene, "scene must be at least 2x2");
  if (cells.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "cell count does not match rows*cols");
  }
  if (!(cell_size_m > 0.0)) throw Error(ErrorCode::InvalidScene, "cell_size_m must be positive");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CellRecord& c = cells[i];
    if (static_cast<unsigned>(c.category) > static_cast<unsigned>(Category::Tree)) {
      throw Error(ErrorCode::UnknownCategory, "node " + std::to_string(i));
    }
    if (c.building_height_m < 0.0 || c.canopy_height_m < 0.0) {
      throw Error(ErrorCode::NegativeHeight, "node " + std::to_string(i));
    }
    const bool building = c.category == Category::Building;
    const bool tree = c.category == Category::Tree;
    if ((c.building_height_m > 0.0) != building || (c.canopy_height_m > 0.0) != tree) {
      throw Error(ErrorCode::InvalidScene,
                  "node " + std::to_string(i) + ": heights inconsistent with category " +
                      std::string(category_name(c.category)));
    }
  }
}

void WeatherRecord::validate() const {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::InvalidWeather, "hour " + std::to_string(hour_index) + ": " + what);
  };
  if (!(ghi_wh_m2 >= 0.0)) fail("ghi must be >= 0");
  if (!(wind_speed_ms >= 0.0)) fail("wind speed must be >= 0");
  if (!(wind_dir_deg >= 0.0 && wind_dir_deg < 360.0)) fail("wind direction outside [0, 360)");
  if (clock_hour < 0 || clock_hour > 23) fail("clock hour outside 0..23");
  if (solar_elev_deg && !(*solar_elev_deg >= -90.0 && *solar_elev_deg <= 90.0)) fail("solar elevation outside [-90, 90]");
  if (solar_azim_deg && !(*solar_azim_deg >= 0.0 && *solar_azim_deg < 360.0)) fail("solar azimuth outside [0, 360)");
  if (solar_elev_deg.has_value() != solar_azim_deg.has_value()) fail("solar columns must come in pairs");
}

GridScene load_scene(const fs::path& dir) {
  const fs::path meta_file = dir / "meta.json";
  if (!fs::exists(meta_file)) throw Error(ErrorCode::MissingLayer, meta_file.string());
  GridScene scene;
  try {
    const json meta = json::parse(read_text_file(meta_file));
    scene.rows = meta.at("rows").get<std::size_t>();
    scene.cols = meta.at("cols").get<std::size_t>();
    scene.cell_size_m = meta.value("cell_size_m", 4.0);
    scene.latitude_deg = meta.at("latitude").get<double>();
    scene.longitude_deg = meta.at("longitude").get<double>();
    scene.block_id = meta.at("block_id").get<std::string>();
    scene.utc_offset_h = meta.value("utc_offset_h", 0.0);
    scene.day_of_year = meta.value("day_of_year", 172);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, meta_file.string() + ": " + e.what());
  }
  if (scene.rows < 2 || scene.cols < 2) throw Error(ErrorCode::InvalidScene, "scene must be at least 2x2");

  const Matrix klass = read_layer(dir, "class.csv", scene);
  const Matrix building = read_layer(dir, "building_height.csv", scene);
  const Matrix tree = read_layer(dir, "tree_height.csv", scene);

  scene.cells.resize(scene.num_nodes());
  for (std::size_t i = 0; i < scene.cells.size(); ++i) {
    const double k = klass.values[i];
    if (k != std::floor(k) || k < 0.0 || k > static_cast<double>(Category::Tree)) {
      throw Error(ErrorCode::UnknownCategory,
                  "node " + std::to_string(i) + " has class " + format_double(k));
    }
    if (building.values[i] < 0.0 || tree.values[i] < 0.0) {
      throw Error(ErrorCode::NegativeHeight, "node " + std::to_string(i));
    }
    scene.cells[i] = CellRecord{static_cast<Category>(static_cast<int>(k)), building.values[i], tree.values[i]};
  }
  scene.validate();
  return scene;
}

void save_scene(const GridScene& scene, const fs::path& dir) {
  scene.validate();
  fs::create_directories(dir);
  json meta = {
      {"rows", scene.rows},
      {"cols", scene.cols},
      {"cell_size_m", scene.cell_size_m},
      {"latitude", scene.latitude_deg},
      {"longitude", scene.longitude_deg},
      {"block_id", scene.block_id},
      {"utc_offset_h", scene.utc_offset_h},
      {"day_of_year", scene.day_of_year},
  };
  write_text_file(dir / "meta.json", meta.dump(2) + "\n");

  Matrix klass(scene.rows, scene.cols), building(scene.rows, scene.cols), tree(scene.rows, scene.cols);
  for (std::size_t i = 0; i < scene.cells.size(); ++i) {
    klass.values[i] = static_cast<double>(scene.cells[i].category);
    building.values[i] = scene.cells[i].building_height_m;
    tree.values[i] = scene.cells[i].canopy_height_m;
  }
  write_grid_csv(dir / "class.csv", klass);
  write_grid_csv(dir / "building_height.csv", building);
  write_grid_csv(dir / "tree_height.csv", tree);
}

std::vector<WeatherRecord> load_weather(const fs::path& file) {
  if (!fs::exists(file)) throw Error(ErrorCode::MissingLayer, file.string());
  std::istringstream in(read_text_file(file));
  std::string line;
  std::vector<WeatherRecord> out;
  bool header_seen = false;
  bool with_solar = false;
  while (std::getline(in, line)) {
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split_fields(view);
    if (!header_seen) {
      static constexpr std::array<std::string_view, 7> kBase = {
          "hour", "clock", "ghi", "wind_speed", "wind_dir", "air_temp", "rh"};
      if (fields.size() != 7 && fields.size() != 9) {
        throw Error(ErrorCode::Format, file.string() + ": unexpected weather header");
      }
      for (std::size_t i = 0; i < kBase.size(); ++i) {
        if (trim(fields[i]) != kBase[i]) throw Error(ErrorCode::Format, file.string() + ": bad header column " + std::string(fields[i]));
      }
      with_solar = fields.size() == 9;
      if (with_solar && (trim(fields[7]) != "solar_elev" || trim(fields[8]) != "solar_azim")) {
        throw Error(ErrorCode::Format, file.string() + ": bad solar header columns");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != (with_solar ? 9u : 7u)) {
      throw Error(ErrorCode::Format, file.string() + ": wrong field count");
    }
    WeatherRecord w;
    w.hour_index = static_cast<int>(parse_int(fields[0]));
    w.clock_hour = static_cast<int>(parse_int(fields[1]));
    w.ghi_wh_m2 = parse_double(fields[2]);
    w.wind_speed_ms = parse_double(fields[3]);
    w.wind_dir_deg = parse_double(fields[4]);
    w.air_temp_c = parse_double(fields[5]);
    w.rel_humidity_pct = parse_double(fields[6]);
    if (with_solar) {
      w.solar_elev_deg = parse_double(fields[7]);
      w.solar_azim_deg = parse_double(fields[8]);
    }
    w.validate();
    out.push_back(w);
  }
  if (!header_seen) throw Error(ErrorCode::Format, file.string() + ": empty weather file");
  return out;
}

void save_weather(const std::vector<WeatherRecord>& weather, const fs::path& file) {
  const bool with_solar = !weather.empty() && weather.front().solar_elev_deg.has_value();
  std::string out = "hour,clock,ghi,wind_speed,wind_dir,air_temp,rh";
  if (with_solar) out += ",solar_elev,solar_azim";
  out += '\n';
  for (const auto& w : weather) {
    w.validate();
    if (w.solar_elev_deg.has_value() != with_solar) {
      throw Error(ErrorCode::InvalidWeather, "solar columns must be present on all rows or none");
    }
    out += std::to_string(w.hour_index) + ',' + std::to_string(w.clock_hour) + ',' +
           format_double(w.ghi_wh_m2) + ',' + format_double(w.wind_speed_ms) + ',' +
           format_double(w.wind_dir_deg) + ',' + format_double(w.air_temp_c) + ',' +
           format_double(w.rel_humidity_pct);
    if (with_solar) out += ',' + format_double(*w.solar_elev_deg) + ',' + format_double(*w.solar_azim_deg);
    out += '\n';
  }
  write_text_file(file, out);
}

std::vector<std::uint8_t> valid_node_mask(const GridScene& scene) {
  std::vector<std::uint8_t> mask(scene.num_nodes());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = scene.cells[i].category != Category::Building;
  return mask;
}

TargetField load_target(const fs::path& block_dir, TargetVariable variable, const GridScene& scene,
                        std::size_t num_hours) {
  TargetField t;
  t.variable = variable;
  t.num_nodes = scene.num_nodes();
  t.num_hours = num_hours;
  t.values.assign(t.num_nodes * num_hours, 0.0);
  t.valid_mask = valid_node_mask(scene);
  const fs::path var_dir = block_dir / "targets" / std::string(target_name(variable));
  for (std::size_t h = 0; h < num_hours; ++h) {
    const fs::path file = var_dir / hour_file(h);
    if (!fs::exists(file)) throw Error(ErrorCode::MissingLayer, file.string());
    const Matrix grid = read_grid_csv(file);
    if (grid.rows != scene.rows || grid.cols != scene.cols) {
      throw Error(ErrorCode::DimensionMismatch, file.string());
    }
    for (std::size_t v = 0; v < t.num_nodes; ++v) t.values[v * num_hours + h] = grid.values[v];
  }
  return t;
}

void save_target(const TargetField& target, const GridScene& scene, const fs::path& block_dir) {
  if (target.num_nodes != scene.num_nodes()) throw Error(ErrorCode::DimensionMismatch, "target/scene size");
  const fs::path var_dir = block_dir / "targets" / std::string(target_name(target.variable));
  for (std::size_t h = 0; h < target.num_hours; ++h) {
    Matrix grid(scene.rows, scene.cols);
    for (std::size_t v = 0; v < target.num_nodes; ++v) grid.values[v] = target.at(v, h);
    write_grid_csv(var_dir / hour_file(h), grid);
  }
}

Matrix normalize_columns(const Matrix& raw, double eps) {
  Matrix out(raw.rows, raw.cols);
  for (std::size_t c = 0; c < raw.cols; ++c) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t r = 0; r < raw.rows; ++r) {
      lo = std::min(lo, raw(r, c));
      hi = std::max(hi, raw(r, c));
    }
    const double denom = std::max(hi - lo, eps);
    for (std::size_t r = 0; r < raw.rows; ++r) out(r, c) = (raw(r, c) - lo) / denom;
  }
  return out;
}

StaticFeatureMatrix compute_static_features(const GridScene& scene, double eps) {
  StaticFeatureMatrix f;
  f.feature_names = {"building_height", "canopy_height", "mat_pavement",   "mat_terre_battue",
                     "mat_loamy_soil",  "mat_unsealed_soil", "mat_deep_water", "is_built"};
  f.raw = Matrix(scene.num_nodes(), kStaticFeatureCount);
  for (std::size_t i = 0; i < scene.num_nodes(); ++i) {
    const CellRecord& c = scene.cells[i];
    f.raw(i, 0) = c.building_height_m;
    f.raw(i, 1) = c.canopy_height_m;
    if (is_ground_material(c.category)) f.raw(i, 1 + static_cast<std::size_t>(c.category)) = 1.0;
    f.raw(i, 7) = c.category == Category::Building ? 1.0 : 0.0;
  }
  f.values = normalize_columns(f.raw, eps);
  return f;
}

Matrix augment_neighbor_features(const GridScene& scene, const Matrix& features) {
  if (features.rows != scene.num_nodes()) {
    throw Error(ErrorCode::ShapeMismatch, "feature rows do not match scene nodes");
  }
  const std::size_t d = features.cols;
  Matrix out(features.rows, 2 * d);
  const auto rows = static_cast<long>(scene.rows);
  const auto cols = static_cast<long>(scene.cols);
  std::vector<double> acc(d);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      const std::size_t i = scene.index(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      std::fill(acc.begin(), acc.end(), 0.0);
      int count = 0;
      for (long dr = -1; dr <= 1; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const long nr = r + dr, nc = c + dc;
          if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
          const std::size_t j = scene.index(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc));
          for (std::size_t k = 0; k < d; ++k) acc[k] += features(j, k);
          ++count;
        }
      }
      for (std::size_t k = 0; k < d; ++k) {
        out(i, k) = features(i, k);
        out(i, d + k) = acc[k] / count;
      }
    }
  }
  return out;
}

DatasetSplit split_dataset(std::vector<std::string> block_ids, std::uint64_t seed) {
  const std::size_t n = block_ids.size();
  if (n < 10) throw Error(ErrorCode::TooFewBlocks, "need at least 10 blocks, got " + std::to_string(n));
  std::sort(block_ids.begin(), block_ids.end());
  if (std::adjacent_find(block_ids.begin(), block_ids.end()) != block_ids.end()) {
    throw Error(ErrorCode::InvalidArgument, "duplicate block ids");
  }
  Rng rng = Rng::named(seed, "split");
  rng.shuffle(std::span<std::string>(block_ids));
  const auto n_train = static_cast<std::size_t>(std::llround(0.7 * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(n)));
  DatasetSplit split;
  split.train.assign(block_ids.begin(), block_ids.begin() + static_cast<long>(n_train));
  split.val.assign(block_ids.begin() + static_cast<long>(n_train),
                   block_ids.begin() + static_cast<long>(n_train + n_val));
  split.test.assign(block_ids.begin() + static_cast<long>(n_train + n_val), block_ids.end());
  for (auto* part : {&split.train, &split.val, &split.test}) std::sort(part->begin(), part->end());
  return split;
}

}  // namespace ugk
