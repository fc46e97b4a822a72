#include "ugk/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "ugk/csv.hpp"
#include "ugk/dataset.hpp"
#include "ugk/geometry.hpp"

namespace ugk {

void SyntheticSpec::validate() const {
  if (rows < 10 || cols < 10) throw Error(ErrorCode::InvalidConfig, "synthetic scenes need rows, cols >= 10");
  if (blocks == 0 || hours == 0) throw Error(ErrorCode::InvalidConfig, "synthetic blocks and hours must be positive");
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidConfig, "sigma must be non-negative");
  if (!(cell_size_m > 0.0)) throw Error(ErrorCode::InvalidConfig, "cell size must be positive");
  graph.validate();
}

std::string synthetic_block_id(std::size_t index) {
  std::string s = std::to_string(index);
  while (s.size() < 3) s = "0" + s;
  return "b" + s;
}

namespace {

std::size_t offsets_within(double radius) {
  const long reach = static_cast<long>(std::floor(radius));
  std::size_t count = 0;
  for (long dy = -reach; dy <= reach; ++dy) {
    for (long dx = -reach; dx <= reach; ++dx) {
      if ((dx != 0 || dy != 0) && grid_distance(static_cast<double>(dx), static_cast<double>(dy)) <= radius) ++count;
    }
  }
  return count;
}

std::size_t stretched_offsets(const WeatherRecord& weather, const GraphConfig& cfg) {
  const auto downwind = downwind_unit(weather);
  const long reach = static_cast<long>(std::floor(cfg.r_local_grids * (1.0 + cfg.lambda_wind))) + 1;
  std::size_t count = 0;
  for (long dy = -reach; dy <= reach; ++dy) {
    for (long dx = -reach; dx <= reach; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const double fx = static_cast<double>(dx), fy = static_cast<double>(dy);
      const double alpha = wind_alpha(cos_between(fx, fy, downwind), weather.wind_speed_ms, cfg);
      if (grid_distance(fx, fy) / alpha <= cfg.r_local_grids) ++count;
    }
  }
  return count;
}

}  // namespace

SurrogateTerms surrogate_terms(const GridScene& scene, const WeatherRecord& weather, const GraphConfig& cfg) {
  const std::size_t n = scene.num_nodes();
  SurrogateTerms terms;
  terms.shadowed.assign(n, 0.0);
  terms.veg_exposure.assign(n, 0.0);
  terms.wind_exposure.assign(n, 0.0);

  for (const Edge& e : build_shadow_edges(scene, sun_for(weather, scene), cfg)) terms.shadowed[e.dst] = 1.0;

  const double veg_norm = static_cast<double>(offsets_within(vegetation_radius(weather.ghi_wh_m2, cfg)));
  for (const Edge& e : build_vegetation_edges(scene, weather, cfg)) terms.veg_exposure[e.dst] += 1.0 / veg_norm;

  const double v_norm = std::clamp(weather.wind_speed_ms, 0.0, cfg.v_max_ms) / cfg.v_max_ms;
  const double wind_norm = static_cast<double>(stretched_offsets(weather, cfg));
  for (const Edge& e : build_wind_edges(scene, weather, cfg)) terms.wind_exposure[e.dst] += v_norm / wind_norm;
  return terms;
}

double surrogate_value(const SyntheticSpec& spec, const WeatherRecord& weather, const SurrogateTerms& terms,
                       std::size_t node) {
  return spec.a * weather.air_temp_c + spec.b * weather.ghi_wh_m2 * (1.0 - terms.shadowed[node]) -
         spec.c * terms.veg_exposure[node] + spec.d * terms.wind_exposure[node];
}

GridScene random_scene(const SyntheticSpec& spec, const std::string& block_id) {
  Rng rng = Rng::named(spec.seed, "synthetic/scene/" + block_id);
  GridScene scene;
  scene.rows = spec.rows;
  scene.cols = spec.cols;
  scene.cell_size_m = spec.cell_size_m;
  scene.block_id = block_id;
  scene.latitude_deg = spec.latitude_deg;
  scene.longitude_deg = spec.longitude_deg;
  scene.utc_offset_h = spec.utc_offset_h;
  scene.day_of_year = spec.day_of_year;
  scene.cells.assign(spec.rows * spec.cols, CellRecord{});

  auto in_rect = [&](auto&& fn, std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) {
    for (std::size_t r = r0; r < std::min(spec.rows, r0 + h); ++r) {
      for (std::size_t c = c0; c < std::min(spec.cols, c0 + w); ++c) fn(scene.cells[scene.index(r, c)]);
    }
  };

  // Ground material patches over a pavement base.
  const std::size_t patches = 2 + rng.below(4);
  for (std::size_t p = 0; p < patches; ++p) {
    const auto material = static_cast<Category>(2 + rng.below(4));
    in_rect([&](CellRecord& cell) { cell.category = material; }, rng.below(spec.rows), rng.below(spec.cols),
            2 + rng.below(6), 2 + rng.below(6));
  }

  const std::size_t buildings = 2 + rng.below(4);
  for (std::size_t k = 0; k < buildings; ++k) {
    const double height = 6.0 + 3.0 * static_cast<double>(rng.below(12));
    in_rect(
        [&](CellRecord& cell) {
          cell.category = Category::Building;
          cell.building_height_m = height;
          cell.canopy_height_m = 0.0;
        },
        rng.below(spec.rows - 2), rng.below(spec.cols - 2), 2 + rng.below(4), 2 + rng.below(4));
  }

  const std::size_t trees = 6 + rng.below(10);
  for (std::size_t k = 0; k < trees; ++k) {
    const std::size_t r = rng.below(spec.rows), c = rng.below(spec.cols);
    CellRecord& cell = scene.cells[scene.index(r, c)];
    if (cell.category == Category::Building) continue;
    cell.category = Category::Tree;
    cell.canopy_height_m = 4.0 + static_cast<double>(rng.below(12));
  }
  scene.validate();
  return scene;
}

std::vector<WeatherRecord> random_weather(const SyntheticSpec& spec, const std::string& block_id) {
  Rng rng = Rng::named(spec.seed, "synthetic/weather/" + block_id);
  const double peak_ghi = rng.uniform(650.0, 1000.0);
  const double base_temp = rng.uniform(26.0, 29.0);
  const double temp_swing = rng.uniform(3.0, 6.0);
  const double base_wind = rng.uniform(0.5, 6.0);
  double wind_dir = rng.uniform(0.0, 360.0);
  std::vector<WeatherRecord> out;
  for (std::size_t t = 0; t < spec.hours; ++t) {
    WeatherRecord w;
    w.hour_index = static_cast<int>(t);
    w.clock_hour = (spec.start_clock + static_cast<int>(t)) % 24;
    const double day_phase = (static_cast<double>(w.clock_hour) - 7.0) / 12.5;
    const double s = day_phase > 0.0 && day_phase < 1.0 ? std::sin(std::numbers::pi * day_phase) : 0.0;
    w.ghi_wh_m2 = std::round(peak_ghi * s * rng.uniform(0.85, 1.0) * 10.0) / 10.0;
    w.wind_speed_ms = std::round(std::max(0.0, base_wind + rng.uniform(-1.0, 1.0)) * 100.0) / 100.0;
    wind_dir = wrap360(wind_dir + rng.uniform(-25.0, 25.0));
    w.wind_dir_deg = std::round(wind_dir * 10.0) / 10.0;
    if (w.wind_dir_deg >= 360.0) w.wind_dir_deg = 0.0;
    w.air_temp_c = std::round((base_temp + temp_swing * s + rng.uniform(-0.3, 0.3)) * 100.0) / 100.0;
    w.rel_humidity_pct = std::round((85.0 - 25.0 * s + rng.uniform(-3.0, 3.0)) * 10.0) / 10.0;
    out.push_back(w);
  }
  return out;
}

TargetField synthesize_target(const SyntheticSpec& spec, const GridScene& scene,
                              const std::vector<WeatherRecord>& weather, const std::string& block_id) {
  Rng noise = Rng::named(spec.seed, "synthetic/noise/" + block_id);
  TargetField tf;
  tf.variable = TargetVariable::UTCI;
  tf.num_nodes = scene.num_nodes();
  tf.num_hours = weather.size();
  tf.values.assign(tf.num_nodes * tf.num_hours, 0.0);
  tf.valid_mask = valid_node_mask(scene);
  for (std::size_t t = 0; t < weather.size(); ++t) {
    const SurrogateTerms terms = surrogate_terms(scene, weather[t], spec.graph);
    for (std::size_t v = 0; v < tf.num_nodes; ++v) {
      const double eps = spec.sigma > 0.0 ? spec.sigma * noise.normal() : 0.0;
      tf.values[v * tf.num_hours + t] =
          tf.valid_mask[v] ? surrogate_value(spec, weather[t], terms, v) + eps : spec.a * weather[t].air_temp_c;
    }
  }
  return tf;
}

void generate_synthetic(const std::filesystem::path& out, const SyntheticSpec& spec, std::string_view config_hash) {
  spec.validate();
  for (std::size_t b = 0; b < spec.blocks; ++b) {
    const std::string id = synthetic_block_id(b);
    const auto dir = block_directory(out, id);
    const GridScene scene = random_scene(spec, id);
    const auto weather = random_weather(spec, id);
    save_scene(scene, dir);
    save_weather(weather, dir / "weather.csv");
    save_target(synthesize_target(spec, scene, weather, id), scene, dir);
  }
  nlohmann::ordered_json meta;
  if (!config_hash.empty()) meta["config_hash"] = std::string(config_hash);
  meta["rule"] = "a*air_temp + b*ghi*(1-shadowed) - c*veg_exposure + d*wind_exposure + N(0,sigma)";
  meta["target"] = "UTCI";
  meta["a"] = spec.a;
  meta["b"] = spec.b;
  meta["c"] = spec.c;
  meta["d"] = spec.d;
  meta["sigma"] = spec.sigma;
  meta["seed"] = spec.seed;
  meta["blocks"] = spec.blocks;
  meta["rows"] = spec.rows;
  meta["cols"] = spec.cols;
  meta["hours"] = spec.hours;
  meta["start_clock"] = spec.start_clock;
  meta["graph_config_hash"] = hash_hex(spec.graph.hash());
  write_text_file(out / "synthetic.json", meta.dump(2) + "\n");
}

}  // namespace ugk
