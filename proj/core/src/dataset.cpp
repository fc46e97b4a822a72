#include "ugk/dataset.hpp"

#include <algorithm>

#include "ugk/csv.hpp"
#include "ugk/rng.hpp"

namespace ugk {

namespace fs = std::filesystem;

fs::path block_directory(const fs::path& root, const std::string& block_id) { return root / "blocks" / block_id; }

std::vector<std::string> list_blocks(const fs::path& root) {
  const fs::path dir = root / "blocks";
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "no blocks directory under " + root.string());
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) ids.push_back(entry.path().filename().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

Matrix block_node_features(const GridScene& scene, double eps) {
  return augment_neighbor_features(scene, compute_static_features(scene, eps).values);
}

std::string graph_hash(const GridScene& scene, std::span<const WeatherRecord> weather, const GraphConfig& cfg) {
  std::string text = cfg.canonical();
  text += "|scene:" + std::to_string(scene.rows) + "x" + std::to_string(scene.cols) + "@" +
          format_double(scene.cell_size_m) + "," + format_double(scene.latitude_deg) + "," +
          format_double(scene.longitude_deg) + "," + format_double(scene.utc_offset_h) + "," +
          std::to_string(scene.day_of_year) + ":";
  for (const CellRecord& c : scene.cells) {
    text += std::to_string(static_cast<int>(c.category)) + "," + format_double(c.building_height_m) + "," +
            format_double(c.canopy_height_m) + ";";
  }
  text += "|weather:";
  for (const WeatherRecord& w : weather) {
    text += std::to_string(w.hour_index) + "," + std::to_string(w.clock_hour) + "," + format_double(w.ghi_wh_m2) +
            "," + format_double(w.wind_speed_ms) + "," + format_double(w.wind_dir_deg) + "," +
            (w.solar_elev_deg ? format_double(*w.solar_elev_deg) : "-") + "," +
            (w.solar_azim_deg ? format_double(*w.solar_azim_deg) : "-") + ";";
  }
  return hash_hex(fnv1a64(text));
}

std::string combine_hashes(std::span<const std::string> hashes) {
  std::string text;
  for (const auto& h : hashes) text += h + ";";
  return hash_hex(fnv1a64(text));
}

namespace {

std::string step_file_name(std::size_t t) {
  std::string s = std::to_string(t);
  if (s.size() < 2) s = "0" + s;
  return "t" + s + ".csv";
}

}  // namespace

GraphCacheResult load_or_build_graphs(const fs::path& cache_root, const GridScene& scene,
                                      const Matrix& static_features, std::span<const WeatherRecord> weather,
                                      const GraphConfig& cfg, std::size_t threads) {
  GraphCacheResult result;
  result.hash = graph_hash(scene, weather, cfg);
  result.directory = cache_root / result.hash;
  const std::string config_hash = hash_hex(cfg.hash());

  bool complete = fs::is_directory(result.directory);
  for (std::size_t t = 0; complete && t < weather.size(); ++t) {
    complete = fs::is_regular_file(result.directory / step_file_name(t));
  }
  if (complete) {
    for (std::size_t t = 0; t < weather.size(); ++t) {
      GraphFile file = read_graph_file(result.directory / step_file_name(t));
      if (file.config_hash != config_hash || file.graph.num_nodes != scene.num_nodes()) {
        throw Error(ErrorCode::ConfigHashMismatch, "stale graph cache at " + result.directory.string());
      }
      result.graphs.push_back(std::move(file.graph));
    }
    result.hit = true;
    return result;
  }

  result.graphs = build_graph_sequence(scene, static_features, weather, cfg, threads);
  fs::create_directories(result.directory);
  for (std::size_t t = 0; t < result.graphs.size(); ++t) {
    write_graph_file(result.directory / step_file_name(t), result.graphs[t], config_hash);
  }
  return result;
}

BlockData load_block(const fs::path& root, const std::string& block_id, const BlockLoadOptions& opts) {
  BlockData block;
  block.block_id = block_id;
  const fs::path dir = block_directory(root, block_id);
  block.scene = load_scene(dir);
  block.weather = load_weather(dir / "weather.csv");
  const Matrix static_features = compute_static_features(block.scene, opts.graph.eps).values;
  block.node_features = augment_neighbor_features(block.scene, static_features);
  if (opts.cache_root) {
    block.graphs = load_or_build_graphs(*opts.cache_root, block.scene, static_features, block.weather, opts.graph,
                                        opts.threads)
                       .graphs;
  } else {
    block.graphs = build_graph_sequence(block.scene, static_features, block.weather, opts.graph, opts.threads);
  }
  if (opts.load_targets) block.target = load_target(dir, opts.variable, block.scene, block.weather.size());
  return block;
}

}  // namespace ugk
