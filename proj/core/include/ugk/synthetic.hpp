#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ugk/graph.hpp"
#include "ugk/rng.hpp"

namespace ugk {

/// Desk-scale dataset whose targets follow a closed-form rule driven by the
/// same geometric predicates as the graph relations:
///   y = a * air_temp + b * ghi * (1 - shadowed) - c * veg_exposure + d * wind_exposure + N(0, sigma)
struct SyntheticSpec {
  std::size_t blocks = 16;
  std::size_t rows = 20;
  std::size_t cols = 20;
  std::size_t hours = 12;
  int start_clock = 8;
  std::uint64_t seed = 0;
  double a = 1.0;
  double b = 0.003;
  double c = 0.5;
  double d = 0.2;
  double sigma = 0.1;
  double cell_size_m = 4.0;
  double latitude_deg = 1.35;
  double longitude_deg = 103.8;
  double utc_offset_h = 8.0;
  int day_of_year = 172;
  GraphConfig graph;

  void validate() const;
};

/// Per-node driver terms of one hour.
struct SurrogateTerms {
  /// 1 when the node receives at least one Shadow edge.
  std::vector<double> shadowed;
  /// Vegetation in-degree over the number of lattice offsets within the
  /// activity radius.
  std::vector<double> veg_exposure;
  /// (v / v_max) times wind in-degree over the size of the full stretched
  /// neighbourhood for this hour's wind.
  std::vector<double> wind_exposure;
};

SurrogateTerms surrogate_terms(const GridScene& scene, const WeatherRecord& weather, const GraphConfig& cfg);

/// Noise-free value of the rule for one node.
double surrogate_value(const SyntheticSpec& spec, const WeatherRecord& weather, const SurrogateTerms& terms,
                       std::size_t node);

GridScene random_scene(const SyntheticSpec& spec, const std::string& block_id);
std::vector<WeatherRecord> random_weather(const SyntheticSpec& spec, const std::string& block_id);

/// UTCI target for every hour; building nodes carry the air-temperature term
/// only (they are masked anyway).
TargetField synthesize_target(const SyntheticSpec& spec, const GridScene& scene,
                              const std::vector<WeatherRecord>& weather, const std::string& block_id);

std::string synthetic_block_id(std::size_t index);

/// Writes <out>/blocks/<id>/... for every block plus <out>/synthetic.json with
/// the rule coefficients (and `config_hash` when given).
void generate_synthetic(const std::filesystem::path& out, const SyntheticSpec& spec,
                        std::string_view config_hash = {});

}  // namespace ugk
