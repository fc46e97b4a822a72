#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "support.hpp"
#include "ugk/csv.hpp"
#include "ugk/dataset.hpp"
#include "ugk/geometry.hpp"
#include "ugk/solar.hpp"

namespace ugk {
namespace {

using test::set_cell;
using test::sorted;
using test::uniform_scene;
using test::weather_row;

Matrix random_features(std::size_t n, std::size_t d, Rng& rng) {
  Matrix m(n, d);
  for (double& x : m.values) x = rng.uniform();
  return m;
}

std::vector<std::uint32_t> out_neighbours(const EdgeList& edges, std::uint32_t src) {
  std::vector<std::uint32_t> out;
  for (const Edge& e : edges) {
    if (e.src == src) out.push_back(e.dst);
  }
  return out;
}

// --- similarity ---------------------------------------------------------------

TEST(Similarity, OutDegreeIsK) {
  Rng rng(1);
  const GridScene scene = test::random_test_scene(20, 20, rng);
  const EdgeList edges = build_similarity_edges(compute_static_features(scene).values, 8);
  EXPECT_EQ(edges.size(), 3200u);
  std::vector<int> degree(400, 0);
  for (const Edge& e : edges) {
    ++degree[e.src];
    EXPECT_NE(e.src, e.dst);
  }
  for (int d : degree) EXPECT_EQ(d, 8);
}

TEST(Similarity, IdenticalRowsAreMutualNeighbours) {
  Rng rng(2);
  Matrix x = random_features(30, 5, rng);
  for (std::size_t c = 0; c < 5; ++c) x(17, c) = x(4, c);
  const EdgeList edges = build_similarity_edges(x, 3);
  const auto n4 = out_neighbours(edges, 4), n17 = out_neighbours(edges, 17);
  EXPECT_NE(std::find(n4.begin(), n4.end(), 17u), n4.end());
  EXPECT_NE(std::find(n17.begin(), n17.end(), 4u), n17.end());
}

TEST(Similarity, MatchesExhaustiveSort) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Matrix x = random_features(30, 4, rng);
    GraphConfig cfg;
    const GridScene scene = uniform_scene(5, 6);
    const EdgeList oracle = bruteforce_edges(scene, x, weather_row(500, 2, 90), {45, 180}, cfg,
                                             RelationKind::SemanticSimilarity);
    EXPECT_EQ(sorted(build_similarity_edges(x, 8)), sorted(oracle)) << "seed " << seed;
  }
}

TEST(Similarity, HeavyTiesStillMatchOracle) {
  // Many duplicate rows: the k-d tree works over distinct rows, ties go to
  // the smaller index.
  Rng rng(5);
  Matrix x(40, 3);
  for (std::size_t i = 0; i < 40; ++i) {
    const double v = static_cast<double>(rng.below(3));
    for (std::size_t c = 0; c < 3; ++c) x(i, c) = v;
  }
  const EdgeList oracle = bruteforce_edges(uniform_scene(5, 8), x, weather_row(500, 2, 90), {45, 180}, GraphConfig{},
                                           RelationKind::SemanticSimilarity);
  EXPECT_EQ(sorted(build_similarity_edges(x, 8)), sorted(oracle));
}

TEST(Similarity, TooFewNodes) {
  Rng rng(0);
  try {
    build_similarity_edges(random_features(8, 2, rng), 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewNodes);
  }
}

// --- internal contiguity ---------------------------------------------------------

TEST(Internal, AllBuildingFiveByFive) {
  const GridScene scene = uniform_scene(5, 5, Category::Building, 10.0);
  const EdgeList edges = build_internal_edges(scene);
  EXPECT_EQ(edges.size(), 72u);
  for (const Edge& e : edges) {
    const std::size_t r = scene.row_of(e.src), c = scene.col_of(e.src);
    EXPECT_TRUE(r >= 1 && r <= 3 && c >= 1 && c <= 3);
  }
}

TEST(Internal, IsolatedTreeHasNoEdges) {
  GridScene scene = uniform_scene(5, 5);
  set_cell(scene, 2, 2, Category::Tree, 8.0);
  EXPECT_TRUE(out_neighbours(build_internal_edges(scene), static_cast<std::uint32_t>(scene.index(2, 2))).empty());
}

TEST(Internal, BorderCellsNeverInternal) {
  Rng rng(9);
  const GridScene scene = test::random_test_scene(12, 9, rng);
  for (const Edge& e : build_internal_edges(uniform_scene(12, 9))) {
    const std::size_t r = scene.row_of(e.src), c = scene.col_of(e.src);
    EXPECT_FALSE(r == 0 || c == 0 || r == 11 || c == 8);
  }
}

// --- shadow --------------------------------------------------------------------

TEST(Shadow, NoSunNoShadow) {
  GridScene scene = uniform_scene(9, 9);
  set_cell(scene, 4, 4, Category::Building, 30.0);
  EXPECT_TRUE(build_shadow_edges(scene, {0.0, 90.0}, GraphConfig{}).empty());
  EXPECT_TRUE(build_shadow_edges(scene, {-10.0, 90.0}, GraphConfig{}).empty());
}

TEST(Shadow, SingleBuildingMatchesPolarScan) {
  GridScene scene = uniform_scene(21, 21);
  set_cell(scene, 10, 10, Category::Building, 12.0);
  const EdgeList edges = build_shadow_edges(scene, {45.0, 180.0}, GraphConfig{});

  // Shadow points north (bearing 0), length 3 grids, half-width 12.5 degrees.
  EdgeList expected;
  const auto src = static_cast<std::uint32_t>(scene.index(10, 10));
  for (std::size_t j = 0; j < scene.num_nodes(); ++j) {
    const double dx = static_cast<double>(scene.col_of(j)) - 10.0;
    const double dy = 10.0 - static_cast<double>(scene.row_of(j));
    const double d = std::hypot(dx, dy);
    if (d == 0.0 || d > 3.0) continue;
    const double bearing = std::atan2(dx, dy) * 180.0 / std::numbers::pi;
    if (std::abs(bearing) <= 12.5) expected.push_back({src, static_cast<std::uint32_t>(j)});
  }
  // Straight north only: 1, 2 and 3 cells up.
  ASSERT_EQ(expected.size(), 3u);
  EXPECT_EQ(sorted(edges), sorted(expected));
}

TEST(Shadow, TallTreeIsCappedAtFiveGrids) {
  GridScene scene = uniform_scene(25, 25);
  set_cell(scene, 12, 12, Category::Tree, 40.0);
  const EdgeList edges = build_shadow_edges(scene, {10.0, 90.0}, GraphConfig{});
  ASSERT_FALSE(edges.empty());
  for (const Edge& e : edges) {
    const double dx = static_cast<double>(scene.col_of(e.dst)) - 12.0;
    const double dy = 12.0 - static_cast<double>(scene.row_of(e.dst));
    EXPECT_LE(std::hypot(dx, dy), 5.0);
  }
  EXPECT_NEAR(40.0 / std::tan(10.0 * std::numbers::pi / 180.0), 226.9, 0.05);
}

TEST(Shadow, NeverLandsOnBuildings) {
  Rng rng(4);
  const GridScene scene = test::random_test_scene(20, 20, rng);
  for (const Edge& e : build_shadow_edges(scene, {20.0, 250.0}, GraphConfig{})) {
    EXPECT_NE(scene.cells[e.dst].category, Category::Building);
  }
}

TEST(Shadow, LowerSunReachesFurther) {
  GridScene scene = uniform_scene(21, 21);
  set_cell(scene, 10, 10, Category::Building, 20.0);
  std::size_t previous = 0;
  for (double elev : {80.0, 60.0, 40.0, 25.0, 15.0}) {
    const std::size_t n = build_shadow_edges(scene, {elev, 200.0}, GraphConfig{}).size();
    EXPECT_GE(n, previous) << elev;
    previous = n;
  }
}

// --- vegetation -------------------------------------------------------------------

TEST(Vegetation, RadiusClipsIrradiance) {
  const GraphConfig cfg;
  EXPECT_EQ(vegetation_radius(1000.0, cfg), 5.0);
  EXPECT_EQ(vegetation_radius(100.0, cfg), 2.5);
  EXPECT_EQ(vegetation_radius(2000.0, cfg), 6.0);
}

TEST(Vegetation, EdgesGrowWithIrradiance) {
  GridScene scene = uniform_scene(21, 21);
  set_cell(scene, 10, 10, Category::Tree, 8.0);
  const GraphConfig cfg;
  std::size_t previous = 0;
  for (double ghi : {100.0, 400.0, 700.0, 1000.0, 1500.0}) {
    const EdgeList edges = build_vegetation_edges(scene, weather_row(ghi, 1, 0), cfg);
    const double r = vegetation_radius(ghi, cfg);
    for (const Edge& e : edges) {
      const double dx = static_cast<double>(scene.col_of(e.dst)) - 10.0;
      const double dy = 10.0 - static_cast<double>(scene.row_of(e.dst));
      EXPECT_LE(std::hypot(dx, dy), r);
    }
    EXPECT_GE(edges.size(), previous);
    previous = edges.size();
  }
}

// --- wind ------------------------------------------------------------------------------

TEST(Wind, AlphaClosedForm) {
  const GraphConfig cfg;
  EXPECT_EQ(wind_alpha(1.0, 8.0, cfg), 1.3);
  EXPECT_EQ(wind_alpha(0.0, 8.0, cfg), 1.0);
  EXPECT_EQ(wind_alpha(0.0, 3.0, cfg), 1.0);
  EXPECT_EQ(wind_alpha(0.7, 0.0, cfg), 1.0);
  EXPECT_EQ(wind_alpha(1.0, 20.0, cfg), 1.3);  // speed clamped at v_max
}

TEST(Wind, CalmAirIsIsotropicDisc) {
  const GridScene scene = uniform_scene(15, 15);
  const EdgeList edges = build_wind_edges(scene, weather_row(500, 0.0, 123.0), GraphConfig{});
  EdgeList expected;
  for (std::size_t i = 0; i < scene.num_nodes(); ++i) {
    for (std::size_t j = 0; j < scene.num_nodes(); ++j) {
      if (i == j) continue;
      const double dx = static_cast<double>(scene.col_of(j)) - static_cast<double>(scene.col_of(i));
      const double dy = static_cast<double>(scene.row_of(i)) - static_cast<double>(scene.row_of(j));
      if (dx * dx + dy * dy <= 9.0) expected.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  EXPECT_EQ(sorted(edges), sorted(expected));
}

TEST(Wind, DownwindReachExceedsUpwind) {
  // Wind from the west blows toward the east.
  const GridScene scene = uniform_scene(15, 15);
  const auto src = static_cast<std::uint32_t>(scene.index(7, 7));
  const auto dst = out_neighbours(build_wind_edges(scene, weather_row(500, 8.0, 270.0), GraphConfig{}), src);
  auto has = [&](std::size_t r, std::size_t c) {
    return std::find(dst.begin(), dst.end(), static_cast<std::uint32_t>(scene.index(r, c))) != dst.end();
  };
  EXPECT_TRUE(has(7, 10));   // 3 cells east: inside 3.9
  EXPECT_FALSE(has(7, 4));   // 3 cells west: 3 > 3 * 0.7
  EXPECT_TRUE(has(7, 5));
}

TEST(Wind, MirrorSymmetry) {
  // Reflecting the wind direction across the north axis mirrors the edge set
  // east-west on a symmetric scene.
  const GridScene scene = uniform_scene(13, 13);
  const GraphConfig cfg;
  for (double dir : {10.0, 65.0, 135.0, 200.0}) {
    const EdgeList a = build_wind_edges(scene, weather_row(500, 6.0, dir), cfg);
    const EdgeList b = build_wind_edges(scene, weather_row(500, 6.0, 360.0 - dir), cfg);
    EdgeList mirrored;
    for (const Edge& e : a) {
      auto flip = [&](std::uint32_t v) {
        return static_cast<std::uint32_t>(scene.index(scene.row_of(v), scene.cols - 1 - scene.col_of(v)));
      };
      mirrored.push_back({flip(e.src), flip(e.dst)});
    }
    EXPECT_EQ(sorted(mirrored), sorted(b)) << dir;
  }
}

TEST(Wind, BuildingsAreExcluded) {
  GridScene scene = uniform_scene(9, 9);
  set_cell(scene, 4, 4, Category::Building, 10.0);
  const auto b = static_cast<std::uint32_t>(scene.index(4, 4));
  for (const Edge& e : build_wind_edges(scene, weather_row(500, 4, 0), GraphConfig{})) {
    EXPECT_NE(e.src, b);
    EXPECT_NE(e.dst, b);
  }
}

// --- oracle equivalence -----------------------------------------------------------

TEST(Oracle, IndexedBuildersMatchBruteForce) {
  const GraphConfig cfg;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Rng rng(seed);
    const GridScene scene = test::random_test_scene(16, 14, rng);
    const Matrix x = compute_static_features(scene).values;
    const WeatherRecord w = weather_row(rng.uniform(50, 1200), rng.uniform(0, 10), rng.uniform(0, 360));
    const SunState sun{rng.uniform(5, 85), rng.uniform(0, 360)};
    EXPECT_EQ(sorted(build_shadow_edges(scene, sun, cfg)),
              sorted(bruteforce_edges(scene, x, w, sun, cfg, RelationKind::Shadow)));
    EXPECT_EQ(sorted(build_vegetation_edges(scene, w, cfg)),
              sorted(bruteforce_edges(scene, x, w, sun, cfg, RelationKind::VegetationActivity)));
    EXPECT_EQ(sorted(build_wind_edges(scene, w, cfg)),
              sorted(bruteforce_edges(scene, x, w, sun, cfg, RelationKind::ConvectiveDiffusion)));
    EXPECT_EQ(sorted(build_internal_edges(scene)),
              sorted(bruteforce_edges(scene, x, w, sun, cfg, RelationKind::InternalContiguity)));
    EXPECT_EQ(sorted(build_similarity_edges(x, cfg.k_similarity)),
              sorted(bruteforce_edges(scene, x, w, sun, cfg, RelationKind::SemanticSimilarity)));
  }
}

TEST(Oracle, FullBlockSequenceMatchesBruteForce) {
  Rng rng(77);
  const GridScene scene = test::random_test_scene(50, 50, rng);
  const Matrix x = compute_static_features(scene).values;
  std::vector<WeatherRecord> weather;
  for (int h = 0; h < 12; ++h) weather.push_back(weather_row(100 + 70 * h, 0.5 * h, 30.0 * h, 8 + h));
  const GraphConfig cfg;
  const auto graphs = build_graph_sequence(scene, x, weather, cfg, 2);
  ASSERT_EQ(graphs.size(), 12u);
  // Dynamic relations at every third hour; statics once (they are shared).
  for (std::size_t t = 0; t < 12; t += 3) {
    const SunState sun = sun_for(weather[t], scene);
    for (RelationKind r : {RelationKind::Shadow, RelationKind::VegetationActivity, RelationKind::ConvectiveDiffusion}) {
      EXPECT_EQ(graphs[t].relation(r), sorted(bruteforce_edges(scene, x, weather[t], sun, cfg, r)))
          << relation_name(r) << " hour " << t;
    }
  }
  const SunState sun0 = sun_for(weather[0], scene);
  for (RelationKind r : {RelationKind::SemanticSimilarity, RelationKind::InternalContiguity}) {
    EXPECT_EQ(graphs[0].relation(r), sorted(bruteforce_edges(scene, x, weather[0], sun0, cfg, r)));
  }
}

// --- assembly ------------------------------------------------------------------------

TEST(Sequence, StaticRelationsAreShared) {
  Rng rng(8);
  const GridScene scene = test::random_test_scene(12, 12, rng);
  std::vector<WeatherRecord> weather;
  for (int h = 0; h < 12; ++h) weather.push_back(weather_row(200 + 50 * h, 2, 15.0 * h, 8 + h));
  const auto graphs = build_graph_sequence(scene, compute_static_features(scene).values, weather, GraphConfig{});
  for (const auto& g : graphs) {
    g.validate();
    EXPECT_EQ(g.edges[relation_index(RelationKind::SemanticSimilarity)],
              graphs[0].edges[relation_index(RelationKind::SemanticSimilarity)]);
    EXPECT_EQ(g.edges[relation_index(RelationKind::InternalContiguity)],
              graphs[0].edges[relation_index(RelationKind::InternalContiguity)]);
  }
}

TEST(Sequence, IdenticalWeatherGivesIdenticalDynamics) {
  Rng rng(8);
  const GridScene scene = test::random_test_scene(12, 12, rng);
  const std::vector<WeatherRecord> weather(3, weather_row(650, 3, 45, 11));
  const auto graphs = build_graph_sequence(scene, compute_static_features(scene).values, weather, GraphConfig{});
  for (RelationKind r : kAllRelations) {
    EXPECT_EQ(graphs[0].relation(r), graphs[2].relation(r));
  }
}

TEST(Sequence, ThreadCountDoesNotChangeResult) {
  Rng rng(10);
  const GridScene scene = test::random_test_scene(15, 15, rng);
  const Matrix x = compute_static_features(scene).values;
  std::vector<WeatherRecord> weather;
  for (int h = 0; h < 6; ++h) weather.push_back(weather_row(300 + 100 * h, h, 60.0 * h, 9 + h));
  const auto a = build_graph_sequence(scene, x, weather, GraphConfig{}, 1);
  const auto b = build_graph_sequence(scene, x, weather, GraphConfig{}, 4);
  for (std::size_t t = 0; t < a.size(); ++t) EXPECT_EQ(serialize_graph(a[t], "x"), serialize_graph(b[t], "x"));
}

// --- weights --------------------------------------------------------------------------

TEST(Weights, ClosedFormValues) {
  GridScene scene = uniform_scene(6, 6);
  set_cell(scene, 2, 2, Category::Tree, 12.0);
  set_cell(scene, 4, 4, Category::Tree, 6.0);
  HeteroGraph g;
  g.num_nodes = 36;
  for (auto& e : g.edges) e = std::make_shared<const EdgeList>();
  const auto node = [&](std::size_t r, std::size_t c) { return static_cast<std::uint32_t>(scene.index(r, c)); };
  g.edges[relation_index(RelationKind::SemanticSimilarity)] =
      std::make_shared<const EdgeList>(EdgeList{{node(0, 0), node(0, 1)}});
  g.edges[relation_index(RelationKind::Shadow)] = std::make_shared<const EdgeList>(EdgeList{{node(2, 2), node(0, 2)}});
  g.edges[relation_index(RelationKind::VegetationActivity)] =
      std::make_shared<const EdgeList>(EdgeList{{node(2, 2), node(2, 3)}});
  const auto w = compute_edge_weights(g, scene, weather_row(500, 1, 0), GraphConfig{});
  EXPECT_NEAR(w[relation_index(RelationKind::SemanticSimilarity)][0], 0.995025, 5e-7);
  EXPECT_NEAR(w[relation_index(RelationKind::Shadow)][0], 1.176471, 5e-7);
  EXPECT_NEAR(w[relation_index(RelationKind::VegetationActivity)][0], 1.188119, 5e-7);
}

// --- transforms and files ----------------------------------------------------------------

HeteroGraph sample_graph(std::uint64_t seed, bool weights) {
  Rng rng(seed);
  const GridScene scene = test::random_test_scene(10, 10, rng);
  GraphConfig cfg;
  cfg.weights_enabled = weights;
  return build_graph(scene, compute_static_features(scene).values, weather_row(800, 5, 100), {35, 120}, cfg);
}

TEST(Transforms, DropEmptiesOnlyChosenRelations) {
  const HeteroGraph g = sample_graph(1, false);
  RelationMask mask;
  mask.set(relation_index(RelationKind::Shadow));
  const HeteroGraph d = drop_relations(g, mask);
  EXPECT_TRUE(d.relation(RelationKind::Shadow).empty());
  for (RelationKind r : kAllRelations) {
    if (r != RelationKind::Shadow) EXPECT_EQ(d.relation(r), g.relation(r));
  }
}

TEST(Transforms, MergeIsUnionWithoutDuplicates) {
  const HeteroGraph g = sample_graph(2, false);
  std::set<Edge> all;
  for (RelationKind r : kAllRelations) all.insert(g.relation(r).begin(), g.relation(r).end());
  const HeteroGraph m = merge_relations(g);
  EXPECT_EQ(m.relation(RelationKind::Shadow), EdgeList(all.begin(), all.end()));
  for (std::size_t r = 1; r < kNumRelations; ++r) EXPECT_TRUE(m.relation(static_cast<RelationKind>(r)).empty());
}

TEST(GraphFile, RoundTrip) {
  for (bool weights : {false, true}) {
    const HeteroGraph g = sample_graph(3, weights);
    const std::string text = serialize_graph(g, "abc123");
    const GraphFile back = parse_graph(text);
    EXPECT_EQ(back.config_hash, "abc123");
    EXPECT_EQ(serialize_graph(back.graph, "abc123"), text);
  }
}

TEST(GraphFile, CorruptInputIsRejected) {
  EXPECT_THROW(parse_graph("no header\n0,1,2\n"), Error);
  EXPECT_THROW(parse_graph("# ugk-graph num_nodes=3 hour=0 config=x\n0,1,7\n"), Error);
}

TEST(GraphCache, SecondBuildIsAHitWithIdenticalFiles) {
  Rng rng(6);
  const GridScene scene = test::random_test_scene(10, 10, rng);
  const Matrix x = compute_static_features(scene).values;
  std::vector<WeatherRecord> weather;
  for (int h = 0; h < 4; ++h) weather.push_back(weather_row(300 + 100 * h, 2, 90, 9 + h));
  const auto root = test::scratch_dir("graph_cache");
  const auto first = load_or_build_graphs(root, scene, x, weather, GraphConfig{}, 1);
  EXPECT_FALSE(first.hit);
  const std::string before = read_text_file(first.directory / "t02.csv");
  const auto second = load_or_build_graphs(root, scene, x, weather, GraphConfig{}, 1);
  EXPECT_TRUE(second.hit);
  EXPECT_EQ(read_text_file(second.directory / "t02.csv"), before);
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_EQ(serialize_graph(first.graphs[t], "h"), serialize_graph(second.graphs[t], "h"));
  }
}

TEST(GraphConfigHash, SensitiveToEveryField) {
  const GraphConfig base;
  GraphConfig other = base;
  other.r_local_grids = 3.5;
  EXPECT_NE(base.hash(), other.hash());
  other = base;
  other.weights_enabled = true;
  EXPECT_NE(base.hash(), other.hash());
  EXPECT_EQ(base.hash(), GraphConfig{}.hash());
}

}  // namespace
}  // namespace ugk
