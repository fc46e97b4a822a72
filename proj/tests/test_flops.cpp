#include <gtest/gtest.h>

#include "ugk/flops.hpp"

namespace ugk {
namespace {

GraphStats stats(std::size_t nodes, std::array<double, kNumRelations> edges) {
  GraphStats s;
  s.num_nodes = nodes;
  s.edges_per_step = edges;
  return s;
}

TEST(Flops, LinearDefinition) {
  EXPECT_EQ(linear_flops(7, 16, 128), 2.0 * 7 * 16 * 128);
}

TEST(Flops, TotalsAreSumOfTerms) {
  const FlopReport r = count_flops(ModelConfig{}, stats(2500, {500, 30000, 60000, 20000, 15000}));
  double sum = 0.0;
  for (const auto& t : r.terms) sum += t.macs;
  EXPECT_EQ(r.macs, sum);
  EXPECT_EQ(r.flops, 2.0 * r.macs);
}

TEST(Flops, EdgeCountsEnterOnlyTheirAggregation) {
  const ModelConfig cfg;
  const FlopReport base = count_flops(cfg, stats(400, {100, 2000, 5000, 3200, 700}));
  const FlopReport doubled = count_flops(cfg, stats(400, {100, 4000, 5000, 3200, 700}));
  for (std::size_t i = 0; i < base.terms.size(); ++i) {
    const auto& name = base.terms[i].name;
    ASSERT_EQ(name, doubled.terms[i].name);
    if (name.find("VegetationActivity.aggregate") != std::string::npos) {
      EXPECT_EQ(doubled.terms[i].macs, 2.0 * base.terms[i].macs) << name;
    } else {
      EXPECT_EQ(doubled.terms[i].macs, base.terms[i].macs) << name;
    }
  }
  const std::size_t layers = cfg.rgcn_layers;
  EXPECT_EQ(doubled.macs - base.macs, 12.0 * 2000 * (16.0 + (layers - 1) * 128.0));
}

TEST(Flops, HandCountOfTinyModel) {
  ModelConfig cfg;
  cfg.hidden_dim = 2;
  cfg.rgcn_layers = 1;
  cfg.t_pred = 1;
  cfg.node_dim = 3;
  const FlopReport r = count_flops(cfg, stats(4, {0, 0, 0, 5, 0}));
  // env 6*2+2*2, time 2*2+2*2, self 4*3*2, similarity 5*3 + 4*3*2,
  // fusion 4*(6*2+2*2), warmup 4*2*2*2, lstm 4*(2*8+2*8), head 4*(2*2+2*1)
  const double expected = 16 + 8 + 24 + 15 + 24 + 64 + 32 + 128 + 24;
  EXPECT_EQ(r.macs, expected);
}

TEST(Flops, AblationsRemoveTheirTerms) {
  const GraphStats s = stats(400, {100, 2000, 5000, 3200, 700});
  ModelConfig cfg;
  cfg.ablations.no_warmup = true;
  EXPECT_EQ(count_flops(cfg, s).term("warmup"), 0.0);
  cfg = ModelConfig{};
  cfg.ablations.single_hour = true;
  EXPECT_EQ(count_flops(cfg, s).term("lstm0"), 0.0);
  cfg = ModelConfig{};
  cfg.ablations.homogeneous = true;
  EXPECT_LT(count_flops(cfg, s).macs, count_flops(ModelConfig{}, s).macs);
}

}  // namespace
}  // namespace ugk
