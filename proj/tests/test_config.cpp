#include <gtest/gtest.h>

#include "ugk/config.hpp"

namespace ugk {
namespace {

ErrorCode code_of(std::string_view text) {
  try {
    parse_run_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorCode::InvalidArgument;
}

TEST(Config, EmptyObjectGivesDefaults) {
  const RunConfig cfg = parse_run_config("{}");
  EXPECT_EQ(cfg.model.hidden_dim, 128u);
  EXPECT_EQ(cfg.graph.k_similarity, 8u);
  EXPECT_EQ(cfg.target, TargetVariable::UTCI);
  EXPECT_EQ(cfg.model.head_mode, HeadMode::Single);
}

TEST(Config, SectionsAreRead) {
  const RunConfig cfg = parse_run_config(R"({
    "seed": 9, "target": "MRT",
    "graph": {"k_similarity": 4, "lambda_wind": 0.25},
    "model": {"hidden_dim": 32, "head_mode": "multi", "edge_mask": "Shadow,ConvectiveDiffusion", "no_warmup": true},
    "synthetic": {"blocks": 5, "sigma": 0.0}
  })");
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.model.seed, 9u);
  EXPECT_EQ(cfg.synthetic.seed, 9u);
  EXPECT_EQ(cfg.target, TargetVariable::MRT);
  EXPECT_EQ(cfg.graph.k_similarity, 4u);
  EXPECT_EQ(cfg.synthetic.graph.lambda_wind, 0.25);
  EXPECT_EQ(cfg.model.head_mode, HeadMode::Multi);
  EXPECT_TRUE(cfg.model.ablations.edge_mask[relation_index(RelationKind::Shadow)]);
  EXPECT_TRUE(cfg.model.ablations.edge_mask[relation_index(RelationKind::ConvectiveDiffusion)]);
  EXPECT_FALSE(cfg.model.ablations.edge_mask[relation_index(RelationKind::InternalContiguity)]);
  EXPECT_TRUE(cfg.model.ablations.no_warmup);
  EXPECT_EQ(cfg.synthetic.blocks, 5u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_EQ(code_of(R"({"modle": {}})"), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(R"({"model": {"hiden_dim": 3}})"), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(R"({"model": {"hidden_dim": "wide"}})"), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of("{not json"), ErrorCode::InvalidConfig);
  EXPECT_THROW(parse_run_config(R"({"model": {"hidden_dim": 0}})"), Error);
}

TEST(Config, JsonRoundTrip) {
  const RunConfig a = parse_run_config(R"({"seed": 4, "graph": {"eps": 0.002}, "model": {"lr": 0.0005,
    "edge_mask": "VegetationActivity"}, "synthetic": {"rows": 11}})");
  const RunConfig b = parse_run_config(run_config_to_json(a));
  EXPECT_EQ(run_config_to_json(a), run_config_to_json(b));
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(b.synthetic.rows, 11u);
  EXPECT_EQ(b.graph.eps, 0.002);
}

TEST(Config, HashTracksResultRelevantFields) {
  const RunConfig base = parse_run_config("{}");
  EXPECT_EQ(base.hash(), parse_run_config(R"({"threads": 3, "out_dir": "elsewhere"})").hash());
  EXPECT_NE(base.hash(), parse_run_config(R"({"seed": 1})").hash());
  EXPECT_NE(base.hash(), parse_run_config(R"({"model": {"hidden_dim": 64}})").hash());
  EXPECT_NE(base.hash(), parse_run_config(R"({"graph": {"k_similarity": 6}})").hash());
  EXPECT_NE(base.hash(), parse_run_config(R"({"model": {"static_graph": true}})").hash());
  EXPECT_EQ(base.hash().size(), 16u);
}

}  // namespace
}  // namespace ugk
