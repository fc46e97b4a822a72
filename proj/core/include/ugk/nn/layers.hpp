#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ugk/graph.hpp"
#include "ugk/nn/tensor.hpp"

namespace ugk::nn {

struct NamedParameter {
  std::string name;
  Tensor tensor;
};

/// Ordered registry of trainable leaves. Registration order is the
/// serialization and optimizer order.
class ParameterSet {
 public:
  /// Registers a leaf and returns a handle sharing its storage.
  Tensor add(std::string name, Tensor tensor);

  std::vector<NamedParameter>& entries() { return params_; }
  const std::vector<NamedParameter>& entries() const { return params_; }
  std::size_t size() const { return params_.size(); }
  /// Total scalar count.
  std::size_t scalar_count() const;
  Tensor find(std::string_view name) const;

  void zero_grad();
  std::vector<std::vector<double>> snapshot() const;
  void restore(const std::vector<std::vector<double>>& values);

 private:
  std::vector<NamedParameter> params_;
};

/// Uniform on +-sqrt(6 / (fan_in + fan_out)), drawn from the stream named
/// after the parameter.
Tensor xavier_uniform(std::size_t rows, std::size_t cols, std::uint64_t seed, std::string_view name);

class Linear {
 public:
  Linear() = default;
  Linear(ParameterSet& params, const std::string& name, std::size_t in, std::size_t out, std::uint64_t seed,
         bool bias = true);

  Tensor operator()(const Tensor& x) const;

  const Tensor& weight() const { return weight_; }
  const Tensor& bias() const { return bias_; }
  std::size_t in_features() const { return weight_.rows(); }
  std::size_t out_features() const { return weight_.cols(); }

 private:
  Tensor weight_;  // in x out
  Tensor bias_;    // 1 x out, undefined without bias
};

class PRelu {
 public:
  static constexpr double kInitialSlope = 0.25;

  PRelu() = default;
  PRelu(ParameterSet& params, const std::string& name);

  Tensor operator()(const Tensor& x) const { return prelu(x, slope_); }
  const Tensor& slope() const { return slope_; }

 private:
  Tensor slope_;
};

/// Linear -> PReLU -> Linear, optionally followed by a second PReLU.
class Mlp2 {
 public:
  Mlp2() = default;
  Mlp2(ParameterSet& params, const std::string& name, std::size_t in, std::size_t hidden, std::size_t out,
       std::uint64_t seed, bool activate_output);

  Tensor operator()(const Tensor& x) const;

  const Linear& first() const { return l1_; }
  const Linear& second() const { return l2_; }

 private:
  Linear l1_;
  PRelu act1_;
  Linear l2_;
  bool activate_output_ = false;
  PRelu act2_;
};

// --- relational graph convolution -----------------------------------------------

/// Row-normalised in-adjacency per relation: row i holds w_ij / c_{i,r} for
/// every in-neighbour j of i, with c_{i,r} the in-degree of i under r. A null
/// entry means the relation has no edges.
using RelationAdjacency = std::vector<std::shared_ptr<const SparseRows>>;

/// Builds the first `num_relations` relations of `graph`. Edges in any higher
/// relation are a ShapeMismatch (a 1-relation model fed an unmerged graph).
RelationAdjacency normalized_adjacency(const HeteroGraph& graph, std::size_t num_relations, bool use_weights);

struct RgcnLayerParams {
  std::vector<Tensor> relation_weights;  // d_in x d_out, one per relation
  Tensor self_weight;                    // d_in x d_out
  Tensor slope;                          // 1 x 1
};

RgcnLayerParams make_rgcn_params(ParameterSet& params, const std::string& name, std::size_t in, std::size_t out,
                                 std::size_t num_relations, std::uint64_t seed);

Tensor rgcn_forward(const Tensor& h, const RelationAdjacency& adjacency, const RgcnLayerParams& params);
Tensor rgcn_forward(const Tensor& h, const HeteroGraph& graph, const RgcnLayerParams& params, bool use_weights);

// --- LSTM -------------------------------------------------------------------------

/// Gate blocks are packed along columns in the order input, forget, cell, output.
struct LstmParams {
  Tensor w_input;   // d_x x 4h
  Tensor w_hidden;  // h x 4h
  Tensor bias;      // 1 x 4h
  std::size_t hidden = 0;
};

LstmParams make_lstm_params(ParameterSet& params, const std::string& name, std::size_t in, std::size_t hidden,
                            std::uint64_t seed);

std::pair<Tensor, Tensor> lstm_step(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                                    const LstmParams& params);

}  // namespace ugk::nn
