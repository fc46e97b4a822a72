#include "ugk/nn/layers.hpp"

#include <cmath>

#include "ugk/rng.hpp"

namespace ugk::nn {

Tensor ParameterSet::add(std::string name, Tensor tensor) {
  if (!tensor.requires_grad()) throw Error(ErrorCode::InvalidArgument, "parameter " + name + " has no gradient");
  for (const auto& p : params_) {
    if (p.name == name) throw Error(ErrorCode::InvalidArgument, "duplicate parameter " + name);
  }
  params_.push_back({std::move(name), tensor});
  return tensor;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.tensor.size();
  return n;
}

Tensor ParameterSet::find(std::string_view name) const {
  for (const auto& p : params_) {
    if (p.name == name) return p.tensor;
  }
  throw Error(ErrorCode::InvalidArgument, "no parameter named " + std::string(name));
}

void ParameterSet::zero_grad() {
  for (auto& p : params_) p.tensor.zero_grad();
}

std::vector<std::vector<double>> ParameterSet::snapshot() const {
  std::vector<std::vector<double>> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.emplace_back(p.tensor.data().begin(), p.tensor.data().end());
  return out;
}

void ParameterSet::restore(const std::vector<std::vector<double>>& values) {
  if (values.size() != params_.size()) throw Error(ErrorCode::ShapeMismatch, "parameter count mismatch");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto dst = params_[i].tensor.mutable_data();
    if (values[i].size() != dst.size()) throw Error(ErrorCode::ShapeMismatch, "size mismatch for " + params_[i].name);
    std::copy(values[i].begin(), values[i].end(), dst.begin());
  }
}

Tensor xavier_uniform(std::size_t rows, std::size_t cols, std::uint64_t seed, std::string_view name) {
  Rng rng = Rng::named(seed, name);
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.uniform(-limit, limit);
  return Tensor::from_values(rows, cols, std::move(v), true);
}

Linear::Linear(ParameterSet& params, const std::string& name, std::size_t in, std::size_t out, std::uint64_t seed,
               bool bias) {
  weight_ = params.add(name + ".weight", xavier_uniform(in, out, seed, name + ".weight"));
  if (bias) bias_ = params.add(name + ".bias", Tensor::zeros(1, out, true));
}

Tensor Linear::operator()(const Tensor& x) const {
  Tensor y = matmul(x, weight_);
  return bias_.defined() ? add_row(y, bias_) : y;
}

PRelu::PRelu(ParameterSet& params, const std::string& name) {
  slope_ = params.add(name + ".slope", Tensor::full(1, 1, kInitialSlope, true));
}

Mlp2::Mlp2(ParameterSet& params, const std::string& name, std::size_t in, std::size_t hidden, std::size_t out,
           std::uint64_t seed, bool activate_output)
    : l1_(params, name + ".0", in, hidden, seed),
      act1_(params, name + ".act0"),
      l2_(params, name + ".1", hidden, out, seed),
      activate_output_(activate_output) {
  if (activate_output_) act2_ = PRelu(params, name + ".act1");
}

Tensor Mlp2::operator()(const Tensor& x) const {
  Tensor y = l2_(act1_(l1_(x)));
  return activate_output_ ? act2_(y) : y;
}

RelationAdjacency normalized_adjacency(const HeteroGraph& graph, std::size_t num_relations, bool use_weights) {
  if (num_relations == 0 || num_relations > kNumRelations) {
    throw Error(ErrorCode::InvalidArgument, "relation count must be 1..5");
  }
  RelationAdjacency adj(num_relations);
  for (std::size_t r = 0; r < kNumRelations; ++r) {
    const EdgeList& edges = graph.relation(static_cast<RelationKind>(r));
    if (edges.empty()) continue;
    if (r >= num_relations) {
      throw Error(ErrorCode::ShapeMismatch, "graph has edges in relation " + std::to_string(r) + " but the layer has " +
                                                std::to_string(num_relations) + " relation(s)");
    }
    const bool weighted = use_weights && !graph.weights[r].empty();
    auto m = std::make_shared<SparseRows>();
    m->rows = m->cols = graph.num_nodes;
    m->row_ptr.assign(graph.num_nodes + 1, 0);
    for (const Edge& e : edges) ++m->row_ptr[e.dst + 1];
    for (std::size_t i = 0; i < graph.num_nodes; ++i) m->row_ptr[i + 1] += m->row_ptr[i];
    m->col.resize(edges.size());
    m->val.resize(edges.size());
    std::vector<std::uint32_t> fill(m->row_ptr.begin(), m->row_ptr.end() - 1);
    // Edges are sorted by (src, dst), so each row's columns come out ascending.
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Edge& e = edges[k];
      const std::uint32_t slot = fill[e.dst]++;
      const double degree = static_cast<double>(m->row_ptr[e.dst + 1] - m->row_ptr[e.dst]);
      m->col[slot] = e.src;
      m->val[slot] = (weighted ? graph.weights[r][k] : 1.0) / degree;
    }
    adj[r] = std::move(m);
  }
  return adj;
}

RgcnLayerParams make_rgcn_params(ParameterSet& params, const std::string& name, std::size_t in, std::size_t out,
                                 std::size_t num_relations, std::uint64_t seed) {
  RgcnLayerParams p;
  for (std::size_t r = 0; r < num_relations; ++r) {
    const std::string pname = name + ".w_rel" + std::to_string(r);
    p.relation_weights.push_back(params.add(pname, xavier_uniform(in, out, seed, pname)));
  }
  p.self_weight = params.add(name + ".w_self", xavier_uniform(in, out, seed, name + ".w_self"));
  p.slope = params.add(name + ".slope", Tensor::full(1, 1, PRelu::kInitialSlope, true));
  return p;
}

Tensor rgcn_forward(const Tensor& h, const RelationAdjacency& adjacency, const RgcnLayerParams& params) {
  if (adjacency.size() != params.relation_weights.size()) {
    throw Error(ErrorCode::ShapeMismatch, "adjacency and relation weights disagree on relation count");
  }
  Tensor acc = matmul(h, params.self_weight);
  for (std::size_t r = 0; r < adjacency.size(); ++r) {
    if (!adjacency[r]) continue;
    if (adjacency[r]->cols != h.rows()) throw Error(ErrorCode::ShapeMismatch, "node count differs from graph");
    acc = add(acc, matmul(spmm(adjacency[r], h), params.relation_weights[r]));
  }
  return prelu(acc, params.slope);
}

Tensor rgcn_forward(const Tensor& h, const HeteroGraph& graph, const RgcnLayerParams& params, bool use_weights) {
  if (h.rows() != graph.num_nodes) throw Error(ErrorCode::ShapeMismatch, "H rows != graph nodes");
  return rgcn_forward(h, normalized_adjacency(graph, params.relation_weights.size(), use_weights), params);
}

LstmParams make_lstm_params(ParameterSet& params, const std::string& name, std::size_t in, std::size_t hidden,
                            std::uint64_t seed) {
  LstmParams p;
  p.hidden = hidden;
  p.w_input = params.add(name + ".w_input", xavier_uniform(in, 4 * hidden, seed, name + ".w_input"));
  p.w_hidden = params.add(name + ".w_hidden", xavier_uniform(hidden, 4 * hidden, seed, name + ".w_hidden"));
  std::vector<double> b(4 * hidden, 0.0);
  for (std::size_t k = hidden; k < 2 * hidden; ++k) b[k] = 1.0;
  p.bias = params.add(name + ".bias", Tensor::from_values(1, 4 * hidden, std::move(b), true));
  return p;
}

std::pair<Tensor, Tensor> lstm_step(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                                    const LstmParams& params) {
  const std::size_t hd = params.hidden;
  if (x.cols() != params.w_input.rows() || h_prev.cols() != hd || c_prev.cols() != hd ||
      h_prev.rows() != x.rows() || c_prev.rows() != x.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "lstm_step: inconsistent shapes");
  }
  Tensor gates = add_row(add(matmul(x, params.w_input), matmul(h_prev, params.w_hidden)), params.bias);
  Tensor i = sigmoid(slice_cols(gates, 0, hd));
  Tensor f = sigmoid(slice_cols(gates, hd, hd));
  Tensor g = tanh(slice_cols(gates, 2 * hd, hd));
  Tensor o = sigmoid(slice_cols(gates, 3 * hd, hd));
  Tensor c = add(mul(f, c_prev), mul(i, g));
  Tensor h = mul(o, tanh(c));
  return {h, c};
}

}  // namespace ugk::nn
