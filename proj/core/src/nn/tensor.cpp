#include "ugk/nn/tensor.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <unordered_set>

#include <Eigen/Core>

namespace ugk::nn {
namespace detail {

struct Node {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;
};

struct Access {
  static const std::shared_ptr<Node>& node(const Tensor& t) { return t.node_; }
  static Tensor wrap(std::shared_ptr<Node> n) { return Tensor(std::move(n)); }
};

}  // namespace detail

namespace {

using detail::Access;
using detail::Node;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

ConstMap view(const std::vector<double>& v, std::size_t r, std::size_t c) {
  return ConstMap(v.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}
MutMap view(std::vector<double>& v, std::size_t r, std::size_t c) {
  return MutMap(v.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

const Node& get(const Tensor& t) {
  if (!t.defined()) throw Error(ErrorCode::InvalidArgument, "undefined tensor");
  return *Access::node(t);
}

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw Error(ErrorCode::ShapeMismatch, std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                            std::to_string(b.cols()));
}

// Allocates an op result; history is kept only if some input needs a gradient.
std::shared_ptr<Node> make_result(std::size_t rows, std::size_t cols, std::initializer_list<const Tensor*> inputs) {
  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->value.assign(rows * cols, 0.0);
  for (const Tensor* t : inputs) {
    if (t->requires_grad()) node->requires_grad = true;
  }
  if (node->requires_grad) {
    node->grad.assign(rows * cols, 0.0);
    for (const Tensor* t : inputs) node->parents.push_back(Access::node(*t));
  }
  return node;
}

}  // namespace

// --- Tensor -----------------------------------------------------------------------

Tensor Tensor::zeros(std::size_t rows, std::size_t cols, bool requires_grad) {
  return full(rows, cols, 0.0, requires_grad);
}

Tensor Tensor::full(std::size_t rows, std::size_t cols, double value, bool requires_grad) {
  return from_values(rows, cols, std::vector<double>(rows * cols, value), requires_grad);
}

Tensor Tensor::from_values(std::size_t rows, std::size_t cols, std::vector<double> values, bool requires_grad) {
  if (values.size() != rows * cols) {
    throw Error(ErrorCode::ShapeMismatch, "tensor data length does not match shape");
  }
  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  if (requires_grad) node->grad.assign(rows * cols, 0.0);
  return Tensor(std::move(node));
}

Tensor Tensor::from_matrix(const Matrix& m, bool requires_grad) {
  return from_values(m.rows, m.cols, m.values, requires_grad);
}

std::size_t Tensor::rows() const { return get(*this).rows; }
std::size_t Tensor::cols() const { return get(*this).cols; }
bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }
std::span<const double> Tensor::data() const { return get(*this).value; }
std::span<double> Tensor::mutable_data() {
  get(*this);
  return node_->value;
}
std::span<const double> Tensor::grad() const { return get(*this).grad; }
std::span<double> Tensor::mutable_grad() {
  get(*this);
  return node_->grad;
}

double Tensor::item() const {
  if (size() != 1) throw Error(ErrorCode::ShapeMismatch, "item() needs a 1x1 tensor");
  return data()[0];
}

void Tensor::zero_grad() {
  if (node_) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

Tensor Tensor::detach() const { return from_values(rows(), cols(), std::vector<double>(data().begin(), data().end())); }

Matrix Tensor::to_matrix() const {
  Matrix m(rows(), cols());
  std::copy(data().begin(), data().end(), m.values.begin());
  return m;
}

void Tensor::backward() const {
  if (size() != 1) throw Error(ErrorCode::ShapeMismatch, "backward() needs a scalar");
  if (!requires_grad()) return;

  // Iterative post-order DFS gives a topological order of the history.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      Node* p = n->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }
  node_->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward) (*it)->backward(**it);
  }
}

// --- ops ----------------------------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  auto out = make_result(a.rows(), b.cols(), {&a, &b});
  const Node& na = get(a);
  const Node& nb = get(b);
  view(out->value, out->rows, out->cols).noalias() = view(na.value, na.rows, na.cols) * view(nb.value, nb.rows, nb.cols);
  if (out->requires_grad) {
    out->backward = [](Node& self) {
      Node& pa = *self.parents[0];
      Node& pb = *self.parents[1];
      auto g = view(static_cast<const std::vector<double>&>(self.grad), self.rows, self.cols);
      if (pa.requires_grad) {
        view(pa.grad, pa.rows, pa.cols).noalias() += g * view(static_cast<const std::vector<double>&>(pb.value), pb.rows, pb.cols).transpose();
      }
      if (pb.requires_grad) {
        view(pb.grad, pb.rows, pb.cols).noalias() += view(static_cast<const std::vector<double>&>(pa.value), pa.rows, pa.cols).transpose() * g;
      }
    };
  }
  return Access::wrap(out);
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) shape_error("add", a, b);
  auto out = make_result(a.rows(), a.cols(), {&a, &b});
  const auto& va = get(a).value;
  const auto& vb = get(b).value;
  for (std::size_t i = 0; i < va.size(); ++i) out->value[i] = va[i] + vb[i];
  if (out->requires_grad) {
    out->backward = [](Node& self) {
      for (auto& p : self.parents) {
        if (!p->requires_grad) continue;
        for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
      }
    };
  }
  return Access::wrap(out);
}

Tensor mul(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) shape_error("mul", a, b);
  auto out = make_result(a.rows(), a.cols(), {&a, &b});
  const auto& va = get(a).value;
  const auto& vb = get(b).value;
  for (std::size_t i = 0; i < va.size(); ++i) out->value[i] = va[i] * vb[i];
  if (out->requires_grad) {
    out->backward = [](Node& self) {
      Node& pa = *self.parents[0];
      Node& pb = *self.parents[1];
      if (pa.requires_grad) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) pa.grad[i] += self.grad[i] * pb.value[i];
      }
      if (pb.requires_grad) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) pb.grad[i] += self.grad[i] * pa.value[i];
      }
    };
  }
  return Access::wrap(out);
}

Tensor scale(const Tensor& x, double s) {
  auto out = make_result(x.rows(), x.cols(), {&x});
  const auto& vx = get(x).value;
  for (std::size_t i = 0; i < vx.size(); ++i) out->value[i] = vx[i] * s;
  if (out->requires_grad) {
    out->backward = [s](Node& self) {
      Node& p = *self.parents[0];
      for (std::size_t i = 0; i < self.grad.size(); ++i) p.grad[i] += self.grad[i] * s;
    };
  }
  return Access::wrap(out);
}

Tensor add_row(const Tensor& x, const Tensor& bias) {
  if (bias.rows() != 1 || bias.cols() != x.cols()) shape_error("add_row", x, bias);
  auto out = make_result(x.rows(), x.cols(), {&x, &bias});
  const auto& vx = get(x).value;
  const auto& vb = get(bias).value;
  const std::size_t d = x.cols();
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) out->value[r * d + c] = vx[r * d + c] + vb[c];
  }
  if (out->requires_grad) {
    out->backward = [](Node& self) {
      Node& px = *self.parents[0];
      Node& pb = *self.parents[1];
      if (px.requires_grad) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) px.grad[i] += self.grad[i];
      }
      if (pb.requires_grad) {
        for (std::size_t r = 0; r < self.rows; ++r) {
          for (std::size_t c = 0; c < self.cols; ++c) pb.grad[c] += self.grad[r * self.cols + c];
        }
      }
    };
  }
  return Access::wrap(out);
}

Tensor broadcast_rows(const Tensor& row, std::size_t n) {
  if (row.rows() != 1) throw Error(ErrorCode::ShapeMismatch, "broadcast_rows needs a 1 x d tensor");
  auto out = make_result(n, row.cols(), {&row});
  const auto& v = get(row).value;
  for (std::size_t r = 0; r < n; ++r) std::copy(v.begin(), v.end(), out->value.begin() + static_cast<long>(r * v.size()));
  if (out->requires_grad) {
    out->backward = [](Node& self) {
      Node& p = *self.parents[0];
      for (std::size_t r = 0; r < self.rows; ++r) {
        for (std::size_t c = 0; c < self.cols; ++c) p.grad[c] += self.grad[r * self.cols + c];
      }
    };
  }
  return Access::wrap(out);
}

Tensor sigmoid(const Tensor& x) {
  auto out = make_result(x.rows(), x.cols(), {&x});
  const auto& vx = get(x).value;
  for (std::size_t i = 0; i < vx.size(); ++i) {
    const double v = vx[i];
    if (v >= 0.0) {
      out->value[i] = 1.0 / (1.0 + std::exp(-v));
    } else {
      const double e = std::exp(v);
      out->value[i] = e / (1.0 + e);
    }
  }
  if (out->requires_grad) {
    out->backward = [](Node& self) {
      Node& p = *self.parents[0];
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        const double y = self.value[i];
        p.grad[i] += self.grad[i] * y * (1.0 - y);
      }
    };
  }
  return Access::wrap(out);
}

Tensor tanh(const Tensor& x) {
  auto out = make_result(x.rows(), x.cols(), {&x});
  const auto& vx = get(x).value;
  for (std::size_t i = 0; i < vx.size(); ++i) out->value[i] = std::tanh(vx[i]);
  if (out->requires_grad) {
    out->backward = [](Node& self) {
      Node& p = *self.parents[0];
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        const double y = self.value[i];
        p.grad[i] += self.grad[i] * (1.0 - y * y);
      }
    };
  }
  return Access::wrap(out);
}

Tensor prelu(const Tensor& x, const Tensor& slope) {
  if (slope.size() != 1) throw Error(ErrorCode::ShapeMismatch, "prelu slope must be 1x1");
  auto out = make_result(x.rows(), x.cols(), {&x, &slope});
  const auto& vx = get(x).value;
  const double a = get(slope).value[0];
  for (std::size_t i = 0; i < vx.size(); ++i) out->value[i] = vx[i] > 0.0 ? vx[i] : a * vx[i];
  if (out->requires_grad) {
    out->backward = [](Node& self) {
      Node& px = *self.parents[0];
      Node& ps = *self.parents[1];
      const double a = ps.value[0];
      if (px.requires_grad) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          px.grad[i] += px.value[i] > 0.0 ? self.grad[i] : a * self.grad[i];
        }
      }
      if (ps.requires_grad) {
        double g = 0.0;
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          if (!(px.value[i] > 0.0)) g += self.grad[i] * px.value[i];
        }
        ps.grad[0] += g;
      }
    };
  }
  return Access::wrap(out);
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "concat_cols of nothing");
  const std::size_t n = parts[0].rows();
  std::size_t total = 0;
  for (const Tensor& p : parts) {
    if (p.rows() != n) shape_error("concat_cols", parts[0], p);
    total += p.cols();
  }
  auto out = std::make_shared<Node>();
  out->rows = n;
  out->cols = total;
  out->value.assign(n * total, 0.0);
  for (const Tensor& p : parts) {
    if (p.requires_grad()) out->requires_grad = true;
  }
  std::size_t offset = 0;
  for (const Tensor& p : parts) {
    const auto& v = get(p).value;
    const std::size_t w = p.cols();
    for (std::size_t r = 0; r < n; ++r) {
      std::copy(v.begin() + static_cast<long>(r * w), v.begin() + static_cast<long>((r + 1) * w),
                out->value.begin() + static_cast<long>(r * total + offset));
    }
    offset += w;
  }
  if (out->requires_grad) {
    out->grad.assign(n * total, 0.0);
    for (const Tensor& p : parts) out->parents.push_back(Access::node(p));
    out->backward = [](Node& self) {
      std::size_t off = 0;
      for (auto& p : self.parents) {
        const std::size_t w = p->cols;
        if (p->requires_grad) {
          for (std::size_t r = 0; r < self.rows; ++r) {
            for (std::size_t c = 0; c < w; ++c) p->grad[r * w + c] += self.grad[r * self.cols + off + c];
          }
        }
        off += w;
      }
    };
  }
  return Access::wrap(out);
}

Tensor slice_cols(const Tensor& x, std::size_t begin, std::size_t count) {
  if (begin + count > x.cols()) throw Error(ErrorCode::ShapeMismatch, "slice_cols out of range");
  auto out = make_result(x.rows(), count, {&x});
  const auto& v = get(x).value;
  const std::size_t w = x.cols();
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < count; ++c) out->value[r * count + c] = v[r * w + begin + c];
  }
  if (out->requires_grad) {
    out->backward = [begin](Node& self) {
      Node& p = *self.parents[0];
      for (std::size_t r = 0; r < self.rows; ++r) {
        for (std::size_t c = 0; c < self.cols; ++c) p.grad[r * p.cols + begin + c] += self.grad[r * self.cols + c];
      }
    };
  }
  return Access::wrap(out);
}

Tensor spmm(std::shared_ptr<const SparseRows> a, const Tensor& x) {
  if (!a) throw Error(ErrorCode::InvalidArgument, "spmm with null matrix");
  if (a->cols != x.rows()) throw Error(ErrorCode::ShapeMismatch, "spmm: sparse cols != dense rows");
  const std::size_t d = x.cols();
  auto out = make_result(a->rows, d, {&x});
  const auto& vx = get(x).value;
  for (std::size_t i = 0; i < a->rows; ++i) {
    double* dst = out->value.data() + i * d;
    for (std::uint32_t e = a->row_ptr[i]; e < a->row_ptr[i + 1]; ++e) {
      const double w = a->val[e];
      const double* src = vx.data() + static_cast<std::size_t>(a->col[e]) * d;
      for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
    }
  }
  if (out->requires_grad) {
    out->backward = [a](Node& self) {
      Node& p = *self.parents[0];
      const std::size_t d = self.cols;
      for (std::size_t i = 0; i < a->rows; ++i) {
        const double* g = self.grad.data() + i * d;
        for (std::uint32_t e = a->row_ptr[i]; e < a->row_ptr[i + 1]; ++e) {
          const double w = a->val[e];
          double* dst = p.grad.data() + static_cast<std::size_t>(a->col[e]) * d;
          for (std::size_t c = 0; c < d; ++c) dst[c] += w * g[c];
        }
      }
    };
  }
  return Access::wrap(out);
}

Tensor sum(const Tensor& x) {
  auto out = make_result(1, 1, {&x});
  double s = 0.0;
  for (double v : get(x).value) s += v;
  out->value[0] = s;
  if (out->requires_grad) {
    out->backward = [](Node& self) {
      Node& p = *self.parents[0];
      for (double& g : p.grad) g += self.grad[0];
    };
  }
  return Access::wrap(out);
}

Tensor mean(const Tensor& x) { return scale(sum(x), 1.0 / static_cast<double>(x.size())); }

Tensor masked_mse(const Tensor& pred, std::span<const double> target, std::span<const std::uint8_t> row_mask) {
  const std::size_t n = pred.rows(), t = pred.cols();
  if (target.size() != n * t || row_mask.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "masked_mse: target/mask size mismatch");
  }
  std::size_t valid_rows = 0;
  for (auto m : row_mask) valid_rows += m != 0;
  if (valid_rows == 0) throw Error(ErrorCode::InvalidArgument, "masked_mse: every row is masked");
  const double denom = static_cast<double>(valid_rows * t);

  auto out = make_result(1, 1, {&pred});
  const auto& vp = get(pred).value;
  double s = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (!row_mask[r]) continue;
    for (std::size_t c = 0; c < t; ++c) {
      const double e = vp[r * t + c] - target[r * t + c];
      s += e * e;
    }
  }
  out->value[0] = s / denom;
  if (out->requires_grad) {
    std::vector<double> tgt(target.begin(), target.end());
    std::vector<std::uint8_t> mask(row_mask.begin(), row_mask.end());
    out->backward = [tgt = std::move(tgt), mask = std::move(mask), denom](Node& self) {
      Node& p = *self.parents[0];
      const double g = self.grad[0] * 2.0 / denom;
      const std::size_t t = p.cols;
      for (std::size_t r = 0; r < p.rows; ++r) {
        if (!mask[r]) continue;
        for (std::size_t c = 0; c < t; ++c) p.grad[r * t + c] += g * (p.value[r * t + c] - tgt[r * t + c]);
      }
    };
  }
  return Access::wrap(out);
}

Tensor mse(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape()) shape_error("mse", pred, target);
  std::vector<std::uint8_t> mask(pred.rows(), 1);
  return masked_mse(pred, target.data(), mask);
}

}  // namespace ugk::nn
