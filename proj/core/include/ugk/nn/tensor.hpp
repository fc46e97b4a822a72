#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ugk/common.hpp"

namespace ugk::nn {

namespace detail {
struct Node;
struct Access;
}

/// Rank-2 tensor of doubles with reverse-mode gradients.
///
/// A Tensor is a handle: copies share storage and gradient. Every op records
/// its inputs when any of them requires a gradient, and backward() on a 1x1
/// result walks that record in reverse topological order, accumulating into
/// each participating node's grad buffer. Vectors are 1 x n.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::size_t rows, std::size_t cols, bool requires_grad = false);
  static Tensor full(std::size_t rows, std::size_t cols, double value, bool requires_grad = false);
  static Tensor from_values(std::size_t rows, std::size_t cols, std::vector<double> values,
                            bool requires_grad = false);
  static Tensor from_matrix(const Matrix& m, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  std::size_t rows() const;
  std::size_t cols() const;
  std::size_t size() const { return rows() * cols(); }
  std::array<std::size_t, 2> shape() const { return {rows(), cols()}; }
  bool requires_grad() const;

  std::span<const double> data() const;
  /// In-place access, for optimizers and finite differences on leaves.
  std::span<double> mutable_data();
  /// Empty unless requires_grad().
  std::span<const double> grad() const;
  std::span<double> mutable_grad();

  double at(std::size_t r, std::size_t c) const { return data()[r * cols() + c]; }
  double item() const;

  /// Seeds d(self)/d(self) = 1 and back-propagates. Requires a 1x1 tensor.
  void backward() const;
  void zero_grad();

  /// Value copy with no history.
  Tensor detach() const;
  Matrix to_matrix() const;

  const detail::Node* node() const { return node_.get(); }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;

  friend struct detail::Access;
};

/// Compressed sparse rows with double values; used as the (normalised)
/// per-relation adjacency in message passing.
struct SparseRows {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> row_ptr;  // size rows + 1
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return col.size(); }
};

// --- ops -----------------------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
/// Elementwise product.
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double s);
/// x (n x d) + bias (1 x d) broadcast over rows.
Tensor add_row(const Tensor& x, const Tensor& bias);
/// Repeats a 1 x d row n times.
Tensor broadcast_rows(const Tensor& row, std::size_t n);
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
/// max(x, 0) + slope * min(x, 0) with a learnable 1 x 1 slope.
Tensor prelu(const Tensor& x, const Tensor& slope);
Tensor concat_cols(std::span<const Tensor> parts);
Tensor slice_cols(const Tensor& x, std::size_t begin, std::size_t count);
/// a (sparse, n x m) times x (m x d).
Tensor spmm(std::shared_ptr<const SparseRows> a, const Tensor& x);
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
/// Mean of (pred - target)^2 over rows with mask != 0, all columns. Masked
/// rows are skipped entirely, so their targets never enter the arithmetic.
Tensor masked_mse(const Tensor& pred, std::span<const double> target, std::span<const std::uint8_t> row_mask);
Tensor mse(const Tensor& pred, const Tensor& target);

}  // namespace ugk::nn
