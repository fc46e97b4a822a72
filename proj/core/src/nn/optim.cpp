#include "ugk/nn/optim.hpp"

#include <cmath>

namespace ugk::nn {

void adam_update(std::span<double> theta, std::span<const double> grad, std::vector<double>& m,
                 std::vector<double>& v, std::uint64_t step, double lr, const AdamConfig& cfg) {
  if (grad.size() != theta.size() || m.size() != theta.size() || v.size() != theta.size()) {
    throw Error(ErrorCode::ShapeMismatch, "adam_update: buffer sizes differ");
  }
  const double t = static_cast<double>(step);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  const double step_size = lr * std::sqrt(bc2) / bc1;
  const double eps_hat = cfg.eps * std::sqrt(bc2);
  const double decay = 1.0 - lr * cfg.weight_decay;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double g = grad[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
    theta[i] = theta[i] * decay - step_size * m[i] / (std::sqrt(v[i]) + eps_hat);
  }
}

Adam::Adam(ParameterSet& params, AdamConfig cfg) : params_(&params), cfg_(cfg) {
  for (const auto& p : params.entries()) {
    state_.m.emplace_back(p.tensor.size(), 0.0);
    state_.v.emplace_back(p.tensor.size(), 0.0);
  }
}

void Adam::step(double lr) {
  ++state_.step;
  auto& entries = params_->entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Tensor& p = entries[i].tensor;
    adam_update(p.mutable_data(), p.grad(), state_.m[i], state_.v[i], state_.step, lr, cfg_);
  }
}

void Adam::set_state(AdamState state) {
  const auto& entries = params_->entries();
  if (state.m.size() != entries.size() || state.v.size() != entries.size()) {
    throw Error(ErrorCode::ShapeMismatch, "Adam state does not match the parameter set");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (state.m[i].size() != entries[i].tensor.size() || state.v[i].size() != entries[i].tensor.size()) {
      throw Error(ErrorCode::ShapeMismatch, "Adam state shape mismatch for " + entries[i].name);
    }
  }
  state_ = std::move(state);
}

ReduceLrOnPlateau::ReduceLrOnPlateau(double initial_lr, double factor, std::size_t patience, double min_lr)
    : lr_(initial_lr), factor_(factor), patience_(patience), min_lr_(min_lr) {
  if (!(factor > 0.0 && factor < 1.0)) throw Error(ErrorCode::InvalidConfig, "plateau factor must be in (0, 1)");
}

double ReduceLrOnPlateau::step(double metric) {
  if (metric < best_) {
    best_ = metric;
    bad_epochs_ = 0;
  } else if (++bad_epochs_ > patience_) {
    lr_ = std::max(lr_ * factor_, min_lr_);
    ++reductions_;
    bad_epochs_ = 0;
  }
  return lr_;
}

bool EarlyStopping::update(double metric) {
  if (metric < best_) {
    best_ = metric;
    bad_epochs_ = 0;
    return true;
  }
  ++bad_epochs_;
  return false;
}

}  // namespace ugk::nn
