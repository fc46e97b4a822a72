#include "ugk/train.hpp"

#include <cmath>
#include <numeric>

#include "ugk/csv.hpp"
#include "ugk/nn/optim.hpp"
#include "ugk/rng.hpp"

namespace ugk {

using nn::Tensor;

std::string format_history_csv(std::span<const HistoryRow> history, std::string_view config_hash) {
  std::string s = "# config_hash=" + std::string(config_hash) + "\nepoch,train_mse,val_mse,val_r2,lr\n";
  for (const auto& row : history) {
    s += std::to_string(row.epoch) + "," + format_double(row.train_mse) + "," + format_double(row.val_mse) + "," +
         (row.val_r2 ? format_double(*row.val_r2) : "nan") + "," + format_double(row.lr) + "\n";
  }
  return s;
}

TargetScaling fit_target_scaling(std::span<const BlockData> blocks, std::size_t hours) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& b : blocks) {
    for (std::size_t v = 0; v < b.target.num_nodes; ++v) {
      if (!b.target.valid_mask[v]) continue;
      for (std::size_t h = 0; h < hours; ++h) {
        sum += b.target.at(v, h);
        ++n;
      }
    }
  }
  if (n == 0) throw Error(ErrorCode::EmptySplit, "no valid training targets");
  TargetScaling s;
  s.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& b : blocks) {
    for (std::size_t v = 0; v < b.target.num_nodes; ++v) {
      if (!b.target.valid_mask[v]) continue;
      for (std::size_t h = 0; h < hours; ++h) {
        const double d = b.target.at(v, h) - s.mean;
        ss += d * d;
      }
    }
  }
  const double sd = std::sqrt(ss / static_cast<double>(n));
  s.scale = sd > 0.0 ? sd : 1.0;
  return s;
}

namespace {

// Uses the first t_pred steps of a block whose series may run longer.
PreparedSequence prepare_block(const BlockData& block, const ModelConfig& cfg) {
  std::span<const HeteroGraph> graphs(block.graphs);
  std::span<const WeatherRecord> weather(block.weather);
  if (graphs.size() > cfg.t_pred && weather.size() > cfg.t_pred) {
    graphs = graphs.first(cfg.t_pred);
    weather = weather.first(cfg.t_pred);
  }
  return prepare_sequence(graphs, weather, block.node_features, cfg);
}

struct Example {
  PreparedSequence seq;
  std::vector<double> target;  // standardised, |V| x t_pred node-major
  const std::vector<std::uint8_t>* mask = nullptr;
  std::size_t valid_rows = 0;
};

Example make_example(const BlockData& block, const UrbanGraphModel& model) {
  const ModelConfig& cfg = model.config();
  Example ex;
  ex.seq = prepare_block(block, cfg);
  const TargetField& tf = block.target;
  if (tf.num_nodes != ex.seq.num_nodes || tf.num_hours < cfg.t_pred) {
    throw Error(ErrorCode::ShapeMismatch, "targets of block " + block.block_id + " do not cover the horizon");
  }
  ex.target.assign(tf.num_nodes * cfg.t_pred, 0.0);
  for (std::size_t v = 0; v < tf.num_nodes; ++v) {
    if (!tf.valid_mask[v]) continue;
    ++ex.valid_rows;
    for (std::size_t h = 0; h < cfg.t_pred; ++h) {
      ex.target[v * cfg.t_pred + h] = (tf.at(v, h) - model.scaling.mean) / model.scaling.scale;
    }
  }
  ex.mask = &tf.valid_mask;
  return ex;
}

struct Evaluation {
  double mse = 0.0;
  std::optional<double> r2;
};

Evaluation evaluate_examples(const UrbanGraphModel& model, std::span<const Example> examples,
                             std::span<const BlockData> blocks) {
  MetricsAccumulator acc(model.config().t_pred);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    acc.add(model.predict(examples[i].seq, blocks[i].target.variable, blocks[i].block_id).values, blocks[i].target);
  }
  const ErrorMetrics overall = acc.report().overall;
  return {overall.rmse * overall.rmse, overall.r2};
}

}  // namespace

TrainResult train_model(UrbanGraphModel& model, std::span<const BlockData> train, std::span<const BlockData> val,
                        const TrainOptions& options) {
  if (train.empty()) throw Error(ErrorCode::EmptySplit, "training split is empty");
  if (val.empty()) throw Error(ErrorCode::EmptySplit, "validation split is empty");
  const ModelConfig& cfg = model.config();
  model.scaling = fit_target_scaling(train, cfg.t_pred);

  std::vector<Example> train_ex, val_ex;
  for (const auto& b : train) train_ex.push_back(make_example(b, model));
  for (const auto& b : val) val_ex.push_back(make_example(b, model));

  nn::ParameterSet& params = model.parameters();
  nn::AdamConfig adam_cfg;
  adam_cfg.weight_decay = cfg.weight_decay;
  nn::Adam adam(params, adam_cfg);
  nn::ReduceLrOnPlateau plateau(cfg.lr, cfg.plateau_factor, cfg.plateau_patience);
  nn::EarlyStopping stopper(cfg.early_stop_patience);

  TrainResult result;
  std::vector<std::vector<double>> best = params.snapshot();
  std::vector<std::size_t> order(train_ex.size());
  const double scale2 = model.scaling.scale * model.scaling.scale;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const double lr = plateau.lr();
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng::named(cfg.seed, "shuffle/epoch" + std::to_string(epoch)).shuffle(std::span<std::size_t>(order));

    double sq_sum = 0.0;
    std::size_t entries = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(end - start);
      params.zero_grad();
      for (std::size_t k = start; k < end; ++k) {
        const Example& ex = train_ex[order[k]];
        Tensor loss = nn::masked_mse(model.forward(ex.seq), ex.target, *ex.mask);
        const double value = loss.item();
        if (!std::isfinite(value)) {
          throw Error(ErrorCode::DivergenceDetected, "non-finite loss at epoch " + std::to_string(epoch));
        }
        nn::scale(loss, inv_batch).backward();
        const std::size_t count = ex.valid_rows * cfg.t_pred;
        sq_sum += value * static_cast<double>(count);
        entries += count;
      }
      adam.step(lr);
    }

    const Evaluation eval = evaluate_examples(model, val_ex, val);
    if (!std::isfinite(eval.mse)) {
      throw Error(ErrorCode::DivergenceDetected, "non-finite validation loss at epoch " + std::to_string(epoch));
    }
    HistoryRow row{epoch, sq_sum / static_cast<double>(entries) * scale2, eval.mse, eval.r2, lr};
    result.history.push_back(row);
    if (options.on_epoch) options.on_epoch(row);

    plateau.step(eval.mse);
    if (stopper.update(eval.mse)) {
      best = params.snapshot();
      result.best_epoch = epoch;
      result.best_val_mse = eval.mse;
    }
    if (stopper.should_stop()) {
      result.stopped_early = true;
      break;
    }
  }
  params.restore(best);
  return result;
}

std::vector<PredictionBlock> predict_blocks(const UrbanGraphModel& model, std::span<const BlockData> blocks) {
  std::vector<PredictionBlock> out;
  for (const auto& b : blocks) {
    const PreparedSequence seq = prepare_block(b, model.config());
    out.push_back(model.predict(seq, b.target.variable, b.block_id));
  }
  return out;
}

MetricsReport evaluate_model(const UrbanGraphModel& model, std::span<const BlockData> blocks) {
  MetricsAccumulator acc(model.config().t_pred);
  const auto preds = predict_blocks(model, blocks);
  for (std::size_t i = 0; i < blocks.size(); ++i) acc.add(preds[i].values, blocks[i].target);
  return acc.report();
}

}  // namespace ugk
