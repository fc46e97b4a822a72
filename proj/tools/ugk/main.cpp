#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_common(CLI::App* cmd, ugk::cli::Options& o) {
  cmd->add_option("--config", o.config_file, "JSON run configuration");
  cmd->add_option("--seed", o.seed, "Seed for splits, initialisation and synthetic data");
  cmd->add_option("--edge-mask", o.edge_mask, "Comma-separated relations to drop from every graph");
  cmd->add_option("--target", o.target, "Target variable (UTCI, PET, AT, MRT, WS, RH)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--data", o.data, "Dataset root (contains blocks/)");
  cmd->add_option("--threads", o.threads, "Worker cap for graph building (default: UGK_THREADS or all cores)");
  cmd->add_flag("--quiet", o.quiet, "Suppress per-epoch progress");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ugk: dynamic heterogeneous urban graphs and the spatio-temporal predictor built on them"};
  app.require_subcommand(1);
  ugk::cli::Options o;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset into the data directory");
  auto* build = app.add_subcommand("build-graphs", "Build (or reuse) the per-hour graph cache of every block");
  auto* train = app.add_subcommand("train", "Train on the train/val split and write a checkpoint");
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint and write overall and per-hour metrics");
  auto* predict = app.add_subcommand("predict", "Write per-hour prediction grids for a split");
  auto* grad = app.add_subcommand("gradcheck", "Compare analytic gradients with central differences");
  auto* flops = app.add_subcommand("flops", "Analytic operation count of one forward pass");
  auto* ablate = app.add_subcommand("ablate", "Train base and variant with one seed and compare");

  for (auto* cmd : {synth, build, train, eval, predict, grad, flops, ablate}) add_common(cmd, o);
  for (auto* cmd : {train, ablate}) cmd->add_option("--epochs", o.epochs, "Maximum epochs");
  train->add_option("--ablate", o.ablate, "Train this ablation variant instead of the full model");
  for (auto* cmd : {eval, predict}) {
    cmd->add_option("--checkpoint", o.checkpoint, "Checkpoint file (default: <out>/checkpoint.ugk)");
    cmd->add_option("--split", o.split, "train, val, test or all")->check(CLI::IsMember({"train", "val", "test", "all"}));
  }
  ablate->add_option("variant", o.ablate, "homogeneous | static_graph | no_warmup | single_hour | drop:<relations>")
      ->required();
  flops->add_flag("--paper-scale", o.paper_scale, "Use a 50x50 block with the default full-size model");

  CLI11_PARSE(app, argc, argv);

  try {
    const ugk::RunConfig cfg = ugk::cli::resolve_config(o);
    if (synth->parsed()) return ugk::cli::run_synth(cfg, o);
    if (build->parsed()) return ugk::cli::run_build_graphs(cfg, o);
    if (train->parsed()) return ugk::cli::run_train(cfg, o);
    if (eval->parsed()) return ugk::cli::run_eval(cfg, o);
    if (predict->parsed()) return ugk::cli::run_predict(cfg, o);
    if (grad->parsed()) return ugk::cli::run_gradcheck(cfg, o);
    if (flops->parsed()) return ugk::cli::run_flops(cfg, o);
    if (ablate->parsed()) return ugk::cli::run_ablate(cfg, o);
  } catch (const ugk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
