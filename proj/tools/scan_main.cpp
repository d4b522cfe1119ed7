// SPDX-License-Identifier: Apache-2.0
//
// scan: link-level simulator and codeword-length allocator for semantic
// image transmission over MIMO with multi-rate CSI feedback.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "scan/cli/commands.hpp"
#include "scan/cli/config.hpp"

namespace {

scan::ExperimentConfig load_with_overrides(const std::string& config_path,
                                           std::optional<uint64_t> seed_flag) {
  scan::ExperimentConfig cfg = scan::load_config_file(config_path);
  if (seed_flag) cfg.seed = *seed_flag;
  if (const char* env = std::getenv("SCAN_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
  return cfg;
}

std::string resolve_out(std::string out_dir) {
  if (const char* env = std::getenv("SCAN_OUT")) out_dir = env;
  return out_dir;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scan: MIMO semantic image transmission simulator with adaptive CSI feedback"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<uint64_t> seed_flag;
  std::string policy = "fixed";
  std::optional<int> fixed_b;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "experiment config (JSON)");
    if (needs_config) opt->required();
    cmd->add_option("--seed", seed_flag, "override the config seed");
    cmd->add_option("--out", out_dir, "output directory");
  };

  auto* sim = app.add_subcommand("simulate-link", "PSNR/SDOP over the SNR x length grid");
  add_common(sim, true);

  auto* trainer = app.add_subcommand("train-evaluator", "build dataset, train, checkpoint");
  add_common(trainer, true);

  auto* sdop = app.add_subcommand("eval-sdop", "SDOP for a feedback policy on a paired tape");
  add_common(sdop, true);
  sdop->add_option("--policy", policy, "fixed|instance|group")->required();
  sdop->add_option("--fixed-b", fixed_b, "codeword length for the fixed policy");

  scan::AllocateArgs alloc_args;
  std::vector<int> alloc_lengths;
  std::optional<double> alloc_gamma, alloc_dth;
  auto* alloc = app.add_subcommand("allocate", "group allocation over a prediction table");
  alloc->add_option("--table", alloc_args.table_file, "CSV table, one row per image")->required();
  alloc->add_option("--lengths", alloc_lengths, "candidate lengths (ascending)")->required();
  alloc->add_option("--l-th", alloc_args.l_th, "average length budget")->required();
  alloc->add_option("--gamma-th", alloc_gamma,
                    "treat table as distortions; threshold in PSNR dB");
  alloc->add_option("--d-th", alloc_dth, "treat table as distortions; threshold in MSE");
  alloc->add_flag("--literal-revert", alloc_args.literal_revert,
                  "historical revert-to-previous-level behavior");
  alloc->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string out = resolve_out(out_dir);
    if (sim->parsed()) {
      scan::cmd_simulate_link(load_with_overrides(config_path, seed_flag), out);
    } else if (trainer->parsed()) {
      scan::cmd_train_evaluator(load_with_overrides(config_path, seed_flag), out);
    } else if (sdop->parsed()) {
      scan::cmd_eval_sdop(load_with_overrides(config_path, seed_flag), out, policy, fixed_b);
    } else if (alloc->parsed()) {
      alloc_args.lambda = scan::LengthSet(alloc_lengths);
      alloc_args.gamma_th_db = alloc_gamma;
      alloc_args.d_th = alloc_dth;
      scan::cmd_allocate(alloc_args, out);
    }
  } catch (const scan::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
