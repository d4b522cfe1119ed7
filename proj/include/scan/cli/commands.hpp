// SPDX-License-Identifier: Apache-2.0
//
// Experiment commands behind the CLI. Every command is a pure function of
// (config, input files): identical seeds produce byte-identical CSV files.

#pragma once

#include <optional>
#include <string>

#include "scan/cli/config.hpp"

namespace scan {

/// PSNR and SDOP over the (SNR grid x length set); one CSV row per point.
void cmd_simulate_link(const ExperimentConfig& cfg, const std::string& out_dir);

/// Builds the distillation dataset, trains the evaluator, writes the
/// checkpoint, a per-epoch loss trace, and a summary row with the held-out
/// PSNR-prediction RMSE.
void cmd_train_evaluator(const ExperimentConfig& cfg, const std::string& out_dir);

/// Paired-tape SDOP per SNR point for one feedback policy. Adaptive policies
/// load the evaluator checkpoint (train-evaluator must have run first).
void cmd_eval_sdop(const ExperimentConfig& cfg, const std::string& out_dir,
                   const std::string& policy, std::optional<int> fixed_b);

struct AllocateArgs {
  std::string table_file;
  LengthSet lambda;
  double l_th = 0.0;
  // when set, the table holds predicted distortions to be thresholded;
  // otherwise it must already be a 0/1 outage table
  std::optional<double> gamma_th_db;
  std::optional<double> d_th;
  bool literal_revert = false;
};

/// Standalone group allocation over a prediction table file.
void cmd_allocate(const AllocateArgs& args, const std::string& out_dir);

}  // namespace scan
