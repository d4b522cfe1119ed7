// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scan/channel/channel.hpp"
#include "scan/codec/codec.hpp"
#include "scan/csi/csi.hpp"
#include "scan/io/dataio.hpp"

namespace scan {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SyntheticImagesConfig {
  std::size_t count = 200;
  double cutoff_min = 0.05;
  double cutoff_max = 0.6;
};

struct EvaluatorConfig {
  double lambda_weight = 1.0;
  std::vector<std::size_t> hidden{64, 32};
  double step_size = 1e-3;
  std::size_t epochs = 150;
  std::size_t batch = 32;
  std::size_t n_bands = 16;
  std::size_t dataset_trials = 10;  // trials per image for dataset building
  double sigma2_min = 1e-3;
  double sigma2_max = 1.0;
  double holdout_fraction = 0.2;
  std::string checkpoint = "evaluator.ckpt";
};

struct ExperimentConfig {
  uint64_t seed = 1;
  ChannelParams channel;
  double power = 1.0;
  std::vector<double> snr_db_grid{-6.0, 0.0, 6.0, 12.0, 18.0};
  std::size_t n_streams = 2;
  LengthSet lengths{std::vector<int>{32, 64, 96, 128, 160, 192}};
  int coarse_length = 16;
  double rho = 1.0 / 6.0;
  double gamma_th_db = 26.0;   // distortion target, PSNR-dB domain
  double l_th = 96.0;          // group budget
  long trials = 1000;
  uint64_t projection_seed = 42;
  std::optional<std::string> cifar_path;
  SyntheticImagesConfig synthetic;
  EvaluatorConfig evaluator;

  CodecConfig codec_config() const;
  LinkConfig link_config(double snr_db) const;
  double d_th() const;  // gamma_th_db converted to the MSE domain
};

/// Parse and cross-validate a config document. Diagnostics name the failing
/// field ("lengths[2]: ..."). Throws ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical JSON echo of a config (sorted keys), for the metadata sidecar.
std::string config_to_json(const ExperimentConfig& cfg);

/// The images an experiment runs over: a CIFAR batch when a path is set,
/// otherwise synthetic images with a deterministic complexity ramp.
std::vector<ImageSample> load_experiment_images(const ExperimentConfig& cfg);

}  // namespace scan
