// SPDX-License-Identifier: Apache-2.0
//
// Transmitter-side quality predictor. Two small dense networks share the
// feature vector: a content net predicting the channel-free quality level
// plus the codec's band-energy fingerprint, and a residual net predicting
// the transmission-induced quality loss (a function of codeword length and
// noise) plus the per-band reconstruction error. Trained with a distillation
// loss against the reference codec pipeline.

#pragma once

#include <string>
#include <vector>

#include "scan/codec/codec.hpp"
#include "scan/csi/csi.hpp"
#include "scan/eval/mlp.hpp"

namespace scan {

struct FeatureConfig {
  std::size_t n_bands = 16;
  LengthSet lambda{std::vector<int>{32, 64, 96, 128, 160, 192}};
  double rho = 1.0 / 6.0;
  std::size_t n_streams = 2;
  int coarse_length = 16;  // L_0, length of the probe codeword

  std::size_t feature_dim() const { return n_bands + lambda.levels() + 1 + n_streams + 1; }
};

/// Fixed feature layout:
///   [0, n_bands)          per-band DCT energy fractions of the source image
///   [n_bands, +T)         retained-energy fraction at truncation depth
///                         2*K*L_t/L_T per candidate length
///   [+1]                  mean squared pixel gradient (horizontal+vertical)
///   [+d]                  leading singular values of the coarse CSI estimate
///   [+1]                  log(sigma^2)
std::vector<double> extract_features(const ImageSample& s, const CsiCodeword& cw_coarse,
                                     double sigma2, const FeatureConfig& cfg);

/// Per-band log(1 + squared coefficient error) between two images; the
/// distillation target mirrored by the residual net's band-error head.
std::vector<double> band_errors(const ImageSample& s, const ImageSample& s_hat,
                                std::size_t n_bands);

struct EvalSample {
  std::vector<double> features;
  int b = 0;
  double sigma2 = 0.0;
  double gamma_t = 0.0;             // ground-truth PSNR dB from the pipeline
  std::vector<double> f_t;          // teacher symbol-band features
  std::vector<double> band_err_t;   // teacher per-band reconstruction error
};

struct EvaluatorModel {
  FeatureConfig features;
  double lambda_weight = 1.0;  // weight of the regression term in the loss
  double b_scale = 192.0;      // codeword-length normalizer for the net input
  Mlp content_net;             // F -> [gamma_base, F_p (n_bands)]
  Mlp residual_net;            // F + 1 -> [gamma_d, band_err_p (n_bands)]
};

EvaluatorModel make_evaluator(const FeatureConfig& features,
                              const std::vector<std::size_t>& hidden, double lambda_weight,
                              RngStream& rng);

struct ForwardOut {
  double gamma_p = 0.0;
  double gamma_base = 0.0;
  double gamma_d = 0.0;
  std::vector<double> f_p;
  std::vector<double> band_err_p;
};

/// gamma_p = gamma_base(features) - gamma_d(features, B, sigma2-entry).
ForwardOut forward(const EvaluatorModel& m, const std::vector<double>& features, int b);

double loss_c(double gamma_t, double gamma_p);
double loss_p(const EvalSample& sample, const ForwardOut& out);
double total_loss(const EvaluatorModel& m, const EvalSample& sample);
double total_loss(const EvaluatorModel& m, const EvalSample& sample, const ForwardOut& out);

struct EvaluatorGrads {
  MlpGrads content;
  MlpGrads residual;
};

/// Adds d(total_loss)/d(params) for one sample.
void accumulate_gradients(const EvaluatorModel& m, const EvalSample& sample,
                          EvaluatorGrads& grads);

class TrainingDivergedError : public std::runtime_error {
 public:
  TrainingDivergedError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), loss_trace(std::move(trace)) {}
  std::vector<double> loss_trace;
};

struct TrainOptions {
  std::size_t epochs = 150;
  double step_size = 1e-3;
  std::size_t batch = 32;
};

/// Mini-batch gradient descent with deterministic shuffling; returns the
/// per-epoch mean loss. Throws TrainingDivergedError when the loss leaves
/// the finite range, with the partial trace attached.
std::vector<double> train(EvaluatorModel& m, const std::vector<EvalSample>& dataset,
                          const TrainOptions& opts, RngStream rng);

struct DatasetOptions {
  ChannelParams channel;
  LinkConfig link;           // power and stream count; noise sampled per trial
  CodecConfig codec;
  double sigma2_min = 1e-3;
  double sigma2_max = 1.0;
  std::size_t trials_per_image = 4;
  uint64_t projection_seed = 42;
};

/// Runs the reference pipeline over (image, channel, B, sigma2) draws and
/// records prediction targets. Deterministic given the rng identity.
std::vector<EvalSample> build_dataset(const std::vector<ImageSample>& images,
                                      const FeatureConfig& features, const DatasetOptions& opts,
                                      RngStream rng);

double gamma_db_to_distortion(double gamma_db);
double distortion_to_gamma_db(double distortion);

/// Predicted distortion per candidate length, isotonic non-increasing.
std::vector<double> predict_distortion(const EvaluatorModel& m, const ImageSample& s,
                                       const CsiCodeword& cw_coarse, double sigma2);

/// Same but with precomputed features.
std::vector<double> predict_distortion_from_features(const EvaluatorModel& m,
                                                     const std::vector<double>& features);

}  // namespace scan
