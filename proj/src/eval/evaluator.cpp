// SPDX-License-Identifier: Apache-2.0

#include "scan/eval/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scan {

namespace {

std::vector<double> residual_input(const EvaluatorModel& m, const std::vector<double>& features,
                                   int b) {
  std::vector<double> in = features;
  in.push_back(static_cast<double>(b) / m.b_scale);
  return in;
}

}  // namespace

EvaluatorModel make_evaluator(const FeatureConfig& features,
                              const std::vector<std::size_t>& hidden, double lambda_weight,
                              RngStream& rng) {
  if (lambda_weight < 0.0) throw std::invalid_argument("make_evaluator: lambda must be >= 0");
  EvaluatorModel m;
  m.features = features;
  m.lambda_weight = lambda_weight;
  m.b_scale = static_cast<double>(features.lambda.longest());

  std::vector<std::size_t> content_dims{features.feature_dim()};
  content_dims.insert(content_dims.end(), hidden.begin(), hidden.end());
  content_dims.push_back(1 + features.n_bands);
  m.content_net = Mlp(content_dims, rng);

  std::vector<std::size_t> residual_dims{features.feature_dim() + 1};
  residual_dims.insert(residual_dims.end(), hidden.begin(), hidden.end());
  residual_dims.push_back(1 + features.n_bands);
  m.residual_net = Mlp(residual_dims, rng);
  return m;
}

ForwardOut forward(const EvaluatorModel& m, const std::vector<double>& features, int b) {
  if (features.size() != m.content_net.input_dim())
    throw std::invalid_argument("forward: feature dimension mismatch");
  const std::vector<double> c_out = m.content_net.forward(features);
  const std::vector<double> r_out = m.residual_net.forward(residual_input(m, features, b));

  ForwardOut out;
  out.gamma_base = c_out[0];
  out.gamma_d = r_out[0];
  out.gamma_p = out.gamma_base - out.gamma_d;
  out.f_p.assign(c_out.begin() + 1, c_out.end());
  out.band_err_p.assign(r_out.begin() + 1, r_out.end());
  return out;
}

double loss_c(double gamma_t, double gamma_p) {
  const double d = gamma_t - gamma_p;
  return d * d;
}

double loss_p(const EvalSample& sample, const ForwardOut& out) {
  if (sample.f_t.size() != out.f_p.size() || sample.band_err_t.size() != out.band_err_p.size())
    throw std::invalid_argument("loss_p: head dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < out.band_err_p.size(); ++i) {
    const double d = out.band_err_p[i] - sample.band_err_t[i];
    acc += d * d;
  }
  for (std::size_t i = 0; i < out.f_p.size(); ++i) {
    const double d = out.f_p[i] - sample.f_t[i];
    acc += d * d;
  }
  return acc;
}

double total_loss(const EvaluatorModel& m, const EvalSample& sample, const ForwardOut& out) {
  return m.lambda_weight * loss_c(sample.gamma_t, out.gamma_p) + loss_p(sample, out);
}

double total_loss(const EvaluatorModel& m, const EvalSample& sample) {
  return total_loss(m, sample, forward(m, sample.features, sample.b));
}

void accumulate_gradients(const EvaluatorModel& m, const EvalSample& sample,
                          EvaluatorGrads& grads) {
  MlpWorkspace c_ws, r_ws;
  const std::vector<double> c_out = m.content_net.forward(sample.features, &c_ws);
  const std::vector<double> r_out =
      m.residual_net.forward(residual_input(m, sample.features, sample.b), &r_ws);

  const double gamma_p = c_out[0] - r_out[0];
  const double dgamma_p = -2.0 * m.lambda_weight * (sample.gamma_t - gamma_p);

  std::vector<double> dc(c_out.size());
  dc[0] = dgamma_p;
  for (std::size_t i = 0; i + 1 < c_out.size(); ++i)
    dc[i + 1] = 2.0 * (c_out[i + 1] - sample.f_t[i]);

  std::vector<double> dr(r_out.size());
  dr[0] = -dgamma_p;
  for (std::size_t i = 0; i + 1 < r_out.size(); ++i)
    dr[i + 1] = 2.0 * (r_out[i + 1] - sample.band_err_t[i]);

  m.content_net.backward(dc, c_ws, grads.content);
  m.residual_net.backward(dr, r_ws, grads.residual);
}

std::vector<double> train(EvaluatorModel& m, const std::vector<EvalSample>& dataset,
                          const TrainOptions& opts, RngStream rng) {
  if (dataset.empty()) throw std::invalid_argument("train: dataset is empty");
  const std::size_t batch = std::max<std::size_t>(1, opts.batch);

  std::vector<std::size_t> idx(dataset.size());
  std::iota(idx.begin(), idx.end(), 0);

  std::vector<double> trace;
  trace.reserve(opts.epochs);
  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    // Fisher-Yates from the stream keeps shuffling reproducible
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[rng.uniform_below(i)]);

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < idx.size(); start += batch) {
      const std::size_t stop = std::min(idx.size(), start + batch);
      EvaluatorGrads grads{m.content_net.zero_grads(), m.residual_net.zero_grads()};
      for (std::size_t i = start; i < stop; ++i) {
        const EvalSample& sample = dataset[idx[i]];
        epoch_loss += total_loss(m, sample);
        accumulate_gradients(m, sample, grads);
      }
      const double step = opts.step_size / static_cast<double>(stop - start);
      m.content_net.apply_update(grads.content, step);
      m.residual_net.apply_update(grads.residual, step);
    }
    epoch_loss /= static_cast<double>(dataset.size());
    trace.push_back(epoch_loss);
    if (!std::isfinite(epoch_loss) || !m.content_net.all_finite() ||
        !m.residual_net.all_finite())
      throw TrainingDivergedError(
          "train: loss became non-finite at epoch " + std::to_string(epoch), trace);
  }
  return trace;
}

std::vector<EvalSample> build_dataset(const std::vector<ImageSample>& images,
                                      const FeatureConfig& features, const DatasetOptions& opts,
                                      RngStream rng) {
  if (images.empty()) throw std::invalid_argument("build_dataset: no images");
  if (!(opts.sigma2_min > 0.0) || opts.sigma2_max < opts.sigma2_min)
    throw std::invalid_argument("build_dataset: bad sigma2 range");

  std::vector<EvalSample> out;
  out.reserve(images.size() * opts.trials_per_image);
  const double log_lo = std::log(opts.sigma2_min);
  const double log_hi = std::log(opts.sigma2_max);

  for (std::size_t img = 0; img < images.size(); ++img) {
    for (std::size_t trial = 0; trial < opts.trials_per_image; ++trial) {
      RngStream draw = rng.fork(stream_key(img, trial, 0));
      const int b = features.lambda.values[draw.uniform_below(features.lambda.levels())];
      const double sigma2 = std::exp(log_lo + (log_hi - log_lo) * draw.uniform());
      const ChannelRealization ch =
          sample_channel(opts.channel, rng.fork(stream_key(img, trial, 1)));

      LinkConfig link = opts.link;
      link.noise_variance = sigma2;
      const CsiCodeword cw = encode_csi(ch.h, b, opts.projection_seed);
      const CsiCodeword coarse = encode_csi(ch.h, features.coarse_length, opts.projection_seed);

      RngStream noise = rng.fork(stream_key(img, trial, 2));
      const TransmitResult res = transmit_image(images[img], ch, cw, link, opts.codec, noise);

      EvalSample sample;
      sample.features = extract_features(images[img], coarse, sigma2, features);
      sample.b = b;
      sample.sigma2 = sigma2;
      sample.gamma_t = res.psnr_db;
      sample.f_t = teacher_features(res.sent, features.n_bands);
      sample.band_err_t = band_errors(images[img], res.s_hat, features.n_bands);
      out.push_back(std::move(sample));
    }
  }
  return out;
}

double gamma_db_to_distortion(double gamma_db) { return std::pow(10.0, -gamma_db / 10.0); }

double distortion_to_gamma_db(double distortion) {
  if (!(distortion > 0.0))
    throw std::invalid_argument("distortion_to_gamma_db: distortion must be > 0");
  return -10.0 * std::log10(distortion);
}

std::vector<double> predict_distortion_from_features(const EvaluatorModel& m,
                                                     const std::vector<double>& features) {
  const auto& lambda = m.features.lambda;
  std::vector<double> d(lambda.levels());
  for (std::size_t t = 0; t < lambda.levels(); ++t)
    d[t] = gamma_db_to_distortion(forward(m, features, lambda.values[t]).gamma_p);
  // running best: longer codewords can only help
  for (std::size_t t = 1; t < d.size(); ++t) d[t] = std::min(d[t], d[t - 1]);
  return d;
}

std::vector<double> predict_distortion(const EvaluatorModel& m, const ImageSample& s,
                                       const CsiCodeword& cw_coarse, double sigma2) {
  return predict_distortion_from_features(
      m, extract_features(s, cw_coarse, sigma2, m.features));
}

}  // namespace scan
