// SPDX-License-Identifier: Apache-2.0

#include "scan/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "scan/eval/evaluator.hpp"

namespace scan {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError(field + ": " + why);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(key, "wrong type");
  }
}

void check_finite(double v, const std::string& field) {
  if (!std::isfinite(v)) fail(field, "must be finite");
}

}  // namespace

CodecConfig ExperimentConfig::codec_config() const {
  CodecConfig c;
  c.rho = rho;
  c.n_streams = n_streams;
  return c;
}

LinkConfig ExperimentConfig::link_config(double snr) const {
  LinkConfig l;
  l.power = power;
  l.noise_variance = noise_variance_for_snr_db(power, snr);
  l.n_streams = n_streams;
  return l;
}

double ExperimentConfig::d_th() const { return gamma_db_to_distortion(gamma_th_db); }

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig cfg;
  cfg.seed = get_or<uint64_t>(j, "seed", cfg.seed);

  if (j.contains("channel")) {
    const json& c = j.at("channel");
    cfg.channel.n_tx = get_or<std::size_t>(c, "n_tx", cfg.channel.n_tx);
    cfg.channel.n_rx = get_or<std::size_t>(c, "n_rx", cfg.channel.n_rx);
    cfg.channel.n_clusters = get_or<std::size_t>(c, "n_clusters", cfg.channel.n_clusters);
    cfg.channel.n_rays = get_or<std::size_t>(c, "n_rays", cfg.channel.n_rays);
    const double spread_deg =
        get_or<double>(c, "angle_spread_deg", cfg.channel.angle_spread_rad * 180.0 / std::numbers::pi);
    cfg.channel.angle_spread_rad = spread_deg * std::numbers::pi / 180.0;
    if (cfg.channel.n_tx == 0) fail("channel.n_tx", "must be >= 1");
    if (cfg.channel.n_rx == 0) fail("channel.n_rx", "must be >= 1");
    if (cfg.channel.n_clusters == 0) fail("channel.n_clusters", "must be >= 1");
    if (cfg.channel.n_rays == 0) fail("channel.n_rays", "must be >= 1");
    if (cfg.channel.angle_spread_rad < 0) fail("channel.angle_spread_deg", "must be >= 0");
  }

  if (j.contains("link")) {
    const json& l = j.at("link");
    cfg.power = get_or<double>(l, "power", cfg.power);
    if (!(cfg.power > 0.0)) fail("link.power", "must be > 0");
    cfg.n_streams = get_or<std::size_t>(l, "n_streams", cfg.n_streams);
    if (cfg.n_streams < 1 || cfg.n_streams > std::min(cfg.channel.n_rx, cfg.channel.n_tx))
      fail("link.n_streams", "must satisfy 1 <= d <= min(n_rx, n_tx)");
    if (l.contains("snr_db_grid")) {
      cfg.snr_db_grid = get_or<std::vector<double>>(l, "snr_db_grid", cfg.snr_db_grid);
      if (cfg.snr_db_grid.empty()) fail("link.snr_db_grid", "must not be empty");
      for (std::size_t i = 0; i < cfg.snr_db_grid.size(); ++i)
        check_finite(cfg.snr_db_grid[i], "link.snr_db_grid[" + std::to_string(i) + "]");
    }
  }

  if (j.contains("lengths")) {
    const auto vals = get_or<std::vector<int>>(j, "lengths", cfg.lengths.values);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (vals[i] <= 0) fail("lengths[" + std::to_string(i) + "]", "must be positive");
      if (i > 0 && vals[i] <= vals[i - 1])
        fail("lengths[" + std::to_string(i) + "]", "must be strictly ascending");
    }
    if (vals.empty()) fail("lengths", "must not be empty");
    cfg.lengths = LengthSet(vals);
  }
  const int max_len = static_cast<int>(2 * cfg.channel.n_rx * cfg.channel.n_tx);
  if (cfg.lengths.longest() > max_len)
    fail("lengths", "longest value exceeds 2*n_rx*n_tx = " + std::to_string(max_len));

  cfg.coarse_length = get_or<int>(j, "coarse_length", cfg.coarse_length);
  if (cfg.coarse_length < 1) fail("coarse_length", "must be >= 1");
  if (cfg.coarse_length > cfg.lengths.shortest())
    fail("coarse_length", "must not exceed the shortest candidate length");

  cfg.rho = get_or<double>(j, "rho", cfg.rho);
  if (!(cfg.rho > 0.0) || cfg.rho > 1.0) fail("rho", "must be in (0, 1]");

  cfg.gamma_th_db = get_or<double>(j, "gamma_th_db", cfg.gamma_th_db);
  check_finite(cfg.gamma_th_db, "gamma_th_db");
  if (j.contains("d_th")) {
    const double d = get_or<double>(j, "d_th", 0.0);
    if (!(d > 0.0)) fail("d_th", "must be > 0");
    cfg.gamma_th_db = distortion_to_gamma_db(d);
  }

  cfg.l_th = get_or<double>(j, "l_th", cfg.l_th);
  if (cfg.l_th < cfg.lengths.shortest() || cfg.l_th > cfg.lengths.longest())
    fail("l_th", "must satisfy L_1 <= l_th <= L_T");

  cfg.trials = get_or<long>(j, "trials", cfg.trials);
  if (cfg.trials < 1) fail("trials", "must be >= 1");

  cfg.projection_seed = get_or<uint64_t>(j, "projection_seed", cfg.projection_seed);

  if (j.contains("images")) {
    const json& im = j.at("images");
    if (im.contains("cifar_path")) {
      cfg.cifar_path = get_or<std::string>(im, "cifar_path", "");
      if (cfg.cifar_path->empty()) fail("images.cifar_path", "must not be empty");
    }
    if (im.contains("synthetic")) {
      const json& sy = im.at("synthetic");
      cfg.synthetic.count = get_or<std::size_t>(sy, "count", cfg.synthetic.count);
      cfg.synthetic.cutoff_min = get_or<double>(sy, "cutoff_min", cfg.synthetic.cutoff_min);
      cfg.synthetic.cutoff_max = get_or<double>(sy, "cutoff_max", cfg.synthetic.cutoff_max);
      if (cfg.synthetic.count == 0) fail("images.synthetic.count", "must be >= 1");
      if (!(cfg.synthetic.cutoff_min > 0.0) || cfg.synthetic.cutoff_min > 1.0)
        fail("images.synthetic.cutoff_min", "must be in (0, 1]");
      if (cfg.synthetic.cutoff_max < cfg.synthetic.cutoff_min || cfg.synthetic.cutoff_max > 1.0)
        fail("images.synthetic.cutoff_max", "must be in [cutoff_min, 1]");
    }
  }

  if (j.contains("evaluator")) {
    const json& ev = j.at("evaluator");
    EvaluatorConfig& e = cfg.evaluator;
    e.lambda_weight = get_or<double>(ev, "lambda", e.lambda_weight);
    if (e.lambda_weight < 0.0) fail("evaluator.lambda", "must be >= 0");
    e.hidden = get_or<std::vector<std::size_t>>(ev, "hidden", e.hidden);
    for (std::size_t i = 0; i < e.hidden.size(); ++i)
      if (e.hidden[i] == 0) fail("evaluator.hidden[" + std::to_string(i) + "]", "must be >= 1");
    e.step_size = get_or<double>(ev, "step_size", e.step_size);
    if (!(e.step_size >= 0.0)) fail("evaluator.step_size", "must be >= 0");
    e.epochs = get_or<std::size_t>(ev, "epochs", e.epochs);
    e.batch = get_or<std::size_t>(ev, "batch", e.batch);
    if (e.batch == 0) fail("evaluator.batch", "must be >= 1");
    e.n_bands = get_or<std::size_t>(ev, "n_bands", e.n_bands);
    if (e.n_bands == 0) fail("evaluator.n_bands", "must be >= 1");
    e.dataset_trials = get_or<std::size_t>(ev, "dataset_trials", e.dataset_trials);
    if (e.dataset_trials == 0) fail("evaluator.dataset_trials", "must be >= 1");
    e.sigma2_min = get_or<double>(ev, "sigma2_min", e.sigma2_min);
    e.sigma2_max = get_or<double>(ev, "sigma2_max", e.sigma2_max);
    if (!(e.sigma2_min > 0.0)) fail("evaluator.sigma2_min", "must be > 0");
    if (e.sigma2_max < e.sigma2_min) fail("evaluator.sigma2_max", "must be >= sigma2_min");
    e.holdout_fraction = get_or<double>(ev, "holdout_fraction", e.holdout_fraction);
    if (e.holdout_fraction < 0.0 || e.holdout_fraction >= 1.0)
      fail("evaluator.holdout_fraction", "must be in [0, 1)");
    e.checkpoint = get_or<std::string>(ev, "checkpoint", e.checkpoint);
  }

  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["channel"] = {{"n_tx", cfg.channel.n_tx},
                  {"n_rx", cfg.channel.n_rx},
                  {"n_clusters", cfg.channel.n_clusters},
                  {"n_rays", cfg.channel.n_rays},
                  {"angle_spread_deg", cfg.channel.angle_spread_rad * 180.0 / std::numbers::pi}};
  j["link"] = {{"power", cfg.power},
               {"n_streams", cfg.n_streams},
               {"snr_db_grid", cfg.snr_db_grid}};
  j["lengths"] = cfg.lengths.values;
  j["coarse_length"] = cfg.coarse_length;
  j["rho"] = cfg.rho;
  j["gamma_th_db"] = cfg.gamma_th_db;
  j["l_th"] = cfg.l_th;
  j["trials"] = cfg.trials;
  j["projection_seed"] = cfg.projection_seed;
  if (cfg.cifar_path) j["images"]["cifar_path"] = *cfg.cifar_path;
  j["images"]["synthetic"] = {{"count", cfg.synthetic.count},
                              {"cutoff_min", cfg.synthetic.cutoff_min},
                              {"cutoff_max", cfg.synthetic.cutoff_max}};
  j["evaluator"] = {{"lambda", cfg.evaluator.lambda_weight},
                    {"hidden", cfg.evaluator.hidden},
                    {"step_size", cfg.evaluator.step_size},
                    {"epochs", cfg.evaluator.epochs},
                    {"batch", cfg.evaluator.batch},
                    {"n_bands", cfg.evaluator.n_bands},
                    {"dataset_trials", cfg.evaluator.dataset_trials},
                    {"sigma2_min", cfg.evaluator.sigma2_min},
                    {"sigma2_max", cfg.evaluator.sigma2_max},
                    {"holdout_fraction", cfg.evaluator.holdout_fraction},
                    {"checkpoint", cfg.evaluator.checkpoint}};
  return j.dump(2);
}

std::vector<ImageSample> load_experiment_images(const ExperimentConfig& cfg) {
  if (cfg.cifar_path) return read_cifar_batch(*cfg.cifar_path);
  // deterministic complexity ramp across the set
  std::vector<ImageSample> images;
  images.reserve(cfg.synthetic.count);
  for (std::size_t i = 0; i < cfg.synthetic.count; ++i) {
    SyntheticSpec spec;
    const double f = cfg.synthetic.count > 1
                         ? static_cast<double>(i) / static_cast<double>(cfg.synthetic.count - 1)
                         : 0.0;
    spec.cutoff = cfg.synthetic.cutoff_min +
                  (cfg.synthetic.cutoff_max - cfg.synthetic.cutoff_min) * f;
    images.push_back(synth_images(spec, 1, RngStream(cfg.seed, stream_key(0xD474, i)))[0]);
  }
  return images;
}

}  // namespace scan
