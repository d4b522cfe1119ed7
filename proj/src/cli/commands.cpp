// SPDX-License-Identifier: Apache-2.0

#include "scan/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "scan/alloc/allocator.hpp"
#include "scan/eval/checkpoint.hpp"
#include "scan/eval/evaluator.hpp"
#include "scan/outage/outage.hpp"

namespace scan {

namespace {

constexpr const char* kVersion = "scan-sim 1.0.0";

// rng stream domains, one per purpose so commands never collide
enum Stream : uint64_t {
  kImageStream = 0xD474,
  kChannelStream = 0xC4A7,
  kNoiseStream = 0x7015,
  kDatasetStream = 0xDA7A,
  kSplitStream = 0x5217,
  kInitStream = 0x1717,
  kTrainStream = 0x7247,
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

const char* kRowHeader =
    "experiment_id,seed,snr_db,policy_or_b,gamma_th_db,psnr_mean,psnr_std,psnr_min,"
    "sdop,sdop_ci_low,sdop_ci_high,avg_length,eval_rmse";

struct ResultRow {
  std::string experiment_id;
  uint64_t seed = 0;
  double snr_db = 0.0;
  std::string policy_or_b;
  double gamma_th_db = 0.0;
  double psnr_mean = 0.0;
  double psnr_std = 0.0;
  double psnr_min = 0.0;
  double sdop = 0.0;
  double sdop_ci_low = 0.0;
  double sdop_ci_high = 0.0;
  double avg_length = 0.0;
  std::optional<double> eval_rmse;

  std::string csv() const {
    std::ostringstream os;
    os << experiment_id << ',' << seed << ',' << fmt(snr_db) << ',' << policy_or_b << ','
       << fmt(gamma_th_db) << ',' << fmt(psnr_mean) << ',' << fmt(psnr_std) << ','
       << fmt(psnr_min) << ',' << fmt(sdop) << ',' << fmt(sdop_ci_low) << ','
       << fmt(sdop_ci_high) << ',' << fmt(avg_length) << ','
       << (eval_rmse ? fmt(*eval_rmse) : "na");
    return os.str();
  }
};

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
};

Stats summarize(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double var = 0.0;
  s.min = v.front();
  for (double x : v) {
    var += (x - s.mean) * (x - s.mean);
    s.min = std::min(s.min, x);
  }
  s.stddev = std::sqrt(var / static_cast<double>(v.size()));
  return s;
}

std::ofstream open_out(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / name;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  return out;
}

void write_sidecar(const ExperimentConfig& cfg, const std::string& out_dir,
                   const std::string& command, const nlohmann::json& extra = {}) {
  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["command"] = command;
  meta["config"] = nlohmann::json::parse(config_to_json(cfg));
  if (!extra.is_null() && !extra.empty()) meta["details"] = extra;
  auto out = open_out(out_dir, command + ".meta.json");
  out << meta.dump(2) << "\n";
}

FeatureConfig feature_config(const ExperimentConfig& cfg) {
  FeatureConfig f;
  f.n_bands = cfg.evaluator.n_bands;
  f.lambda = cfg.lengths;
  f.rho = cfg.rho;
  f.n_streams = cfg.n_streams;
  f.coarse_length = cfg.coarse_length;
  return f;
}

std::filesystem::path checkpoint_path(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::path p(cfg.evaluator.checkpoint);
  if (p.is_absolute()) return p;
  return std::filesystem::path(out_dir) / p;
}

}  // namespace

void cmd_simulate_link(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto images = load_experiment_images(cfg);
  const CodecConfig codec = cfg.codec_config();
  const double d_th = cfg.d_th();

  auto csv = open_out(out_dir, "simulate-link.csv");
  csv << kRowHeader << "\n";

  // one channel per image, shared across the whole grid so the sweep is paired
  std::vector<ChannelRealization> channels;
  channels.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i)
    channels.push_back(sample_channel(cfg.channel, RngStream(cfg.seed, stream_key(kChannelStream, i))));

  for (double snr : cfg.snr_db_grid) {
    const LinkConfig link = cfg.link_config(snr);
    for (std::size_t bi = 0; bi < cfg.lengths.levels(); ++bi) {
      const int b = cfg.lengths.values[bi];
      std::vector<double> psnrs;
      long outages = 0;
      psnrs.reserve(images.size());
      for (std::size_t i = 0; i < images.size(); ++i) {
        const CsiCodeword cw = encode_csi(channels[i].h, b, cfg.projection_seed);
        RngStream noise(cfg.seed, stream_key(kNoiseStream, i, bi));
        const TransmitResult res = transmit_image(images[i], channels[i], cw, link, codec, noise);
        psnrs.push_back(res.psnr_db);
        if (is_outage(mse_loss(images[i], res.s_hat), d_th)) ++outages;
      }
      const Stats st = summarize(psnrs);
      const OutageEstimate est =
          wilson_interval(outages, static_cast<long>(images.size()), 0.99);
      ResultRow row;
      row.experiment_id = "simulate-link";
      row.seed = cfg.seed;
      row.snr_db = snr;
      row.policy_or_b = std::to_string(b);
      row.gamma_th_db = cfg.gamma_th_db;
      row.psnr_mean = st.mean;
      row.psnr_std = st.stddev;
      row.psnr_min = st.min;
      row.sdop = est.p_hat;
      row.sdop_ci_low = est.ci_low;
      row.sdop_ci_high = est.ci_high;
      row.avg_length = b;
      csv << row.csv() << "\n";
    }
  }
  write_sidecar(cfg, out_dir, "simulate-link");
}

void cmd_train_evaluator(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto images = load_experiment_images(cfg);
  const FeatureConfig features = feature_config(cfg);

  DatasetOptions dopts;
  dopts.channel = cfg.channel;
  dopts.link.power = cfg.power;
  dopts.link.n_streams = cfg.n_streams;
  dopts.codec = cfg.codec_config();
  dopts.sigma2_min = cfg.evaluator.sigma2_min;
  dopts.sigma2_max = cfg.evaluator.sigma2_max;
  dopts.trials_per_image = cfg.evaluator.dataset_trials;
  dopts.projection_seed = cfg.projection_seed;

  auto dataset = build_dataset(images, features, dopts, RngStream(cfg.seed, kDatasetStream));

  // deterministic holdout split
  std::vector<std::size_t> idx(dataset.size());
  std::iota(idx.begin(), idx.end(), 0);
  RngStream split_rng(cfg.seed, kSplitStream);
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[split_rng.uniform_below(i)]);
  const std::size_t n_holdout =
      static_cast<std::size_t>(cfg.evaluator.holdout_fraction * static_cast<double>(dataset.size()));
  std::vector<EvalSample> holdout, training;
  for (std::size_t i = 0; i < idx.size(); ++i)
    (i < n_holdout ? holdout : training).push_back(dataset[idx[i]]);

  RngStream init_rng(cfg.seed, kInitStream);
  EvaluatorModel model =
      make_evaluator(features, cfg.evaluator.hidden, cfg.evaluator.lambda_weight, init_rng);

  TrainOptions topts;
  topts.epochs = cfg.evaluator.epochs;
  topts.step_size = cfg.evaluator.step_size;
  topts.batch = cfg.evaluator.batch;
  const auto trace = train(model, training, topts, RngStream(cfg.seed, kTrainStream));

  {
    auto loss_csv = open_out(out_dir, "train-evaluator-loss.csv");
    loss_csv << "epoch,mean_loss\n";
    for (std::size_t e = 0; e < trace.size(); ++e)
      loss_csv << e << ',' << fmt(trace[e]) << "\n";
  }

  const auto rmse_over = [&](const std::vector<EvalSample>& set) {
    if (set.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& s : set) {
      const double err = s.gamma_t - forward(model, s.features, s.b).gamma_p;
      acc += err * err;
    }
    return std::sqrt(acc / static_cast<double>(set.size()));
  };
  const double holdout_rmse = rmse_over(holdout);
  const double train_rmse = rmse_over(training);

  save_checkpoint(model, checkpoint_path(cfg, out_dir).string());

  auto csv = open_out(out_dir, "train-evaluator.csv");
  csv << "experiment_id,seed,samples,train_samples,holdout_samples,epochs,final_loss,"
         "train_rmse_db,holdout_rmse_db\n";
  csv << "train-evaluator," << cfg.seed << ',' << dataset.size() << ',' << training.size() << ','
      << holdout.size() << ',' << trace.size() << ',' << fmt(trace.back()) << ','
      << fmt(train_rmse) << ',' << fmt(holdout_rmse) << "\n";

  nlohmann::json extra;
  extra["holdout_rmse_db"] = holdout_rmse;
  extra["checkpoint"] = checkpoint_path(cfg, out_dir).string();
  write_sidecar(cfg, out_dir, "train-evaluator", extra);
}

namespace {

struct TrialRecord {
  double psnr_db = 0.0;
  double mse = 0.0;
  int b = 0;
  std::optional<double> gamma_p;  // prediction at the chosen length
};

// one batch spans the whole image set so group allocation sees all of them
std::vector<TrialRecord> run_policy_tape(const ExperimentConfig& cfg,
                                         const std::vector<ImageSample>& images,
                                         const std::string& policy,
                                         std::optional<int> fixed_b,
                                         const EvaluatorModel* model, double snr,
                                         std::size_t snr_index) {
  const CodecConfig codec = cfg.codec_config();
  const LinkConfig link = cfg.link_config(snr);
  const double sigma2 = link.noise_variance;
  const double d_th = cfg.d_th();
  const std::size_t m = images.size();
  const long trials = cfg.trials;

  std::vector<TrialRecord> records;
  records.reserve(trials);

  for (long t0 = 0; t0 < trials; t0 += static_cast<long>(m)) {
    const std::size_t batch = std::min<std::size_t>(m, static_cast<std::size_t>(trials - t0));
    const std::size_t batch_index = static_cast<std::size_t>(t0) / m;

    std::vector<ChannelRealization> chans(batch);
    for (std::size_t i = 0; i < batch; ++i)
      chans[i] = sample_channel(
          cfg.channel, RngStream(cfg.seed, stream_key(kChannelStream, batch_index, i)));

    // choose codeword lengths
    std::vector<int> chosen(batch, fixed_b.value_or(cfg.lengths.shortest()));
    std::vector<std::optional<double>> gamma_p(batch);
    if (policy == "instance" || policy == "group") {
      std::vector<std::vector<double>> d_hat(batch);
      std::vector<std::vector<double>> feats(batch);
      for (std::size_t i = 0; i < batch; ++i) {
        const CsiCodeword coarse =
            encode_csi(chans[i].h, cfg.coarse_length, cfg.projection_seed);
        feats[i] = extract_features(images[i], coarse, sigma2, model->features);
        d_hat[i] = predict_distortion_from_features(*model, feats[i]);
      }
      if (policy == "instance") {
        for (std::size_t i = 0; i < batch; ++i)
          chosen[i] = solve_instance(d_hat[i], d_th, cfg.lengths).b;
      } else {
        const OutageTable table = build_outage_table(d_hat, d_th, cfg.lengths);
        const AllocationStrategy omega = solve_group(table, cfg.l_th);
        for (std::size_t i = 0; i < batch; ++i)
          chosen[i] = cfg.lengths.values[static_cast<std::size_t>(omega.level_index[i])];
      }
      for (std::size_t i = 0; i < batch; ++i) {
        const std::size_t level = static_cast<std::size_t>(
            std::lower_bound(cfg.lengths.values.begin(), cfg.lengths.values.end(), chosen[i]) -
            cfg.lengths.values.begin());
        gamma_p[i] = distortion_to_gamma_db(d_hat[i][level]);
      }
    }

    for (std::size_t i = 0; i < batch; ++i) {
      const CsiCodeword cw = encode_csi(chans[i].h, chosen[i], cfg.projection_seed);
      RngStream noise(cfg.seed, stream_key(kNoiseStream, stream_key(batch_index, i), snr_index));
      const TransmitResult res = transmit_image(images[i], chans[i], cw, link, codec, noise);
      TrialRecord rec;
      rec.psnr_db = res.psnr_db;
      rec.mse = mse_loss(images[i], res.s_hat);
      rec.b = chosen[i];
      rec.gamma_p = gamma_p[i];
      records.push_back(rec);
    }
  }
  return records;
}

}  // namespace

void cmd_eval_sdop(const ExperimentConfig& cfg, const std::string& out_dir,
                   const std::string& policy, std::optional<int> fixed_b) {
  if (policy != "fixed" && policy != "instance" && policy != "group")
    throw ConfigError("policy: must be one of fixed|instance|group");
  if (policy == "fixed" && !fixed_b) throw ConfigError("fixed policy requires --fixed-b");
  if (fixed_b && (*fixed_b < 1 ||
                  *fixed_b > static_cast<int>(2 * cfg.channel.n_rx * cfg.channel.n_tx)))
    throw ConfigError("fixed-b: out of range [1, 2*n_rx*n_tx]");

  EvaluatorModel model;
  const bool adaptive = policy != "fixed";
  if (adaptive) {
    const auto path = checkpoint_path(cfg, out_dir);
    if (!std::filesystem::exists(path))
      throw std::runtime_error("eval-sdop: missing evaluator checkpoint " + path.string() +
                               " (run train-evaluator first)");
    model = load_checkpoint(path.string());
  }

  const auto images = load_experiment_images(cfg);
  const double d_th = cfg.d_th();

  auto csv = open_out(out_dir, "eval-sdop-" + policy + ".csv");
  csv << kRowHeader << "\n";

  for (std::size_t si = 0; si < cfg.snr_db_grid.size(); ++si) {
    const double snr = cfg.snr_db_grid[si];
    const auto records = run_policy_tape(cfg, images, policy, fixed_b,
                                         adaptive ? &model : nullptr, snr, si);
    std::vector<double> psnrs;
    std::vector<double> lengths;
    long outages = 0;
    double rmse_acc = 0.0;
    long rmse_count = 0;
    for (const auto& rec : records) {
      psnrs.push_back(rec.psnr_db);
      lengths.push_back(static_cast<double>(rec.b));
      if (is_outage(rec.mse, d_th)) ++outages;
      if (rec.gamma_p) {
        const double err = rec.psnr_db - *rec.gamma_p;
        rmse_acc += err * err;
        ++rmse_count;
      }
    }
    const Stats st = summarize(psnrs);
    const OutageEstimate est =
        wilson_interval(outages, static_cast<long>(records.size()), 0.99);
    ResultRow row;
    row.experiment_id = "eval-sdop";
    row.seed = cfg.seed;
    row.snr_db = snr;
    row.policy_or_b = policy == "fixed" ? std::to_string(*fixed_b) : policy;
    row.gamma_th_db = cfg.gamma_th_db;
    row.psnr_mean = st.mean;
    row.psnr_std = st.stddev;
    row.psnr_min = st.min;
    row.sdop = est.p_hat;
    row.sdop_ci_low = est.ci_low;
    row.sdop_ci_high = est.ci_high;
    row.avg_length = summarize(lengths).mean;
    if (rmse_count > 0) row.eval_rmse = std::sqrt(rmse_acc / static_cast<double>(rmse_count));
    csv << row.csv() << "\n";
  }

  nlohmann::json extra;
  extra["policy"] = policy;
  if (fixed_b) extra["fixed_b"] = *fixed_b;
  write_sidecar(cfg, out_dir, "eval-sdop-" + policy, extra);
}

void cmd_allocate(const AllocateArgs& args, const std::string& out_dir) {
  std::ifstream in(args.table_file);
  if (!in) throw std::runtime_error("allocate: cannot open table " + args.table_file);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw FormatError("allocate: bad number '" + cell + "' at line " +
                          std::to_string(lineno));
      }
    }
    if (row.size() != args.lambda.levels())
      throw FormatError("allocate: line " + std::to_string(lineno) + " has " +
                        std::to_string(row.size()) + " columns, expected " +
                        std::to_string(args.lambda.levels()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("allocate: empty table");

  OutageTable table;
  if (args.gamma_th_db || args.d_th) {
    const double d_th = args.d_th ? *args.d_th : gamma_db_to_distortion(*args.gamma_th_db);
    table = build_outage_table(rows, d_th, args.lambda);
  } else {
    table.lambda = args.lambda;
    table.m = rows.size();
    table.g.resize(rows.size() * args.lambda.levels());
    for (std::size_t m = 0; m < rows.size(); ++m)
      for (std::size_t t = 0; t < args.lambda.levels(); ++t) {
        const double v = rows[m][t];
        if (v != 0.0 && v != 1.0)
          throw FormatError("allocate: table entries must be 0/1 unless a threshold is given");
        table.g[m * args.lambda.levels() + t] = v != 0.0 ? 1 : 0;
      }
  }

  const AllocationStrategy omega = solve_group(table, args.l_th, args.literal_revert);
  const int outages = predicted_outages(table, omega);

  auto csv = open_out(out_dir, "allocate.csv");
  csv << "image,level_index,length\n";
  for (std::size_t i = 0; i < omega.level_index.size(); ++i)
    csv << i << ',' << omega.level_index[i] << ','
        << omega.lambda.values[static_cast<std::size_t>(omega.level_index[i])] << "\n";

  nlohmann::json report;
  report["images"] = table.m;
  report["levels"] = args.lambda.levels();
  report["l_th"] = args.l_th;
  report["average_length"] = average_length(omega);
  report["predicted_outages"] = outages;
  report["indicator_bits"] =
      indicator_bits(static_cast<int>(args.lambda.levels()), static_cast<int>(table.m));
  try {
    const OracleResult oracle = exhaustive_oracle(table, args.l_th);
    report["oracle_outages"] = oracle.min_outages;
    report["greedy_gap"] = outages - oracle.min_outages;
  } catch (const std::invalid_argument&) {
    report["oracle_outages"] = nullptr;  // search space too large
  }
  {
    auto rep = open_out(out_dir, "allocate.meta.json");
    nlohmann::json meta;
    meta["version"] = kVersion;
    meta["command"] = "allocate";
    meta["details"] = report;
    rep << meta.dump(2) << "\n";
  }
  std::printf("allocate: %zu images, avg length %s (budget %s), predicted outages %d\n",
              table.m, fmt(average_length(omega)).c_str(), fmt(args.l_th).c_str(), outages);
  if (report.contains("greedy_gap") && !report["greedy_gap"].is_null())
    std::printf("allocate: oracle optimum %d (gap %d)\n",
                report["oracle_outages"].get<int>(), report["greedy_gap"].get<int>());
}

}  // namespace scan
