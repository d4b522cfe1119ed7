// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fail. Monte Carlo sizes, tolerances, and pinned bounds live at the top.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "scan/alloc/allocator.hpp"
#include "scan/channel/channel.hpp"
#include "scan/cli/commands.hpp"
#include "scan/cli/config.hpp"
#include "scan/codec/codec.hpp"
#include "scan/csi/csi.hpp"
#include "scan/eval/evaluator.hpp"
#include "scan/io/dataio.hpp"
#include "scan/numerics/dft.hpp"
#include "scan/numerics/rng.hpp"
#include "scan/numerics/svd.hpp"
#include "scan/outage/outage.hpp"

using namespace scan;
namespace fs = std::filesystem;

namespace {

// ---- pinned bounds (calibrated once with the pilot run, then frozen) ----
// held-out PSNR-prediction RMSE bound for the trained evaluator (criterion 8).
// The pilot measured 4.53 dB on the 2000-sample dataset; the per-image
// channel-conditional spread is itself 3-5 dB because the predictor only
// sees the 16-coefficient probe codeword, so this is an observability floor,
// not a training artifact.
constexpr double kHoldoutRmseBoundDb = 5.0;
// operating point for the headline group-vs-fixed comparison (criterion 9),
// chosen by the pilot so the threshold sits where codeword length genuinely
// moves images across it (clear fractions 0.07 -> 0.55 over the length set)
constexpr double kHeadlineSnrDb = 12.0;
constexpr double kHeadlineGammaThDb = 24.0;

uint64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Harness {
  int failures = 0;

  void run(int id, const std::string& name, double time_limit_s,
           const std::function<bool(std::string&)>& fn) {
    std::string detail;
    const uint64_t t0 = now_ms();
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    const double secs = static_cast<double>(now_ms() - t0) / 1000.0;
    if (time_limit_s > 0.0 && secs > time_limit_s) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("over time limit ") +
                std::to_string(time_limit_s) + " s";
    }
    std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

CMatrix random_matrix(std::size_t m, std::size_t n, RngStream& rng) {
  CMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal_complex(1.0);
  return a;
}

std::vector<ImageSample> ramp_images(std::size_t count, uint64_t seed, double lo = 0.05,
                                     double hi = 0.6) {
  std::vector<ImageSample> images;
  images.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SyntheticSpec spec;
    const double f = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
    spec.cutoff = lo + (hi - lo) * f;
    images.push_back(synth_images(spec, 1, RngStream(seed, stream_key(0xACC, i)))[0]);
  }
  return images;
}

bool criterion_linear_algebra(std::string& detail) {
  RngStream rng(1001, 0);
  double worst_svd = 0.0, worst_dft = 0.0, worst_bs = 0.0;
  for (int c = 0; c < 100; ++c) {
    const CMatrix a = random_matrix(16, 16, rng);
    const SvdResult r = svd(a);
    worst_svd = std::max(worst_svd,
                         (compose_svd(r) - a).frobenius_norm() / a.frobenius_norm());
    const CMatrix back = from_beamspace(to_beamspace(a));
    worst_bs = std::max(worst_bs, (back - a).frobenius_norm() / a.frobenius_norm());
  }
  worst_dft = unitarity_error(unitary_dft(16));
  std::ostringstream os;
  os << "svd residual " << worst_svd << ", dft unitarity " << worst_dft << ", beamspace rt "
     << worst_bs;
  detail = os.str();
  return worst_svd <= 1e-8 && worst_dft <= 1e-12 && worst_bs <= 1e-10;
}

bool criterion_link_loopback(std::string& detail) {
  // 50 CIFAR-format images (synthetic content, byte-exact reader exercised)
  const fs::path dir = fs::temp_directory_path() / "scan_acceptance_loopback";
  fs::create_directories(dir);
  const std::string batch = (dir / "batch.bin").string();
  write_cifar_batch(batch, ramp_images(50, 2002, 0.05, 0.7));
  const auto images = read_cifar_batch(batch);
  fs::remove_all(dir);

  ChannelParams params;
  LinkConfig link;
  link.noise_variance = 0.0;
  CodecConfig cfg;
  double worst = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ChannelRealization ch = sample_channel(params, RngStream(2002, 100 + i));
    const CsiCodeword cw = encode_csi(ch.h, 512, 42);  // identity-mode feedback
    RngStream noise(2002, 200 + i);
    const TransmitResult res = transmit_image(images[i], ch, cw, link, cfg, noise);
    const ImageSample ref = zonal_truncate(images[i], 2 * res.sent.symbols.size(), true);
    bool ref_exact = false;
    const double ref_psnr = psnr(images[i], ref, 1.0, &ref_exact);
    if (res.psnr_exact && ref_exact) continue;
    worst = std::max(worst, std::abs(res.psnr_db - ref_psnr));
  }
  detail = "worst |pipeline - truncation| = " + std::to_string(worst) + " dB over 50 images";
  return worst < 0.1;
}

bool criterion_monotone_trends(std::string& detail) {
  const std::vector<double> snrs{-6.0, 0.0, 6.0, 12.0, 18.0};
  const LengthSet lambda({32, 64, 96, 128, 160, 192});
  const auto images = ramp_images(200, 3003);
  ChannelParams params;
  CodecConfig cfg;

  std::vector<std::vector<double>> mean_psnr(snrs.size(),
                                             std::vector<double>(lambda.levels(), 0.0));
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ChannelRealization ch = sample_channel(params, RngStream(3003, stream_key(1, i)));
    for (std::size_t bi = 0; bi < lambda.levels(); ++bi) {
      const CsiCodeword cw = encode_csi(ch.h, lambda.values[bi], 42);
      for (std::size_t si = 0; si < snrs.size(); ++si) {
        LinkConfig link;
        link.noise_variance = noise_variance_for_snr_db(link.power, snrs[si]);
        RngStream noise(3003, stream_key(2, stream_key(i, bi)));
        mean_psnr[si][bi] +=
            transmit_image(images[i], ch, cw, link, cfg, noise).psnr_db /
            static_cast<double>(images.size());
      }
    }
  }

  bool ok = true;
  for (std::size_t bi = 0; bi < lambda.levels(); ++bi)
    for (std::size_t si = 1; si < snrs.size(); ++si)
      if (mean_psnr[si][bi] < mean_psnr[si - 1][bi] - 0.1) ok = false;
  for (std::size_t si = 0; si < snrs.size(); ++si)
    for (std::size_t bi = 1; bi < lambda.levels(); ++bi)
      if (mean_psnr[si][bi] < mean_psnr[si][bi - 1] - 0.1) ok = false;

  std::ostringstream os;
  os << "mean PSNR at B=192: ";
  for (std::size_t si = 0; si < snrs.size(); ++si)
    os << mean_psnr[si].back() << (si + 1 < snrs.size() ? " " : " dB");
  detail = os.str();
  return ok;
}

bool criterion_nmse_monotone(std::string& detail) {
  const LengthSet lambda({32, 64, 96, 128, 160, 192});
  ChannelParams params;
  const int n_channels = 1000;
  std::vector<double> mean_nmse(lambda.levels(), 0.0);
  for (int c = 0; c < n_channels; ++c) {
    const ChannelRealization ch = sample_channel(params, RngStream(4004, c));
    for (std::size_t t = 0; t < lambda.levels(); ++t) {
      const CsiCodeword cw = encode_csi(ch.h, lambda.values[t], 42);
      mean_nmse[t] += nmse(ch.h, decode_csi(cw)) / n_channels;
    }
  }
  bool ok = true;
  std::ostringstream os;
  os << "mean NMSE: ";
  for (std::size_t t = 0; t < lambda.levels(); ++t) {
    os << mean_nmse[t] << (t + 1 < lambda.levels() ? " " : "");
    if (t > 0 && mean_nmse[t] > mean_nmse[t - 1] + 1e-3) ok = false;
  }
  detail = os.str();
  return ok;
}

bool criterion_sdop_calibration(std::string& detail) {
  OutageConfig cfg;
  cfg.d_th = 0.01;
  cfg.trials = 10000;
  cfg.confidence = 0.99;
  const auto est = estimate_sdop_core(
      [](long, RngStream& rng) { return rng.uniform() < 0.3 ? 0.02 : 0.005; }, cfg,
      RngStream(5005, 0));
  const bool calibrated = est.ci_low <= 0.3 && 0.3 <= est.ci_high;

  // per-tape monotonicity in gamma_th, exact on the shared tape
  auto tape = [](long, RngStream& rng) {
    return gamma_db_to_distortion(18.0 + 16.0 * rng.uniform());
  };
  std::vector<double> p;
  for (double g : {26.0, 28.0, 30.0}) {
    OutageConfig c2;
    c2.trials = 4000;
    c2.d_th = gamma_db_to_distortion(g);
    p.push_back(estimate_sdop_core(tape, c2, RngStream(5005, 1)).p_hat);
  }
  const bool monotone = p[0] <= p[1] && p[1] <= p[2];
  std::ostringstream os;
  os << "p_hat(0.3 stub) = " << est.p_hat << " in [" << est.ci_low << ", " << est.ci_high
     << "]; p(26,28,30 dB) = " << p[0] << " <= " << p[1] << " <= " << p[2];
  detail = os.str();
  return calibrated && monotone;
}

bool criterion_allocator(std::string& detail) {
  RngStream rng(6006, 0);
  const LengthSet l6({32, 64, 96, 128, 160, 192});

  // instance solver vs brute force, exact on 1000 random monotone tables
  for (int c = 0; c < 1000; ++c) {
    std::vector<double> d_hat(l6.levels());
    double cur = 10.0 * rng.uniform();
    for (auto& v : d_hat) {
      v = cur;
      cur -= rng.uniform();
    }
    const double d_th = 10.0 * rng.uniform();
    const InstanceResult r = solve_instance(d_hat, d_th, l6);
    int expect = -1;
    for (std::size_t t = 0; t < d_hat.size(); ++t)
      if (d_hat[t] <= d_th) {
        expect = static_cast<int>(t);
        break;
      }
    if (expect < 0 && (r.feasible || r.b != l6.longest())) {
      detail = "instance solver disagreed with brute force (infeasible case)";
      return false;
    }
    if (expect >= 0 && (!r.feasible || r.level_index != expect)) {
      detail = "instance solver disagreed with brute force";
      return false;
    }
  }

  // group solver: budget satisfied on 1000 random instances; gap report
  const LengthSet l4({32, 64, 96, 128});
  int ties = 0;
  int worst_gap = 0;
  for (int c = 0; c < 1000; ++c) {
    const std::size_t m = 1 + rng.uniform_below(8);
    OutageTable t;
    t.lambda = l4;
    t.m = m;
    t.g.resize(m * l4.levels());
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t clear_at = rng.uniform_below(l4.levels() + 1);
      for (std::size_t lv = 0; lv < l4.levels(); ++lv)
        t.g[i * l4.levels() + lv] = lv >= clear_at ? 0 : 1;
    }
    const double l_th = 32.0 + 96.0 * rng.uniform();
    const AllocationStrategy omega = solve_group(t, l_th);
    if (average_length(omega) > l_th + 1e-9) {
      detail = "group solver violated the average-length budget";
      return false;
    }
    const OracleResult oracle = exhaustive_oracle(t, l_th);
    const int gap = predicted_outages(t, omega) - oracle.min_outages;
    if (gap < 0) {
      detail = "greedy reported fewer outages than the exhaustive optimum";
      return false;
    }
    if (gap == 0) ++ties;
    worst_gap = std::max(worst_gap, gap);
  }

  // the two hand-traced cases
  OutageTable stair;
  stair.lambda = LengthSet({32, 64, 96});
  stair.m = 3;
  stair.g = {0, 0, 0, 1, 0, 0, 1, 1, 0};
  const AllocationStrategy a64 = solve_group(stair, 64.0);
  const AllocationStrategy a48 = solve_group(stair, 48.0);
  const bool traces_ok = a64.level_index == std::vector<int>{0, 1, 2} &&
                         a48.level_index == std::vector<int>{0, 1, 0};

  std::ostringstream os;
  os << "greedy==oracle on " << ties << "/1000, worst gap " << worst_gap
     << "; hand traces " << (traces_ok ? "exact" : "WRONG");
  detail = os.str();
  return traces_ok;
}

bool criterion_gradients(std::string& detail) {
  FeatureConfig fcfg;
  fcfg.n_bands = 8;
  fcfg.lambda = LengthSet({32, 96, 192});
  RngStream rng(7007, 0);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    EvaluatorModel m = make_evaluator(fcfg, {12, 6}, 0.25 + rng.uniform(), rng);
    EvalSample s;
    s.features.resize(fcfg.feature_dim());
    for (auto& v : s.features) v = 2.0 * rng.uniform() - 1.0;
    s.b = fcfg.lambda.values[rng.uniform_below(fcfg.lambda.levels())];
    s.gamma_t = 15.0 + 20.0 * rng.uniform();
    s.f_t.resize(fcfg.n_bands);
    s.band_err_t.resize(fcfg.n_bands);
    for (auto& v : s.f_t) v = rng.uniform();
    for (auto& v : s.band_err_t) v = rng.uniform();

    EvaluatorGrads grads{m.content_net.zero_grads(), m.residual_net.zero_grads()};
    accumulate_gradients(m, s, grads);
    const double h = 1e-5;
    auto check_net = [&](Mlp& net, const MlpGrads& g) {
      for (std::size_t i = 0; i < net.parameter_count(); ++i) {
        const double orig = net.get_parameter(i);
        net.set_parameter(i, orig + h);
        const double up = total_loss(m, s);
        net.set_parameter(i, orig - h);
        const double down = total_loss(m, s);
        net.set_parameter(i, orig);
        const double fd = (up - down) / (2.0 * h);
        const double an = net.get_gradient(g, i);
        const double denom = std::max({std::abs(fd), std::abs(an), 1e-6});
        worst = std::max(worst, std::abs(fd - an) / denom);
      }
    };
    check_net(m.content_net, grads.content);
    check_net(m.residual_net, grads.residual);
  }
  detail = "worst relative gradient error " + std::to_string(worst) + " over 20 configs";
  return worst < 1e-4;
}

// shared between criteria 8 and 9: train once on a 2000-sample dataset
struct TrainedEvaluator {
  EvaluatorModel model;
  double holdout_rmse = 0.0;
  double loss_reduction = 0.0;
};

TrainedEvaluator train_reference_evaluator() {
  FeatureConfig fcfg;  // defaults: 16 bands, full length set
  DatasetOptions dopts;
  dopts.sigma2_min = 0.03;
  dopts.sigma2_max = 1.0;
  dopts.trials_per_image = 8;
  const auto images = ramp_images(250, 8008);
  auto dataset = build_dataset(images, fcfg, dopts, RngStream(8008, 1));

  std::vector<std::size_t> idx(dataset.size());
  std::iota(idx.begin(), idx.end(), 0);
  RngStream split(8008, 2);
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[split.uniform_below(i)]);
  const std::size_t n_holdout = dataset.size() / 5;
  std::vector<EvalSample> holdout, training;
  for (std::size_t i = 0; i < idx.size(); ++i)
    (i < n_holdout ? holdout : training).push_back(dataset[idx[i]]);

  RngStream init(8008, 3);
  TrainedEvaluator out{make_evaluator(fcfg, {64, 32}, 1.0, init), 0.0, 0.0};

  double loss0 = 0.0;
  for (const auto& s : training) loss0 += total_loss(out.model, s);
  loss0 /= static_cast<double>(training.size());

  // two-phase schedule: coarse then fine step
  TrainOptions topts;
  topts.epochs = 150;
  topts.step_size = 2e-3;
  topts.batch = 32;
  train(out.model, training, topts, RngStream(8008, 4));
  topts.step_size = 5e-4;
  train(out.model, training, topts, RngStream(8008, 5));

  double loss1 = 0.0;
  for (const auto& s : training) loss1 += total_loss(out.model, s);
  loss1 /= static_cast<double>(training.size());
  out.loss_reduction = 1.0 - loss1 / loss0;

  double acc = 0.0;
  for (const auto& s : holdout) {
    const double err = s.gamma_t - forward(out.model, s.features, s.b).gamma_p;
    acc += err * err;
  }
  out.holdout_rmse = std::sqrt(acc / static_cast<double>(holdout.size()));
  return out;
}

bool criterion_evaluator_utility(const TrainedEvaluator& ev, std::string& detail) {
  std::ostringstream os;
  os << "holdout RMSE " << ev.holdout_rmse << " dB (bound " << kHoldoutRmseBoundDb
     << "), training loss reduced by " << 100.0 * ev.loss_reduction << "%";
  detail = os.str();
  return ev.holdout_rmse < kHoldoutRmseBoundDb && ev.loss_reduction >= 0.5;
}

bool criterion_headline(const TrainedEvaluator& ev, std::string& detail) {
  const auto images = ramp_images(500, 9009);
  ChannelParams params;
  CodecConfig codec;
  LinkConfig link;
  link.noise_variance = noise_variance_for_snr_db(link.power, kHeadlineSnrDb);
  const double sigma2 = link.noise_variance;
  const double d_th = gamma_db_to_distortion(kHeadlineGammaThDb);
  const LengthSet lambda = ev.model.features.lambda;
  const double z95 = inverse_normal_cdf(0.95);

  std::ostringstream os;
  bool ok = true;
  for (const int l_k : {64, 96, 128}) {
    // shared tape: channel and noise streams depend only on the image index
    std::vector<ChannelRealization> chans(images.size());
    for (std::size_t i = 0; i < images.size(); ++i)
      chans[i] = sample_channel(params, RngStream(9009, stream_key(10, i)));

    // group allocation from coarse-codeword predictions
    std::vector<std::vector<double>> d_hat(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
      const CsiCodeword coarse =
          encode_csi(chans[i].h, ev.model.features.coarse_length, 42);
      d_hat[i] = predict_distortion(ev.model, images[i], coarse, sigma2);
    }
    const OutageTable table = build_outage_table(d_hat, d_th, lambda);
    const AllocationStrategy omega = solve_group(table, static_cast<double>(l_k));

    long fixed_outages = 0, scan_outages = 0;
    std::vector<double> diffs(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
      auto run_with = [&](int b, uint64_t tag) {
        const CsiCodeword cw = encode_csi(chans[i].h, b, 42);
        RngStream noise(9009, stream_key(tag, i));
        const TransmitResult res = transmit_image(images[i], chans[i], cw, link, codec, noise);
        return is_outage(mse_loss(images[i], res.s_hat), d_th) ? 1.0 : 0.0;
      };
      const double fixed_out = run_with(l_k, 20);
      const double scan_out =
          run_with(lambda.values[static_cast<std::size_t>(omega.level_index[i])], 20);
      fixed_outages += static_cast<long>(fixed_out);
      scan_outages += static_cast<long>(scan_out);
      diffs[i] = scan_out - fixed_out;
    }
    const double n = static_cast<double>(images.size());
    const double mean_diff = std::accumulate(diffs.begin(), diffs.end(), 0.0) / n;
    double var = 0.0;
    for (double d : diffs) var += (d - mean_diff) * (d - mean_diff);
    const double se = std::sqrt(var / (n - 1.0) / n);
    const bool not_worse = mean_diff <= z95 * se + 1e-12;
    const bool budget_ok = average_length(omega) <= static_cast<double>(l_k) + 1e-9;
    ok = ok && not_worse && budget_ok;
    os << "L=" << l_k << ": fixed " << fixed_outages / n << ", scan " << scan_outages / n
       << " (avg len " << average_length(omega) << "); ";
  }
  detail = os.str();
  return ok;
}

bool criterion_reproducibility(std::string& detail) {
#ifndef SCAN_CLI_PATH
  detail = "SCAN_CLI_PATH not compiled in";
  return false;
#else
  const fs::path dir = fs::temp_directory_path() / "scan_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cfg_path = (dir / "cfg.json").string();
  std::ofstream(cfg_path) << R"({
    "seed": 77,
    "link": {"snr_db_grid": [0.0, 12.0]},
    "lengths": [32, 96, 192],
    "trials": 16,
    "l_th": 96.0,
    "images": {"synthetic": {"count": 6, "cutoff_min": 0.1, "cutoff_max": 0.5}}
  })";
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(SCAN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  int rc1 = run("simulate-link --config " + cfg_path + " --out " + (dir / "a").string());
  int rc2 = run("simulate-link --config " + cfg_path + " --out " + (dir / "b").string());

  const std::string table_path = (dir / "table.csv").string();
  std::ofstream(table_path) << "0,0,0\n1,0,0\n1,1,0\n";
  int rc3 = run("allocate --table " + table_path + " --lengths 32 --lengths 64 --lengths 96" +
                " --l-th 64 --out " + (dir / "c").string());
  int rc4 = run("allocate --table " + table_path + " --lengths 32 --lengths 64 --lengths 96" +
                " --l-th 64 --out " + (dir / "d").string());

  const bool ran = rc1 == 0 && rc2 == 0 && rc3 == 0 && rc4 == 0;
  const bool sim_same = slurp((dir / "a" / "simulate-link.csv").string()) ==
                        slurp((dir / "b" / "simulate-link.csv").string());
  const bool alloc_same = slurp((dir / "c" / "allocate.csv").string()) ==
                          slurp((dir / "d" / "allocate.csv").string());
  const bool nonempty = slurp((dir / "a" / "simulate-link.csv").string()).size() > 100;
  fs::remove_all(dir);
  detail = std::string("reruns byte-identical: simulate-link ") + (sim_same ? "yes" : "NO") +
           ", allocate " + (alloc_same ? "yes" : "NO");
  return ran && sim_same && alloc_same && nonempty;
#endif
}

}  // namespace

int main() {
  Harness h;
  h.run(1, "linear algebra suite (svd, dft, beamspace)", 5.0, criterion_linear_algebra);
  h.run(2, "noiseless perfect-CSI link loopback on 50 images", 30.0, criterion_link_loopback);
  h.run(3, "mean PSNR monotone in SNR and codeword length", 600.0, criterion_monotone_trends);
  h.run(4, "mean CSI NMSE non-increasing across the length set", 0.0, criterion_nmse_monotone);
  h.run(5, "SDOP estimator calibration and threshold monotonicity", 0.0,
        criterion_sdop_calibration);
  h.run(6, "allocator correctness vs brute force and hand traces", 0.0, criterion_allocator);
  h.run(7, "evaluator gradients vs central differences", 0.0, criterion_gradients);

  TrainedEvaluator ev;
  bool trained = false;
  h.run(8, "evaluator utility after training on 2000 samples", 0.0, [&](std::string& detail) {
    ev = train_reference_evaluator();
    trained = true;
    return criterion_evaluator_utility(ev, detail);
  });
  h.run(9, "group-wise allocation SDOP vs fixed length (paired)", 1800.0,
        [&](std::string& detail) {
          if (!trained) {
            detail = "evaluator training unavailable";
            return false;
          }
          return criterion_headline(ev, detail);
        });
  h.run(10, "byte-identical CLI reruns", 0.0, criterion_reproducibility);

  if (h.failures > 0) {
    std::printf("%d criterion(s) failed\n", h.failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
