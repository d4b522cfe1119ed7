// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scan/cli/commands.hpp"
#include "scan/cli/config.hpp"

using namespace scan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("scan_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// a config small enough for unit-test latency
const char* kTinyConfig = R"({
  "seed": 11,
  "link": {"snr_db_grid": [0.0, 12.0]},
  "lengths": [32, 96, 192],
  "trials": 24,
  "l_th": 96.0,
  "images": {"synthetic": {"count": 8, "cutoff_min": 0.08, "cutoff_max": 0.5}},
  "evaluator": {"hidden": [24, 12], "epochs": 12, "dataset_trials": 6, "n_bands": 8,
                 "sigma2_min": 0.02, "sigma2_max": 0.6}
})";

int run_cli(const std::string& args) {
#ifdef SCAN_CLI_PATH
  const std::string cmd = std::string(SCAN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
#else
  (void)args;
  return -1;
#endif
}

}  // namespace

TEST_CASE("parse_config: defaults and field-path diagnostics") {
  const ExperimentConfig cfg = parse_config("{}");
  CHECK(cfg.channel.n_tx == 16);
  CHECK(cfg.lengths.values == std::vector<int>{32, 64, 96, 128, 160, 192});
  CHECK(cfg.gamma_th_db == doctest::Approx(26.0));

  auto expect_error = [](const std::string& body, const std::string& needle) {
    try {
      parse_config(body);
      FAIL_CHECK("expected ConfigError for ", body);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error(R"({"lengths": [32, 32]})", "lengths[1]");
  expect_error(R"({"lengths": [32, 16]})", "lengths[1]");
  expect_error(R"({"coarse_length": 64})", "coarse_length");
  expect_error(R"({"l_th": 500})", "l_th");
  expect_error(R"({"l_th": 1})", "l_th");
  expect_error(R"({"rho": 0.0})", "rho");
  expect_error(R"({"link": {"n_streams": 40}})", "link.n_streams");
  expect_error(R"({"link": {"snr_db_grid": []}})", "snr_db_grid");
  expect_error(R"({"trials": 0})", "trials");
  expect_error(R"({"evaluator": {"holdout_fraction": 1.0}})", "holdout_fraction");
  expect_error(R"({"images": {"synthetic": {"cutoff_min": 0.0}}})", "cutoff_min");
  expect_error("not json", "invalid JSON");
  expect_error(R"({"lengths": [32, 600]})", "2*n_rx*n_tx");
}

TEST_CASE("config round trip through the JSON echo") {
  const ExperimentConfig cfg = parse_config(kTinyConfig);
  const ExperimentConfig back = parse_config(config_to_json(cfg));
  CHECK(back.seed == cfg.seed);
  CHECK(back.lengths.values == cfg.lengths.values);
  CHECK(back.snr_db_grid == cfg.snr_db_grid);
  CHECK(back.evaluator.hidden == cfg.evaluator.hidden);
  CHECK(back.evaluator.epochs == cfg.evaluator.epochs);
  CHECK(back.synthetic.count == cfg.synthetic.count);
}

TEST_CASE("cmd_simulate_link: row count, header, reproducibility") {
  const ExperimentConfig cfg = parse_config(kTinyConfig);
  TempDir a, b;
  cmd_simulate_link(cfg, a.path.string());
  cmd_simulate_link(cfg, b.path.string());

  const std::string csv = slurp(a.file("simulate-link.csv"));
  CHECK(csv == slurp(b.file("simulate-link.csv")));

  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  CHECK(line.find("experiment_id,seed,snr_db,policy_or_b") == 0);
  int rows = 0;
  while (std::getline(ss, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2 * 3);  // snr grid x lengths

  // metadata sidecar exists and echoes the seed
  const std::string meta = slurp(a.file("simulate-link.meta.json"));
  CHECK(meta.find("\"seed\": 11") != std::string::npos);
}

TEST_CASE("cmd_simulate_link: mean PSNR monotone in SNR per length") {
  const ExperimentConfig cfg = parse_config(kTinyConfig);
  TempDir tmp;
  cmd_simulate_link(cfg, tmp.path.string());
  std::stringstream ss(slurp(tmp.file("simulate-link.csv")));
  std::string line;
  std::getline(ss, line);
  // rows come out snr-major: 3 lengths at snr 0, then 3 at snr 12
  std::vector<std::vector<double>> psnr_by_len(3);
  int idx = 0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    psnr_by_len[idx % 3].push_back(std::stod(cells[5]));
    ++idx;
  }
  for (const auto& series : psnr_by_len) {
    REQUIRE(series.size() == 2);
    CHECK(series[1] >= series[0] - 0.1);
  }
}

TEST_CASE("cmd_train_evaluator then cmd_eval_sdop: full flow") {
  const ExperimentConfig cfg = parse_config(kTinyConfig);
  TempDir tmp;

  // adaptive policies fail loudly without a checkpoint
  CHECK_THROWS_WITH_AS(cmd_eval_sdop(cfg, tmp.path.string(), "instance", std::nullopt),
                       doctest::Contains("missing evaluator checkpoint"), std::runtime_error);

  cmd_train_evaluator(cfg, tmp.path.string());
  CHECK(fs::exists(tmp.path / "evaluator.ckpt"));

  const std::string loss_csv = slurp(tmp.file("train-evaluator-loss.csv"));
  std::stringstream ss(loss_csv);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "epoch,mean_loss");
  int epoch = 0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    CHECK(line.find(std::to_string(epoch) + ",") == 0);  // strictly ordered by epoch
    ++epoch;
  }
  CHECK(epoch == 12);

  cmd_eval_sdop(cfg, tmp.path.string(), "fixed", 96);
  cmd_eval_sdop(cfg, tmp.path.string(), "instance", std::nullopt);
  cmd_eval_sdop(cfg, tmp.path.string(), "group", std::nullopt);

  // group policy rows keep the average within budget
  std::stringstream gs(slurp(tmp.file("eval-sdop-group.csv")));
  std::getline(gs, line);
  while (std::getline(gs, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    CHECK(std::stod(cells[11]) <= cfg.l_th + 1e-9);  // avg_length column
    CHECK(cells[12] != "na");                        // adaptive rows report an rmse
  }

  // policy validation
  CHECK_THROWS_AS(cmd_eval_sdop(cfg, tmp.path.string(), "bogus", std::nullopt), ConfigError);
  CHECK_THROWS_AS(cmd_eval_sdop(cfg, tmp.path.string(), "fixed", std::nullopt), ConfigError);
}

TEST_CASE("cmd_allocate: hand-trace tables") {
  TempDir tmp;
  const std::string table = tmp.file("table.csv");
  {
    std::ofstream out(table);
    out << "0,0,0\n1,0,0\n1,1,0\n";
  }
  AllocateArgs args;
  args.table_file = table;
  args.lambda = LengthSet({32, 64, 96});
  args.l_th = 64.0;
  cmd_allocate(args, tmp.path.string());
  CHECK(slurp(tmp.file("allocate.csv")) == "image,level_index,length\n0,0,32\n1,1,64\n2,2,96\n");
  const std::string meta = slurp(tmp.file("allocate.meta.json"));
  CHECK(meta.find("\"predicted_outages\": 0") != std::string::npos);
  CHECK(meta.find("\"greedy_gap\": 0") != std::string::npos);

  args.l_th = 48.0;
  cmd_allocate(args, tmp.path.string());
  CHECK(slurp(tmp.file("allocate.csv")) == "image,level_index,length\n0,0,32\n1,1,64\n2,0,32\n");

  // all-ones: everyone stays at the shortest length
  {
    std::ofstream out(table);
    out << "1,1,1\n1,1,1\n";
  }
  args.l_th = 96.0;
  cmd_allocate(args, tmp.path.string());
  CHECK(slurp(tmp.file("allocate.csv")) == "image,level_index,length\n0,0,32\n1,0,32\n");

  // distortion-table mode with a PSNR threshold
  {
    std::ofstream out(table);
    out << "0.01,0.002,0.001\n0.001,0.0005,0.0001\n";
  }
  args.gamma_th_db = 26.0;  // d_th ~ 0.0025
  args.l_th = 96.0;
  cmd_allocate(args, tmp.path.string());
  CHECK(slurp(tmp.file("allocate.csv")) == "image,level_index,length\n0,1,64\n1,0,32\n");

  // malformed tables
  {
    std::ofstream out(table);
    out << "0,1\n";
  }
  args.gamma_th_db.reset();
  CHECK_THROWS_AS(cmd_allocate(args, tmp.path.string()), FormatError);
  {
    std::ofstream out(table);
    out << "0,nonsense,1\n";
  }
  CHECK_THROWS_AS(cmd_allocate(args, tmp.path.string()), FormatError);
  {
    std::ofstream out(table);
    out << "0,0.5,1\n";  // not 0/1 without a threshold
  }
  CHECK_THROWS_AS(cmd_allocate(args, tmp.path.string()), FormatError);
}

TEST_CASE("cli binary: exit codes and byte-identical reruns") {
#ifndef SCAN_CLI_PATH
  MESSAGE("SCAN_CLI_PATH not provided, skipping process-level checks");
  return;
#else
  TempDir tmp;
  const std::string cfg_path = tmp.file("cfg.json");
  std::ofstream(cfg_path) << kTinyConfig;

  // bad config -> exit 2
  const std::string bad_path = tmp.file("bad.json");
  std::ofstream(bad_path) << R"({"rho": -1})";
  int rc = run_cli("simulate-link --config " + bad_path + " --out " + tmp.file("o0"));
  CHECK(WEXITSTATUS(rc) == 2);

  // missing checkpoint -> exit 3
  rc = run_cli("eval-sdop --config " + cfg_path + " --policy group --out " + tmp.file("o1"));
  CHECK(WEXITSTATUS(rc) == 3);

  // success + byte-identical rerun
  rc = run_cli("simulate-link --config " + cfg_path + " --out " + tmp.file("r1"));
  CHECK(WEXITSTATUS(rc) == 0);
  rc = run_cli("simulate-link --config " + cfg_path + " --out " + tmp.file("r2"));
  CHECK(WEXITSTATUS(rc) == 0);
  CHECK(slurp(tmp.file("r1") + "/simulate-link.csv") == slurp(tmp.file("r2") + "/simulate-link.csv"));

  // --seed flag overrides the config and changes the output
  rc = run_cli("simulate-link --config " + cfg_path + " --seed 999 --out " + tmp.file("r3"));
  CHECK(WEXITSTATUS(rc) == 0);
  CHECK(slurp(tmp.file("r3") + "/simulate-link.csv") != slurp(tmp.file("r1") + "/simulate-link.csv"));
#endif
}
