#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mlipuq/io_csv.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = MLIPUQ_CLI_PATH;

int run(const std::string &args, const std::string &redirect = "> /dev/null 2>&1") {
  const std::string cmd = kCli + " " + args + " " + redirect;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("mlipuq_cli_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string str(const std::string &name = "") const {
    return name.empty() ? path_.string() : (path_ / name).string();
  }

 private:
  fs::path path_;
};

/// Diatomic frames whose energy varies smoothly with the bond length.
std::string write_dimer_trajectory(const TempDir &dir, int n_frames) {
  const std::string path = dir.str("dimers.xyz");
  std::ofstream out(path);
  for (int i = 0; i < n_frames; ++i) {
    const double d = 0.8 + 1.2 * i / (n_frames - 1);
    const double energy = std::sin(2.0 * d) + 0.05 * std::cos(17.0 * d);
    out << "2\nenergy=" << energy << "\nH 0 0 0\nH 0 0 " << d << "\n";
  }
  return path;
}

std::size_t count_lines(const std::string &path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits cleanly and usage errors exit with code 2") {
  CHECK(run("--help") == 0);
  CHECK(run("tune --help") == 0);
  CHECK(run("not-a-command") == 2);
  CHECK(run("calibrate") == 2);  // missing required options
  CHECK(run("tune --dataset /nonexistent.xyz --out /tmp/x") == 2);
}

TEST_CASE("featurize writes one row per structure for a global representation") {
  TempDir dir;
  const std::string data = write_dimer_trajectory(dir, 7);
  CHECK(run("featurize --dataset " + data + " --out " + dir.str("feat")) == 0);
  CHECK(count_lines(dir.str("feat") + "/features.csv") == 8);  // header + 7
  const auto manifest = mlipuq::read_key_value(dir.str("feat") + "/manifest.txt");
  CHECK(manifest.at("command") == "featurize");
  CHECK(manifest.at("n_structures") == "7");
  CHECK(manifest.at("repr") == "coulomb");
}

TEST_CASE("featurize writes one row per atom for the atomistic representation") {
  TempDir dir;
  const std::string data = write_dimer_trajectory(dir, 4);
  CHECK(run("featurize --dataset " + data + " --repr soap --out " +
            dir.str("feat")) == 0);
  CHECK(count_lines(dir.str("feat") + "/features.csv") == 9);  // header + 4*2
}

TEST_CASE("tune produces a reusable hyperparameter file") {
  TempDir dir;
  const std::string data = write_dimer_trajectory(dir, 14);
  const int code = run("tune --dataset " + data +
                       " --n-train 12 --n-test 1 --seed 1 --single-init"
                       " --adam-steps 3 --out " +
                       dir.str("tuned"));
  CHECK(code == 0);
  const auto hp = mlipuq::read_key_value(dir.str("tuned") + "/hyperparams.txt");
  CHECK(hp.count("output_scale") == 1);
  CHECK(hp.count("noise_variance") == 1);
  CHECK(hp.at("lengthscale_count") == "3");
  CHECK(hp.count("lengthscale_0") == 1);
  CHECK(hp.count("final_mll") == 1);
  CHECK(std::stod(hp.at("output_scale")) > 0.0);

  // The tuned file round-trips into calibrate.
  const int cal = run("calibrate --dataset " + data +
                      " --n-train 10 --n-test 2 --seed 1 --hyperparams " +
                      dir.str("tuned") + "/hyperparams.txt --bin-width 0.5 --out " +
                      dir.str("cal0"));
  CHECK(cal == 0);
}

TEST_CASE("calibrate writes curve, reliability, and summary artifacts") {
  TempDir dir;
  const std::string data = write_dimer_trajectory(dir, 60);
  const int code = run(
      "calibrate --dataset " + data +
      " --n-train 20 --n-test 10 --seed 3 --estimator gpr_std"
      " --lengthscale 1.0 --output-scale 1.0 --noise 1e-4"
      " --bin-width 0.05 --min-count 2 --svg --out " +
      dir.str("cal"));
  CHECK(code == 0);
  CHECK(fs::exists(dir.str("cal") + "/calibration_curve.csv"));
  CHECK(fs::exists(dir.str("cal") + "/reliability.csv"));
  CHECK(fs::exists(dir.str("cal") + "/calibration_curve.svg"));
  CHECK(count_lines(dir.str("cal") + "/calibration_curve.csv") == 102);
  const auto summary = mlipuq::read_key_value(dir.str("cal") + "/summary.txt");
  const double area = std::stod(summary.at("miscalibration_area"));
  CHECK(area >= 0.0);
  CHECK(area <= 1.0);
  CHECK(std::stoul(summary.at("pool_size")) == 30);
}

TEST_CASE("calibrate rejects contradictory or missing configuration") {
  TempDir dir;
  const std::string data = write_dimer_trajectory(dir, 30);
  const std::string base = "calibrate --dataset " + data +
                           " --n-train 10 --n-test 5 --lengthscale 1"
                           " --output-scale 1 --noise 1e-4 --out " +
                           dir.str("out");
  CHECK(run(base) == 2);                           // no bin width at all
  CHECK(run(base + " --molecule unknown") == 2);   // unknown preset
  CHECK(run(base + " --bin-width 0.05 --estimator bogus") == 2);
  CHECK(run(base + " --molecule benzene") == 0);   // preset supplies the width
}

TEST_CASE("al on a dataset writes one trace per strategy") {
  TempDir dir;
  const std::string data = write_dimer_trajectory(dir, 40);
  const int code = run("al --dataset " + data +
                       " --n-train 10 --n-test 10 --seed 2"
                       " --lengthscale 1.0 --output-scale 1.0 --noise 1e-4"
                       " --strategy random --strategy gpr_std"
                       " --n-init 5 --n-iter 3 --out " +
                       dir.str("al"));
  CHECK(code == 0);
  CHECK(count_lines(dir.str("al") + "/trace_random.csv") == 5);  // header + 4 rows
  CHECK(count_lines(dir.str("al") + "/trace_gpr_std.csv") == 5);
  const auto manifest = mlipuq::read_key_value(dir.str("al") + "/manifest.txt");
  CHECK(manifest.at("pool_size") == "30");  // everything outside the test split
  CHECK(manifest.at("test_size") == "10");
}

TEST_CASE("al runs on the built-in synthetic benchmark without a dataset") {
  TempDir dir;
  const int code = run(
      "al --synthetic-sine --pool-size 24 --n-test 16 --seed 4"
      " --n-init 8 --n-iter 3 --strategy oracle_max_error --out " +
      dir.str("al"));
  CHECK(code == 0);
  CHECK(count_lines(dir.str("al") + "/trace_oracle_max_error.csv") == 5);
}

TEST_CASE("al without a dataset or the synthetic flag is a configuration error") {
  TempDir dir;
  CHECK(run("al --n-init 4 --n-iter 1 --out " + dir.str("x")) == 2);
}

TEST_CASE("synthcheck fails loudly with an absurd bin width") {
  // A bin width of 100 puts every sample in a bin whose center is 50, which
  // cannot match uncertainties of order 0.1; the verdict must be FAIL.
  TempDir dir;
  const int code = run("synthcheck --n-train 20 --n-test 300 --seed 0"
                       " --bin-width 100 --min-count 10",
                       "> " + dir.str("out.txt") + " 2>&1");
  CHECK(code == 1);
  std::ifstream in(dir.str("out.txt"));
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("FAIL") != std::string::npos);
}

}  // TEST_SUITE
