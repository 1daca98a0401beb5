// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "anchorsec/harness.hpp"

namespace anchorsec {

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

}  // namespace

int cli_main(int argc, const char* const* argv) {
  harness::SimulationConfig cfg;
  std::vector<std::size_t> malicious{0, 5, 10, 15, 20};
  std::string detector = "all";
  std::string noise_model = "gaussian";
  double noise_sigma = cfg.noise.sigma;
  double path_loss_exponent = 2.0;
  std::string out_path;
  std::string refs_path;
  std::string deployment_path;

  CLI::App app{"Monte Carlo simulator for cheating-anchor detection in trilateration networks",
               "anchorsec-sim"};
  app.option_defaults()->always_capture_default();
  app.add_option("--area-width", cfg.area.width, "Deployment area width (m)")
      ->check(CLI::PositiveNumber);
  app.add_option("--area-height", cfg.area.height, "Deployment area height (m)")
      ->check(CLI::PositiveNumber);
  app.add_option("--nodes", cfg.node_count, "Number of anchor nodes")
      ->check(CLI::Range(std::size_t{4}, std::size_t{1} << 20));
  app.add_option("--malicious", malicious,
                 "Compromised anchor count; repeat to sweep several counts")
      ->allow_extra_args(false)
      ->check(CLI::NonNegativeNumber);
  app.add_option("--trials", cfg.trials, "Trials per (detector, count) cell")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.master_seed, "Master seed");
  app.add_option("--detector", detector, "none, consistency, mle, mahalanobis or all")
      ->check(CLI::IsMember({"none", "consistency", "mle", "mahalanobis", "all"}));
  app.add_option("--noise-model", noise_model, "exact, gaussian or shadowing")
      ->check(CLI::IsMember({"exact", "gaussian", "shadowing"}));
  app.add_option("--noise-sigma", noise_sigma, "Range noise: meters (gaussian) or dB (shadowing)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--path-loss-exponent", path_loss_exponent, "Shadowing path loss exponent")
      ->check(CLI::Range(1.5, 6.0));
  app.add_option("--eps", cfg.detection.eps, "Consistency tolerance (m)")
      ->check(CLI::PositiveNumber);
  app.add_option("--threshold", cfg.detection.threshold, "Mahalanobis threshold")
      ->check(CLI::PositiveNumber);
  app.add_option("--jitter-samples", cfg.detection.jitter_samples,
                 "Noisy re-localizations per fitted covariance")
      ->check(CLI::Range(std::size_t{3}, std::size_t{1} << 20));
  app.add_option("--offset-min", cfg.attack.offset_min, "Smallest attack offset (m)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--offset-max", cfg.attack.offset_max, "Largest attack offset (m)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_path, "CSV output path (standard output when omitted)");
  app.add_option("--refs", refs_path, "Write the reference store of trial 0");
  app.add_option("--dump-deployment", deployment_path,
                 "Write the anchors of trial 0 after attack and quarantine");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  cfg.detector = *harness::parse_detector_choice(detector);
  if (noise_model == "exact") {
    cfg.noise = radio::NoiseModel::exact();
  } else if (noise_model == "gaussian") {
    cfg.noise = radio::NoiseModel::gaussian(noise_sigma);
  } else {
    cfg.noise = radio::NoiseModel::shadowing(noise_sigma, path_loss_exponent);
  }
  if (!out_path.empty()) cfg.output_path = out_path;
  if (!refs_path.empty()) cfg.refs_path = refs_path;
  if (!deployment_path.empty()) cfg.deployment_path = deployment_path;

  try {
    cfg.attack.count = malicious.empty() ? 0 : malicious.front();
    cfg.validate();
    for (auto count : malicious) {
      if (count > cfg.node_count) {
        throw Error(Errc::invalid_argument, "--malicious " + std::to_string(count) +
                                                " exceeds --nodes " +
                                                std::to_string(cfg.node_count));
      }
    }
  } catch (const Error& e) {
    std::cerr << "anchorsec-sim: " << e.what() << "\n" << app.help();
    return kUsageError;
  }

  try {
    const auto agg = harness::run_experiment(cfg, malicious);
    if (cfg.output_path) {
      harness::emit_csv(agg, *cfg.output_path);
    } else {
      harness::write_csv(agg, std::cout);
    }
    if (cfg.refs_path || cfg.deployment_path) {
      harness::SimulationConfig first = cfg;
      first.detector = harness::expand(cfg.detector).front();
      harness::TrialArtifacts artifacts;
      harness::run_trial(first, 0, &artifacts);
      if (cfg.refs_path) registry::save(artifacts.references, *cfg.refs_path);
      if (cfg.deployment_path) network::save_deployment(artifacts.deployment, *cfg.deployment_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "anchorsec-sim: " << e.what() << "\n";
    return kRuntimeError;
  }
  return 0;
}

}  // namespace anchorsec
