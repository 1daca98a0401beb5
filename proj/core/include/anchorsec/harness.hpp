// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo experiment runner. A trial is a pure function of the
// configuration and its index: every random draw comes from a stream derived
// from (master_seed, trial_index, purpose), so trials can run in any order.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "anchorsec/detect.hpp"
#include "anchorsec/network.hpp"
#include "anchorsec/radio.hpp"
#include "anchorsec/registry.hpp"

namespace anchorsec::harness {

enum class DetectorChoice { none, consistency, mle, mahalanobis, all };

std::string_view to_string(DetectorChoice choice) noexcept;
std::optional<DetectorChoice> parse_detector_choice(std::string_view name);

/// Single-detector selections a choice expands to, in output order.
std::vector<DetectorChoice> expand(DetectorChoice choice);

struct SimulationConfig {
  network::Area area;
  std::size_t node_count = 117;
  std::size_t trials = 50;
  std::uint64_t master_seed = 1;
  radio::NoiseModel noise = radio::NoiseModel::gaussian(0.5);
  network::AttackSpec attack;
  DetectorChoice detector = DetectorChoice::all;
  detect::Settings detection;

  std::optional<std::filesystem::path> output_path;
  std::optional<std::filesystem::path> refs_path;
  std::optional<std::filesystem::path> deployment_path;

  /// Throws Error{invalid_argument} naming the first bad field.
  void validate() const;
};

struct TrialResult {
  std::size_t trial_index = 0;
  DetectorChoice detector = DetectorChoice::none;
  double mean_localization_error = 0.0;  ///< meters
  std::set<network::AnchorId> flagged;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double elapsed_ms = 0.0;
  std::size_t trilateration_count = 0;
};

/// Intermediate state of a trial, for dumping.
struct TrialArtifacts {
  network::Deployment deployment;  ///< after attack and quarantine
  registry::ReferenceStore references;
};

/// Runs one trial with `cfg.detector`, which must name a single selection.
/// Errors are rethrown as Error with the trial index in the message.
TrialResult run_trial(const SimulationConfig& cfg, std::size_t trial_index,
                      TrialArtifacts* artifacts = nullptr);

struct AggregateRow {
  DetectorChoice detector = DetectorChoice::none;
  std::size_t num_malicious = 0;
  std::vector<TrialResult> trials;  ///< ascending trial_index

  double mean_error = 0.0;
  double std_error = 0.0;  ///< sample standard deviation; 0 for one trial
  double mean_tp = 0.0;
  double mean_fp = 0.0;
  double mean_fn = 0.0;
  double mean_elapsed_ms = 0.0;
  double mean_trilaterations = 0.0;
};

struct AggregateResult {
  std::vector<AggregateRow> rows;  ///< detector-major, counts in the order given
};

/// Reduces trials of one (detector, count) cell in index order.
AggregateRow aggregate(DetectorChoice detector, std::size_t num_malicious,
                       std::vector<TrialResult> trials);

/// Runs `cfg.trials` trials for every selected detector and malicious count.
AggregateResult run_experiment(const SimulationConfig& cfg,
                               const std::vector<std::size_t>& malicious_counts);

inline constexpr std::string_view kCsvHeader =
    "detector,num_malicious,trials,mean_error_m,std_error_m,mean_tp,mean_fp,mean_fn,"
    "mean_elapsed_ms,mean_trilaterations";

void write_csv(const AggregateResult& agg, std::ostream& out);
/// Throws Error{io_error} when the file cannot be written.
void emit_csv(const AggregateResult& agg, const std::filesystem::path& path);

}  // namespace anchorsec::harness
