// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "text.hpp"

namespace anchorsec::harness {

std::string_view to_string(DetectorChoice choice) noexcept {
  switch (choice) {
    case DetectorChoice::none: return "none";
    case DetectorChoice::consistency: return "consistency";
    case DetectorChoice::mle: return "mle";
    case DetectorChoice::mahalanobis: return "mahalanobis";
    case DetectorChoice::all: return "all";
  }
  return "unknown";
}

std::optional<DetectorChoice> parse_detector_choice(std::string_view name) {
  for (auto c : {DetectorChoice::none, DetectorChoice::consistency, DetectorChoice::mle,
                 DetectorChoice::mahalanobis, DetectorChoice::all}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::vector<DetectorChoice> expand(DetectorChoice choice) {
  if (choice == DetectorChoice::all) {
    return {DetectorChoice::consistency, DetectorChoice::mle, DetectorChoice::mahalanobis};
  }
  return {choice};
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::invalid_argument, what);
}

std::optional<detect::Detector> as_detector(DetectorChoice choice) {
  switch (choice) {
    case DetectorChoice::consistency: return detect::Detector::consistency;
    case DetectorChoice::mle: return detect::Detector::mle;
    case DetectorChoice::mahalanobis: return detect::Detector::mahalanobis;
    default: return std::nullopt;
  }
}

double mean_of(const std::vector<TrialResult>& trials, auto field) {
  double sum = 0.0;
  for (const auto& t : trials) sum += static_cast<double>(field(t));
  return sum / static_cast<double>(trials.size());
}

}  // namespace

void SimulationConfig::validate() const {
  area.validate();
  noise.validate();
  attack.validate();
  require(node_count >= 4, "node_count must be at least 4");
  require(trials >= 1, "trials must be at least 1");
  require(attack.count <= node_count, "attack count exceeds node_count");
  require(std::isfinite(detection.eps) && detection.eps > 0.0, "eps must be positive");
  require(std::isfinite(detection.threshold) && detection.threshold > 0.0,
          "threshold must be positive");
  require(std::isfinite(detection.regularization) && detection.regularization >= 0.0,
          "regularization must be nonnegative");
  require(detection.jitter_samples >= 3, "jitter_samples must be at least 3");
}

TrialResult run_trial(const SimulationConfig& cfg, std::size_t trial_index,
                      TrialArtifacts* artifacts) {
  try {
    cfg.validate();
    require(cfg.detector != DetectorChoice::all, "run_trial needs a single detector");
    const auto start = std::chrono::steady_clock::now();

    Rng deployment_rng = make_stream(cfg.master_seed, trial_index, Stream::deployment);
    Rng attack_rng = make_stream(cfg.master_seed, trial_index, Stream::attack);
    Rng detection_rng = make_stream(cfg.master_seed, trial_index, Stream::detection);
    Rng evaluation_rng = make_stream(cfg.master_seed, trial_index, Stream::evaluation);

    network::DeployOptions deploy_options;
    deploy_options.limits = cfg.detection.limits;
    auto dep = network::deploy(cfg.area, cfg.node_count, deployment_rng, deploy_options);
    auto refs = registry::build_references(dep, cfg.detection.limits);
    dep = network::inject_attack(std::move(dep), cfg.attack, attack_rng);

    TrialResult result;
    result.trial_index = trial_index;
    result.detector = cfg.detector;

    detect::RangingSession detection(cfg.noise, detection_rng);
    if (const auto detector = as_detector(cfg.detector)) {
      const auto report = detect::run_detector(*detector, dep, refs, detection, cfg.detection);
      result.flagged = report.flagged;
      dep = network::quarantine(std::move(dep), report.flagged);
    }

    detect::RangingSession evaluation(cfg.noise, evaluation_rng);
    result.mean_localization_error =
        detect::localization_error(dep, refs, evaluation, cfg.detection.limits).mean;
    result.trilateration_count = detection.trilaterations() + evaluation.trilaterations();

    const auto compromised = dep.compromised_ids();
    for (auto id : result.flagged) {
      if (compromised.contains(id)) {
        ++result.true_positives;
      } else {
        ++result.false_positives;
      }
    }
    result.false_negatives = compromised.size() - result.true_positives;
    result.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    if (artifacts) *artifacts = {std::move(dep), std::move(refs)};
    return result;
  } catch (const Error& e) {
    throw Error(e.code(), "trial " + std::to_string(trial_index) + ": " + e.detail());
  }
}

AggregateRow aggregate(DetectorChoice detector, std::size_t num_malicious,
                       std::vector<TrialResult> trials) {
  AggregateRow row;
  row.detector = detector;
  row.num_malicious = num_malicious;
  std::sort(trials.begin(), trials.end(),
            [](const auto& a, const auto& b) { return a.trial_index < b.trial_index; });
  row.trials = std::move(trials);
  if (row.trials.empty()) return row;

  const auto& ts = row.trials;
  row.mean_error = mean_of(ts, [](const auto& t) { return t.mean_localization_error; });
  row.mean_tp = mean_of(ts, [](const auto& t) { return t.true_positives; });
  row.mean_fp = mean_of(ts, [](const auto& t) { return t.false_positives; });
  row.mean_fn = mean_of(ts, [](const auto& t) { return t.false_negatives; });
  row.mean_elapsed_ms = mean_of(ts, [](const auto& t) { return t.elapsed_ms; });
  row.mean_trilaterations = mean_of(ts, [](const auto& t) { return t.trilateration_count; });
  if (ts.size() > 1) {
    double squares = 0.0;
    for (const auto& t : ts) {
      const double d = t.mean_localization_error - row.mean_error;
      squares += d * d;
    }
    row.std_error = std::sqrt(squares / static_cast<double>(ts.size() - 1));
  }
  return row;
}

AggregateResult run_experiment(const SimulationConfig& cfg,
                               const std::vector<std::size_t>& malicious_counts) {
  cfg.validate();
  AggregateResult agg;
  for (auto choice : expand(cfg.detector)) {
    for (auto count : malicious_counts) {
      SimulationConfig cell = cfg;
      cell.detector = choice;
      cell.attack.count = count;
      std::vector<TrialResult> trials;
      trials.reserve(cfg.trials);
      for (std::size_t k = 0; k < cfg.trials; ++k) trials.push_back(run_trial(cell, k));
      agg.rows.push_back(aggregate(choice, count, std::move(trials)));
    }
  }
  return agg;
}

void write_csv(const AggregateResult& agg, std::ostream& out) {
  using text::format_double;
  out << kCsvHeader << '\n';
  for (const auto& r : agg.rows) {
    out << to_string(r.detector) << ',' << r.num_malicious << ',' << r.trials.size() << ','
        << format_double(r.mean_error) << ',' << format_double(r.std_error) << ','
        << format_double(r.mean_tp) << ',' << format_double(r.mean_fp) << ','
        << format_double(r.mean_fn) << ',' << format_double(r.mean_elapsed_ms) << ','
        << format_double(r.mean_trilaterations) << '\n';
  }
}

void emit_csv(const AggregateResult& agg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string());
  write_csv(agg, out);
  out.flush();
  if (!out) throw Error(Errc::io_error, "failed writing " + path.string());
}

}  // namespace anchorsec::harness
