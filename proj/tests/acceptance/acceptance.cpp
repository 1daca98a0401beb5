// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Each check prints one PASS/FAIL line with
// the measured quantities; the exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "anchorsec/cli.hpp"
#include "anchorsec/harness.hpp"
#include "anchorsec/registry.hpp"
#include "generators.hpp"

namespace {

using namespace anchorsec;
using anchorsec::testing::Gen;
using geometry::Matrix2;
using geometry::Point;
using harness::DetectorChoice;
using harness::SimulationConfig;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome trilateration_exactness() {
  Gen gen(101);
  const auto start = Clock::now();
  double worst_error = 0.0, worst_residual = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto anchors = gen.triple();
    const Point target = gen.point();
    const geometry::RangeTriple r{geometry::distance(target, anchors[0]),
                                  geometry::distance(target, anchors[1]),
                                  geometry::distance(target, anchors[2])};
    const auto fix = geometry::trilaterate(anchors, r);
    worst_error = std::max(worst_error, geometry::distance(fix.position, target));
    worst_residual = std::max(worst_residual, fix.residual);
  }
  const double elapsed = seconds_since(start);
  return {worst_error < 1e-6 && worst_residual < 1e-6 && elapsed < 1.0,
          fmt("max error %.3g m, max residual %.3g m^2, %.3g s", worst_error, worst_residual,
              elapsed)};
}

Outcome discriminant_identity() {
  Gen gen(102);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    detect::GroupStatistics g;
    g.mean = gen.point(-50, 50);
    g.covariance = gen.spd();
    const Point z = gen.point(-50, 50);
    const double d = detect::mahalanobis_distance(z, g.mean, g.covariance);
    const double expected = -std::log(g.covariance.determinant()) - d * d;
    const double got = detect::discriminant(z, g);
    worst = std::max(worst, std::abs(got - expected) / std::max(1.0, std::abs(expected)));
  }
  return {worst <= 1e-12, fmt("max relative deviation %.3g", worst)};
}

Outcome classify_vs_oracle() {
  Gen gen(103);
  int agree = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t m = 2 + gen.index(9);
    std::vector<detect::GroupStatistics> stats(m);
    double total = 0.0;
    for (std::size_t g = 0; g < m; ++g) {
      stats[g].group_id = network::GroupId(g);
      stats[g].mean = gen.point(-3, 3);
      stats[g].covariance = gen.spd(0.2, 3);
      stats[g].prior = gen.uniform(0.05, 1.0);
      total += stats[g].prior;
    }
    for (auto& s : stats) s.prior /= total;
    const Point z = gen.point(-4, 4);
    network::GroupId best = 0;
    double best_score = -1.0;
    for (const auto& s : stats) {
      const double score = testing::oracle_density(z, s.mean, s.covariance) * s.prior;
      if (score > best_score) {
        best_score = score;
        best = s.group_id;
      }
    }
    agree += detect::classify(z, stats) == best;
  }
  return {agree == 1000, fmt("%d/1000 agree", agree)};
}

Outcome mahalanobis_affine_invariance() {
  Gen gen(104);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Matrix2 c = gen.spd();
    const Matrix2 a = gen.invertible();
    const Point x = gen.point(-10, 10), m = gen.point(-10, 10);
    const double before = detect::mahalanobis_distance(x, m, c);
    const double after = detect::mahalanobis_distance(a * x, a * m, a * c * a.transposed());
    worst = std::max(worst, std::abs(after - before) / std::max(1.0, before));
  }
  return {worst <= 1e-9, fmt("max relative deviation %.3g", worst)};
}

struct Rates {
  double recall;
  double fpr;
};

Rates detection_rates(const SimulationConfig& cfg) {
  std::size_t tp = 0, fp = 0, fn = 0, honest = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const auto r = harness::run_trial(cfg, t);
    tp += r.true_positives;
    fp += r.false_positives;
    fn += r.false_negatives;
    honest += cfg.node_count - cfg.attack.count;
  }
  return {tp + fn ? double(tp) / double(tp + fn) : 1.0, double(fp) / double(honest)};
}

SimulationConfig attack_config(radio::NoiseModel noise) {
  SimulationConfig cfg;
  cfg.noise = noise;
  cfg.attack = {20, 20.0, 100.0};
  cfg.trials = 50;
  return cfg;
}

Outcome zero_noise_soundness() {
  auto cfg = attack_config(radio::NoiseModel::gaussian(0.0));
  bool pass = true;
  std::string detail;
  for (auto d : {DetectorChoice::consistency, DetectorChoice::mle, DetectorChoice::mahalanobis}) {
    cfg.detector = d;
    const auto r = detection_rates(cfg);
    pass = pass && r.recall == 1.0 && r.fpr == 0.0;
    detail += fmt("%s recall %.4f fpr %.4f; ", std::string(harness::to_string(d)).c_str(),
                  r.recall, r.fpr);
  }
  return {pass, detail};
}

Outcome noisy_detection_quality() {
  auto cfg = attack_config(radio::NoiseModel::gaussian(0.5));
  bool pass = true;
  std::string detail;
  for (auto d : {DetectorChoice::mle, DetectorChoice::mahalanobis}) {
    cfg.detector = d;
    const auto r = detection_rates(cfg);
    pass = pass && r.recall >= 0.95 && r.fpr <= 0.02;
    detail += fmt("%s recall %.4f fpr %.4f; ", std::string(harness::to_string(d)).c_str(),
                  r.recall, r.fpr);
  }
  return {pass, detail};
}

/// Mean localization error per (seed, detector, count) at the default config.
struct Sweep {
  std::map<std::tuple<std::uint64_t, DetectorChoice, std::size_t>, double> error;
  double none_mle_seconds = 0.0;
};

const std::vector<std::size_t> kCounts{5, 10, 15, 20};

const Sweep& default_sweep() {
  static const Sweep sweep = [] {
    Sweep s;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      for (auto d : {DetectorChoice::none, DetectorChoice::mle, DetectorChoice::mahalanobis}) {
        SimulationConfig cfg;
        cfg.master_seed = seed;
        cfg.detector = d;
        const auto start = Clock::now();
        const auto agg = harness::run_experiment(cfg, kCounts);
        if (d != DetectorChoice::mahalanobis) s.none_mle_seconds += seconds_since(start);
        for (const auto& row : agg.rows) s.error[{seed, d, row.num_malicious}] = row.mean_error;
      }
    }
    return s;
  }();
  return sweep;
}

Outcome filtering_reduces_error() {
  const auto& s = default_sweep();
  int held = 0, cells = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (auto c : kCounts) {
      const double mle = s.error.at({seed, DetectorChoice::mle, c});
      const double none = s.error.at({seed, DetectorChoice::none, c});
      held += mle <= none;
      ++cells;
      worst_ratio = std::max(worst_ratio, mle / none);
    }
  }
  return {held == cells && s.none_mle_seconds < 60.0,
          fmt("%d/%d (seed, count) cells with mle <= none, worst mle/none %.3f, sweep %.2f s", held,
              cells, worst_ratio, s.none_mle_seconds)};
}

Outcome mle_versus_mahalanobis() {
  const auto& s = default_sweep();
  double mle = 0.0, maha = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (auto c : kCounts) {
      mle += s.error.at({seed, DetectorChoice::mle, c});
      maha += s.error.at({seed, DetectorChoice::mahalanobis, c});
    }
  }
  const double ratio = mle / maha;
  return {ratio <= 1.05, fmt("mean error mle %.4f m, mahalanobis %.4f m, ratio %.4f",
                             mle / 20.0, maha / 20.0, ratio)};
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    while (end + 1 < order.size() && v[order[end + 1]] == v[order[k]]) ++end;
    for (std::size_t t = k; t <= end; ++t) r[order[t]] = 0.5 * double(k + end) + 1.0;
    k = end + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double n = double(a.size());
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += ra[k] / n;
    mb += rb[k] / n;
  }
  double cov = 0, va = 0, vb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    cov += (ra[k] - ma) * (rb[k] - mb);
    va += (ra[k] - ma) * (ra[k] - ma);
    vb += (rb[k] - mb) * (rb[k] - mb);
  }
  return cov / std::sqrt(va * vb);
}

Outcome trend_with_compromise() {
  const std::vector<std::size_t> counts{0, 5, 10, 15, 20, 25, 30};
  std::vector<double> x(counts.begin(), counts.end());
  SimulationConfig cfg;
  cfg.detector = DetectorChoice::none;
  std::vector<double> error;
  for (const auto& row : harness::run_experiment(cfg, counts).rows) error.push_back(row.mean_error);
  cfg.detector = DetectorChoice::mle;
  std::vector<double> work;
  for (const auto& row : harness::run_experiment(cfg, counts).rows)
    work.push_back(row.mean_trilaterations);
  const double rho_error = spearman(x, error);
  const double rho_work = spearman(x, work);
  return {rho_error >= 0.5 && rho_work >= 0.5,
          fmt("spearman(count, error none) %.3f, spearman(count, trilaterations mle) %.3f",
              rho_error, rho_work)};
}

std::string csv_without_elapsed(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string out;
  for (std::string line; std::getline(in, line);) {
    std::istringstream fields(line);
    std::string f;
    for (int col = 0; std::getline(fields, f, ','); ++col) out += (col == 8 ? "" : f) + ",";
    out += '\n';
  }
  return out;
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "anchorsec_acceptance";
  std::filesystem::create_directories(dir);
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  auto run = [](const std::string& out) {
    const char* argv[] = {"anchorsec-sim", "--trials",    "10",  "--malicious", "0",
                          "--malicious",   "10",          "--malicious", "20", "--detector",
                          "all",           "--seed",      "42",  "--out",       out.c_str()};
    return cli_main(int(std::size(argv)), argv);
  };
  const int rc_a = run(a), rc_b = run(b);
  const auto text_a = csv_without_elapsed(a), text_b = csv_without_elapsed(b);
  const bool same = rc_a == 0 && rc_b == 0 && !text_a.empty() && text_a == text_b;
  return {same, fmt("exit codes %d/%d, %zu bytes compared", rc_a, rc_b, text_a.size())};
}

Outcome persistence_round_trip() {
  Rng rng(117);
  const auto dep = network::deploy({}, 117, rng);
  const auto store = registry::build_references(dep);
  const auto path = std::filesystem::temp_directory_path() / "anchorsec_acceptance_refs.csv";
  registry::save(store, path);
  const auto back = registry::load(path);
  bool same = back.size() == store.size();
  for (std::size_t k = 0; same && k < store.size(); ++k) {
    const auto &x = store.records()[k], &y = back.records()[k];
    same = x.group_id == y.group_id && x.member_ids == y.member_ids &&
           x.store_index == y.store_index && x.reference_point.x == y.reference_point.x &&
           x.reference_point.y == y.reference_point.y;
  }
  return {same, fmt("%zu records", store.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"1 trilateration exactness", trilateration_exactness},
      {"2 discriminant identity", discriminant_identity},
      {"3 classify vs oracle", classify_vs_oracle},
      {"4 mahalanobis affine invariance", mahalanobis_affine_invariance},
      {"5 zero-noise soundness", zero_noise_soundness},
      {"6 noisy detection quality", noisy_detection_quality},
      {"7 filtering reduces error", filtering_reduces_error},
      {"8 mle vs mahalanobis error", mle_versus_mahalanobis},
      {"9 trend with compromise", trend_with_compromise},
      {"10 determinism", determinism},
      {"11 persistence round trip", persistence_round_trip},
  };
  int failures = 0;
  for (const auto& [name, check] : checks) {
    Outcome o{false, ""};
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failures ? "acceptance: FAILED " : "acceptance: all passed ") << failures
            << " failure(s)" << std::endl;
  return failures == 0 ? 0 : 1;
}
