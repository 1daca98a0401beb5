// SPDX-License-Identifier: Apache-2.0
//
// Cheating-anchor detection at the aggregation point.
//
// Every detector runs in two stages. The group stage re-localizes, from the
// anchors' reported positions and fresh range measurements, each group's
// trilateration point and each member's own position (derived from the other
// two members plus the trusted trilateration point), and decides which
// groups look inconsistent with their references. The cross stage then
// re-derives every member of a suspect group from trilateration points of
// neighbouring groups stored at deployment and flags the members whose
// claimed position disagrees with all of those derivations.
//
// The detectors differ only in the group-stage test:
//   consistency   plain distance against `eps`
//   mle           Gaussian class model: misclassified, or discriminant below
//                 the floor -ln|C| - t^2
//   mahalanobis   Mahalanobis distance above t
// where t is the configured threshold, shared across the probes of a group
// so that a group is rejected with the tail probability of a single test.
#pragma once

#include <map>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "anchorsec/network.hpp"
#include "anchorsec/radio.hpp"
#include "anchorsec/registry.hpp"
#include "anchorsec/statistics.hpp"

namespace anchorsec::detect {

enum class Detector { consistency, mle, mahalanobis };

std::string_view to_string(Detector d) noexcept;

struct Settings {
  double eps = 1.0;                          ///< meters
  double threshold = default_threshold();    ///< Mahalanobis units
  double regularization = 1e-6;              ///< meters^2 added to covariance diagonals
  std::size_t jitter_samples = 100;
  geometry::Limits limits;
};

/// Draws range measurements and counts the trilaterations performed with them.
class RangingSession {
 public:
  RangingSession(radio::NoiseModel noise, Rng& rng);

  /// Measures the ranges from `target` to `sources` and trilaterates them
  /// against the `claimed` anchor positions.
  geometry::Fix locate(const std::array<Point, 3>& claimed, const std::array<Point, 3>& sources,
                       Point target, const geometry::Limits& limits);

  /// Sample covariance of `samples` noisy fixes of `target` from `anchors`,
  /// plus `regularization` on the diagonal.
  Matrix2 spread(const std::array<Point, 3>& anchors, Point target, std::size_t samples,
                 double regularization, const geometry::Limits& limits);

  const radio::NoiseModel& noise() const { return noise_; }
  Rng& rng() { return *rng_; }
  std::size_t trilaterations() const { return trilaterations_; }

 private:
  radio::NoiseModel noise_;
  Rng* rng_;
  std::size_t trilaterations_ = 0;
};

struct DetectionReport {
  Detector detector = Detector::consistency;
  std::set<AnchorId> flagged;
  /// Group-stage score of each anchor in an active group, taken from the
  /// probe that re-derives that anchor: deviation (consistency, meters),
  /// discriminant (mle, lowest over its groups) or distance (mahalanobis).
  /// Where no such probe applies the group's score stands in.
  std::map<AnchorId, double> scores;
  double threshold_used = 0.0;
  std::set<GroupId> suspect_groups;
  /// Worst probe of each active group.
  std::map<GroupId, double> group_scores;
  /// Members of suspect groups that could not be cross-checked.
  std::set<AnchorId> insufficient;
  /// Location re-derived for each flagged anchor.
  std::map<AnchorId, Point> relocated;
  std::size_t trilaterations = 0;
};

/// Groups whose trilateration point or member positions, re-localized from
/// reported positions, deviate from the references by more than `eps`.
/// Groups whose reported geometry is degenerate are suspect.
std::set<GroupId> group_consistency(const network::Deployment& dep,
                                    const registry::ReferenceStore& store,
                                    RangingSession& session, double eps,
                                    const geometry::Limits& limits = {});

struct CrossCheckOptions {
  double eps = 1.0;
  /// When set, a mismatch must also exceed this Mahalanobis distance under
  /// the spread of the cross-trilateration.
  std::optional<double> gate;
  /// Cross-trilaterations over thinner triangles than this are not attempted.
  double min_angle_deg = 10.0;
  double regularization = 1e-6;
  std::size_t jitter_samples = 100;
  geometry::Limits limits;
};

/// Re-derives each member of the suspect groups from trusted trilateration
/// points of neighbouring groups (M2, M3, ... walked breadth first) and flags
/// a member when every such derivation disagrees with its claimed position.
DetectionReport cross_check(const network::Deployment& dep, const registry::ReferenceStore& store,
                            const std::set<GroupId>& suspect_groups, RangingSession& session,
                            const CrossCheckOptions& options);

/// Per group: mean at the M1 reference, covariance of `jitter_samples` noisy
/// re-localizations of the trilateration point (plus `regularization` I),
/// uniform prior. Member spreads are fitted the same way.
std::vector<GroupStatistics> fit_group_statistics(const registry::ReferenceStore& store,
                                                  const network::Deployment& dep,
                                                  RangingSession& session,
                                                  std::size_t jitter_samples,
                                                  double regularization = 1e-6,
                                                  const geometry::Limits& limits = {});

DetectionReport consistency_detect(const network::Deployment& dep,
                                   const registry::ReferenceStore& store,
                                   RangingSession& session, const Settings& settings = {});

DetectionReport mle_detect(const network::Deployment& dep, const registry::ReferenceStore& store,
                           std::span<const GroupStatistics> stats, RangingSession& session,
                           const Settings& settings = {});

/// Fits its own statistics with `session`.
DetectionReport mahalanobis_detect(const network::Deployment& dep,
                                   const registry::ReferenceStore& store,
                                   RangingSession& session, const Settings& settings = {});

DetectionReport run_detector(Detector detector, const network::Deployment& dep,
                             const registry::ReferenceStore& store, RangingSession& session,
                             const Settings& settings = {});

struct LocalizationError {
  double mean = 0.0;  ///< meters
  std::size_t groups = 0;
};

/// Mean distance between each active group's re-localized trilateration
/// point and its M1 reference; degenerate groups are left out.
LocalizationError localization_error(const network::Deployment& dep,
                                     const registry::ReferenceStore& store,
                                     RangingSession& session,
                                     const geometry::Limits& limits = {});

}  // namespace anchorsec::detect
