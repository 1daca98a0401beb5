// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/detect.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

namespace anchorsec::detect {

using network::Deployment;
using network::TrilaterationGroup;
using registry::ReferenceStore;

std::string_view to_string(Detector d) noexcept {
  switch (d) {
    case Detector::consistency: return "consistency";
    case Detector::mle: return "mle";
    case Detector::mahalanobis: return "mahalanobis";
  }
  return "unknown";
}

RangingSession::RangingSession(radio::NoiseModel noise, Rng& rng)
    : noise_(noise), rng_(&rng) {
  noise_.validate();
}

geometry::Fix RangingSession::locate(const std::array<Point, 3>& claimed,
                                     const std::array<Point, 3>& sources, Point target,
                                     const geometry::Limits& limits) {
  // Ranges are drawn before the frame is checked so that a degenerate solve
  // consumes the same randomness as a successful one.
  geometry::RangeTriple r;
  r.l1 = radio::measure_range(radio::true_distance(target, sources[0]), noise_, *rng_);
  r.l2 = radio::measure_range(radio::true_distance(target, sources[1]), noise_, *rng_);
  r.l3 = radio::measure_range(radio::true_distance(target, sources[2]), noise_, *rng_);
  const auto frame = geometry::canonical_frame(claimed[0], claimed[1], claimed[2], limits);
  const auto s = geometry::solve_canonical(frame, r);
  ++trilaterations_;
  return {frame.to_world({s.a1, s.a2}), s.residual};
}

Matrix2 RangingSession::spread(const std::array<Point, 3>& anchors, Point target,
                               std::size_t samples, double regularization,
                               const geometry::Limits& limits) {
  std::vector<Point> fixes;
  fixes.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    fixes.push_back(locate(anchors, anchors, target, limits).position);
  }
  return sample_covariance(fixes) + Matrix2::diagonal(regularization, regularization);
}

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr std::size_t kCrossPoolSize = 6;

/// Basis used to re-derive member `slot`: the two other members followed by
/// the group's trilateration point.
std::array<Point, 3> member_basis(const std::array<Point, 3>& members, std::size_t slot,
                                  Point trilateration_point) {
  const std::size_t a = (slot + 1) % 3;
  const std::size_t b = (slot + 2) % 3;
  return {members[std::min(a, b)], members[std::max(a, b)], trilateration_point};
}

struct MemberProbe {
  bool applicable = false;          ///< true geometry admits the solve
  std::optional<Point> residual;    ///< re-derived minus claimed; empty if degenerate
};

struct GroupProbes {
  std::optional<Point> point_fix;   ///< empty if the reported triple is degenerate
  std::array<MemberProbe, 3> members;

  std::size_t test_count() const {
    return 1 + static_cast<std::size_t>(std::count_if(
                   members.begin(), members.end(), [](const auto& m) { return m.applicable; }));
  }
};

GroupProbes probe_group(const Deployment& dep, const ReferenceStore& store,
                        const TrilaterationGroup& g, RangingSession& session,
                        const geometry::Limits& limits) {
  GroupProbes out;
  const Point reference = store.primary(g.id).reference_point;
  const auto claimed = dep.reported_positions(g);
  const auto sources = dep.true_positions(g);
  try {
    out.point_fix = session.locate(claimed, sources, reference, limits).position;
  } catch (const Error&) {
  }
  for (std::size_t slot = 0; slot < 3; ++slot) {
    const auto true_basis = member_basis(sources, slot, reference);
    if (geometry::check_triple(true_basis[0], true_basis[1], true_basis[2], limits)) continue;
    MemberProbe& probe = out.members[slot];
    probe.applicable = true;
    try {
      const auto fix = session.locate(member_basis(claimed, slot, reference), true_basis,
                                      sources[slot], limits);
      probe.residual = fix.position - claimed[slot];
    } catch (const Error&) {
    }
  }
  return out;
}

/// Group-stage outcome for one group. `members[k]` scores the probe that
/// re-derives member k, or repeats `group` where that probe does not apply.
struct Verdict {
  double group = 0.0;
  std::array<double, 3> members{};
};

/// Largest deviation among the probes of a group, in meters.
Verdict consistency_verdict(const GroupProbes& probes, Point reference) {
  Verdict v;
  v.group = probes.point_fix ? geometry::distance(*probes.point_fix, reference) : kInfinity;
  for (std::size_t slot = 0; slot < 3; ++slot) {
    const auto& m = probes.members[slot];
    v.members[slot] = !m.applicable ? kInfinity : m.residual ? geometry::norm(*m.residual) : kInfinity;
  }
  for (std::size_t slot = 0; slot < 3; ++slot) {
    if (probes.members[slot].applicable) v.group = std::max(v.group, v.members[slot]);
  }
  for (std::size_t slot = 0; slot < 3; ++slot) {
    if (!probes.members[slot].applicable) v.members[slot] = v.group;
  }
  return v;
}

std::map<GroupId, Verdict> consistency_verdicts(const Deployment& dep, const ReferenceStore& store,
                                                RangingSession& session,
                                                const geometry::Limits& limits) {
  std::map<GroupId, Verdict> verdicts;
  for (const auto& g : dep.groups) {
    if (!dep.is_active(g)) continue;
    const auto probes = probe_group(dep, store, g, session, limits);
    verdicts[g.id] = consistency_verdict(probes, store.primary(g.id).reference_point);
  }
  return verdicts;
}

/// Trusted points reachable from `group` through cross records, nearest first.
std::vector<Point> cross_pool(const Deployment& dep, const ReferenceStore& store, GroupId group) {
  std::vector<Point> pool;
  std::set<GroupId> visited{group};
  std::deque<GroupId> frontier{group};
  while (!frontier.empty() && pool.size() < kCrossPoolSize) {
    const GroupId current = frontier.front();
    frontier.pop_front();
    for (const auto* record : store.cross_records(current)) {
      const auto neighbour = registry::linked_group(dep, *record);
      if (!neighbour || !visited.insert(*neighbour).second) continue;
      pool.push_back(record->reference_point);
      frontier.push_back(*neighbour);
      if (pool.size() == kCrossPoolSize) break;
    }
  }
  return pool;
}

struct CrossTest {
  Point estimate;
  double distance = 0.0;  ///< meters, or Mahalanobis units when gated
  bool mismatch = false;
};

/// Triples (own, p, q) over pairs of pool points, keeping the well-shaped
/// ones; when none is, every solvable triple is kept instead.
std::vector<std::array<Point, 3>> cross_bases(Point own, const std::vector<Point>& pool,
                                              double min_angle, const geometry::Limits& limits) {
  std::vector<std::array<Point, 3>> solvable;
  std::vector<std::array<Point, 3>> shaped;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    for (std::size_t b = a + 1; b < pool.size(); ++b) {
      const std::array<Point, 3> basis{own, pool[a], pool[b]};
      if (geometry::check_triple(basis[0], basis[1], basis[2], limits)) continue;
      solvable.push_back(basis);
      if (geometry::min_angle(basis[0], basis[1], basis[2]) >= min_angle) shaped.push_back(basis);
    }
  }
  return shaped.empty() ? solvable : shaped;
}

/// Fills the group-stage fields common to every detector. An anchor's score
/// is the worst of its own probes over the groups containing it.
void record_scores(DetectionReport& report, const Deployment& dep,
                   const std::map<GroupId, Verdict>& verdicts, bool lower_is_worse) {
  for (const auto& [gid, verdict] : verdicts) {
    report.group_scores[gid] = verdict.group;
    const auto& members = dep.groups[gid].members;
    for (std::size_t slot = 0; slot < 3; ++slot) {
      const double score = verdict.members[slot];
      auto [it, inserted] = report.scores.emplace(members[slot], score);
      if (!inserted) {
        it->second = lower_is_worse ? std::min(it->second, score) : std::max(it->second, score);
      }
    }
  }
}

void merge_cross_check(DetectionReport& report, const DetectionReport& cross) {
  report.flagged = cross.flagged;
  report.insufficient = cross.insufficient;
  report.relocated = cross.relocated;
}

CrossCheckOptions cross_options(const Settings& s, bool gated) {
  CrossCheckOptions o;
  o.eps = s.eps;
  if (gated) o.gate = s.threshold;
  o.regularization = s.regularization;
  o.jitter_samples = s.jitter_samples;
  o.limits = s.limits;
  return o;
}

}  // namespace

std::set<GroupId> group_consistency(const Deployment& dep, const ReferenceStore& store,
                                    RangingSession& session, double eps,
                                    const geometry::Limits& limits) {
  std::set<GroupId> suspects;
  for (const auto& [gid, verdict] : consistency_verdicts(dep, store, session, limits)) {
    if (verdict.group > eps) suspects.insert(gid);
  }
  return suspects;
}

DetectionReport cross_check(const Deployment& dep, const ReferenceStore& store,
                            const std::set<GroupId>& suspect_groups, RangingSession& session,
                            const CrossCheckOptions& options) {
  DetectionReport report;
  report.threshold_used = options.gate.value_or(options.eps);
  report.suspect_groups = suspect_groups;
  const std::size_t before = session.trilaterations();
  const double min_angle = options.min_angle_deg * std::numbers::pi / 180.0;

  std::map<AnchorId, std::vector<CrossTest>> tests;
  for (GroupId gid : suspect_groups) {
    const TrilaterationGroup& g = dep.group(gid);
    if (!dep.is_active(g)) continue;
    const Point own = store.primary(gid).reference_point;
    const auto bases = cross_bases(own, cross_pool(dep, store, gid), min_angle, options.limits);

    for (AnchorId id : g.members) {
      const auto& anchor = dep.anchor(id);
      auto& anchor_tests = tests[id];
      for (const auto& basis : bases) {
        CrossTest t;
        t.estimate = session.locate(basis, basis, anchor.true_position, options.limits).position;
        const double gap = geometry::distance(t.estimate, anchor.reported_position);
        t.distance = gap;
        t.mismatch = gap > options.eps;
        if (options.gate) {
          const Matrix2 cov = session.spread(basis, t.estimate, options.jitter_samples,
                                             options.regularization, options.limits);
          t.distance = mahalanobis_distance(t.estimate, anchor.reported_position, cov);
          t.mismatch = t.mismatch && t.distance > *options.gate;
        }
        anchor_tests.push_back(t);
      }
    }
  }

  for (const auto& [id, list] : tests) {
    if (list.empty()) {
      report.insufficient.insert(id);
      continue;
    }
    double closest = kInfinity;
    for (const auto& t : list) closest = std::min(closest, t.distance);
    report.scores[id] = closest;
    const bool all_mismatch =
        std::all_of(list.begin(), list.end(), [](const CrossTest& t) { return t.mismatch; });
    if (!all_mismatch) continue;
    report.flagged.insert(id);
    Point sum;
    for (const auto& t : list) sum = sum + t.estimate;
    report.relocated[id] = sum / static_cast<double>(list.size());
  }
  report.trilaterations = session.trilaterations() - before;
  return report;
}

std::vector<GroupStatistics> fit_group_statistics(const ReferenceStore& store,
                                                  const Deployment& dep,
                                                  RangingSession& session,
                                                  std::size_t jitter_samples,
                                                  double regularization,
                                                  const geometry::Limits& limits) {
  if (jitter_samples < 3) {
    throw Error(Errc::invalid_argument, "at least 3 jitter samples are needed");
  }
  const Matrix2 ridge = Matrix2::diagonal(regularization, regularization);
  const double prior = dep.groups.empty() ? 0.0 : 1.0 / static_cast<double>(dep.groups.size());

  std::vector<GroupStatistics> stats;
  stats.reserve(dep.groups.size());
  for (const auto& g : dep.groups) {
    const Point reference = store.primary(g.id).reference_point;
    const auto anchors = dep.true_positions(g);

    GroupStatistics s;
    s.group_id = g.id;
    s.mean = reference;
    s.prior = prior;
    s.sample_count = jitter_samples;
    s.covariance = session.spread(anchors, reference, jitter_samples, 0.0, limits) + ridge;
    for (std::size_t slot = 0; slot < 3; ++slot) {
      const auto basis = member_basis(anchors, slot, reference);
      if (geometry::check_triple(basis[0], basis[1], basis[2], limits)) continue;
      s.member_covariance[slot] =
          session.spread(basis, anchors[slot], jitter_samples, 0.0, limits) + ridge;
    }
    stats.push_back(s);
  }
  return stats;
}

DetectionReport consistency_detect(const Deployment& dep, const ReferenceStore& store,
                                   RangingSession& session, const Settings& settings) {
  const std::size_t before = session.trilaterations();
  const auto verdicts = consistency_verdicts(dep, store, session, settings.limits);
  std::set<GroupId> suspects;
  for (const auto& [gid, verdict] : verdicts) {
    if (verdict.group > settings.eps) suspects.insert(gid);
  }

  DetectionReport report;
  report.detector = Detector::consistency;
  report.threshold_used = settings.eps;
  report.suspect_groups = suspects;
  record_scores(report, dep, verdicts, false);
  merge_cross_check(report, cross_check(dep, store, suspects, session,
                                        cross_options(settings, false)));
  report.trilaterations = session.trilaterations() - before;
  return report;
}

DetectionReport mle_detect(const Deployment& dep, const ReferenceStore& store,
                           std::span<const GroupStatistics> stats, RangingSession& session,
                           const Settings& settings) {
  const std::size_t before = session.trilaterations();
  std::map<GroupId, const GroupStatistics*> by_group;
  for (const auto& s : stats) by_group[s.group_id] = &s;

  std::set<GroupId> suspects;
  std::map<GroupId, Verdict> verdicts;
  for (const auto& g : dep.groups) {
    if (!dep.is_active(g)) continue;
    const auto it = by_group.find(g.id);
    if (it == by_group.end()) {
      throw Error(Errc::empty_statistics, "no statistics for group " + std::to_string(g.id));
    }
    const GroupStatistics& own = *it->second;
    const auto probes = probe_group(dep, store, g, session, settings.limits);
    const double t = family_threshold(settings.threshold, probes.test_count());

    // Rejected when misclassified or when a discriminant falls below
    // -ln|C| - t^2 of its own model.
    bool suspect = true;
    Verdict v;
    v.group = -kInfinity;
    if (probes.point_fix) {
      v.group = discriminant(*probes.point_fix, own);
      const double floor = -std::log(own.covariance.determinant()) - t * t;
      suspect = v.group < floor || classify(*probes.point_fix, stats) != g.id;
    }
    for (std::size_t slot = 0; slot < 3; ++slot) {
      const auto& m = probes.members[slot];
      v.members[slot] = v.group;
      if (!m.applicable) continue;
      if (!m.residual || !own.member_covariance[slot]) {
        v.members[slot] = -kInfinity;
        suspect = true;
        continue;
      }
      GroupStatistics member_model;
      member_model.covariance = *own.member_covariance[slot];
      v.members[slot] = discriminant(*m.residual, member_model);
      const double floor = -std::log(member_model.covariance.determinant()) - t * t;
      suspect = suspect || v.members[slot] < floor;
    }
    verdicts[g.id] = v;
    if (suspect) suspects.insert(g.id);
  }

  DetectionReport report;
  report.detector = Detector::mle;
  report.threshold_used = settings.threshold;
  report.suspect_groups = suspects;
  record_scores(report, dep, verdicts, true);
  merge_cross_check(report, cross_check(dep, store, suspects, session,
                                        cross_options(settings, true)));
  report.trilaterations = session.trilaterations() - before;
  return report;
}

DetectionReport mahalanobis_detect(const Deployment& dep, const ReferenceStore& store,
                                   RangingSession& session, const Settings& settings) {
  const std::size_t before = session.trilaterations();
  const auto stats = fit_group_statistics(store, dep, session, settings.jitter_samples,
                                          settings.regularization, settings.limits);

  std::set<GroupId> suspects;
  std::map<GroupId, Verdict> verdicts;
  for (const auto& g : dep.groups) {
    if (!dep.is_active(g)) continue;
    const GroupStatistics& own = stats[g.id];
    const auto probes = probe_group(dep, store, g, session, settings.limits);
    const double t = family_threshold(settings.threshold, probes.test_count());

    Verdict v;
    v.group = probes.point_fix ? mahalanobis_distance(*probes.point_fix, own.mean, own.covariance)
                               : kInfinity;
    for (std::size_t slot = 0; slot < 3; ++slot) {
      const auto& m = probes.members[slot];
      if (!m.applicable) continue;
      v.members[slot] = m.residual && own.member_covariance[slot]
                            ? mahalanobis_distance(*m.residual, {}, *own.member_covariance[slot])
                            : kInfinity;
      v.group = std::max(v.group, v.members[slot]);
    }
    for (std::size_t slot = 0; slot < 3; ++slot) {
      if (!probes.members[slot].applicable) v.members[slot] = v.group;
    }
    verdicts[g.id] = v;
    if (v.group > t) suspects.insert(g.id);
  }

  DetectionReport report;
  report.detector = Detector::mahalanobis;
  report.threshold_used = settings.threshold;
  report.suspect_groups = suspects;
  record_scores(report, dep, verdicts, false);
  merge_cross_check(report, cross_check(dep, store, suspects, session,
                                        cross_options(settings, true)));
  report.trilaterations = session.trilaterations() - before;
  return report;
}

DetectionReport run_detector(Detector detector, const Deployment& dep, const ReferenceStore& store,
                             RangingSession& session, const Settings& settings) {
  switch (detector) {
    case Detector::consistency:
      return consistency_detect(dep, store, session, settings);
    case Detector::mle: {
      const std::size_t before = session.trilaterations();
      const auto stats = fit_group_statistics(store, dep, session, settings.jitter_samples,
                                              settings.regularization, settings.limits);
      auto report = mle_detect(dep, store, stats, session, settings);
      report.trilaterations = session.trilaterations() - before;
      return report;
    }
    case Detector::mahalanobis:
      return mahalanobis_detect(dep, store, session, settings);
  }
  throw Error(Errc::invalid_argument, "unknown detector");
}

LocalizationError localization_error(const Deployment& dep, const ReferenceStore& store,
                                     RangingSession& session, const geometry::Limits& limits) {
  LocalizationError out;
  double total = 0.0;
  for (const auto& g : dep.groups) {
    if (!dep.is_active(g)) continue;
    const Point reference = store.primary(g.id).reference_point;
    try {
      const auto fix = session.locate(dep.reported_positions(g), dep.true_positions(g),
                                      reference, limits);
      total += geometry::distance(fix.position, reference);
      ++out.groups;
    } catch (const Error&) {
    }
  }
  if (out.groups > 0) out.mean = total / static_cast<double>(out.groups);
  return out;
}

}  // namespace anchorsec::detect
