// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <string>

#include "text.hpp"

namespace anchorsec::network {

bool Area::contains(Point p) const {
  return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
}

Point Area::clamp(Point p) const {
  return {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
}

Point Area::sample(Rng& rng) const {
  std::uniform_real_distribution<double> ux(0.0, width);
  std::uniform_real_distribution<double> uy(0.0, height);
  const double x = ux(rng);
  return {x, uy(rng)};
}

void Area::validate() const {
  if (!(width > 0.0 && height > 0.0) || !std::isfinite(width) || !std::isfinite(height)) {
    throw Error(Errc::invalid_argument, "deployment area must have positive finite sides");
  }
}

bool TrilaterationGroup::contains(AnchorId anchor) const {
  return std::find(members.begin(), members.end(), anchor) != members.end();
}

void AttackSpec::validate() const {
  if (!std::isfinite(offset_min) || !std::isfinite(offset_max) || offset_min < 0.0 ||
      offset_min > offset_max) {
    throw Error(Errc::invalid_argument, "attack offsets must satisfy 0 <= min <= max");
  }
}

const AnchorNode& Deployment::anchor(AnchorId id) const {
  if (id >= anchors.size()) {
    throw Error(Errc::unknown_anchor_id, "anchor " + std::to_string(id));
  }
  return anchors[id];
}

const TrilaterationGroup& Deployment::group(GroupId id) const {
  if (id >= groups.size()) {
    throw Error(Errc::invalid_argument, "group " + std::to_string(id));
  }
  return groups[id];
}

bool Deployment::is_active(const TrilaterationGroup& g) const {
  return std::none_of(g.members.begin(), g.members.end(),
                      [&](AnchorId id) { return anchors[id].quarantined; });
}

std::array<Point, 3> Deployment::true_positions(const TrilaterationGroup& g) const {
  return {anchors[g.members[0]].true_position, anchors[g.members[1]].true_position,
          anchors[g.members[2]].true_position};
}

std::array<Point, 3> Deployment::reported_positions(const TrilaterationGroup& g) const {
  return {anchors[g.members[0]].reported_position, anchors[g.members[1]].reported_position,
          anchors[g.members[2]].reported_position};
}

std::vector<GroupId> Deployment::groups_of(AnchorId id) const {
  std::vector<GroupId> out;
  for (const auto& g : groups) {
    if (g.contains(id)) out.push_back(g.id);
  }
  return out;
}

std::set<AnchorId> Deployment::compromised_ids() const {
  std::set<AnchorId> out;
  for (const auto& a : anchors) {
    if (a.compromised) out.insert(a.id);
  }
  return out;
}

std::size_t Deployment::active_group_count() const {
  return static_cast<std::size_t>(
      std::count_if(groups.begin(), groups.end(), [&](const auto& g) { return is_active(g); }));
}

namespace {

class Builder {
 public:
  Builder(const Area& area, Rng& rng, const DeployOptions& options)
      : area_(area), rng_(rng), options_(options) {
    dep_.area = area;
  }

  AnchorId add_anchor(Point p) {
    const auto id = static_cast<AnchorId>(dep_.anchors.size());
    dep_.anchors.push_back({id, p, p, false, false});
    return id;
  }

  Point position(AnchorId id) const { return dep_.anchors[id].true_position; }

  GroupId add_group(std::array<AnchorId, 3> members) {
    const auto id = static_cast<GroupId>(dep_.groups.size());
    const std::array<Point, 3> pts{position(members[0]), position(members[1]),
                                   position(members[2])};
    dep_.groups.push_back({id, members, geometry::centroid(pts), std::nullopt});
    return id;
  }

  /// Places an anchor on the group's trilateration point.
  AnchorId add_point_anchor(GroupId group) {
    const AnchorId id = add_anchor(area_.clamp(dep_.groups[group].trilateration_point));
    dep_.groups[group].point_anchor = id;
    return id;
  }

  /// Draws fresh positions until `accept` holds for them.
  template <std::size_t N, typename Accept>
  std::array<Point, N> sample_until(Accept accept) {
    for (std::size_t attempt = 0; attempt < options_.max_attempts; ++attempt) {
      std::array<Point, N> pts;
      for (auto& p : pts) p = area_.sample(rng_);
      if (accept(pts)) return pts;
    }
    throw Error(Errc::placement_exhausted,
                std::to_string(options_.max_attempts) + " consecutive placements rejected");
  }

  bool valid(Point a, Point b, Point c) const {
    return !geometry::check_triple(a, b, c, options_.limits).has_value() &&
           geometry::min_angle(a, b, c) >= options_.min_angle_deg * std::numbers::pi / 180.0;
  }

  void link_neighbors() {
    const std::size_t n = dep_.groups.size();
    dep_.neighbors.assign(n, {});
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (adjacent(dep_.groups[a], dep_.groups[b])) {
          dep_.neighbors[a].push_back(static_cast<GroupId>(b));
          dep_.neighbors[b].push_back(static_cast<GroupId>(a));
        }
      }
    }
  }

  std::array<AnchorId, 3> members(GroupId id) const { return dep_.groups[id].members; }
  std::size_t group_count() const { return dep_.groups.size(); }

  Deployment take() { return std::move(dep_); }

 private:
  static bool adjacent(const TrilaterationGroup& a, const TrilaterationGroup& b) {
    for (AnchorId m : a.members) {
      if (b.contains(m)) return true;
    }
    return (a.point_anchor && b.contains(*a.point_anchor)) ||
           (b.point_anchor && a.contains(*b.point_anchor));
  }

  const Area& area_;
  Rng& rng_;
  const DeployOptions& options_;
  Deployment dep_;
};

}  // namespace

Deployment deploy(const Area& area, std::size_t node_count, Rng& rng,
                  const DeployOptions& options) {
  area.validate();
  if (node_count < 4) {
    throw Error(Errc::invalid_argument, "deployment needs at least 4 anchors");
  }
  if (!(options.min_angle_deg >= 0.0 && options.min_angle_deg < 60.0)) {
    throw Error(Errc::invalid_argument, "min_angle_deg must lie in [0, 60)");
  }

  Builder b(area, rng, options);
  const auto seed = b.sample_until<3>([&](const auto& p) { return b.valid(p[0], p[1], p[2]); });
  const AnchorId a0 = b.add_anchor(seed[0]);
  const AnchorId a1 = b.add_anchor(seed[1]);
  const AnchorId a2 = b.add_anchor(seed[2]);
  GroupId previous = b.add_group({a0, a1, a2});
  AnchorId latest = b.add_point_anchor(previous);
  bool latest_grouped = false;
  std::size_t placed = 4;

  // Invariant at the top of the loop: `latest` is the point anchor of
  // `previous` and belongs to no group yet.
  while (placed < node_count) {
    const Point pivot = b.position(latest);
    if (node_count - placed >= 2) {
      const auto fresh =
          b.sample_until<2>([&](const auto& p) { return b.valid(pivot, p[0], p[1]); });
      const AnchorId p = b.add_anchor(fresh[0]);
      const AnchorId q = b.add_anchor(fresh[1]);
      previous = b.add_group({latest, p, q});
      latest_grouped = true;
      placed += 2;
      if (placed < node_count) {
        latest = b.add_point_anchor(previous);
        latest_grouped = false;
        ++placed;
      }
    } else {
      // One anchor left: pair it with the pivot and a member of its parent group.
      const AnchorId partner = b.members(previous)[0];
      const Point partner_pos = b.position(partner);
      const auto fresh =
          b.sample_until<1>([&](const auto& p) { return b.valid(pivot, p[0], partner_pos); });
      const AnchorId p = b.add_anchor(fresh[0]);
      previous = b.add_group({latest, p, partner});
      latest_grouped = true;
      ++placed;
    }
  }

  // A trailing point anchor closes the chain with the two members of its
  // parent that give the best-shaped triangle; the angle floor is waived
  // here because the point sits inside the parent. The four-anchor
  // deployment is left as the single seed group.
  if (!latest_grouped && b.group_count() > 1) {
    const auto parent = b.members(previous);
    const Point at = b.position(latest);
    constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    std::optional<std::array<int, 2>> best;
    double best_angle = -1.0;
    for (const auto& pair : pairs) {
      const Point u = b.position(parent[pair[0]]);
      const Point v = b.position(parent[pair[1]]);
      if (geometry::check_triple(at, u, v, options.limits)) continue;
      const double angle = geometry::min_angle(at, u, v);
      if (angle > best_angle) {
        best_angle = angle;
        best = pair;
      }
    }
    if (best) b.add_group({latest, parent[(*best)[0]], parent[(*best)[1]]});
  }

  b.link_neighbors();
  return b.take();
}

Deployment inject_attack(Deployment dep, const AttackSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = dep.anchors.size();
  if (spec.count > n) {
    throw Error(Errc::count_exceeds_population, std::to_string(spec.count) +
                                                    " compromised anchors requested of " +
                                                    std::to_string(n));
  }

  // Partial Fisher-Yates; the offset is drawn right after each pick so the
  // first k victims do not depend on the total count.
  std::vector<AnchorId> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = static_cast<AnchorId>(k);
  std::uniform_real_distribution<double> radius(spec.offset_min, spec.offset_max);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < spec.count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(order[k], order[pick(rng)]);
    AnchorNode& victim = dep.anchors[order[k]];
    const double r = radius(rng);
    const double theta = angle(rng);
    victim.compromised = true;
    victim.reported_position = victim.true_position + Point{r * std::cos(theta), r * std::sin(theta)};
  }
  return dep;
}

Deployment quarantine(Deployment dep, const std::set<AnchorId>& flagged) {
  for (AnchorId id : flagged) {
    if (id >= dep.anchors.size()) {
      throw Error(Errc::unknown_anchor_id, "cannot quarantine anchor " + std::to_string(id));
    }
  }
  for (AnchorId id : flagged) dep.anchors[id].quarantined = true;
  return dep;
}

void write_deployment(const Deployment& dep, std::ostream& out) {
  out << "id,true_x,true_y,reported_x,reported_y,compromised,quarantined\n";
  for (const auto& a : dep.anchors) {
    out << a.id << ',' << text::format_double(a.true_position.x) << ','
        << text::format_double(a.true_position.y) << ','
        << text::format_double(a.reported_position.x) << ','
        << text::format_double(a.reported_position.y) << ',' << (a.compromised ? 1 : 0) << ','
        << (a.quarantined ? 1 : 0) << '\n';
  }
}

void save_deployment(const Deployment& dep, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  write_deployment(dep, out);
  if (!out) throw Error(Errc::io_error, "failed writing " + path.string());
}

}  // namespace anchorsec::network
