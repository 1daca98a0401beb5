// SPDX-License-Identifier: Apache-2.0
//
// Anchor population, chained deployment, compromise injection and
// quarantine. A Deployment is a plain value: every operation returns a new
// one and never mutates its input.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <vector>

#include "anchorsec/geometry.hpp"
#include "anchorsec/random.hpp"

namespace anchorsec::network {

using geometry::Point;
using AnchorId = std::uint32_t;
using GroupId = std::uint32_t;

struct Area {
  double width = 600.0;
  double height = 600.0;

  bool contains(Point p) const;
  Point clamp(Point p) const;
  Point sample(Rng& rng) const;
  void validate() const;

  friend bool operator==(const Area&, const Area&) = default;
};

struct AnchorNode {
  AnchorId id = 0;
  Point true_position;
  Point reported_position;  ///< equals true_position unless compromised
  bool compromised = false;
  bool quarantined = false;

  friend bool operator==(const AnchorNode&, const AnchorNode&) = default;
};

struct TrilaterationGroup {
  GroupId id = 0;
  std::array<AnchorId, 3> members{};
  Point trilateration_point;             ///< centroid of the members' true positions
  std::optional<AnchorId> point_anchor;  ///< anchor deployed on trilateration_point, if any

  bool contains(AnchorId anchor) const;

  friend bool operator==(const TrilaterationGroup&, const TrilaterationGroup&) = default;
};

struct AttackSpec {
  std::size_t count = 0;
  double offset_min = 20.0;
  double offset_max = 100.0;

  void validate() const;
};

struct DeployOptions {
  geometry::Limits limits;
  double min_angle_deg = 20.0;      ///< smallest interior angle of a group triangle
  std::size_t max_attempts = 1000;  ///< consecutive rejected samples before giving up
};

struct Deployment {
  Area area;
  std::vector<AnchorNode> anchors;             ///< anchors[k].id == k
  std::vector<TrilaterationGroup> groups;      ///< groups[k].id == k
  std::vector<std::vector<GroupId>> neighbors; ///< ascending ids per group

  const AnchorNode& anchor(AnchorId id) const;
  const TrilaterationGroup& group(GroupId id) const;

  /// False once any member has been quarantined.
  bool is_active(const TrilaterationGroup& g) const;

  std::array<Point, 3> true_positions(const TrilaterationGroup& g) const;
  std::array<Point, 3> reported_positions(const TrilaterationGroup& g) const;
  std::vector<GroupId> groups_of(AnchorId id) const;
  std::set<AnchorId> compromised_ids() const;
  std::size_t active_group_count() const;

  friend bool operator==(const Deployment&, const Deployment&) = default;
};

/// Chained deployment.
///
/// Three anchors are drawn uniformly (rejecting degenerate triples) and
/// form group 0; the next anchor is placed on that group's trilateration
/// point. From then on the most recently placed anchor is combined with two
/// fresh uniform positions into a new group, and another anchor is placed on
/// its trilateration point, until `node_count` anchors exist. Any anchor
/// left over at the end is joined into a closing group with members of the
/// group it was derived from. Groups are neighbours when they share a member
/// or when one group's point anchor is a member of the other.
///
/// Throws Error{invalid_argument} for node_count < 4 or a bad area, and
/// Error{placement_exhausted} after `max_attempts` consecutive rejections.
Deployment deploy(const Area& area, std::size_t node_count, Rng& rng,
                  const DeployOptions& options = {});

/// Compromises exactly `spec.count` distinct anchors chosen uniformly without
/// replacement; each reports its true position shifted by r in direction
/// theta, r ~ U[offset_min, offset_max], theta ~ U[0, 2 pi).
Deployment inject_attack(Deployment dep, const AttackSpec& spec, Rng& rng);

/// Marks `flagged` anchors quarantined; groups containing one become inactive.
Deployment quarantine(Deployment dep, const std::set<AnchorId>& flagged);

/// `id,true_x,true_y,reported_x,reported_y,compromised,quarantined` per line
/// after a header line.
void write_deployment(const Deployment& dep, std::ostream& out);
void save_deployment(const Deployment& dep, const std::filesystem::path& path);

}  // namespace anchorsec::network
