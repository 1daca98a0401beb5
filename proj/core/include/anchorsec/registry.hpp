// SPDX-License-Identifier: Apache-2.0
//
// The aggregation point's reference stores. Store M1 of a group holds the
// group's trilateration point. Stores M2, M3, ... hold, one per neighbouring
// group in neighbour order, that neighbour's trilateration point as located
// through this group's anchors. All references are taken from true
// positions at deployment time, before any anchor is compromised.
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anchorsec/network.hpp"

namespace anchorsec::registry {

using geometry::Point;
using network::AnchorId;
using network::GroupId;

struct ReferenceRecord {
  GroupId group_id = 0;
  std::array<AnchorId, 3> member_ids{};
  Point reference_point;
  unsigned store_index = 1;  ///< 1 for M1, 2 for M2, ...

  std::string store_tag() const;

  friend bool operator==(const ReferenceRecord&, const ReferenceRecord&) = default;
};

class ReferenceStore {
 public:
  /// Throws Error{invalid_argument} on a duplicate (group, store) pair.
  void add(const ReferenceRecord& record);

  const std::vector<ReferenceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const ReferenceRecord* find(GroupId group, unsigned store_index) const;
  /// The M1 record; throws Error{invalid_argument} if the group has none.
  const ReferenceRecord& primary(GroupId group) const;
  /// M2, M3, ... of `group`, ascending.
  std::vector<const ReferenceRecord*> cross_records(GroupId group) const;

  /// Adjacencies skipped while building because the solve was degenerate.
  const std::vector<std::string>& notes() const { return notes_; }
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  friend bool operator==(const ReferenceStore& a, const ReferenceStore& b) {
    return a.records_ == b.records_;
  }

 private:
  std::vector<ReferenceRecord> records_;
  std::map<std::pair<GroupId, unsigned>, std::size_t> index_;
  std::vector<std::string> notes_;
};

/// Neighbouring group a cross record was taken against.
std::optional<GroupId> linked_group(const network::Deployment& dep, const ReferenceRecord& record);

ReferenceStore build_references(const network::Deployment& dep,
                                const geometry::Limits& limits = {});

inline constexpr const char* kReferenceHeader =
    "group_id,member_a,member_b,member_c,ref_x,ref_y,store_tag";

void write(const ReferenceStore& store, std::ostream& out);
ReferenceStore read(std::istream& in);

/// Throws Error{io_error}.
void save(const ReferenceStore& store, const std::filesystem::path& path);
/// Throws Error{io_error} or ParseError.
ReferenceStore load(const std::filesystem::path& path);

}  // namespace anchorsec::registry
