// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/registry.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>

#include "text.hpp"

namespace anchorsec::registry {

std::string ReferenceRecord::store_tag() const { return "M" + std::to_string(store_index); }

void ReferenceStore::add(const ReferenceRecord& record) {
  if (record.store_index == 0) {
    throw Error(Errc::invalid_argument, "store index starts at 1 (M1)");
  }
  const auto key = std::make_pair(record.group_id, record.store_index);
  if (index_.contains(key)) {
    throw Error(Errc::invalid_argument, "duplicate record for group " +
                                            std::to_string(record.group_id) + " in " +
                                            record.store_tag());
  }
  index_.emplace(key, records_.size());
  records_.push_back(record);
}

const ReferenceRecord* ReferenceStore::find(GroupId group, unsigned store_index) const {
  const auto it = index_.find({group, store_index});
  return it == index_.end() ? nullptr : &records_[it->second];
}

const ReferenceRecord& ReferenceStore::primary(GroupId group) const {
  if (const auto* r = find(group, 1)) return *r;
  throw Error(Errc::invalid_argument, "no M1 reference for group " + std::to_string(group));
}

std::vector<const ReferenceRecord*> ReferenceStore::cross_records(GroupId group) const {
  std::vector<const ReferenceRecord*> out;
  for (auto it = index_.lower_bound({group, 2}); it != index_.end() && it->first.first == group;
       ++it) {
    out.push_back(&records_[it->second]);
  }
  return out;
}

std::optional<GroupId> linked_group(const network::Deployment& dep, const ReferenceRecord& record) {
  if (record.store_index < 2 || record.group_id >= dep.neighbors.size()) return std::nullopt;
  const auto& adjacent = dep.neighbors[record.group_id];
  const std::size_t slot = record.store_index - 2;
  if (slot >= adjacent.size()) return std::nullopt;
  return adjacent[slot];
}

ReferenceStore build_references(const network::Deployment& dep, const geometry::Limits& limits) {
  ReferenceStore store;
  for (const auto& g : dep.groups) {
    store.add({g.id, g.members, g.trilateration_point, 1});
  }
  for (const auto& g : dep.groups) {
    const auto anchors = dep.true_positions(g);
    const auto& adjacent = dep.neighbors[g.id];
    for (std::size_t k = 0; k < adjacent.size(); ++k) {
      const Point target = dep.groups[adjacent[k]].trilateration_point;
      const geometry::RangeTriple ranges{geometry::distance(target, anchors[0]),
                                         geometry::distance(target, anchors[1]),
                                         geometry::distance(target, anchors[2])};
      try {
        const auto fix = geometry::trilaterate(anchors, ranges, limits);
        store.add({g.id, g.members, fix.position, static_cast<unsigned>(k + 2)});
      } catch (const Error& e) {
        store.add_note("group " + std::to_string(g.id) + " -> " + std::to_string(adjacent[k]) +
                       " skipped: " + e.what());
      }
    }
  }
  return store;
}

void write(const ReferenceStore& store, std::ostream& out) {
  out << kReferenceHeader << '\n';
  for (const auto& r : store.records()) {
    out << r.group_id << ',' << r.member_ids[0] << ',' << r.member_ids[1] << ','
        << r.member_ids[2] << ',' << text::format_double(r.reference_point.x) << ','
        << text::format_double(r.reference_point.y) << ',' << r.store_tag() << '\n';
  }
}

namespace {

template <typename T>
T id_field(std::string_view field, std::size_t line, const char* name) {
  const auto v = text::parse_unsigned(field);
  if (!v || *v > std::numeric_limits<T>::max()) {
    throw ParseError(line, std::string("bad ") + name + " '" + std::string(field) + "'");
  }
  return static_cast<T>(*v);
}

double coordinate_field(std::string_view field, std::size_t line, const char* name) {
  const auto v = text::parse_double(field);
  if (!v || !std::isfinite(*v)) {
    throw ParseError(line, std::string("bad ") + name + " '" + std::string(field) + "'");
  }
  return *v;
}

}  // namespace

ReferenceStore read(std::istream& in) {
  ReferenceStore store;
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++number;
  if (line != kReferenceHeader) throw ParseError(number, "unexpected header '" + line + "'");

  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto f = text::split(line, ',');
    if (f.size() != 7) {
      throw ParseError(number, "expected 7 fields, found " + std::to_string(f.size()));
    }
    ReferenceRecord r;
    r.group_id = id_field<GroupId>(f[0], number, "group_id");
    r.member_ids = {id_field<AnchorId>(f[1], number, "member_a"),
                    id_field<AnchorId>(f[2], number, "member_b"),
                    id_field<AnchorId>(f[3], number, "member_c")};
    r.reference_point = {coordinate_field(f[4], number, "ref_x"),
                         coordinate_field(f[5], number, "ref_y")};
    const std::string_view tag = f[6];
    if (tag.size() < 2 || tag.front() != 'M') {
      throw ParseError(number, "bad store_tag '" + std::string(tag) + "'");
    }
    r.store_index = id_field<unsigned>(tag.substr(1), number, "store_tag");
    if (r.store_index == 0) throw ParseError(number, "store_tag M0 is not valid");
    try {
      store.add(r);
    } catch (const Error& e) {
      throw ParseError(number, e.what());
    }
  }
  return store;
}

void save(const ReferenceStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  write(store, out);
  if (!out) throw Error(Errc::io_error, "failed writing " + path.string());
}

ReferenceStore load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  return read(in);
}

}  // namespace anchorsec::registry
