#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "contactlab/rng.hpp"

namespace contactlab {

// Canonical payload of a group element. The interpretation depends on the
// group: coordinates for lattices, a reduced word for free groups, a residue
// for cyclic groups, walker position followed by sorted lamp positions for the
// lamplighter. Inline storage keeps the simulation hot path allocation free
// for the common cases.
using ElementData = boost::container::small_vector<std::int32_t, 6>;

struct GroupElement {
  ElementData v;

  GroupElement() = default;
  explicit GroupElement(ElementData d) : v(std::move(d)) {}
  GroupElement(std::initializer_list<std::int32_t> il) : v(il) {}

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.v == b.v;
  }
  // deterministic total order: length first, then lexicographic
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    if (a.v.size() != b.v.size()) return a.v.size() < b.v.size();
    for (std::size_t i = 0; i < a.v.size(); ++i)
      if (a.v[i] != b.v[i]) return a.v[i] < b.v[i];
    return false;
  }
};

struct ElementHash {
  std::size_t operator()(const GroupElement& e) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (e.v.size() * 0xff51afd7ed558ccdULL);
    for (std::int32_t x : e.v)
      h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)));
    return static_cast<std::size_t>(h);
  }
};

enum class GroupKind { integer_lattice, free_group, lamplighter, cyclic };

// A countable group from the catalogue together with its standard symmetric
// generating set (identity excluded). All element operations live here; the
// payloads themselves are inert data.
class Group {
 public:
  static Group integer_lattice(int dim);
  static Group free_group(int rank);
  static Group lamplighter();  // wreath product of Z_2 by Z
  static Group cyclic(int n);  // n == 1 gives the trivial group

  // accepts "Z", "Z^d", "Fk", "lamplighter", "Cn"
  static Group parse(std::string_view text);

  GroupKind kind() const { return kind_; }
  int param() const { return param_; }  // dim, rank, or modulus
  const std::string& name() const { return name_; }

  bool is_finite() const { return kind_ == GroupKind::cyclic; }
  // number of elements; only valid for finite groups
  std::size_t order() const;

  GroupElement identity() const;
  bool is_identity(const GroupElement& e) const;
  GroupElement compose(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;

  const std::vector<GroupElement>& generators() const { return generators_; }

  // distance to the identity in the word metric of the standard generators;
  // closed forms where available, breadth first search for the lamplighter
  int word_norm(const GroupElement& e, std::size_t cap = kDefaultBallCap) const;

  // all elements with word norm <= radius, sorted by (norm, payload order);
  // throws CapExceeded beyond cap elements
  std::vector<GroupElement> ball(int radius, std::size_t cap = kDefaultBallCap) const;

  GroupElement parse_element(std::string_view text) const;
  std::string format_element(const GroupElement& e) const;

  GroupElement random_element(Rng& rng, int max_norm) const;

  friend bool operator==(const Group& a, const Group& b) {
    return a.kind_ == b.kind_ && a.param_ == b.param_;
  }

  static constexpr std::size_t kDefaultBallCap = 10'000'000;

 private:
  Group(GroupKind kind, int param);

  GroupKind kind_;
  int param_;
  std::string name_;
  std::vector<GroupElement> generators_;
};

}  // namespace contactlab
