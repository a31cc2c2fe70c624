#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "contactlab/group.hpp"

namespace contactlab {

// Finite set of infected sites with O(1) membership, insert, erase and
// uniform random member access. Erase swaps with the back, so iteration order
// is history dependent but fully determined by the event sequence.
class Configuration {
 public:
  Configuration() = default;

  static Configuration from(const std::vector<GroupElement>& items) {
    Configuration c;
    for (const auto& e : items) c.insert(e);
    return c;
  }

  bool contains(const GroupElement& e) const { return index_.count(e) != 0; }

  bool insert(const GroupElement& e) {
    auto [it, fresh] = index_.try_emplace(e, static_cast<std::uint32_t>(items_.size()));
    if (fresh) items_.push_back(e);
    return fresh;
  }

  bool erase(const GroupElement& e) {
    auto it = index_.find(e);
    if (it == index_.end()) return false;
    std::uint32_t pos = it->second;
    std::uint32_t last = static_cast<std::uint32_t>(items_.size()) - 1;
    if (pos != last) {
      items_[pos] = std::move(items_[last]);
      index_[items_[pos]] = pos;
    }
    items_.pop_back();
    index_.erase(it);
    return true;
  }

  const GroupElement& at(std::size_t i) const { return items_[i]; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<GroupElement>& items() const { return items_; }

  std::vector<GroupElement> sorted() const {
    std::vector<GroupElement> out = items_;
    std::sort(out.begin(), out.end());
    return out;
  }

  bool intersects(const Configuration& other) const {
    const Configuration& small = size() <= other.size() ? *this : other;
    const Configuration& big = size() <= other.size() ? other : *this;
    for (const auto& e : small.items_)
      if (big.contains(e)) return true;
    return false;
  }

  bool is_subset_of(const Configuration& other) const {
    for (const auto& e : items_)
      if (!other.contains(e)) return false;
    return true;
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    if (a.size() != b.size()) return false;
    return a.is_subset_of(b);
  }

 private:
  std::vector<GroupElement> items_;
  std::unordered_map<GroupElement, std::uint32_t, ElementHash> index_;
};

}  // namespace contactlab
