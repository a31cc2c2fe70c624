#include "contactlab/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

int parse_int(std::string_view s, const char* what) {
  int value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// symmetric difference of two sorted lamp position lists
void sym_diff_into(const std::int32_t* a, std::size_t na, const std::int32_t* b,
                   std::size_t nb, std::int32_t shift_b, ElementData& out) {
  std::size_t i = 0, j = 0;
  while (i < na || j < nb) {
    if (j == nb) {
      out.push_back(a[i++]);
    } else if (i == na) {
      out.push_back(b[j++] + shift_b);
    } else {
      std::int32_t x = a[i];
      std::int32_t y = b[j] + shift_b;
      if (x < y) {
        out.push_back(a[i++]);
      } else if (y < x) {
        out.push_back(y), ++j;
      } else {
        ++i, ++j;  // paired lamps cancel
      }
    }
  }
}

}  // namespace

Group::Group(GroupKind kind, int param) : kind_(kind), param_(param) {
  switch (kind_) {
    case GroupKind::integer_lattice: {
      if (param_ < 1 || param_ > 16) throw ConfigError("lattice dimension out of range");
      name_ = param_ == 1 ? "Z" : "Z^" + std::to_string(param_);
      for (int i = 0; i < param_; ++i) {
        ElementData plus(static_cast<std::size_t>(param_), 0);
        plus[static_cast<std::size_t>(i)] = 1;
        generators_.push_back(GroupElement(plus));
        ElementData minus(static_cast<std::size_t>(param_), 0);
        minus[static_cast<std::size_t>(i)] = -1;
        generators_.push_back(GroupElement(minus));
      }
      break;
    }
    case GroupKind::free_group: {
      if (param_ < 1 || param_ > 26) throw ConfigError("free group rank out of range");
      name_ = "F" + std::to_string(param_);
      for (int i = 1; i <= param_; ++i) {
        generators_.push_back(GroupElement{i});
        generators_.push_back(GroupElement{-i});
      }
      break;
    }
    case GroupKind::lamplighter: {
      name_ = "lamplighter";
      generators_.push_back(GroupElement{0, 0});  // toggle the lamp under the walker
      generators_.push_back(GroupElement{1});     // step right
      generators_.push_back(GroupElement{-1});    // step left
      break;
    }
    case GroupKind::cyclic: {
      if (param_ < 1 || param_ > 1'000'000) throw ConfigError("cyclic order out of range");
      name_ = "C" + std::to_string(param_);
      if (param_ == 2) {
        generators_.push_back(GroupElement{1});
      } else if (param_ >= 3) {
        generators_.push_back(GroupElement{1});
        generators_.push_back(GroupElement{param_ - 1});
      }
      break;
    }
  }
}

Group Group::integer_lattice(int dim) { return Group(GroupKind::integer_lattice, dim); }
Group Group::free_group(int rank) { return Group(GroupKind::free_group, rank); }
Group Group::lamplighter() { return Group(GroupKind::lamplighter, 0); }
Group Group::cyclic(int n) { return Group(GroupKind::cyclic, n); }

Group Group::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ConfigError("empty group name");
  if (s == "Z") return integer_lattice(1);
  if (s == "lamplighter") return lamplighter();
  if (s.size() >= 3 && s[0] == 'Z' && s[1] == '^')
    return integer_lattice(parse_int(s.substr(2), "lattice dimension"));
  if (s[0] == 'F') return free_group(parse_int(s.substr(1), "free group rank"));
  if (s[0] == 'C') return cyclic(parse_int(s.substr(1), "cyclic order"));
  throw ConfigError("unknown group '" + std::string(s) + "'");
}

std::size_t Group::order() const {
  if (kind_ != GroupKind::cyclic) throw ConfigError("order() requires a finite group");
  return static_cast<std::size_t>(param_);
}

GroupElement Group::identity() const {
  switch (kind_) {
    case GroupKind::integer_lattice:
      return GroupElement(ElementData(static_cast<std::size_t>(param_), 0));
    case GroupKind::free_group:
      return GroupElement{};
    case GroupKind::lamplighter:
      return GroupElement{0};
    case GroupKind::cyclic:
      return GroupElement{0};
  }
  return GroupElement{};
}

bool Group::is_identity(const GroupElement& e) const { return e == identity(); }

GroupElement Group::compose(const GroupElement& a, const GroupElement& b) const {
  switch (kind_) {
    case GroupKind::integer_lattice: {
      ElementData out(a.v);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.v[i];
      return GroupElement(std::move(out));
    }
    case GroupKind::free_group: {
      ElementData out(a.v);
      for (std::int32_t letter : b.v) {
        if (!out.empty() && out.back() == -letter)
          out.pop_back();
        else
          out.push_back(letter);
      }
      return GroupElement(std::move(out));
    }
    case GroupKind::lamplighter: {
      ElementData out;
      out.reserve(a.v.size() + b.v.size());
      out.push_back(a.v[0] + b.v[0]);
      sym_diff_into(a.v.data() + 1, a.v.size() - 1, b.v.data() + 1, b.v.size() - 1,
                    a.v[0], out);
      return GroupElement(std::move(out));
    }
    case GroupKind::cyclic: {
      std::int32_t n = param_;
      return GroupElement{(a.v[0] + b.v[0]) % n};
    }
  }
  return GroupElement{};
}

GroupElement Group::inverse(const GroupElement& a) const {
  switch (kind_) {
    case GroupKind::integer_lattice: {
      ElementData out(a.v);
      for (auto& x : out) x = -x;
      return GroupElement(std::move(out));
    }
    case GroupKind::free_group: {
      ElementData out;
      out.reserve(a.v.size());
      for (auto it = a.v.rbegin(); it != a.v.rend(); ++it) out.push_back(-*it);
      return GroupElement(std::move(out));
    }
    case GroupKind::lamplighter: {
      ElementData out;
      out.reserve(a.v.size());
      std::int32_t x = a.v[0];
      out.push_back(-x);
      for (std::size_t i = 1; i < a.v.size(); ++i) out.push_back(a.v[i] - x);
      return GroupElement(std::move(out));
    }
    case GroupKind::cyclic: {
      std::int32_t n = param_;
      return GroupElement{(n - a.v[0]) % n};
    }
  }
  return GroupElement{};
}

int Group::word_norm(const GroupElement& e, std::size_t cap) const {
  switch (kind_) {
    case GroupKind::integer_lattice: {
      long n = 0;
      for (std::int32_t x : e.v) n += std::labs(x);
      return static_cast<int>(n);
    }
    case GroupKind::free_group:
      return static_cast<int>(e.v.size());
    case GroupKind::cyclic: {
      if (param_ == 1) return 0;
      std::int32_t r = e.v[0];
      return static_cast<int>(std::min(r, param_ - r));
    }
    case GroupKind::lamplighter:
      break;
  }
  // breadth first search in the Cayley graph until the element appears
  GroupElement id = identity();
  if (e == id) return 0;
  std::unordered_set<GroupElement, ElementHash> visited{id};
  std::vector<GroupElement> frontier{id};
  int depth = 0;
  while (!frontier.empty()) {
    ++depth;
    std::vector<GroupElement> next;
    for (const auto& x : frontier) {
      for (const auto& g : generators_) {
        GroupElement y = compose(x, g);
        if (visited.insert(y).second) {
          if (y == e) return depth;
          next.push_back(std::move(y));
        }
      }
    }
    if (visited.size() > cap)
      throw CapExceeded("word_norm search exceeded " + std::to_string(cap) + " elements");
    frontier = std::move(next);
  }
  throw ConfigError("element unreachable from the identity");
}

std::vector<GroupElement> Group::ball(int radius, std::size_t cap) const {
  if (radius < 0) throw ConfigError("negative ball radius");
  GroupElement id = identity();
  std::unordered_set<GroupElement, ElementHash> visited{id};
  std::vector<GroupElement> layer{id};
  std::vector<GroupElement> out{id};
  for (int r = 1; r <= radius && !layer.empty(); ++r) {
    std::vector<GroupElement> next;
    for (const auto& x : layer) {
      for (const auto& g : generators_) {
        GroupElement y = compose(x, g);
        if (visited.insert(y).second) next.push_back(std::move(y));
      }
    }
    if (visited.size() > cap)
      throw CapExceeded("ball enumeration exceeded " + std::to_string(cap) + " elements");
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

GroupElement Group::parse_element(std::string_view text) const {
  std::string_view s = trim(text);
  if (s.empty()) throw ConfigError("empty element literal");
  if (s == "e") return identity();
  switch (kind_) {
    case GroupKind::integer_lattice: {
      ElementData out;
      std::size_t start = 0;
      std::string str(s);
      while (start <= str.size()) {
        std::size_t comma = str.find(',', start);
        std::string_view part = trim(std::string_view(str).substr(
            start, comma == std::string::npos ? std::string::npos : comma - start));
        out.push_back(parse_int(part, "lattice coordinate"));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (out.size() != static_cast<std::size_t>(param_))
        throw ConfigError("expected " + std::to_string(param_) + " coordinates in '" +
                          std::string(s) + "'");
      return GroupElement(std::move(out));
    }
    case GroupKind::free_group: {
      GroupElement acc = identity();
      for (char c : s) {
        int letter;
        if (c >= 'a' && c <= 'z')
          letter = c - 'a' + 1;
        else if (c >= 'A' && c <= 'Z')
          letter = -(c - 'A' + 1);
        else
          throw ConfigError(std::string("bad free group letter '") + c + "'");
        if (std::abs(letter) > param_)
          throw ConfigError(std::string("letter '") + c + "' outside rank " +
                            std::to_string(param_));
        acc = compose(acc, GroupElement{letter});
      }
      return acc;
    }
    case GroupKind::lamplighter: {
      if (s.front() == '(') {
        // canonical display form "(pos=P;lamps=L1 L2 ...)" as written by
        // format_element, so artifacts can be copied back into configs
        if (s.back() != ')')
          throw ConfigError("unterminated lamplighter literal '" + std::string(s) + "'");
        std::string_view body = s.substr(1, s.size() - 2);
        std::size_t semi = body.find(';');
        std::string_view pos_part = trim(body.substr(0, semi));
        std::string_view lamp_part =
            semi == std::string_view::npos ? std::string_view{} : trim(body.substr(semi + 1));
        if (pos_part.rfind("pos=", 0) != 0 || lamp_part.rfind("lamps=", 0) != 0)
          throw ConfigError("expected '(pos=P;lamps=...)' in '" + std::string(s) + "'");
        ElementData out;
        out.push_back(parse_int(trim(pos_part.substr(4)), "walker position"));
        std::set<std::int32_t> lamps;
        std::string rest(trim(lamp_part.substr(6)));
        std::istringstream in(rest);
        std::string tok;
        while (in >> tok) {
          auto [it, fresh] = lamps.insert(parse_int(tok, "lamp position"));
          if (!fresh)
            throw ConfigError("duplicate lamp position '" + tok + "' in '" +
                              std::string(s) + "'");
        }
        for (std::int32_t lamp : lamps) out.push_back(lamp);
        return GroupElement(std::move(out));
      }
      GroupElement acc = identity();
      for (char c : s) {
        if (c == 't' || c == 'T')
          acc = compose(acc, generators_[0]);
        else if (c == 'm')
          acc = compose(acc, generators_[1]);
        else if (c == 'M')
          acc = compose(acc, generators_[2]);
        else
          throw ConfigError(std::string("bad lamplighter letter '") + c +
                            "' (use t, m, M)");
      }
      return acc;
    }
    case GroupKind::cyclic: {
      long r = parse_int(s, "residue");
      long n = param_;
      return GroupElement{static_cast<std::int32_t>(((r % n) + n) % n)};
    }
  }
  throw ConfigError("unreachable");
}

std::string Group::format_element(const GroupElement& e) const {
  switch (kind_) {
    case GroupKind::integer_lattice: {
      std::string out;
      for (std::size_t i = 0; i < e.v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(e.v[i]);
      }
      return out;
    }
    case GroupKind::free_group: {
      if (e.v.empty()) return "e";
      std::string out;
      for (std::int32_t letter : e.v)
        out += static_cast<char>(letter > 0 ? 'a' + letter - 1 : 'A' - letter - 1);
      return out;
    }
    case GroupKind::lamplighter: {
      if (is_identity(e)) return "e";
      std::string out = "(pos=" + std::to_string(e.v[0]) + ";lamps=";
      for (std::size_t i = 1; i < e.v.size(); ++i) {
        if (i > 1) out += ' ';
        out += std::to_string(e.v[i]);
      }
      out += ')';
      return out;
    }
    case GroupKind::cyclic:
      return std::to_string(e.v[0]);
  }
  return {};
}

GroupElement Group::random_element(Rng& rng, int max_norm) const {
  GroupElement acc = identity();
  if (generators_.empty() || max_norm <= 0) return acc;
  std::uint64_t steps = rng.uniform_index(static_cast<std::uint64_t>(max_norm) + 1);
  for (std::uint64_t i = 0; i < steps; ++i) {
    const auto& g = generators_[rng.uniform_index(generators_.size())];
    acc = compose(acc, g);
  }
  return acc;
}

}  // namespace contactlab
