#include "contactlab/rate_kernel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "contactlab/errors.hpp"

namespace contactlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_rate(std::string_view s) {
  s = trim(s);
  double value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError("cannot parse rate '" + std::string(s) + "'");
  return value;
}

std::string format_rate(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", r);
  return buf;
}

}  // namespace

RateKernel::RateKernel(Group group, std::vector<KernelEntry> entries)
    : group_(std::move(group)) {
  for (auto& e : entries) {
    if (!(e.rate > 0.0))
      throw ConfigError("kernel rates must be strictly positive");
    if (group_.is_identity(e.offset))
      throw ConfigError("kernel support must not contain the identity");
  }
  std::sort(entries.begin(), entries.end(),
            [](const KernelEntry& a, const KernelEntry& b) { return a.offset < b.offset; });
  for (auto& e : entries) {
    if (!entries_.empty() && entries_.back().offset == e.offset)
      entries_.back().rate += e.rate;  // merge duplicate offsets
    else
      entries_.push_back(e);
  }
  cumulative_.reserve(entries_.size());
  for (const auto& e : entries_) {
    total_ += e.rate;
    cumulative_.push_back(total_);
  }
}

RateKernel RateKernel::nearest_neighbour(const Group& group, double lambda) {
  if (lambda < 0.0) throw ConfigError("nn rate must be nonnegative");
  std::vector<KernelEntry> entries;
  if (lambda > 0.0)
    for (const auto& g : group.generators()) entries.push_back({g, lambda});
  return RateKernel(group, std::move(entries));
}

RateKernel RateKernel::parse(const Group& group, std::string_view spec) {
  std::string_view s = trim(spec);
  if (s.empty()) throw ConfigError("empty kernel spec");
  if (s.substr(0, 3) == "nn(") {
    if (s.back() != ')') throw ConfigError("malformed nn(...) kernel spec");
    return nearest_neighbour(group, parse_rate(s.substr(3, s.size() - 4)));
  }
  if (s == "none" || s == "0") return RateKernel(group, {});
  std::vector<KernelEntry> entries;
  std::size_t start = 0;
  std::string str(s);
  while (start <= str.size()) {
    std::size_t comma = str.find(',', start);
    std::string_view part = trim(std::string_view(str).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!part.empty()) {
      std::size_t colon = part.rfind(':');
      if (colon == std::string_view::npos)
        throw ConfigError("kernel entry '" + std::string(part) + "' needs word:rate");
      GroupElement offset = group.parse_element(part.substr(0, colon));
      entries.push_back({offset, parse_rate(part.substr(colon + 1))});
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return RateKernel(group, std::move(entries));
}

double RateKernel::rate_of(const GroupElement& offset) const {
  for (const auto& e : entries_)
    if (e.offset == offset) return e.rate;
  return 0.0;
}

RateKernel RateKernel::reversed() const {
  std::vector<KernelEntry> entries;
  entries.reserve(entries_.size());
  for (const auto& e : entries_) entries.push_back({group_.inverse(e.offset), e.rate});
  return RateKernel(group_, std::move(entries));
}

const GroupElement& RateKernel::sample_offset(Rng& rng) const {
  return offset_at(rng.uniform() * total_);
}

const GroupElement& RateKernel::offset_at(double x) const {
  if (entries_.empty()) throw CapExceeded("sampling from an empty kernel");
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  if (i >= entries_.size()) i = entries_.size() - 1;
  return entries_[i].offset;
}

std::string RateKernel::describe() const {
  if (entries_.empty()) return "none";
  // compact form when every generator carries the same rate
  const auto& gens = group_.generators();
  if (!gens.empty() && entries_.size() == gens.size()) {
    bool uniform = true;
    for (const auto& e : entries_) uniform &= e.rate == entries_.front().rate;
    if (uniform) {
      std::size_t matched = 0;
      for (const auto& g : gens) matched += rate_of(g) > 0 ? 1 : 0;
      if (matched == gens.size()) return "nn(" + format_rate(entries_.front().rate) + ")";
    }
  }
  std::string out;
  for (const auto& e : entries_) {
    if (!out.empty()) out += ',';
    out += group_.format_element(e.offset) + ":" + format_rate(e.rate);
  }
  return out;
}

ProcessParams::ProcessParams(RateKernel k, double d) : kernel(std::move(k)), delta(d) {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw ConfigError("recovery rate must be nonnegative and finite");
}

const char* to_string(Tristate t) {
  switch (t) {
    case Tristate::verified: return "verified";
    case Tristate::failed: return "failed";
    case Tristate::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

struct Closure {
  std::vector<GroupElement> elements;
  std::unordered_set<GroupElement, ElementHash> set;
  bool pruned = false;  // true when some product left the search universe
};

Closure closure_under(const Group& group, const std::vector<GroupElement>& steps,
                      const std::unordered_set<GroupElement, ElementHash>& universe) {
  Closure c;
  GroupElement id = group.identity();
  c.set.insert(id);
  c.elements.push_back(id);
  std::size_t head = 0;
  while (head < c.elements.size()) {
    GroupElement x = c.elements[head++];
    for (const auto& s : steps) {
      GroupElement y = group.compose(x, s);
      if (!universe.count(y)) {
        c.pruned = true;
        continue;
      }
      if (c.set.insert(y).second) c.elements.push_back(y);
    }
  }
  return c;
}

// sign of every letter in every support word, or 0 when mixed
int uniform_sign(const std::vector<KernelEntry>& entries) {
  int sign = 0;
  for (const auto& e : entries)
    for (std::int32_t letter : e.offset.v) {
      int s = letter > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      if (sign != s) return 0;
    }
  return sign;
}

bool has_sign_change(const GroupElement& word) {
  for (std::size_t i = 0; i + 1 < word.v.size(); ++i)
    if ((word.v[i] > 0) != (word.v[i + 1] > 0)) return true;
  return false;
}

}  // namespace

IrreducibilityReport check_irreducibility(const RateKernel& kernel, int radius,
                                          std::size_t cap) {
  const Group& group = kernel.group();
  IrreducibilityReport report;
  report.radius = radius;

  std::vector<GroupElement> targets = group.ball(radius, cap);
  std::vector<GroupElement> universe_vec = group.ball(3 * radius, cap);
  std::unordered_set<GroupElement, ElementHash> universe(universe_vec.begin(),
                                                         universe_vec.end());

  std::vector<GroupElement> support;
  std::vector<GroupElement> symmetric;
  for (const auto& e : kernel.entries()) {
    support.push_back(e.offset);
    symmetric.push_back(e.offset);
    symmetric.push_back(group.inverse(e.offset));
  }

  // condition (a): support and inverses generate the whole group
  Closure gen = closure_under(group, symmetric, universe);
  bool gen_covered = true;
  std::string gen_witness;
  for (const auto& t : targets)
    if (!gen.set.count(t)) {
      gen_covered = false;
      gen_witness = group.format_element(t);
      break;
    }
  if (gen_covered)
    report.generates = Tristate::verified;
  else if (!gen.pruned)
    report.generates = Tristate::failed;
  else
    report.generates = Tristate::inconclusive;
  if (!gen_covered) report.detail += "generation misses " + gen_witness + "; ";

  // condition (b): any two sites have a common ancestor, in both orientations.
  // With C the forward reachable set, coverage of a target t means some u in C
  // has u*t in C (ancestor of 0 and t) and some v in C has t*v in C.
  Closure fwd = closure_under(group, support, universe);
  bool anc_covered = true;
  std::string anc_witness;
  for (const auto& t : targets) {
    bool first = false, second = false;
    for (const auto& u : fwd.elements) {
      if (!first && fwd.set.count(group.compose(u, t))) first = true;
      if (!second && fwd.set.count(group.compose(t, u))) second = true;
      if (first && second) break;
    }
    if (!(first && second)) {
      anc_covered = false;
      anc_witness = group.format_element(t);
      break;
    }
  }
  if (anc_covered) {
    report.common_ancestor = Tristate::verified;
  } else if (!fwd.pruned) {
    report.common_ancestor = Tristate::failed;
  } else if (group.kind() == GroupKind::free_group && uniform_sign(kernel.entries()) != 0) {
    // All support words share one letter sign, so forward chains are words of
    // that sign only, and products u^{-1} v or u v^{-1} never contain a sign
    // change in the forbidden direction. Any target whose reduced word mixes
    // signs is therefore unreachable in one of the two orientations.
    report.common_ancestor = Tristate::inconclusive;
    for (const auto& t : targets)
      if (has_sign_change(t)) {
        report.common_ancestor = Tristate::failed;
        anc_witness = group.format_element(t) + " (sign certificate)";
        break;
      }
  } else {
    report.common_ancestor = Tristate::inconclusive;
  }
  if (report.common_ancestor != Tristate::verified && !anc_witness.empty())
    report.detail += "common ancestor misses " + anc_witness + "; ";

  return report;
}

}  // namespace contactlab
