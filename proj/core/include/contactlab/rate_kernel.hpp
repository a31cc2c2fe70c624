#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contactlab/group.hpp"
#include "contactlab/rng.hpp"

namespace contactlab {

struct KernelEntry {
  GroupElement offset;
  double rate;
};

// Left invariant infection rates: site i infects site i*offset at rate
// rate(offset). Offsets are non-identity, rates strictly positive, entries
// stored in canonical order so identical specs produce identical objects.
class RateKernel {
 public:
  RateKernel(Group group, std::vector<KernelEntry> entries);

  static RateKernel nearest_neighbour(const Group& group, double lambda);
  // spec is either "nn(lambda)" or "word:rate, word:rate, ..."
  static RateKernel parse(const Group& group, std::string_view spec);

  const Group& group() const { return group_; }
  const std::vector<KernelEntry>& entries() const { return entries_; }
  double total_rate() const { return total_; }
  std::size_t support_size() const { return entries_.size(); }

  // rate of a given offset, 0 when outside the support
  double rate_of(const GroupElement& offset) const;

  // the reversed process: offset -> rate becomes inverse(offset) -> rate
  RateKernel reversed() const;

  // offset drawn proportionally to its rate, consuming one uniform
  const GroupElement& sample_offset(Rng& rng) const;
  // same, from a value already uniform on [0, total_rate)
  const GroupElement& offset_at(double x) const;

  std::string describe() const;

 private:
  Group group_;
  std::vector<KernelEntry> entries_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

struct ProcessParams {
  RateKernel kernel;
  double delta;  // recovery rate

  ProcessParams(RateKernel k, double d);
  ProcessParams reversed() const { return ProcessParams(kernel.reversed(), delta); }
};

enum class Tristate { verified, failed, inconclusive };

const char* to_string(Tristate t);

// Truncated decision procedure for the two irreducibility conditions: (a) the
// support together with its inverses generates the group, (b) any two sites
// admit a common ancestor that can infect both, in either orientation. The
// search is confined to the ball of radius 3*radius and certifies coverage of
// the ball of the given radius, so "verified" means verified up to that
// truncation; "failed" is only reported with a genuine certificate.
struct IrreducibilityReport {
  Tristate generates = Tristate::inconclusive;
  Tristate common_ancestor = Tristate::inconclusive;
  int radius = 0;
  std::string detail;

  bool verified() const {
    return generates == Tristate::verified && common_ancestor == Tristate::verified;
  }
};

IrreducibilityReport check_irreducibility(const RateKernel& kernel, int radius,
                                          std::size_t cap = Group::kDefaultBallCap);

}  // namespace contactlab
