#include "doctest.h"

#include <cmath>
#include <map>

#include "contactlab/errors.hpp"
#include "contactlab/rate_kernel.hpp"

using namespace contactlab;

TEST_CASE("kernel specs parse into canonical entries") {
  Group z = Group::parse("Z");
  RateKernel k = RateKernel::parse(z, "1:2, -1:1");
  CHECK(k.total_rate() == doctest::Approx(3.0));
  CHECK(k.support_size() == 2);
  CHECK(k.rate_of(z.parse_element("1")) == doctest::Approx(2.0));
  CHECK(k.rate_of(z.parse_element("-1")) == doctest::Approx(1.0));
  CHECK(k.rate_of(z.parse_element("2")) == 0.0);

  RateKernel nn = RateKernel::parse(z, "nn(1.5)");
  CHECK(nn.total_rate() == doctest::Approx(3.0));
  CHECK(nn.rate_of(z.parse_element("1")) == doctest::Approx(1.5));

  RateKernel none = RateKernel::parse(z, "none");
  CHECK(none.total_rate() == 0.0);
  CHECK(none.support_size() == 0);
}

TEST_CASE("identical specs produce identical descriptions") {
  Group z = Group::parse("Z");
  CHECK(RateKernel::parse(z, "1:2,-1:1").describe() ==
        RateKernel::parse(z, "-1:1, 1:2").describe());
}

TEST_CASE("malformed kernel specs are rejected") {
  Group z = Group::parse("Z");
  CHECK_THROWS_AS(RateKernel::parse(z, "1:0"), ConfigError);   // zero rate
  CHECK_THROWS_AS(RateKernel::parse(z, "1:-2"), ConfigError);  // negative rate
  CHECK_THROWS_AS(RateKernel::parse(z, "e:1"), ConfigError);   // identity offset
  CHECK_THROWS_AS(RateKernel::parse(z, "nn(-1)"), ConfigError);
  CHECK_THROWS_AS(RateKernel::parse(z, "abc"), ConfigError);
}

TEST_CASE("repeated offsets merge their rates") {
  Group z = Group::parse("Z");
  RateKernel k = RateKernel::parse(z, "1:1,1:2");
  CHECK(k.support_size() == 1);
  CHECK(k.rate_of(z.parse_element("1")) == doctest::Approx(3.0));
}

TEST_CASE("reversal inverts offsets and is an involution") {
  Group z = Group::parse("Z");
  RateKernel k = RateKernel::parse(z, "1:2,-1:1,3:0.5");
  RateKernel r = k.reversed();
  CHECK(r.total_rate() == doctest::Approx(k.total_rate()));
  CHECK(r.rate_of(z.parse_element("-1")) == doctest::Approx(2.0));
  CHECK(r.rate_of(z.parse_element("1")) == doctest::Approx(1.0));
  CHECK(r.rate_of(z.parse_element("-3")) == doctest::Approx(0.5));
  CHECK(r.reversed().describe() == k.describe());

  Group f2 = Group::parse("F2");
  RateKernel kf = RateKernel::parse(f2, "a:1,b:2");
  RateKernel rf = kf.reversed();
  CHECK(rf.rate_of(f2.parse_element("A")) == doctest::Approx(1.0));
  CHECK(rf.rate_of(f2.parse_element("B")) == doctest::Approx(2.0));
  CHECK(rf.reversed().describe() == kf.describe());
}

TEST_CASE("symmetric kernels are their own reversal") {
  Group z2 = Group::parse("Z^2");
  RateKernel k = RateKernel::nearest_neighbour(z2, 1.0);
  CHECK(k.total_rate() == doctest::Approx(4.0));
  CHECK(k.reversed().describe() == k.describe());
}

TEST_CASE("offset sampling matches the configured rates") {
  Group z = Group::parse("Z");
  RateKernel k = RateKernel::parse(z, "1:2,-1:1,2:1");
  Rng rng(5);
  std::map<std::string, std::size_t> tally;
  const std::size_t n = 40000;
  for (std::size_t i = 0; i < n; ++i) tally[z.format_element(k.sample_offset(rng))]++;
  // binomial 4 sigma bands around the rate proportions
  auto frac = [&](const char* name) {
    return static_cast<double>(tally[name]) / static_cast<double>(n);
  };
  auto band = [&](double p) { return 4.0 * std::sqrt(p * (1 - p) / n); };
  CHECK(std::fabs(frac("1") - 0.5) < band(0.5));
  CHECK(std::fabs(frac("-1") - 0.25) < band(0.25));
  CHECK(std::fabs(frac("2") - 0.25) < band(0.25));
}

TEST_CASE("offset_at partitions the rate interval exactly") {
  Group z = Group::parse("Z");
  RateKernel k = RateKernel::parse(z, "1:2,-1:1");
  // entries are stored in canonical element order: -1 before 1
  CHECK(k.offset_at(0.5) == z.parse_element("-1"));
  CHECK(k.offset_at(1.5) == z.parse_element("1"));
  CHECK(k.offset_at(2.999) == z.parse_element("1"));
}

TEST_CASE("irreducibility verifies symmetric nearest neighbour kernels") {
  for (const char* name : {"Z", "Z^2", "F2", "lamplighter"}) {
    Group g = Group::parse(name);
    CAPTURE(name);
    RateKernel k = RateKernel::nearest_neighbour(g, 1.0);
    IrreducibilityReport rep = check_irreducibility(k, 3);
    CHECK(rep.verified());
  }
}

TEST_CASE("one sided lattice kernel is still irreducible") {
  // support {+1} does not generate as a semigroup, but with inverses it does,
  // and common ancestors exist by going far left
  Group z = Group::parse("Z");
  RateKernel k = RateKernel::parse(z, "1:1");
  IrreducibilityReport rep = check_irreducibility(k, 3);
  CHECK(rep.generates == Tristate::verified);
  CHECK(rep.common_ancestor == Tristate::verified);
}

TEST_CASE("free group kernel missing a generator cannot be certified") {
  Group f2 = Group::parse("F2");
  RateKernel k = RateKernel::parse(f2, "a:1,A:1");  // never reaches b
  IrreducibilityReport rep = check_irreducibility(k, 2);
  // the closure keeps growing past the search ball, so a truncated search
  // cannot prove non-generation, only decline to certify
  CHECK(rep.generates == Tristate::inconclusive);
  CHECK_FALSE(rep.verified());
  CHECK(!rep.detail.empty());
}

TEST_CASE("empty kernel fails the generation condition") {
  Group z = Group::parse("Z");
  RateKernel k = RateKernel::parse(z, "none");
  IrreducibilityReport rep = check_irreducibility(k, 2);
  CHECK(rep.generates == Tristate::failed);
}
