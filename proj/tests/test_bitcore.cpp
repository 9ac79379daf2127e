#include <bit>
#include <cstdint>
#include <limits>
#include <sstream>

#include "core/bits.hpp"
#include "core/exact.hpp"
#include "core/parallel.hpp"
#include "core/slicemodel.hpp"
#include "core/table.hpp"
#include "doctest.h"

using namespace slicelab;

TEST_CASE("weight counts set bits") {
  CHECK(weight(parse_bits("0000")) == 0);
  CHECK(weight(parse_bits("1100")) == 2);
  CHECK(weight(BitVector(0xFF, 8)) == 8);
}

TEST_CASE("xor and and are bitwise with dimension checks") {
  CHECK(xor_of(parse_bits("1100"), parse_bits("1010")) == parse_bits("0110"));
  CHECK(and_of(parse_bits("1100"), parse_bits("1010")) == parse_bits("1000"));
  const BitVector v(0b1011, 4);
  CHECK(xor_of(v, v).bits == 0);
  CHECK_THROWS_AS(xor_of(BitVector(1, 3), BitVector(1, 4)), std::invalid_argument);
  CHECK_THROWS_AS(and_of(BitVector(1, 2), BitVector(1, 5)), std::invalid_argument);
}

TEST_CASE("BitVector rejects bits beyond dim") {
  CHECK_THROWS_AS(BitVector(0b100, 2), std::invalid_argument);
  CHECK_NOTHROW(BitVector(0b11, 2));
}

TEST_CASE("xor group laws, exhaustive dim <= 4") {
  for (int dim = 1; dim <= 4; ++dim) {
    const std::uint64_t n = std::uint64_t{1} << dim;
    for (std::uint64_t a = 0; a < n; ++a)
      for (std::uint64_t b = 0; b < n; ++b) {
        const BitVector u(a, dim), v(b, dim);
        CHECK(xor_of(u, v) == xor_of(v, u));
        CHECK(xor_of(u, u).bits == 0);
        for (std::uint64_t c = 0; c < n; ++c) {
          const BitVector w(c, dim);
          CHECK(xor_of(xor_of(u, v), w) == xor_of(u, xor_of(v, w)));
        }
      }
  }
}

TEST_CASE("weight(xor) identity, exhaustive dim 8") {
  for (std::uint64_t a = 0; a < 256; ++a)
    for (std::uint64_t b = 0; b < 256; ++b) {
      const BitVector u(a, 8), v(b, 8);
      CHECK(weight(xor_of(u, v)) == weight(u) + weight(v) - 2 * weight(and_of(u, v)));
    }
}

TEST_CASE("pointwise_combine basics") {
  const FunctionTable t(2, {1.0, 2.0, -3.0, 0.5});
  const FunctionTable ones = FunctionTable::constant(2, 1.0);

  const FunctionTable prod = pointwise_product(t, ones);
  CHECK(prod.values() == t.values());

  const FunctionTable diff = pointwise_difference(t, t);
  for (std::uint64_t x = 0; x < diff.size(); ++x) CHECK(diff[x] == 0.0);

  const FunctionTable sum3 = pointwise_combine(
      {&t, &t, &ones}, [](std::span<const double> v) { return v[0] + v[1] + v[2]; });
  for (std::uint64_t x = 0; x < t.size(); ++x) CHECK(sum3[x] == 2.0 * t[x] + 1.0);

  const FunctionTable other(3, std::vector<double>(8, 0.0));
  CHECK_THROWS_AS(pointwise_product(t, other), std::invalid_argument);
}

TEST_CASE("normalized slice minus residue has mean zero at 2n=4") {
  // direct summation oracle: both indicators are normalized to mean one
  const FunctionTable f = indicator(DomainSpec::slice(4), true);
  const FunctionTable g = indicator(DomainSpec::residue(4, 2), true);
  const FunctionTable diff = pointwise_difference(f, g);
  double direct = 0.0;
  for (std::uint64_t x = 0; x < diff.size(); ++x) direct += diff[x];
  CHECK(std::abs(direct / 16.0) < 1e-14);
  CHECK(std::abs(diff.mean()) < 1e-14);
}

TEST_CASE("table construction validates") {
  CHECK_THROWS_AS(FunctionTable(2, {1.0, 2.0}), std::invalid_argument);
  std::vector<double> bad = {1.0, 2.0, std::numeric_limits<double>::infinity(), 0.0};
  CHECK_THROWS_AS(FunctionTable(2, std::move(bad)), std::invalid_argument);
}

TEST_CASE("table io: dim= format round trip") {
  const FunctionTable t(3, {0.5, -1.25, 3.0, 0.0, 42.0, -0.001953125, 7.0, 1e-3});
  std::stringstream s;
  write_table(s, t);
  const FunctionTable back = read_table(s);
  CHECK(back.dim() == 3);
  CHECK(back.values() == t.values());
}

TEST_CASE("table io: bits= format") {
  std::istringstream s("bits=2\n0110\n");
  const FunctionTable t = read_table(s);
  CHECK(t.values() == std::vector<double>{0.0, 1.0, 1.0, 0.0});

  std::istringstream split("bits=2 01\n10");
  CHECK(read_table(split).values() == std::vector<double>{0.0, 1.0, 1.0, 0.0});

  std::istringstream bad("bits=2 01x0");
  CHECK_THROWS(read_table(bad));
  std::istringstream short_payload("bits=3 01");
  CHECK_THROWS(read_table(short_payload));
  std::istringstream bad_header("size=2 0110");
  CHECK_THROWS(read_table(bad_header));
}

TEST_CASE("binomials and dyadic fractions") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(8, 4) == 70);
  CHECK(binomial(64, 32) == 1832624140942590534ull);
  CHECK(binomial(6, -1) == 0);
  CHECK(binomial(6, 7) == 0);
  CHECK_THROWS_AS(binomial(65, 1), std::invalid_argument);

  const Dyadic d{70, 8};  // 70/256
  CHECK(d.to_double() == doctest::Approx(0.2734375));
  CHECK(d.to_string() == "35/128");
  CHECK(Dyadic{1, 1} == Dyadic{2, 2});
  CHECK(Dyadic{1, 2} < Dyadic{3, 2});
  CHECK(u128_to_string((u128{1} << 64)) == "18446744073709551616");
}
