#include <bit>
#include <cmath>
#include <cstdint>

#include "core/errors.hpp"
#include "core/fourier.hpp"
#include "core/gowers.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/slicemodel.hpp"
#include "core/table.hpp"
#include "doctest.h"

using namespace slicelab;

namespace {

FunctionTable random_table(int dim, std::uint64_t seed) {
  RandomStream stream(seed, 0);
  std::vector<double> v(std::uint64_t{1} << dim);
  for (auto& x : v) x = 2.0 * stream.next_unit() - 1.0;
  return FunctionTable(dim, std::move(v));
}

FunctionTable character_table(std::uint32_t subset, int dim) {
  std::vector<double> v(std::uint64_t{1} << dim);
  for (std::uint64_t x = 0; x < v.size(); ++x)
    v[x] = character_eval(subset, BitVector(x, dim));
  return FunctionTable(dim, std::move(v));
}

// independent oracle: U_2^4 by direct quadruple enumeration
double u2p4_direct(const FunctionTable& f) {
  const std::uint64_t n = f.size();
  KahanSum acc;
  for (std::uint64_t x = 0; x < n; ++x)
    for (std::uint64_t h1 = 0; h1 < n; ++h1)
      for (std::uint64_t h2 = 0; h2 < n; ++h2)
        acc.add(f[x] * f[x ^ h1] * f[x ^ h2] * f[x ^ h1 ^ h2]);
  return acc.value() / static_cast<double>(n * n * n);
}

}  // namespace

TEST_CASE("derivative of a character is the constant chi_S(h)") {
  const FunctionTable chi = character_table(0b101, 4);
  for (std::uint64_t h = 0; h < 16; ++h) {
    const FunctionTable d = derivative(chi, BitVector(h, 4));
    const double expected = character_eval(0b101, BitVector(h, 4));
    for (std::uint64_t x = 0; x < 16; ++x) CHECK(d[x] == expected);
  }
}

TEST_CASE("derivative in direction 0 squares the table") {
  const FunctionTable f = random_table(5, 7);
  const FunctionTable d = derivative(f, BitVector(0, 5));
  for (std::uint64_t x = 0; x < f.size(); ++x) CHECK(d[x] == f[x] * f[x]);
}

TEST_CASE("derivative of the zero-vector indicator with h != 0 vanishes") {
  std::vector<double> v(16, 0.0);
  v[0] = 1.0;
  const FunctionTable f(4, std::move(v));
  // supports of f and its shift are disjoint; direct pointwise oracle
  const FunctionTable d = derivative(f, parse_bits("1000"));
  for (std::uint64_t x = 0; x < 16; ++x) {
    CHECK(d[x] == 0.0);
    CHECK(d[x] == f[x ^ 1] * f[x]);
  }
}

TEST_CASE("derivative requires matching dims") {
  CHECK_THROWS_AS(derivative(random_table(4, 1), BitVector(0, 5)), std::invalid_argument);
}

TEST_CASE("derivative order symmetry") {
  // bitwise on +-1 tables (products exact), tolerance on real tables
  const FunctionTable pm = character_table(0b110, 4);
  const FunctionTable real = random_table(4, 77);
  for (std::uint64_t h1 = 0; h1 < 16; ++h1)
    for (std::uint64_t h2 = 0; h2 < 16; ++h2) {
      const BitVector a(h1, 4), b(h2, 4);
      CHECK(derivative(derivative(pm, a), b).values() ==
            derivative(derivative(pm, b), a).values());
      const FunctionTable r1 = derivative(derivative(real, a), b);
      const FunctionTable r2 = derivative(derivative(real, b), a);
      for (std::uint64_t x = 0; x < 16; ++x)
        CHECK(r1[x] == doctest::Approx(r2[x]).epsilon(1e-14));
    }
}

TEST_CASE("gowers exact: constants and characters") {
  for (int s = 1; s <= 4; ++s) {
    const GowersEstimate e = gowers_norm_exact(FunctionTable::constant(4, 1.0), s);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.value_pow == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.mode == EstimateMode::Exact);
    CHECK(e.ci_radius == 0.0);
  }
  const GowersEstimate chi = gowers_norm_exact(character_table(0b11, 4), 2);
  CHECK(chi.value == doctest::Approx(1.0).epsilon(1e-12));  // sum fhat^4 = 1
}

TEST_CASE("gowers exact s=1 is |mean|") {
  const FunctionTable f = random_table(6, 3);
  const GowersEstimate e = gowers_norm_exact(f, 1);
  CHECK(e.value == doctest::Approx(std::fabs(f.mean())).epsilon(1e-13));
  CHECK(e.value_pow == doctest::Approx(f.mean() * f.mean()).epsilon(1e-13));
}

TEST_CASE("dense-model difference has U_1 zero at 2n=8, k=2") {
  const FunctionTable diff = pointwise_difference(indicator(DomainSpec::slice(8), true),
                                                  indicator(DomainSpec::residue(8, 2), true));
  CHECK(gowers_norm_exact(diff, 1).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("U_2 via spectrum equals direct quadruple enumeration, dim <= 6") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const FunctionTable f = random_table(5, 500 + seed);
    const double direct = u2p4_direct(f);
    const double viaspec = gowers_norm_exact(f, 2).value_pow;
    CHECK(viaspec == doctest::Approx(direct).epsilon(1e-10));
  }
  const FunctionTable f6 = random_table(6, 600);
  CHECK(gowers_norm_exact(f6, 2).value_pow == doctest::Approx(u2p4_direct(f6)).epsilon(1e-10));
}

TEST_CASE("exact recursion s=3 agrees with the definition on a small table") {
  // brute-force oracle: average the 8-point product over all (x, h1, h2, h3)
  const FunctionTable f = random_table(3, 42);
  KahanSum acc;
  for (std::uint64_t x = 0; x < 8; ++x)
    for (std::uint64_t h1 = 0; h1 < 8; ++h1)
      for (std::uint64_t h2 = 0; h2 < 8; ++h2)
        for (std::uint64_t h3 = 0; h3 < 8; ++h3) {
          double prod = 1.0;
          for (std::uint32_t t = 0; t < 8; ++t) {
            std::uint64_t pt = x;
            if (t & 1) pt ^= h1;
            if (t & 2) pt ^= h2;
            if (t & 4) pt ^= h3;
            prod *= f[pt];
          }
          acc.add(prod);
        }
  const double direct = acc.value() / 4096.0;
  CHECK(gowers_norm_exact(f, 3).value_pow == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("monotonicity U_1 <= U_2 <= U_3 on random dim-8 tables") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const FunctionTable f = random_table(8, 700 + seed);
    const double u1 = gowers_norm_exact(f, 1).value;
    const double u2 = gowers_norm_exact(f, 2).value;
    const double u3 = gowers_norm_exact(f, 3).value;
    CHECK(u1 <= u2 + 1e-9);
    CHECK(u2 <= u3 + 1e-9);
  }
}

TEST_CASE("+-1 tables: norm at most 1, equal to 1 exactly for signed characters") {
  // exhaustive over all 2^16 +-1 functions on {0,1}^4, s = 2
  int norm_one = 0;
  for (std::uint32_t code = 0; code < (1u << 16); ++code) {
    std::vector<double> v(16);
    for (int x = 0; x < 16; ++x) v[static_cast<std::size_t>(x)] = (code >> x & 1) ? -1.0 : 1.0;
    const double u2 = gowers_norm_exact(FunctionTable(4, std::move(v)), 2).value;
    CHECK(u2 <= 1.0 + 1e-9);
    if (u2 > 1.0 - 1e-9) ++norm_one;
  }
  CHECK(norm_one == 32);  // 16 characters, 2 signs
}

TEST_CASE("budget errors direct the caller to Monte Carlo") {
  const FunctionTable f = random_table(8, 11);
  CHECK_THROWS_AS(gowers_norm_exact(f, 7), BudgetError);  // 8*5 > 28
  CHECK_THROWS_AS(gowers_norm_exact(f, 0), std::invalid_argument);
}

TEST_CASE("monte carlo: constants and characters are exact with zero spread") {
  const GowersEstimate e = gowers_norm_mc(FunctionTable::constant(4, 1.0), 3, 64, 5);
  CHECK(e.value_pow == 1.0);
  CHECK(e.ci_radius == 0.0);
  CHECK(e.mode == EstimateMode::MonteCarlo);
  CHECK(e.samples == 64);
  CHECK(e.seed == 5);

  const GowersEstimate chi = gowers_norm_mc(character_table(0b101, 4), 3, 64, 5);
  CHECK(chi.value_pow == 1.0);  // every derivative is a signed character
}

TEST_CASE("monte carlo requires s >= 3 and samples >= 1") {
  const FunctionTable f = random_table(4, 1);
  CHECK_THROWS_AS(gowers_norm_mc(f, 2, 100, 0), std::invalid_argument);
  CHECK_THROWS_AS(gowers_norm_mc(f, 3, 0, 0), std::invalid_argument);
}

TEST_CASE("monte carlo matches exact within 3 ci on the dense-model difference") {
  const FunctionTable diff = pointwise_difference(indicator(DomainSpec::slice(8), true),
                                                  indicator(DomainSpec::residue(8, 3), true));
  const GowersEstimate exact = gowers_norm_exact(diff, 3);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const GowersEstimate mc = gowers_norm_mc(diff, 3, 2048, seed);
    CHECK(std::fabs(mc.value_pow - exact.value_pow) <= 3.0 * mc.ci_radius);
  }
}

TEST_CASE("monte carlo is deterministic per seed and thread-count independent") {
  const FunctionTable f = random_table(6, 99);
  set_max_threads(1);
  const GowersEstimate one = gowers_norm_mc(f, 3, 512, 123);
  set_max_threads(4);
  const GowersEstimate four = gowers_norm_mc(f, 3, 512, 123);
  set_max_threads(0);
  CHECK(one.value_pow == four.value_pow);
  CHECK(one.ci_radius == four.ci_radius);
  const GowersEstimate other_seed = gowers_norm_mc(f, 3, 512, 124);
  CHECK(one.value_pow != other_seed.value_pow);
}

TEST_CASE("negative Monte Carlo value_pow is clipped with a flag") {
  const GowersEstimate e = make_gowers_estimate(3, -1e-9, EstimateMode::MonteCarlo, 10, 0, 1e-8);
  CHECK(e.clipped);
  CHECK(e.value == 0.0);
  const GowersEstimate ok = make_gowers_estimate(3, 1e-9, EstimateMode::MonteCarlo, 10, 0, 1e-8);
  CHECK(!ok.clipped);
  CHECK(ok.value == doctest::Approx(std::pow(1e-9, 1.0 / 8.0)));
}
