#include <bit>
#include <cmath>
#include <cstdint>

#include "core/errors.hpp"
#include "core/fourier.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
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

// independent oracle: coefficient by direct inner product
double coeff_direct(const FunctionTable& f, std::uint32_t subset) {
  double acc = 0.0;
  for (std::uint64_t x = 0; x < f.size(); ++x)
    acc += f[x] * character_eval(subset, BitVector(x, f.dim()));
  return acc / static_cast<double>(f.size());
}

}  // namespace

TEST_CASE("character_eval basics") {
  CHECK(character_eval(0, BitVector(0b1011, 4)) == 1);   // empty product
  CHECK(character_eval(0b1, parse_bits("1000")) == -1);  // S={1}, x=1000
  CHECK(character_eval(0b11, parse_bits("1100")) == 1);  // two sign flips
  CHECK_THROWS_AS(character_eval(0b100, BitVector(0, 2)), std::invalid_argument);
}

TEST_CASE("wht diagonalizes characters exactly") {
  for (int dim = 1; dim <= 5; ++dim)
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << dim); ++s) {
      const FourierSpectrum spec = wht(character_table(s, dim));
      for (std::uint64_t t = 0; t < spec.coeffs.size(); ++t)
        CHECK(spec.coeffs[t] == (t == s ? 1.0 : 0.0));
    }
}

TEST_CASE("wht of a constant") {
  const FourierSpectrum spec = wht(FunctionTable::constant(4, 2.5));
  CHECK(spec.coeffs[0] == 2.5);
  for (std::uint64_t s = 1; s < 16; ++s) CHECK(spec.coeffs[s] == 0.0);
}

TEST_CASE("wht of the zero-vector indicator, dim 4") {
  std::vector<double> v(16, 0.0);
  v[0] = 1.0;
  const FunctionTable f(4, std::move(v));
  const FourierSpectrum spec = wht(f);
  for (std::uint64_t s = 0; s < 16; ++s) {
    CHECK(spec.coeffs[s] == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    // direct inner-product oracle over all 16 points
    CHECK(spec.coeffs[s] ==
          doctest::Approx(coeff_direct(f, static_cast<std::uint32_t>(s))).epsilon(1e-14));
  }
}

TEST_CASE("parseval and involution on random dim-8 tables") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const FunctionTable f = random_table(8, 100 + seed);
    const FourierSpectrum spec = wht(f);
    double mean_sq = 0.0;
    for (double v : f.values()) mean_sq += v * v;
    mean_sq /= static_cast<double>(f.size());
    CHECK(parseval_total(spec) == doctest::Approx(mean_sq).epsilon(1e-12));

    const FunctionTable back = wht_inverse(spec);
    for (std::uint64_t x = 0; x < f.size(); ++x)
      CHECK(back[x] == doctest::Approx(f[x]).epsilon(1e-12));
  }
}

TEST_CASE("unnormalized butterfly applied twice is 2^m times the identity") {
  const FunctionTable f = random_table(6, 9);
  std::vector<double> v = f.values();
  hadamard_inplace(v);
  hadamard_inplace(v);
  for (std::uint64_t x = 0; x < f.size(); ++x)
    CHECK(v[x] == doctest::Approx(64.0 * f[x]).epsilon(1e-12));
}

TEST_CASE("coefficients are bounded by E|f|, exhaustive subsets, dim 8") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FunctionTable f = random_table(8, 300 + seed);
    double alpha = 0.0;
    for (double v : f.values()) alpha += std::fabs(v);
    alpha /= static_cast<double>(f.size());
    for (double c : wht(f).coeffs) CHECK(std::fabs(c) <= alpha + 1e-12);
  }
}

TEST_CASE("level weights") {
  const FourierSpectrum chi1 = wht(character_table(0b1, 4));
  CHECK(level_weight(chi1, 1) == 1.0);

  const FourierSpectrum chi123 = wht(character_table(0b111, 4));
  CHECK(level_weight(chi123, 2) == 0.0);  // all mass on level 3

  std::vector<double> v(16, 0.0);
  v[0] = 1.0;
  const FourierSpectrum zero_ind = wht(FunctionTable(4, std::move(v)));
  // five subsets of size <= 1, each coefficient 1/16
  CHECK(level_weight(zero_ind, 1) == doctest::Approx(5.0 / 256.0).epsilon(1e-13));

  CHECK_THROWS_AS(level_weight(chi1, 5), std::invalid_argument);
  CHECK_THROWS_AS(level_weight(chi1, -1), std::invalid_argument);
}

TEST_CASE("level weight is monotone in d and exhausts parseval") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const FourierSpectrum spec = wht(random_table(7, 400 + seed));
    double prev = -1.0;
    for (int d = 0; d <= 7; ++d) {
      const double w = level_weight(spec, d);
      CHECK(w >= prev);
      prev = w;
    }
    CHECK(prev == doctest::Approx(parseval_total(spec)).epsilon(1e-12));
  }
}

TEST_CASE("level inequality report") {
  SUBCASE("all-ones at d=0") {
    const auto r = level_inequality_report(FunctionTable::constant(4, 1.0), 0);
    CHECK(r.alpha == 1.0);
    CHECK(r.weight == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero-vector indicator dim 4, d=1") {
    std::vector<double> v(16, 0.0);
    v[0] = 1.0;
    const auto r = level_inequality_report(FunctionTable(4, std::move(v)), 1);
    CHECK(r.alpha == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(r.weight == doctest::Approx(5.0 / 256.0).epsilon(1e-13));
    CHECK(r.ratio == doctest::Approx(5.0).epsilon(1e-12));
  }
  SUBCASE("character is +-1-valued with ratio 1") {
    const auto r = level_inequality_report(character_table(0b1, 4), 1);
    CHECK(r.alpha == 1.0);
    CHECK(r.weight == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(level_inequality_report(FunctionTable::constant(3, 0.5), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(level_inequality_report(FunctionTable::constant(3, 0.0), 1),
                    std::invalid_argument);
  }
}

TEST_CASE("top coefficients are sorted by magnitude with stable ties") {
  const FunctionTable f(2, {0.5, 0.5, -1.0, 1.0});
  const auto top = top_coefficients(wht(f), 3);
  REQUIRE(top.size() == 3);
  CHECK(std::fabs(top[0].second) >= std::fabs(top[1].second));
  CHECK(std::fabs(top[1].second) >= std::fabs(top[2].second));
  // exact ties resolve to the smaller subset mask
  const auto all = top_coefficients(wht(FunctionTable::constant(2, 0.0)), 4);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i].first == i);
}

TEST_CASE("butterfly is identical across thread counts") {
  const FunctionTable f = random_table(8, 10101);
  set_max_threads(1);
  const FourierSpectrum one = wht(f);
  set_max_threads(4);
  const FourierSpectrum four = wht(f);
  set_max_threads(0);
  CHECK(one.coeffs == four.coeffs);
}
