#include "core/exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace slicelab {

namespace {

struct PascalTable {
  // row n holds C(n, 0..n); additions never overflow uint64 for n <= 64
  std::array<std::array<std::uint64_t, 65>, 65> c{};
  PascalTable() {
    for (int n = 0; n <= 64; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k)
        c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};

const PascalTable& pascal() {
  static const PascalTable t;
  return t;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > 64) throw std::invalid_argument("binomial: n must be in [0, 64]");
  if (k < 0 || k > n) return 0;
  return pascal().c[n][k];
}

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

double u128_to_double(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  return static_cast<double>(hi) * 18446744073709551616.0 + static_cast<double>(lo);
}

double Dyadic::to_double() const {
  return std::ldexp(u128_to_double(num), -log2_den);
}

std::string Dyadic::to_string() const {
  const Dyadic r = reduced();
  return u128_to_string(r.num) + "/" + u128_to_string(u128{1} << r.log2_den);
}

Dyadic Dyadic::reduced() const {
  Dyadic r = *this;
  if (r.num == 0) {
    r.log2_den = 0;
    return r;
  }
  while (r.log2_den > 0 && (r.num & 1) == 0) {
    r.num >>= 1;
    --r.log2_den;
  }
  return r;
}

int Dyadic::compare(const Dyadic& a, const Dyadic& b) {
  // bring to a common denominator; reduce first so the shifts fit in 128 bits
  const Dyadic ra = a.reduced(), rb = b.reduced();
  const int e = std::max(ra.log2_den, rb.log2_den);
  if (e > 127) throw std::invalid_argument("Dyadic::compare: denominator too large");
  const u128 na = ra.num << (e - ra.log2_den);
  const u128 nb = rb.num << (e - rb.log2_den);
  return na < nb ? -1 : (na == nb ? 0 : 1);
}

}  // namespace slicelab
