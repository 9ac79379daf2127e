#pragma once

// Exact integer combinatorics. Probabilities that are counts over finite
// sets stay exact (numerator over a power-of-two denominator) until a
// report converts them to double.

#include <cstdint>
#include <string>

namespace slicelab {

using u128 = unsigned __int128;

// C(n, k), 0 <= n <= 64. C(64, 32) still fits in 64 bits.
std::uint64_t binomial(int n, int k);

std::string u128_to_string(u128 v);
double u128_to_double(u128 v);

// num / 2^log2_den with num >= 0.
struct Dyadic {
  u128 num = 0;
  int log2_den = 0;

  double to_double() const;
  std::string to_string() const;  // "num/den", both decimal
  Dyadic reduced() const;

  static int compare(const Dyadic& a, const Dyadic& b);  // -1 / 0 / +1
};

inline bool operator==(const Dyadic& a, const Dyadic& b) { return Dyadic::compare(a, b) == 0; }
inline bool operator<(const Dyadic& a, const Dyadic& b) { return Dyadic::compare(a, b) < 0; }
inline bool operator<=(const Dyadic& a, const Dyadic& b) { return Dyadic::compare(a, b) <= 0; }

}  // namespace slicelab
