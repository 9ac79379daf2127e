#pragma once

// Discrete multiplicative derivatives and Gowers uniformity norms.
//
// For real f on {0,1}^m,
//   ||f||_{U_s}^{2^s} = E_{x,h_1..h_s} prod_{T subset [s]} f(x xor xor_{i in T} h_i),
// with the derivative recursion
//   ||f||_{U_s}^{2^s} = E_{h_1..h_{s-2}} ||d_{h_1..h_{s-2}} f||_{U_2}^4
// and the spectral identity ||f||_{U_2}^4 = sum_S fhat(S)^4.
//
// Exact evaluation: s=1 via |E f|, s=2 via the spectral identity (dim <= 24),
// s>=3 via the recursion with an exhaustive outer enumeration, feasible while
// dim*(s-2) <= 28. Monte Carlo samples outer directions only and keeps the
// inner U_2 exact, which is what makes desk-scale confidence radii tight.

#include <cstdint>

#include "core/bits.hpp"
#include "core/table.hpp"

namespace slicelab {

enum class EstimateMode { Exact, MonteCarlo };

struct GowersEstimate {
  int order = 0;
  double value_pow = 0.0;  // the 2^order-th power (the parallelepiped average)
  double value = 0.0;      // nonnegative 2^order-th root
  EstimateMode mode = EstimateMode::Exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double ci_radius = 0.0;  // 95% half-width on value_pow; 0 in exact mode
  bool clipped = false;    // value_pow < 0 was clipped to 0 for the root
};

// Builds the estimate from a value_pow, clipping negative Monte Carlo noise.
GowersEstimate make_gowers_estimate(int order, double value_pow, EstimateMode mode,
                                    std::uint64_t samples, std::uint64_t seed,
                                    double ci_radius);

// d_h f (x) = f(x xor h) * f(x). For complex-valued f the first factor is
// conjugated; tables here are real.
FunctionTable derivative(const FunctionTable& f, const BitVector& h);

// ||f||_{U_2}^4 = sum_S fhat(S)^4, computed through one transform.
double u2_fourth_power(const FunctionTable& f);

GowersEstimate gowers_norm_exact(const FunctionTable& f, int s);

// s >= 3: samples (h_1..h_{s-2}) uniformly, sample i from counter stream i.
GowersEstimate gowers_norm_mc(const FunctionTable& f, int s, std::uint64_t samples,
                              std::uint64_t seed);

}  // namespace slicelab
