#pragma once

// The quadruple linearity test and the d-Gowers test on the middle slice,
// with exact (exhaustive) and Monte Carlo pass rates, plus Fourier-based
// linear decoding:
//
//   f'(x) = (-1)^{f(x)} 1_{x in U_{2n}} * E[1_{D_{2n,4}}] / E[1_{U_{2n}}]
//
// and the decoded subset is the argmax of |fhat'(S)|. A negative coefficient
// corresponds exactly to the affine constant b = 1, so the sign is folded
// into `sign_bit` instead of doubling the search space.

#include <cstdint>
#include <vector>

#include "core/exact.hpp"
#include "core/gowers.hpp"
#include "core/table.hpp"

namespace slicelab {

struct TestOutcome {
  double pass_rate = 0.0;
  EstimateMode mode = EstimateMode::Exact;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double ci_radius = 0.0;  // 95% half-width; 0 in exact mode
};

struct LinearDecoding {
  std::uint32_t subset = 0;
  int sign_bit = 0;           // b: decoded prediction is b xor L_subset
  double coefficient = 0.0;   // fhat'(subset), sign included
  double agreement = 0.0;     // exact fraction of the slice where f = b xor L_subset
};

// Boolean function on the middle slice of {0,1}^{2n}, stored as a full-cube
// bit table; only slice entries are ever consulted.
class SliceFunction {
 public:
  explicit SliceFunction(const FunctionTable& table);  // slice entries must be exactly 0/1
  SliceFunction(int dim, std::vector<std::uint8_t> bits);

  // parity of x & subset on every point, then each slice point flipped
  // independently with probability flip_rate (slice points visited in
  // increasing index order, one stream per seed)
  static SliceFunction linear(int dim, std::uint32_t subset, double flip_rate,
                              std::uint64_t seed);
  static SliceFunction random(int dim, std::uint64_t seed);

  int dim() const { return dim_; }
  int bit(std::uint64_t x) const { return bits_[x]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  FunctionTable to_table() const;

 private:
  int dim_;
  std::vector<std::uint8_t> bits_;
};

// Pr[f(x)+f(y)+f(z) = f(x xor y xor z)] over uniform slice triples with
// x xor y xor z also on the slice. Exact mode enumerates all triples
// (2n <= 12); Monte Carlo uses the conditioned rejection sampler.
TestOutcome linearity_pass_rate(const SliceFunction& f, EstimateMode mode,
                                std::uint64_t trials, std::uint64_t seed);

// Pr[sum over T of f(x xor xor_{i in T} h_i) = 0] over conditioned
// parallelepipeds. Exact mode enumerates all (x, h_1..h_d); budget
// 2n*(d+1) <= 26.
TestOutcome gowers_test_pass_rate(const SliceFunction& f, int d, EstimateMode mode,
                                  std::uint64_t trials, std::uint64_t seed);

struct ParallelepipedCheck {
  Dyadic probability;  // Pr over uniform (x, h_1..h_d) that all 2^d points are on the slice
  Dyadic bound;        // density(U_{2n})^{2^d}
  bool holds;          // probability >= bound (a theorem; false would be a bug)
  bool equality;
};

ParallelepipedCheck parallelepiped_probability_check(int n, int d);

LinearDecoding decode_linear(const SliceFunction& f, int k_residue = 4);

struct MaxFourierCheck {
  double eps;        // E[F(x)F(y)F(z)F(x xor y xor z)] = sum_S Fhat(S)^4
  double max_coeff;  // max_S |Fhat(S)|, always >= sqrt(max(eps, 0))
};

// Requires ||F||_inf <= 1.
MaxFourierCheck max_fourier_lower_bound_check(const FunctionTable& F);

}  // namespace slicelab
