#pragma once

// Characters chi_S, the Walsh-Hadamard transform and level weights.
//
// Coefficients use the expectation normalization coeffs[S] = E_x f(x) chi_S(x):
// the butterfly accumulates unnormalized sums and divides by 2^m once at the
// end. All reductions are compensated sums in index order, so spectra are
// bit-identical across runs and thread counts.

#include <cstdint>
#include <utility>
#include <vector>

#include "core/bits.hpp"
#include "core/table.hpp"

namespace slicelab {

inline constexpr int kMaxWhtDim = 28;

struct FourierSpectrum {
  int dim = 0;
  std::vector<double> coeffs;  // indexed by subset mask S
};

// chi_S(x) = (-1)^{|S & x|}; requires S within [dim].
int character_eval(std::uint32_t subset, const BitVector& x);

// In-place unnormalized butterfly (H f, with H^2 = 2^m I). Parallel over
// independent strides; each slot is written by exactly one worker.
void hadamard_inplace(std::vector<double>& values);

FourierSpectrum wht(const FunctionTable& f);          // dim <= 28
FunctionTable wht_inverse(const FourierSpectrum& s);  // exact inverse of wht

// W_{<=d}[f] = sum over |S| <= d of coeffs[S]^2.
double level_weight(const FourierSpectrum& spec, int d);

double parseval_total(const FourierSpectrum& spec);  // sum of squared coefficients

struct LevelInequalityReport {
  double alpha;   // E|f|
  double weight;  // W_{<=d}[f]
  double ratio;   // weight / alpha^2
};

// For f with values in {-1, 0, 1} and alpha = E|f| > 0. Asserts the
// constant-free bound W_{<=d} <= alpha^2 * #{S : |S| <= d}; the polylog
// bound has unspecified constants and is only reported via `ratio`.
LevelInequalityReport level_inequality_report(const FunctionTable& f, int d);

// k largest |coefficients|, descending; ties broken by smaller subset mask.
std::vector<std::pair<std::uint32_t, double>> top_coefficients(const FourierSpectrum& spec,
                                                               int k);

}  // namespace slicelab
