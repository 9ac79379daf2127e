#include "core/fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/exact.hpp"
#include "core/parallel.hpp"

namespace slicelab {

int character_eval(std::uint32_t subset, const BitVector& x) {
  if ((std::uint64_t{subset} & ~dim_mask(x.dim)) != 0)
    throw std::invalid_argument("character_eval: subset not contained in [dim]");
  return (std::popcount(subset & static_cast<std::uint32_t>(x.bits)) & 1) ? -1 : 1;
}

void hadamard_inplace(std::vector<double>& values) {
  const std::uint64_t n = values.size();
  for (std::uint64_t h = 1; h < n; h <<= 1) {
    const auto stage = [&values, h](std::uint64_t block_begin, std::uint64_t block_end) {
      for (std::uint64_t b = block_begin; b < block_end; ++b) {
        const std::uint64_t i0 = b * (h << 1);
        for (std::uint64_t j = i0; j < i0 + h; ++j) {
          const double a = values[j];
          const double c = values[j + h];
          values[j] = a + c;
          values[j + h] = a - c;
        }
      }
    };
    const std::uint64_t blocks = n / (h << 1);
    if (n >= (std::uint64_t{1} << 16) && blocks > 1)
      parallel_chunks(0, blocks, stage);
    else
      stage(0, blocks);
  }
}

FourierSpectrum wht(const FunctionTable& f) {
  if (f.dim() > kMaxWhtDim)
    throw BudgetError("wht: dim > 28 exceeds the dense-transform budget");
  std::vector<double> c = f.values();
  hadamard_inplace(c);
  const double scale = std::ldexp(1.0, -f.dim());
  for (double& v : c) v *= scale;
  return FourierSpectrum{f.dim(), std::move(c)};
}

FunctionTable wht_inverse(const FourierSpectrum& s) {
  std::vector<double> v = s.coeffs;
  hadamard_inplace(v);
  return FunctionTable(s.dim, std::move(v));
}

double level_weight(const FourierSpectrum& spec, int d) {
  if (d < 0 || d > spec.dim) throw std::invalid_argument("level_weight: d out of range");
  KahanSum acc;
  for (std::uint64_t sub = 0; sub < spec.coeffs.size(); ++sub)
    if (std::popcount(sub) <= d) acc.add(spec.coeffs[sub] * spec.coeffs[sub]);
  return acc.value();
}

double parseval_total(const FourierSpectrum& spec) {
  KahanSum acc;
  for (double c : spec.coeffs) acc.add(c * c);
  return acc.value();
}

LevelInequalityReport level_inequality_report(const FunctionTable& f, int d) {
  if (d < 0 || d > f.dim())
    throw std::invalid_argument("level_inequality_report: d out of range");
  KahanSum abs_acc;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const double v = f[x];
    if (v != -1.0 && v != 0.0 && v != 1.0)
      throw std::invalid_argument("level_inequality_report: values must be in {-1, 0, 1}");
    abs_acc.add(std::fabs(v));
  }
  const double alpha = abs_acc.value() / static_cast<double>(f.size());
  if (alpha == 0.0) throw std::invalid_argument("level_inequality_report: E|f| = 0");

  const double w = level_weight(wht(f), d);
  double subset_count = 0.0;
  for (int i = 0; i <= d; ++i)
    subset_count += u128_to_double(binomial(f.dim(), i));
  // |fhat(S)| <= E|f| termwise, so W_{<=d} <= alpha^2 * #subsets
  if (w > alpha * alpha * subset_count * (1.0 + 1e-9))
    throw std::logic_error("level_inequality_report: constant-free bound violated");
  return LevelInequalityReport{alpha, w, w / (alpha * alpha)};
}

std::vector<std::pair<std::uint32_t, double>> top_coefficients(const FourierSpectrum& spec,
                                                               int k) {
  std::vector<std::pair<std::uint32_t, double>> all;
  all.reserve(spec.coeffs.size());
  for (std::uint64_t sub = 0; sub < spec.coeffs.size(); ++sub)
    all.emplace_back(static_cast<std::uint32_t>(sub), spec.coeffs[sub]);
  const auto by_magnitude = [](const auto& a, const auto& b) {
    const double ma = std::fabs(a.second), mb = std::fabs(b.second);
    if (ma != mb) return ma > mb;
    return a.first < b.first;
  };
  const std::size_t keep = std::min<std::size_t>(all.size(), k < 0 ? 0 : k);
  std::partial_sort(all.begin(), all.begin() + keep, all.end(), by_magnitude);
  all.resize(keep);
  return all;
}

}  // namespace slicelab
