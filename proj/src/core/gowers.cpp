#include "core/gowers.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "core/errors.hpp"
#include "core/fourier.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace slicelab {

GowersEstimate make_gowers_estimate(int order, double value_pow, EstimateMode mode,
                                    std::uint64_t samples, std::uint64_t seed,
                                    double ci_radius) {
  GowersEstimate e;
  e.order = order;
  e.value_pow = value_pow;
  e.mode = mode;
  e.samples = samples;
  e.seed = seed;
  e.ci_radius = ci_radius;
  if (value_pow < 0.0) {
    e.value = 0.0;
    e.clipped = true;
  } else {
    e.value = std::pow(value_pow, std::ldexp(1.0, -order));
  }
  return e;
}

FunctionTable derivative(const FunctionTable& f, const BitVector& h) {
  if (h.dim != f.dim()) throw std::invalid_argument("derivative: dimension mismatch");
  std::vector<double> out(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) out[x] = f[x ^ h.bits] * f[x];
  return FunctionTable(f.dim(), std::move(out));
}

namespace {

// derivative into a preallocated buffer, raw direction word
void derivative_into(const std::vector<double>& f, std::uint64_t h, std::vector<double>& out) {
  const std::uint64_t n = f.size();
  for (std::uint64_t x = 0; x < n; ++x) out[x] = f[x ^ h] * f[x];
}

// sum_S fhat(S)^4 via one unnormalized butterfly; scratch is clobbered
double u2p4_scratch(const std::vector<double>& f, std::vector<double>& scratch) {
  const int m = static_cast<int>(std::countr_zero(f.size()));
  scratch = f;
  hadamard_inplace(scratch);
  KahanSum acc;
  for (double v : scratch) {
    const double v2 = v * v;
    acc.add(v2 * v2);
  }
  return std::ldexp(acc.value(), -4 * m);  // fhat(S) = butterfly / 2^m
}

// inner sequential average of ||d_{h_1..h_depth} f||_{U_2}^4 over all
// direction tuples, fixed order: a deterministic summation tree
double exact_inner(const std::vector<double>& f, int depth,
                   std::vector<std::vector<double>>& stack, std::size_t level,
                   std::vector<double>& scratch) {
  if (depth == 0) return u2p4_scratch(f, scratch);
  const std::uint64_t n = f.size();
  KahanSum acc;
  for (std::uint64_t h = 0; h < n; ++h) {
    derivative_into(f, h, stack[level]);
    acc.add(exact_inner(stack[level], depth - 1, stack, level + 1, scratch));
  }
  return acc.value() / static_cast<double>(n);
}

double u2p4_of_table(const FunctionTable& f) {
  std::vector<double> scratch;
  return u2p4_scratch(f.values(), scratch);
}

}  // namespace

double u2_fourth_power(const FunctionTable& f) {
  if (f.dim() > 24) throw BudgetError("U_2: dim > 24 exceeds the spectral budget");
  return u2p4_of_table(f);
}

GowersEstimate gowers_norm_exact(const FunctionTable& f, int s) {
  if (s < 1) throw std::invalid_argument("gowers_norm_exact: order must be >= 1");
  const int m = f.dim();
  if (s == 1) {
    const double mu = f.mean();
    GowersEstimate e = make_gowers_estimate(1, mu * mu, EstimateMode::Exact, 0, 0, 0.0);
    e.value = std::fabs(mu);
    return e;
  }
  if (s == 2)
    return make_gowers_estimate(2, u2_fourth_power(f), EstimateMode::Exact, 0, 0, 0.0);

  const int outer = s - 2;
  if (m * outer > 28)
    throw BudgetError(
        "gowers_norm_exact: dim*(s-2) > 28; switch to the Monte Carlo estimator");

  const std::uint64_t n = f.size();
  // parallel over the first direction; the remaining directions are an
  // inner sequential sum, so the reduction tree is fixed
  std::vector<double> per_h1(n);
  parallel_chunks(0, n, [&](std::uint64_t b, std::uint64_t e) {
    std::vector<std::vector<double>> stack(static_cast<std::size_t>(outer),
                                           std::vector<double>(n));
    std::vector<double> scratch;
    for (std::uint64_t h = b; h < e; ++h) {
      derivative_into(f.values(), h, stack[0]);
      per_h1[h] = exact_inner(stack[0], outer - 1, stack, 1, scratch);
    }
  });
  KahanSum acc;
  for (double v : per_h1) acc.add(v);
  return make_gowers_estimate(s, acc.value() / static_cast<double>(n), EstimateMode::Exact,
                              0, 0, 0.0);
}

GowersEstimate gowers_norm_mc(const FunctionTable& f, int s, std::uint64_t samples,
                              std::uint64_t seed) {
  if (s < 3)
    throw std::invalid_argument("gowers_norm_mc: exact mode is always feasible for s <= 2");
  if (samples < 1) throw std::invalid_argument("gowers_norm_mc: samples must be >= 1");
  const int m = f.dim();
  if (m > 24) throw BudgetError("gowers_norm_mc: dim > 24 exceeds the inner U_2 budget");

  const int outer = s - 2;
  std::vector<double> per_sample(samples);
  parallel_chunks(0, samples, [&](std::uint64_t b, std::uint64_t e) {
    std::vector<double> current(f.size());
    std::vector<double> next(f.size());
    std::vector<double> scratch;
    for (std::uint64_t i = b; i < e; ++i) {
      RandomStream stream(seed, i);
      derivative_into(f.values(), stream.next_bits(m), current);
      for (int level = 1; level < outer; ++level) {
        derivative_into(current, stream.next_bits(m), next);
        current.swap(next);
      }
      per_sample[i] = u2p4_scratch(current, scratch);
    }
  });

  KahanSum mean_acc;
  for (double v : per_sample) mean_acc.add(v);
  const double mean = mean_acc.value() / static_cast<double>(samples);

  double ci = 0.0;
  if (samples > 1) {
    KahanSum var_acc;
    for (double v : per_sample) var_acc.add((v - mean) * (v - mean));
    const double sample_var = var_acc.value() / static_cast<double>(samples - 1);
    ci = 1.959963984540054 * std::sqrt(sample_var / static_cast<double>(samples));
  }
  return make_gowers_estimate(s, mean, EstimateMode::MonteCarlo, samples, seed, ci);
}

}  // namespace slicelab
