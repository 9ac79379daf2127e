#include "core/testers.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/fourier.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/slicemodel.hpp"

namespace slicelab {

namespace {

double binomial_ci95(double p_hat, std::uint64_t trials) {
  if (trials < 2) return 0.0;
  return 1.959963984540054 *
         std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

std::vector<std::uint64_t> slice_points(int dim) {
  std::vector<std::uint64_t> pts;
  pts.reserve(binomial(dim, dim / 2));
  const std::uint64_t n = std::uint64_t{1} << dim;
  for (std::uint64_t x = 0; x < n; ++x)
    if (std::popcount(x) == dim / 2) pts.push_back(x);
  return pts;
}

}  // namespace

SliceFunction::SliceFunction(int dim, std::vector<std::uint8_t> bits)
    : dim_(dim), bits_(std::move(bits)) {
  if (dim < 2 || dim > kMaxTableDim || dim % 2 != 0)
    throw std::invalid_argument("SliceFunction: dimension must be even");
  if (bits_.size() != (std::uint64_t{1} << dim))
    throw std::invalid_argument("SliceFunction: expected 2^dim bits");
  for (auto b : bits_)
    if (b > 1) throw std::invalid_argument("SliceFunction: bits must be 0/1");
}

SliceFunction::SliceFunction(const FunctionTable& table) : dim_(table.dim()) {
  if (dim_ < 2 || dim_ % 2 != 0)
    throw std::invalid_argument("SliceFunction: dimension must be even");
  const int n = dim_ / 2;
  bits_.resize(table.size(), 0);
  for (std::uint64_t x = 0; x < table.size(); ++x) {
    const double v = table[x];
    if (std::popcount(x) == n && v != 0.0 && v != 1.0)
      throw std::invalid_argument("SliceFunction: slice entries must be exactly 0 or 1");
    bits_[x] = v == 1.0 ? 1 : 0;
  }
}

SliceFunction SliceFunction::linear(int dim, std::uint32_t subset, double flip_rate,
                                    std::uint64_t seed) {
  if ((std::uint64_t{subset} & ~dim_mask(dim)) != 0)
    throw std::invalid_argument("SliceFunction::linear: subset not within [dim]");
  if (flip_rate < 0.0 || flip_rate > 1.0)
    throw std::invalid_argument("SliceFunction::linear: flip rate must be in [0, 1]");
  std::vector<std::uint8_t> bits(std::uint64_t{1} << dim);
  for (std::uint64_t x = 0; x < bits.size(); ++x)
    bits[x] = static_cast<std::uint8_t>(std::popcount(x & subset) & 1);
  if (flip_rate > 0.0) {
    RandomStream stream(seed, 0);
    for (std::uint64_t x = 0; x < bits.size(); ++x)
      if (std::popcount(x) == dim / 2 && stream.next_unit() < flip_rate) bits[x] ^= 1;
  }
  return SliceFunction(dim, std::move(bits));
}

SliceFunction SliceFunction::random(int dim, std::uint64_t seed) {
  RandomStream stream(seed, 0);
  std::vector<std::uint8_t> bits(std::uint64_t{1} << dim);
  for (auto& b : bits) b = static_cast<std::uint8_t>(stream.next() & 1);
  return SliceFunction(dim, std::move(bits));
}

FunctionTable SliceFunction::to_table() const {
  std::vector<double> values(bits_.size());
  for (std::uint64_t x = 0; x < bits_.size(); ++x) values[x] = bits_[x];
  return FunctionTable(dim_, std::move(values));
}

TestOutcome linearity_pass_rate(const SliceFunction& f, EstimateMode mode,
                                std::uint64_t trials, std::uint64_t seed) {
  const int dim = f.dim();
  if (mode == EstimateMode::Exact) {
    if (dim > 12)
      throw BudgetError("linearity_pass_rate: exact enumeration needs 2n <= 12");
    const auto pts = slice_points(dim);
    const std::uint64_t n = std::uint64_t{1} << dim;
    std::vector<std::uint8_t> member(n, 0);
    for (auto p : pts) member[p] = 1;
    std::atomic<std::uint64_t> total{0}, passed{0};
    parallel_chunks(0, pts.size(), [&](std::uint64_t b, std::uint64_t e) {
      std::uint64_t lt = 0, lp = 0;
      for (std::uint64_t xi = b; xi < e; ++xi) {
        const std::uint64_t x = pts[xi];
        const int fx = f.bit(x);
        for (const std::uint64_t y : pts) {
          const std::uint64_t xy = x ^ y;
          const int fxy = fx ^ f.bit(y);
          for (const std::uint64_t z : pts) {
            const std::uint64_t w = xy ^ z;
            if (member[w]) {
              ++lt;
              lp += static_cast<std::uint64_t>((fxy ^ f.bit(z)) == f.bit(w));
            }
          }
        }
      }
      total += lt;
      passed += lp;
    });
    return TestOutcome{static_cast<double>(passed.load()) / static_cast<double>(total.load()),
                       EstimateMode::Exact, total.load(), 0, 0.0};
  }

  if (trials < 1) throw std::invalid_argument("linearity_pass_rate: trials must be >= 1");
  const DomainSpec slice = DomainSpec::slice(dim);
  std::atomic<std::uint64_t> passed{0};
  parallel_chunks(0, trials, [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t lp = 0;
    for (std::uint64_t i = b; i < e; ++i) {
      RandomStream stream(seed, i);
      const auto sample = sample_conditioned_quadruple(slice, stream);
      const std::uint64_t x = sample.points[0].bits;
      const std::uint64_t y = sample.points[1].bits;
      const std::uint64_t z = sample.points[2].bits;
      lp += static_cast<std::uint64_t>((f.bit(x) ^ f.bit(y) ^ f.bit(z)) == f.bit(x ^ y ^ z));
    }
    passed += lp;
  });
  const double p_hat = static_cast<double>(passed.load()) / static_cast<double>(trials);
  return TestOutcome{p_hat, EstimateMode::MonteCarlo, trials, seed,
                     binomial_ci95(p_hat, trials)};
}

TestOutcome gowers_test_pass_rate(const SliceFunction& f, int d, EstimateMode mode,
                                  std::uint64_t trials, std::uint64_t seed) {
  const int dim = f.dim();
  if (d < 1 || d > 20) throw std::invalid_argument("gowers_test_pass_rate: d must be >= 1");
  if (mode == EstimateMode::Exact) {
    if (dim * (d + 1) > 26)
      throw BudgetError("gowers_test_pass_rate: exact enumeration needs 2n*(d+1) <= 26");
    const int n = dim / 2;
    const std::uint64_t tuples = std::uint64_t{1} << (dim * (d + 1));
    const std::uint64_t mask = dim_mask(dim);
    std::atomic<std::uint64_t> total{0}, passed{0};
    parallel_chunks(0, tuples, [&](std::uint64_t b, std::uint64_t e) {
      std::uint64_t lt = 0, lp = 0;
      for (std::uint64_t idx = b; idx < e; ++idx) {
        const std::uint64_t x = idx & mask;
        bool ok = true;
        int parity = 0;
        for (std::uint32_t sub = 0; ok && sub < (std::uint32_t{1} << d); ++sub) {
          std::uint64_t pt = x;
          for (int i = 0; i < d; ++i)
            if (sub >> i & 1) pt ^= (idx >> (dim * (i + 1))) & mask;
          if (std::popcount(pt) != n)
            ok = false;
          else
            parity ^= f.bit(pt);
        }
        if (ok) {
          ++lt;
          lp += static_cast<std::uint64_t>(parity == 0);
        }
      }
      total += lt;
      passed += lp;
    });
    return TestOutcome{static_cast<double>(passed.load()) / static_cast<double>(total.load()),
                       EstimateMode::Exact, total.load(), 0, 0.0};
  }

  if (trials < 1) throw std::invalid_argument("gowers_test_pass_rate: trials must be >= 1");
  const DomainSpec slice = DomainSpec::slice(dim);
  std::atomic<std::uint64_t> passed{0};
  parallel_chunks(0, trials, [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t lp = 0;
    for (std::uint64_t i = b; i < e; ++i) {
      RandomStream stream(seed, i);
      const auto sample = sample_conditioned_parallelepiped(slice, d, stream);
      int parity = 0;
      for (std::uint32_t sub = 0; sub < (std::uint32_t{1} << d); ++sub) {
        std::uint64_t pt = sample.points[0].bits;
        for (int i2 = 0; i2 < d; ++i2)
          if (sub >> i2 & 1) pt ^= sample.points[static_cast<std::size_t>(i2) + 1].bits;
        parity ^= f.bit(pt);
      }
      lp += static_cast<std::uint64_t>(parity == 0);
    }
    passed += lp;
  });
  const double p_hat = static_cast<double>(passed.load()) / static_cast<double>(trials);
  return TestOutcome{p_hat, EstimateMode::MonteCarlo, trials, seed,
                     binomial_ci95(p_hat, trials)};
}

ParallelepipedCheck parallelepiped_probability_check(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("parallelepiped_probability_check: n, d >= 1");
  const int dim = 2 * n;
  if (dim * (d + 1) > 26)
    throw BudgetError("parallelepiped_probability_check: 2n*(d+1) <= 26 exhaustive cap");
  const std::uint64_t tuples = std::uint64_t{1} << (dim * (d + 1));
  const std::uint64_t mask = dim_mask(dim);
  std::atomic<std::uint64_t> count{0};
  parallel_chunks(0, tuples, [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t local = 0;
    for (std::uint64_t idx = b; idx < e; ++idx) {
      const std::uint64_t x = idx & mask;
      bool ok = true;
      for (std::uint32_t sub = 0; ok && sub < (std::uint32_t{1} << d); ++sub) {
        std::uint64_t pt = x;
        for (int i = 0; i < d; ++i)
          if (sub >> i & 1) pt ^= (idx >> (dim * (i + 1))) & mask;
        ok = std::popcount(pt) == n;
      }
      local += ok;
    }
    count += local;
  });

  const Dyadic probability{count.load(), dim * (d + 1)};
  u128 bound_num = 1;
  for (int i = 0; i < (1 << d); ++i) bound_num *= binomial(dim, n);
  const Dyadic bound{bound_num, dim * (1 << d)};
  const int cmp = Dyadic::compare(probability, bound);
  if (cmp < 0)
    throw std::logic_error("parallelepiped_probability_check: bound violated");
  return ParallelepipedCheck{probability, bound, cmp >= 0, cmp == 0};
}

LinearDecoding decode_linear(const SliceFunction& f, int k_residue) {
  const int dim = f.dim();
  if (dim > 24) throw BudgetError("decode_linear: 2n <= 24 (one dense transform)");
  const DomainSpec slice = DomainSpec::slice(dim);
  const DomainSpec res = DomainSpec::residue(dim, k_residue);
  const double ratio = res.density().to_double() / slice.density().to_double();

  // Butterfly over the +-1 table: every intermediate is an integer, exact in
  // doubles, so the S vs complement-of-S magnitude tie is an exact tie and
  // the smallest-encoding rule below is deterministic. The ratio scales in
  // at the end.
  const int n = dim / 2;
  std::vector<double> fprime(std::uint64_t{1} << dim, 0.0);
  for (std::uint64_t x = 0; x < fprime.size(); ++x)
    if (std::popcount(x) == n) fprime[x] = (f.bit(x) ? -1.0 : 1.0);
  hadamard_inplace(fprime);
  const double scale = std::ldexp(ratio, -dim);

  std::uint64_t best = 0;
  double best_mag = -1.0;
  for (std::uint64_t sub = 0; sub < fprime.size(); ++sub) {
    const double mag = std::fabs(fprime[sub]);
    if (mag > best_mag) {  // strict: ties keep the smallest subset encoding
      best_mag = mag;
      best = sub;
    }
  }
  const double coeff = fprime[best] * scale;
  const int sign_bit = coeff < 0.0 ? 1 : 0;

  std::uint64_t agree = 0, slice_size = 0;
  for (std::uint64_t x = 0; x < fprime.size(); ++x) {
    if (std::popcount(x) != n) continue;
    ++slice_size;
    const int prediction = sign_bit ^ (std::popcount(x & best) & 1);
    agree += static_cast<std::uint64_t>(f.bit(x) == prediction);
  }
  return LinearDecoding{static_cast<std::uint32_t>(best), sign_bit, coeff,
                        static_cast<double>(agree) / static_cast<double>(slice_size)};
}

MaxFourierCheck max_fourier_lower_bound_check(const FunctionTable& F) {
  for (std::uint64_t x = 0; x < F.size(); ++x)
    if (std::fabs(F[x]) > 1.0 + 1e-12)
      throw std::invalid_argument("max_fourier_lower_bound_check: ||F||_inf must be <= 1");
  const FourierSpectrum spec = wht(F);
  KahanSum eps_acc;
  double max_coeff = 0.0;
  for (double c : spec.coeffs) {
    const double c2 = c * c;
    eps_acc.add(c2 * c2);
    max_coeff = std::max(max_coeff, std::fabs(c));
  }
  const double eps = eps_acc.value();
  if (max_coeff + 1e-12 < std::sqrt(std::max(eps, 0.0)))
    throw std::logic_error("max_fourier_lower_bound_check: bound violated");
  return MaxFourierCheck{eps, max_coeff};
}

}  // namespace slicelab
