#include "core/nonclassical.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/exact.hpp"
#include "core/parallel.hpp"

namespace slicelab {

TorusPolynomial::TorusPolynomial(int dim, int q, std::vector<std::uint64_t> numerators)
    : dim_(dim), q_(q), num_(std::move(numerators)) {
  if (dim < 0 || dim > kMaxTableDim)
    throw std::invalid_argument("TorusPolynomial: dim must be in [0, 32]");
  if (q < 0 || q > 62) throw std::invalid_argument("TorusPolynomial: q must be in [0, 62]");
  if (num_.size() != (std::uint64_t{1} << dim))
    throw std::invalid_argument("TorusPolynomial: expected 2^dim numerators");
  const std::uint64_t den = std::uint64_t{1} << q;
  for (auto v : num_)
    if (v >= den) throw std::invalid_argument("TorusPolynomial: numerator >= 2^q");
}

double TorusPolynomial::value(std::uint64_t x) const {
  return std::ldexp(static_cast<double>(num_[x]), -q_);
}

TorusPolynomial TorusPolynomial::normalized() const {
  int q = q_;
  std::vector<std::uint64_t> num = num_;
  while (q > 0) {
    bool all_even = true;
    for (auto v : num)
      if (v & 1) {
        all_even = false;
        break;
      }
    if (!all_even) break;
    for (auto& v : num) v >>= 1;
    --q;
  }
  TorusPolynomial out(dim_, q, std::move(num));
  out.claimed_degree_ = claimed_degree_;
  return out;
}

bool TorusPolynomial::is_zero() const {
  for (auto v : num_)
    if (v != 0) return false;
  return true;
}

TorusPolynomial additive_derivative(const TorusPolynomial& p, const BitVector& h) {
  if (h.dim != p.dim()) throw std::invalid_argument("additive_derivative: dimension mismatch");
  const std::uint64_t den = p.denominator();
  std::vector<std::uint64_t> out(p.numerators().size());
  for (std::uint64_t x = 0; x < out.size(); ++x)
    out[x] = (p.numerator(x ^ h.bits) + den - p.numerator(x)) & (den - 1);
  return TorusPolynomial(p.dim(), p.q(), std::move(out));
}

namespace {

// raw derivative on numerator vectors, direction given as a word
void derivative_into(const std::vector<std::uint64_t>& num, std::uint64_t den, std::uint64_t h,
                     std::vector<std::uint64_t>& out) {
  for (std::uint64_t x = 0; x < num.size(); ++x)
    out[x] = (num[x ^ h] + den - num[x]) & (den - 1);
}

bool all_zero(const std::vector<std::uint64_t>& v) {
  for (auto x : v)
    if (x != 0) return false;
  return true;
}

// checks every sorted basis multiset (min_coord <= i_1 <= ... <= i_rem);
// repeated directions matter because d_h d_h p = -2 d_h p, not 0
bool basis_derivatives_vanish(const std::vector<std::uint64_t>& num, std::uint64_t den, int dim,
                              int rem, int min_coord) {
  if (rem == 0) return all_zero(num);
  for (int i = min_coord; i < dim; ++i) {
    std::vector<std::uint64_t> next(num.size());
    derivative_into(num, den, std::uint64_t{1} << i, next);
    if (!basis_derivatives_vanish(next, den, dim, rem - 1, i)) return false;
  }
  return true;
}

}  // namespace

bool verify_degree(const TorusPolynomial& p, int d) {
  if (d < 0) throw std::invalid_argument("verify_degree: d must be >= 0");
  return basis_derivatives_vanish(p.numerators(), p.denominator(), p.dim(), d + 1, 0);
}

bool verify_degree_full(const TorusPolynomial& p, int d) {
  if (d < 0) throw std::invalid_argument("verify_degree_full: d must be >= 0");
  const int dim = p.dim();
  if (dim * (d + 1) > 24)
    throw BudgetError("verify_degree_full: dim*(d+1) <= 24 exhaustive cap");
  const std::uint64_t den = p.denominator();
  const std::uint64_t n = std::uint64_t{1} << dim;

  // iterate all direction tuples; reuse a stack of derivative tables
  std::vector<std::vector<std::uint64_t>> stack(static_cast<std::size_t>(d) + 1,
                                                std::vector<std::uint64_t>(n));
  std::vector<std::uint64_t> dirs(static_cast<std::size_t>(d) + 1, 0);
  const std::uint64_t total = std::uint64_t{1} << (dim * (d + 1));
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const std::vector<std::uint64_t>* cur = &p.numerators();
    for (int level = 0; level <= d; ++level) {
      const std::uint64_t h = (idx >> (dim * level)) & dim_mask(dim);
      derivative_into(*cur, den, h, stack[static_cast<std::size_t>(level)]);
      cur = &stack[static_cast<std::size_t>(level)];
    }
    if (!all_zero(*cur)) return false;
  }
  return true;
}

TorusPolynomial weight_polynomial(int n, std::uint32_t j, int d, int a) {
  if (n < 1 || 2 * n > kMaxTableDim)
    throw std::invalid_argument("weight_polynomial: need 1 <= n and 2n <= 32");
  if (d < 0 || d > 30) throw std::invalid_argument("weight_polynomial: d out of range");
  if (j >= (std::uint32_t{1} << d)) throw std::invalid_argument("weight_polynomial: j >= 2^d");
  const int dim = 2 * n;
  const std::int64_t mod = std::int64_t{1} << d;
  std::vector<std::uint64_t> num(std::uint64_t{1} << dim);
  for (std::uint64_t x = 0; x < num.size(); ++x) {
    const std::int64_t w = std::popcount(x) - a;
    const std::int64_t v = (static_cast<std::int64_t>(j) * (w % mod)) % mod;
    num[x] = static_cast<std::uint64_t>((v % mod + mod) % mod);
  }
  TorusPolynomial p = TorusPolynomial(dim, d, std::move(num)).normalized();
  // reduced degree: j = 2^v * odd gives j(|x|-a)/2^d = odd*(|x|-a)/2^{d-v}
  const int v2 = j == 0 ? d : std::countr_zero(j);
  p.set_claimed_degree(j == 0 ? 0 : d - std::min(v2, d));
  return p;
}

bool residue_decomposition_check(int dim, int d) {
  if (dim < 0 || dim > 20) throw BudgetError("residue_decomposition_check: dim <= 20 cap");
  if (d < 0 || d > 20) throw std::invalid_argument("residue_decomposition_check: d out of range");
  const std::uint32_t order = std::uint32_t{1} << d;  // 2^d-th roots of unity
  const std::uint32_t half = order / 2;
  // weights only enter through |x|; check each achievable weight once
  for (int w = 0; w <= dim; ++w) {
    // sum_j zeta^{j w} as an integer coefficient vector over zeta^0..zeta^{order-1}
    std::vector<std::int64_t> coeff(order, 0);
    for (std::uint32_t j = 0; j < order; ++j)
      coeff[(static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(w)) % order] += 1;
    // reduce by zeta^{order/2} = -1 (minimal polynomial x^{2^{d-1}} + 1)
    std::vector<std::int64_t> reduced(std::max<std::uint32_t>(half, 1), 0);
    if (order == 1) {
      reduced[0] = coeff[0];
    } else {
      for (std::uint32_t r = 0; r < half; ++r) reduced[r] = coeff[r] - coeff[r + half];
    }
    const bool lhs = w % order == 0;  // indicator value
    // identity demands sum = 2^d * lhs exactly
    if (reduced[0] != (lhs ? static_cast<std::int64_t>(order) : 0)) return false;
    for (std::uint32_t r = 1; r < reduced.size(); ++r)
      if (reduced[r] != 0) return false;
  }
  return true;
}

namespace {

std::complex<double> phase(std::uint64_t num, int q) {
  // quarter turns are exact; everything else goes through libm
  const std::uint64_t den = std::uint64_t{1} << q;
  if ((num * 4) % den == 0) {
    switch ((num * 4) / den) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * std::ldexp(static_cast<double>(num), -q);
  return {std::cos(angle), std::sin(angle)};
}

CorrelationReport domain_phase_average(const TorusPolynomial& p, const DomainSpec& domain,
                                       const std::vector<std::uint8_t>* sign_bits) {
  if (p.dim() != domain.dim())
    throw std::invalid_argument("correlation: polynomial/domain dimension mismatch");
  const std::uint64_t n = std::uint64_t{1} << p.dim();
  KahanSum re, im;
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < n; ++x) {
    if (!domain.member(x)) continue;
    ++count;
    std::complex<double> ph = phase(p.numerator(x), p.q());
    if (sign_bits != nullptr && (*sign_bits)[x]) ph = -ph;
    re.add(ph.real());
    im.add(ph.imag());
  }
  if (count == 0) throw std::invalid_argument("correlation: empty domain");
  const std::complex<double> value{re.value() / static_cast<double>(count),
                                   im.value() / static_cast<double>(count)};
  return CorrelationReport{value, std::abs(value), domain.kind(), domain.dim()};
}

}  // namespace

CorrelationReport correlation(const FunctionTable& f, const TorusPolynomial& p,
                              const DomainSpec& domain) {
  if (f.dim() != p.dim()) throw std::invalid_argument("correlation: dimension mismatch");
  std::vector<std::uint8_t> sign_bits(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const double v = f[x];
    if (domain.member(x) && v != 0.0 && v != 1.0)
      throw std::invalid_argument("correlation: f must be 0/1-valued on the domain");
    sign_bits[x] = v == 1.0 ? 1 : 0;
  }
  return domain_phase_average(p, domain, &sign_bits);
}

CorrelationReport polynomial_bias(const TorusPolynomial& P, const DomainSpec& domain) {
  return domain_phase_average(P, domain, nullptr);
}

BiasedRankWitness biased_rank_witness(const TorusPolynomial& P, int n, int d, double delta) {
  if (n < 1 || 2 * n > 16)
    throw BudgetError("biased_rank_witness: 2n <= 16 (degree assertions are exhaustive)");
  if (P.dim() != 2 * n) throw std::invalid_argument("biased_rank_witness: dim mismatch");
  if (d < 1 || d > 20) throw std::invalid_argument("biased_rank_witness: d must be >= 1");
  if (delta <= 0.0 || delta > 1.0)
    throw std::invalid_argument("biased_rank_witness: delta must be in (0, 1]");
  if (!verify_degree(P, d))
    throw std::invalid_argument("biased_rank_witness: P does not have degree <= " +
                                std::to_string(d));

  const int dim = 2 * n;
  const int a = n % (1 << d);
  const DomainSpec cube = DomainSpec::cube(dim);
  const DomainSpec residue_domain = DomainSpec::residue(dim, d + 1);
  const double threshold = delta * residue_domain.density().to_double() / 2.0;

  BiasedRankWitness out;
  out.slice_bias = polynomial_bias(P, DomainSpec::slice(dim)).magnitude;

  const std::uint32_t count = std::uint32_t{1} << d;
  out.profile.resize(count);
  std::uint32_t best_j = 0;
  double best_bias = -1.0;
  for (std::uint32_t j = 0; j < count; ++j) {
    // P + j|x|/2^d; the a-shift is a constant phase and does not move |E|
    const TorusPolynomial shift = weight_polynomial(n, j, d, 0);
    const int q = std::max(P.q(), shift.q());
    std::vector<std::uint64_t> num(P.numerators().size());
    const std::uint64_t den = std::uint64_t{1} << q;
    for (std::uint64_t x = 0; x < num.size(); ++x) {
      const std::uint64_t pv = P.numerator(x) << (q - P.q());
      const std::uint64_t sv = shift.numerator(x) << (q - shift.q());
      num[x] = (pv + sv) & (den - 1);
    }
    const TorusPolynomial sum(dim, q, std::move(num));
    out.profile[j] = polynomial_bias(sum, cube).magnitude;
    if (out.profile[j] > best_bias) {
      best_bias = out.profile[j];
      best_j = j;
    }
  }

  if (best_bias + 1e-12 < threshold) {
    throw NoWitnessError(
        "biased_rank_witness: no residue shift reaches delta*density(D)/2 = " +
            std::to_string(threshold) + "; instance is outside the theorem regime",
        out.profile);
  }
  out.j = best_j;
  out.bias = best_bias;

  // the witness polynomial P + j(|x|-a)/2^d keeps degree <= d
  const TorusPolynomial shift = weight_polynomial(n, best_j, d, a);
  const int q = std::max(P.q(), shift.q());
  std::vector<std::uint64_t> num(P.numerators().size());
  const std::uint64_t den = std::uint64_t{1} << q;
  for (std::uint64_t x = 0; x < num.size(); ++x) {
    const std::uint64_t pv = P.numerator(x) << (q - P.q());
    const std::uint64_t sv = shift.numerator(x) << (q - shift.q());
    num[x] = (pv + sv) & (den - 1);
  }
  if (!verify_degree(TorusPolynomial(dim, q, std::move(num)), d))
    throw std::logic_error("biased_rank_witness: witness polynomial exceeded degree d");
  return out;
}

}  // namespace slicelab
