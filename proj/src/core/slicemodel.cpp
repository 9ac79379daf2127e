#include "core/slicemodel.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "core/errors.hpp"
#include "core/fourier.hpp"
#include "core/parallel.hpp"

namespace slicelab {

namespace {
constexpr std::uint64_t kStallLimit = 10'000'000;
}

DomainSpec DomainSpec::cube(int dim) {
  if (dim < 0 || dim > kMaxPointDim) throw std::invalid_argument("cube: dim out of range");
  return DomainSpec(DomainKind::Cube, dim, 0);
}

DomainSpec DomainSpec::slice(int dim) {
  if (dim < 2 || dim > kMaxPointDim || dim % 2 != 0)
    throw std::invalid_argument("slice: dimension must be even (the middle slice of 2n)");
  return DomainSpec(DomainKind::Slice, dim, 0);
}

DomainSpec DomainSpec::residue(int dim, int k) {
  if (dim < 2 || dim > kMaxPointDim || dim % 2 != 0)
    throw std::invalid_argument("residue: dimension must be even");
  if (k < 1 || k > 30) throw std::invalid_argument("residue: k must be in [1, 30]");
  return DomainSpec(DomainKind::Residue, dim, k);
}

int DomainSpec::residue_modulus() const {
  if (kind_ != DomainKind::Residue) throw std::invalid_argument("not a residue domain");
  return 1 << (k_ - 1);
}

int DomainSpec::residue_class() const { return (dim_ / 2) % residue_modulus(); }

bool DomainSpec::member(std::uint64_t x) const {
  switch (kind_) {
    case DomainKind::Cube:
      return true;
    case DomainKind::Slice:
      return std::popcount(x) == dim_ / 2;
    case DomainKind::Residue:
      return std::popcount(x) % residue_modulus() == residue_class();
  }
  return false;
}

std::uint64_t DomainSpec::member_count() const {
  if (dim_ > 63) throw std::invalid_argument("member_count: dim > 63");
  switch (kind_) {
    case DomainKind::Cube:
      return std::uint64_t{1} << dim_;
    case DomainKind::Slice:
      return binomial(dim_, dim_ / 2);
    case DomainKind::Residue: {
      std::uint64_t total = 0;
      for (int t = residue_class(); t <= dim_; t += residue_modulus())
        total += binomial(dim_, t);
      return total;
    }
  }
  return 0;
}

Dyadic DomainSpec::density() const { return Dyadic{member_count(), dim_}; }

FunctionTable indicator(const DomainSpec& spec, bool normalized) {
  if (spec.dim() > kMaxWhtDim)
    throw BudgetError("indicator: dim > 28 exceeds the dense-table budget");
  const std::uint64_t n = std::uint64_t{1} << spec.dim();
  const double one = normalized
                         ? static_cast<double>(n) / static_cast<double>(spec.member_count())
                         : 1.0;
  std::vector<double> values(n, 0.0);
  for (std::uint64_t x = 0; x < n; ++x)
    if (spec.member(x)) values[x] = one;
  return FunctionTable(spec.dim(), std::move(values));
}

AtomAlgebra::AtomAlgebra(int dim, std::vector<std::uint64_t> generators)
    : dim_(dim), generators_(std::move(generators)) {
  if (dim < 0 || dim > kMaxPointDim) throw std::invalid_argument("AtomAlgebra: dim out of range");
  if (generators_.size() > 16) throw std::invalid_argument("AtomAlgebra: too many generators");
  const std::uint64_t full = dim_mask(dim);
  for (std::uint64_t g : generators_)
    if ((g & ~full) != 0)
      throw std::invalid_argument("AtomAlgebra: generator has a bit beyond dim");
  atom_masks_.resize(std::size_t{1} << generators_.size());
  for (std::uint32_t b = 0; b < atom_masks_.size(); ++b) {
    std::uint64_t mask = full;
    for (std::size_t i = 0; i < generators_.size(); ++i)
      mask &= (b >> i & 1) ? generators_[i] : (full & ~generators_[i]);
    atom_masks_[b] = mask;
  }
  // sanity: sign-pattern supports partition [dim]
  std::uint64_t seen = 0;
  int total = 0;
  for (std::uint64_t m : atom_masks_) {
    if ((seen & m) != 0) throw std::logic_error("AtomAlgebra: atoms overlap");
    seen |= m;
    total += std::popcount(m);
  }
  if (seen != full || total != dim)
    throw std::logic_error("AtomAlgebra: atoms do not partition [dim]");
}

std::uint64_t AtomAlgebra::atom_mask(std::uint32_t sign_pattern) const {
  return atom_masks_.at(sign_pattern);
}

int AtomAlgebra::atom_size(std::uint32_t sign_pattern) const {
  return std::popcount(atom_masks_.at(sign_pattern));
}

std::uint64_t AtomAlgebra::span_element(std::uint32_t subset) const {
  if (subset >= (std::uint32_t{1} << generators_.size()))
    throw std::invalid_argument("span_element: subset out of range");
  std::uint64_t z = 0;
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (subset >> i & 1) z ^= generators_[i];
  return z;
}

bool AtomAlgebra::in_span(std::uint64_t z) const {
  const std::uint32_t combos = std::uint32_t{1} << generators_.size();
  for (std::uint32_t s = 0; s < combos; ++s)
    if (span_element(s) == z) return true;
  return false;
}

std::uint64_t orbit_size(std::uint64_t subset, const AtomAlgebra& algebra) {
  if ((subset & ~dim_mask(algebra.dim())) != 0)
    throw std::invalid_argument("orbit_size: subset has a bit beyond dim");
  u128 product = 1;
  for (std::uint32_t b = 0; b < algebra.atom_count(); ++b) {
    const std::uint64_t mask = algebra.atom_mask(b);
    product *= binomial(std::popcount(mask), std::popcount(subset & mask));
  }
  if (product > ~std::uint64_t{0}) throw std::overflow_error("orbit_size: overflow");
  return static_cast<std::uint64_t>(product);
}

int weight_intersection_residue(const BitVector& x, const BitVector& z, int j) {
  require_same_dim(x, z);
  if (j < 1 || j > 30) throw std::invalid_argument("weight_intersection_residue: j >= 1");
  const int mod_j = 1 << j;
  const int mod_j1 = 1 << (j - 1);
  const int b = std::popcount(x.bits ^ z.bits) % mod_j;
  const int c = std::popcount(x.bits) % mod_j;
  const int d = std::popcount(z.bits) % mod_j;
  const int diff = c + d - b;
  // |x xor z| = |x| + |z| - 2|x and z| forces c + d - b even
  if (diff % 2 != 0) throw std::logic_error("weight_intersection_residue: parity violated");
  const int r = ((diff / 2) % mod_j1 + mod_j1) % mod_j1;
  if (r != std::popcount(x.bits & z.bits) % mod_j1)
    throw std::logic_error("weight_intersection_residue: identity violated");
  return r;
}

Dyadic joint_slice_probability(const AtomAlgebra& algebra,
                               const std::vector<WeightConstraint>& constraints) {
  const int dim = algebra.dim();
  if (dim > 20) throw BudgetError("joint_slice_probability: dim > 20 exhaustive cap");
  for (const auto& c : constraints) {
    if (!algebra.in_span(c.z))
      throw std::invalid_argument("joint_slice_probability: constraint not in span");
    if (c.weight < 0 || c.weight > dim)
      throw std::invalid_argument("joint_slice_probability: weight out of range");
  }
  const std::uint64_t n = std::uint64_t{1} << dim;
  std::atomic<std::uint64_t> count{0};
  parallel_chunks(0, n, [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t local = 0;
    for (std::uint64_t x = b; x < e; ++x) {
      bool ok = true;
      for (const auto& c : constraints)
        if (std::popcount(x ^ c.z) != c.weight) {
          ok = false;
          break;
        }
      local += ok;
    }
    count += local;
  });
  return Dyadic{count.load(), dim};
}

bool atom_weight_determinism_check(const AtomAlgebra& algebra) {
  const int dim = algebra.dim();
  const int t = algebra.generator_count();
  if (dim > 16) throw BudgetError("atom_weight_determinism_check: dim > 16 cap");
  if (t > 3) throw BudgetError("atom_weight_determinism_check: t > 3 cap");

  const std::uint32_t span_size = std::uint32_t{1} << t;
  std::vector<std::uint64_t> span(span_size);
  for (std::uint32_t s = 0; s < span_size; ++s) span[s] = algebra.span_element(s);

  // key = packed tuple (|x xor z|)_{z in Span}; weights fit in 5 bits each
  std::map<std::uint64_t, std::vector<int>> recorded;
  const std::uint64_t n = std::uint64_t{1} << dim;
  for (std::uint64_t x = 0; x < n; ++x) {
    std::uint64_t key = 0;
    for (std::uint32_t s = 0; s < span_size; ++s)
      key |= static_cast<std::uint64_t>(std::popcount(x ^ span[s])) << (5 * s);
    std::vector<int> atom_weights(algebra.atom_count());
    for (std::uint32_t b = 0; b < algebra.atom_count(); ++b)
      atom_weights[b] = std::popcount(x & algebra.atom_mask(b));
    auto [it, inserted] = recorded.emplace(key, atom_weights);
    if (!inserted && it->second != atom_weights) return false;
  }
  return true;
}

GowersEstimate dense_model_distance(int n, int k, int s, EstimateMode mode,
                                    std::uint64_t samples, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("dense_model_distance: n must be >= 1");
  if (k < 1) throw std::invalid_argument("dense_model_distance: k must be >= 1");
  if (s < 1 || s > k)
    throw std::invalid_argument("dense_model_distance: order must satisfy 1 <= s <= k");
  if (s == 1) {
    // both indicators are normalized to mean exactly 1
    return make_gowers_estimate(1, 0.0, EstimateMode::Exact, 0, 0, 0.0);
  }
  const FunctionTable f = indicator(DomainSpec::slice(2 * n), true);
  const FunctionTable g = indicator(DomainSpec::residue(2 * n, k), true);
  const FunctionTable diff = pointwise_difference(f, g);
  if (mode == EstimateMode::Exact) return gowers_norm_exact(diff, s);
  return gowers_norm_mc(diff, s, samples, seed);
}

std::uint64_t random_domain_point(const DomainSpec& spec, RandomStream& rng) {
  switch (spec.kind()) {
    case DomainKind::Cube:
      return rng.next_bits(spec.dim());
    case DomainKind::Slice: {
      // partial Fisher-Yates: choose n of the 2n coordinates
      const int dim = spec.dim();
      const int n = dim / 2;
      std::array<std::uint8_t, kMaxPointDim> coords;
      for (int i = 0; i < dim; ++i) coords[i] = static_cast<std::uint8_t>(i);
      std::uint64_t x = 0;
      for (int i = 0; i < n; ++i) {
        const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(dim - i)));
        std::swap(coords[i], coords[j]);
        x |= std::uint64_t{1} << coords[i];
      }
      return x;
    }
    case DomainKind::Residue: {
      for (std::uint64_t tries = 0; tries < kStallLimit; ++tries) {
        const std::uint64_t x = rng.next_bits(spec.dim());
        if (spec.member(x)) return x;
      }
      throw StallError("random_domain_point: no residue member found");
    }
  }
  throw std::logic_error("random_domain_point: unreachable");
}

ConditionedSample sample_conditioned_quadruple(const DomainSpec& spec, RandomStream& rng) {
  ConditionedSample out;
  while (out.proposals < kStallLimit) {
    ++out.proposals;
    const std::uint64_t x = random_domain_point(spec, rng);
    const std::uint64_t y = random_domain_point(spec, rng);
    const std::uint64_t z = random_domain_point(spec, rng);
    if (spec.member(x ^ y ^ z)) {
      out.points = {BitVector(x, spec.dim()), BitVector(y, spec.dim()),
                    BitVector(z, spec.dim())};
      return out;
    }
  }
  throw StallError("sample_conditioned_quadruple: no acceptance in " +
                   std::to_string(kStallLimit) + " proposals (dim " +
                   std::to_string(spec.dim()) + ")");
}

ConditionedSample sample_conditioned_parallelepiped(const DomainSpec& spec, int d,
                                                    RandomStream& rng) {
  if (d < 0 || d > 20) throw std::invalid_argument("sample_conditioned_parallelepiped: d");
  ConditionedSample out;
  std::vector<std::uint64_t> h(static_cast<std::size_t>(d));
  while (out.proposals < kStallLimit) {
    ++out.proposals;
    const std::uint64_t x = random_domain_point(spec, rng);
    for (auto& hi : h) hi = rng.next_bits(spec.dim());
    bool ok = true;
    for (std::uint32_t sub = 1; ok && sub < (std::uint32_t{1} << d); ++sub) {
      std::uint64_t pt = x;
      for (int i = 0; i < d; ++i)
        if (sub >> i & 1) pt ^= h[static_cast<std::size_t>(i)];
      ok = spec.member(pt);
    }
    if (ok) {
      out.points.reserve(static_cast<std::size_t>(d) + 1);
      out.points.emplace_back(x, spec.dim());
      for (std::uint64_t hi : h) out.points.emplace_back(hi, spec.dim());
      return out;
    }
  }
  throw StallError("sample_conditioned_parallelepiped: no acceptance in " +
                   std::to_string(kStallLimit) + " proposals (dim " +
                   std::to_string(spec.dim()) + ", d " + std::to_string(d) + ")");
}

}  // namespace slicelab
