#pragma once

// Torus-valued non-classical polynomials stored extensionally as exact
// dyadic tables num/2^q, additive derivatives, degree verification, the
// weight polynomials j(|x|-a)/2^d, phase correlations, and the residue
// decomposition 1_{|x| = 0 mod 2^d} = 2^{-d} sum_j e^{2 pi i j|x|/2^d}.
//
// Degree d means every (d+1)-st additive derivative vanishes identically.
// Checking the standard-basis direction multisets suffices: a derivative in
// an arbitrary direction splits, through the cocycle identity
// d_{h1 xor h2} p(x) = d_{h1} p(x xor h2) + d_{h2} p(x), into a sum of
// shifted basis-direction derivatives.

#include <complex>
#include <cstdint>
#include <vector>

#include "core/bits.hpp"
#include "core/slicemodel.hpp"
#include "core/table.hpp"

namespace slicelab {

class TorusPolynomial {
 public:
  // values numerators[x] / 2^q, each in [0, 1); q in [0, 62]
  TorusPolynomial(int dim, int q, std::vector<std::uint64_t> numerators);

  int dim() const { return dim_; }
  int q() const { return q_; }
  std::uint64_t denominator() const { return std::uint64_t{1} << q_; }
  std::uint64_t numerator(std::uint64_t x) const { return num_[x]; }
  const std::vector<std::uint64_t>& numerators() const { return num_; }
  double value(std::uint64_t x) const;  // in [0, 1)

  int claimed_degree() const { return claimed_degree_; }  // -1 when unset
  void set_claimed_degree(int d) { claimed_degree_ = d; }

  // smallest q representing the same values (divides numerators and q down)
  TorusPolynomial normalized() const;

  bool is_zero() const;

 private:
  int dim_;
  int q_;
  std::vector<std::uint64_t> num_;
  int claimed_degree_ = -1;
};

// d_h p (x) = p(x xor h) - p(x) mod 1, exact dyadic arithmetic.
TorusPolynomial additive_derivative(const TorusPolynomial& p, const BitVector& h);

// True iff all order-(d+1) derivatives vanish identically; basis-direction
// multisets are checked, which is equivalent (see header comment).
bool verify_degree(const TorusPolynomial& p, int d);

// Same predicate over every tuple of arbitrary directions; dim*(d+1) <= 24.
bool verify_degree_full(const TorusPolynomial& p, int d);

// x -> j(|x| - a)/2^d mod 1 on {0,1}^{2n}; degree is exactly d for odd j.
TorusPolynomial weight_polynomial(int n, std::uint32_t j, int d, int a);

// Pointwise-exact verification (cyclotomic integer arithmetic) that
// 1_{|x| = 0 mod 2^d}(x) = 2^{-d} sum_{j<2^d} e^{2 pi i j |x| / 2^d} on
// {0,1}^dim; dim <= 20.
bool residue_decomposition_check(int dim, int d);

struct CorrelationReport {
  std::complex<double> value;
  double magnitude = 0.0;
  DomainKind domain_kind = DomainKind::Cube;
  int domain_dim = 0;
};

// E over the domain of (-1)^{f(x)} e^{2 pi i p(x)}; f must be 0/1-valued on
// the domain.
CorrelationReport correlation(const FunctionTable& f, const TorusPolynomial& p,
                              const DomainSpec& domain);

// E over the domain of e^{2 pi i P(x)} (the bias of P).
CorrelationReport polynomial_bias(const TorusPolynomial& P, const DomainSpec& domain);

struct BiasedRankWitness {
  std::uint32_t j = 0;
  double bias = 0.0;            // |E_{x in cube} e^{2 pi i (P(x) + j|x|/2^d)}|
  double slice_bias = 0.0;      // |E_{x in U_{2n}} e^{2 pi i P(x)}|
  std::vector<double> profile;  // bias of every j in [0, 2^d)
};

// Searches j in [0, 2^d) for a full-cube bias >= delta * density(D_{2n,d+1})/2
// and asserts that P + j(|x|-a)/2^d still has degree <= d (a = n mod 2^d).
// Throws NoWitnessError carrying the profile when no j qualifies, which at
// desk scale signals the instance is outside the theorem's n_0 regime.
// Requires P of verified degree <= d and 2n <= 16.
BiasedRankWitness biased_rank_witness(const TorusPolynomial& P, int n, int d, double delta);

}  // namespace slicelab
