#pragma once

// The middle slice U_{2n}, the residue-class union D_{2n,k}, normalized
// indicators, the dense-model distance between them, and the combinatorial
// oracles behind the orbit/atom arguments.
//
// D_{2n,k} is the set of x with |x| = a (mod 2^{k-1}) where a = n mod
// 2^{k-1}; the class parameter is always derived from (n, k), never passed
// in. U_{2n} is contained in D_{2n,k} for every k.

#include <cstdint>
#include <vector>

#include "core/bits.hpp"
#include "core/exact.hpp"
#include "core/gowers.hpp"
#include "core/rng.hpp"
#include "core/table.hpp"

namespace slicelab {

enum class DomainKind { Cube, Slice, Residue };

class DomainSpec {
 public:
  static DomainSpec cube(int dim);
  static DomainSpec slice(int dim);           // dim = 2n, even
  static DomainSpec residue(int dim, int k);  // dim = 2n, even; k >= 1

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int k() const { return k_; }
  int residue_modulus() const;  // 2^{k-1}
  int residue_class() const;    // a = n mod 2^{k-1}

  bool member(std::uint64_t x) const;
  std::uint64_t member_count() const;  // exact; requires dim <= 63
  Dyadic density() const;              // member_count / 2^dim

 private:
  DomainSpec(DomainKind kind, int dim, int k) : kind_(kind), dim_(dim), k_(k) {}
  DomainKind kind_;
  int dim_;
  int k_;
};

// 0/1 indicator table, or the indicator divided by its exact density.
FunctionTable indicator(const DomainSpec& spec, bool normalized);

// The algebra generated by supp(x_1)..supp(x_t): 2^t sign-pattern atoms
// whose supports partition [dim]. Sign pattern bit i set means "inside
// supp(x_i)"; the all-clear pattern is the complement atom.
class AtomAlgebra {
 public:
  AtomAlgebra(int dim, std::vector<std::uint64_t> generators);

  int dim() const { return dim_; }
  int generator_count() const { return static_cast<int>(generators_.size()); }
  const std::vector<std::uint64_t>& generators() const { return generators_; }
  std::uint32_t atom_count() const { return std::uint32_t{1} << generators_.size(); }
  std::uint64_t atom_mask(std::uint32_t sign_pattern) const;
  int atom_size(std::uint32_t sign_pattern) const;

  // span element for a generator subset mask (XOR of the chosen generators)
  std::uint64_t span_element(std::uint32_t subset) const;
  bool in_span(std::uint64_t z) const;

 private:
  int dim_;
  std::vector<std::uint64_t> generators_;
  std::vector<std::uint64_t> atom_masks_;
};

// |orb_S| for the group of atom-preserving permutations: the closed form
// prod over atoms B of C(|B|, |S cap B|). Equals 1 exactly when S is a
// union of atoms.
std::uint64_t orbit_size(std::uint64_t subset, const AtomAlgebra& algebra);

// Fact: with b = |x xor z|, c = |x|, d = |z| taken mod 2^j, c + d - b is
// even and (c + d - b)/2 = |x and z| (mod 2^{j-1}). Returns that residue
// after checking it against the directly counted weight.
int weight_intersection_residue(const BitVector& x, const BitVector& z, int j);

// One weight constraint |x xor z| = weight for z in the span.
struct WeightConstraint {
  std::uint64_t z;
  int weight;
};

// Exact Pr_x[ |x xor z| = w_z for every constraint ], by exhaustive count;
// dim <= 20. Constraint vectors must lie in Span(generators).
Dyadic joint_slice_probability(const AtomAlgebra& algebra,
                               const std::vector<WeightConstraint>& constraints);

// Verifies exhaustively (dim <= 16, t <= 3) that the weights |x and x_b| of
// every atom intersection are determined by the tuple (|x xor z|)_{z in Span}.
bool atom_weight_determinism_check(const AtomAlgebra& algebra);

// || 1_U/E[1_U] - 1_D/E[1_D] ||_{U_s} for the slice and residue class of
// (n, k). Requires s <= k; s = 1 is exactly 0 (both means are 1).
GowersEstimate dense_model_distance(int n, int k, int s, EstimateMode mode,
                                    std::uint64_t samples, std::uint64_t seed);

// Rejection samplers over the conditioned sets of the two tests. Points of
// the domain are proposed uniformly (fixed-weight shuffle for the slice);
// the accepted law is uniform on the constrained set.
struct ConditionedSample {
  std::vector<BitVector> points;   // (x, y, z) or (x, h_1..h_d)
  std::uint64_t proposals = 0;     // proposals consumed, acceptance included
};

std::uint64_t random_domain_point(const DomainSpec& spec, RandomStream& rng);

// (x, y, z) uniform in the domain conditioned on x xor y xor z also in it.
ConditionedSample sample_conditioned_quadruple(const DomainSpec& spec, RandomStream& rng);

// (x, h_1..h_d) with x xor (xor of any subset of h) in the domain.
ConditionedSample sample_conditioned_parallelepiped(const DomainSpec& spec, int d,
                                                    RandomStream& rng);

}  // namespace slicelab
