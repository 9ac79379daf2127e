#include "core/selftest.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <vector>

#include "core/bits.hpp"
#include "core/exact.hpp"
#include "core/fourier.hpp"
#include "core/gowers.hpp"
#include "core/nonclassical.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/slicemodel.hpp"
#include "core/table.hpp"
#include "core/testers.hpp"

namespace slicelab {

namespace {

struct Runner {
  std::ostringstream out;
  int checks = 0;
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    ++checks;
    if (ok) {
      out << "ok " << name << "\n";
    } else {
      ++failures;
      out << "FAIL " << name << (detail.empty() ? "" : ": " + detail) << "\n";
    }
  }
};

FunctionTable random_table(int dim, std::uint64_t seed, double lo, double hi) {
  RandomStream stream(seed, 0);
  std::vector<double> v(std::uint64_t{1} << dim);
  for (auto& x : v) x = lo + (hi - lo) * stream.next_unit();
  return FunctionTable(dim, std::move(v));
}

void xor_group_laws(Runner& r) {
  for (int dim = 1; dim <= 4; ++dim) {
    bool ok = true;
    const std::uint64_t n = std::uint64_t{1} << dim;
    for (std::uint64_t a = 0; a < n && ok; ++a)
      for (std::uint64_t b = 0; b < n && ok; ++b) {
        const BitVector u(a, dim), v(b, dim);
        if (xor_of(u, v).bits != xor_of(v, u).bits) ok = false;
        if (xor_of(u, u).bits != 0) ok = false;
        for (std::uint64_t c = 0; c < n && ok; ++c) {
          const BitVector w(c, dim);
          if (xor_of(xor_of(u, v), w).bits != xor_of(u, xor_of(v, w)).bits) ok = false;
        }
      }
    r.check("bitcore.xor_group_dim" + std::to_string(dim), ok);
  }
}

void weight_identity(Runner& r) {
  bool ok = true;
  for (std::uint64_t a = 0; a < 256 && ok; ++a)
    for (std::uint64_t b = 0; b < 256 && ok; ++b) {
      const BitVector u(a, 8), v(b, 8);
      if (weight(xor_of(u, v)) != weight(u) + weight(v) - 2 * weight(and_of(u, v))) ok = false;
    }
  r.check("bitcore.weight_xor_identity_dim8", ok);
}

void fourier_invariants(Runner& r) {
  bool parseval_ok = true, involution_ok = true, linf_ok = true;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const FunctionTable f = random_table(8, 1000 + seed, -1.0, 1.0);
    const FourierSpectrum spec = wht(f);
    KahanSum sq;
    for (double v : f.values()) sq.add(v * v);
    const double rhs = sq.value() / static_cast<double>(f.size());
    if (std::fabs(parseval_total(spec) - rhs) > 1e-12 * std::max(1.0, std::fabs(rhs)))
      parseval_ok = false;
    const FunctionTable back = wht_inverse(spec);
    for (std::uint64_t x = 0; x < f.size(); ++x)
      if (std::fabs(back[x] - f[x]) > 1e-12) involution_ok = false;
    // |fhat(S)| <= E|f| for every S
    KahanSum abs_acc;
    for (double v : f.values()) abs_acc.add(std::fabs(v));
    const double alpha = abs_acc.value() / static_cast<double>(f.size());
    for (double c : spec.coeffs)
      if (std::fabs(c) > alpha + 1e-12) linf_ok = false;
  }
  r.check("fourier.parseval_dim8", parseval_ok);
  r.check("fourier.involution_dim8", involution_ok);
  r.check("fourier.coeff_linf_bound_dim8", linf_ok);

  // characters diagonalize exactly
  bool chi_ok = true;
  for (std::uint32_t s = 0; s < 16; ++s) {
    std::vector<double> v(16);
    for (std::uint64_t x = 0; x < 16; ++x) v[x] = character_eval(s, BitVector(x, 4));
    const FourierSpectrum spec = wht(FunctionTable(4, std::move(v)));
    for (std::uint32_t t = 0; t < 16; ++t)
      if (spec.coeffs[t] != (t == s ? 1.0 : 0.0)) chi_ok = false;
  }
  r.check("fourier.character_spectra_dim4", chi_ok);

  bool level_ok = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const FourierSpectrum spec = wht(random_table(6, 2000 + seed, -1.0, 1.0));
    double prev = 0.0;
    for (int d = 0; d <= 6; ++d) {
      const double w = level_weight(spec, d);
      if (w + 1e-15 < prev) level_ok = false;
      prev = w;
    }
    if (std::fabs(prev - parseval_total(spec)) > 1e-12) level_ok = false;
  }
  r.check("fourier.level_weight_monotone_dim6", level_ok);
}

void gowers_invariants(Runner& r) {
  bool mono_ok = true;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const FunctionTable f = random_table(8, 3000 + seed, -1.0, 1.0);
    const double u1 = gowers_norm_exact(f, 1).value;
    const double u2 = gowers_norm_exact(f, 2).value;
    const double u3 = gowers_norm_exact(f, 3).value;
    if (u1 > u2 + 1e-9 || u2 > u3 + 1e-9) mono_ok = false;
  }
  r.check("gowers.monotone_u1_u2_u3_dim8", mono_ok);

  // U_2 via spectrum vs direct quadruple enumeration
  bool dual_ok = true;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const FunctionTable f = random_table(5, 4000 + seed, -1.0, 1.0);
    const std::uint64_t n = f.size();
    KahanSum acc;
    for (std::uint64_t x = 0; x < n; ++x)
      for (std::uint64_t h1 = 0; h1 < n; ++h1)
        for (std::uint64_t h2 = 0; h2 < n; ++h2)
          acc.add(f[x] * f[x ^ h1] * f[x ^ h2] * f[x ^ h1 ^ h2]);
    const double direct = acc.value() / static_cast<double>(n * n * n);
    const double viaspec = gowers_norm_exact(f, 2).value_pow;
    if (std::fabs(direct - viaspec) > 1e-10 * std::max(1.0, std::fabs(direct)))
      dual_ok = false;
  }
  r.check("gowers.u2_dual_route_dim5", dual_ok);

  // exhaustive +-1 functions at dim 3: U_2 = 1 iff character times sign
  bool iff_ok = true;
  for (std::uint32_t code = 0; code < 256; ++code) {
    std::vector<double> v(8);
    for (int x = 0; x < 8; ++x) v[static_cast<std::size_t>(x)] = (code >> x & 1) ? -1.0 : 1.0;
    const FunctionTable f(3, std::move(v));
    const double u2 = gowers_norm_exact(f, 2).value;
    bool is_char = false;
    for (std::uint32_t s = 0; s < 8 && !is_char; ++s) {
      bool plus = true, minus = true;
      for (std::uint64_t x = 0; x < 8; ++x) {
        const double chi = character_eval(s, BitVector(x, 3));
        plus = plus && f[x] == chi;
        minus = minus && f[x] == -chi;
      }
      is_char = plus || minus;
    }
    if (u2 > 1.0 + 1e-9) iff_ok = false;
    if (is_char != (u2 > 1.0 - 1e-9)) iff_ok = false;
  }
  r.check("gowers.u2_norm_one_iff_character_dim3", iff_ok);

  // +-1 entries keep all products exact, so the symmetry is bitwise
  bool sym_ok = true;
  RandomStream sym_stream(5000, 0);
  std::vector<double> pm(64);
  for (auto& v : pm) v = (sym_stream.next() & 1) ? -1.0 : 1.0;
  const FunctionTable f(6, std::move(pm));
  for (std::uint64_t h1 = 0; h1 < 64 && sym_ok; ++h1)
    for (std::uint64_t h2 = 0; h2 < 64; ++h2) {
      const FunctionTable a = derivative(derivative(f, BitVector(h1, 6)), BitVector(h2, 6));
      const FunctionTable b = derivative(derivative(f, BitVector(h2, 6)), BitVector(h1, 6));
      if (a.values() != b.values()) {
        sym_ok = false;
        break;
      }
    }
  r.check("gowers.derivative_order_symmetry_dim6", sym_ok);
}

void slice_invariants(Runner& r) {
  // Fact: weight residues determine the intersection weight
  bool fact_ok = true;
  for (std::uint64_t x = 0; x < 256 && fact_ok; ++x)
    for (std::uint64_t z = 0; z < 256 && fact_ok; ++z)
      for (int j = 1; j <= 3; ++j) {
        try {
          weight_intersection_residue(BitVector(x, 8), BitVector(z, 8), j);
        } catch (const std::logic_error&) {
          fact_ok = false;
          break;
        }
      }
  r.check("slicemodel.weight_intersection_residue_dim8", fact_ok);

  // orbit closed form vs breadth-first enumeration, dim 6, t <= 2
  bool orbit_ok = true;
  const std::vector<std::vector<std::uint64_t>> generator_sets = {
      {}, {0b000111}, {0b001111, 0b111100}, {0b010101, 0b001100}};
  for (const auto& gens : generator_sets) {
    const AtomAlgebra algebra(6, gens);
    for (std::uint64_t s = 0; s < 64; ++s) {
      // BFS with transpositions inside each atom
      std::set<std::uint64_t> orbit{s};
      std::vector<std::uint64_t> frontier{s};
      while (!frontier.empty()) {
        std::vector<std::uint64_t> next;
        for (std::uint64_t cur : frontier) {
          for (std::uint32_t b = 0; b < algebra.atom_count(); ++b) {
            const std::uint64_t mask = algebra.atom_mask(b);
            for (int i = 0; i < 6; ++i)
              for (int j2 = i + 1; j2 < 6; ++j2) {
                if (!(mask >> i & 1) || !(mask >> j2 & 1)) continue;
                std::uint64_t img = cur;
                const std::uint64_t bi = img >> i & 1, bj = img >> j2 & 1;
                img &= ~((std::uint64_t{1} << i) | (std::uint64_t{1} << j2));
                img |= bi << j2 | bj << i;
                if (orbit.insert(img).second) next.push_back(img);
              }
          }
        }
        frontier = std::move(next);
      }
      if (orbit.size() != orbit_size(s, algebra)) orbit_ok = false;
    }
  }
  r.check("slicemodel.orbit_closed_form_dim6", orbit_ok);

  // residue table = union of slices with t = a mod 2^{k-1}; density in [2^-k, 1]
  bool residue_ok = true;
  for (int dim = 4; dim <= 10; dim += 2)
    for (int k = 1; k <= 4; ++k) {
      const DomainSpec res = DomainSpec::residue(dim, k);
      std::uint64_t count = 0;
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << dim); ++x) {
        const bool in = std::popcount(x) % res.residue_modulus() == res.residue_class();
        if (in != res.member(x)) residue_ok = false;
        count += in;
      }
      if (count != res.member_count()) residue_ok = false;
      const Dyadic density = res.density();
      if (Dyadic::compare(density, Dyadic{1, k}) < 0 ||
          Dyadic::compare(density, Dyadic{1, 0}) > 0)
        residue_ok = false;
      if (!res.member(dim_mask(dim) & ((std::uint64_t{1} << (dim / 2)) - 1))) residue_ok = false;
    }
  r.check("slicemodel.residue_union_and_density", residue_ok);

  // joint probability with no generators reduces to the slice density
  bool joint_ok = true;
  for (int dim = 4; dim <= 8; dim += 2) {
    const AtomAlgebra trivial(dim, {});
    const Dyadic p = joint_slice_probability(trivial, {{0, dim / 2}});
    if (!(p == DomainSpec::slice(dim).density())) joint_ok = false;
  }
  r.check("slicemodel.joint_probability_t0_density", joint_ok);

  bool determinism_ok = true;
  determinism_ok &= atom_weight_determinism_check(AtomAlgebra(8, {0b00001111}));
  determinism_ok &= atom_weight_determinism_check(AtomAlgebra(8, {0b00111101, 0b01010110}));
  determinism_ok &= atom_weight_determinism_check(AtomAlgebra(6, {}));
  r.check("slicemodel.atom_weight_determinism", determinism_ok);
}

void tester_invariants(Runner& r) {
  bool pp_ok = true;
  for (int n = 2; n <= 4; ++n) {
    const auto c1 = parallelepiped_probability_check(n, 1);
    if (!c1.holds || !c1.equality) pp_ok = false;
  }
  if (!parallelepiped_probability_check(2, 2).holds) pp_ok = false;
  r.check("testers.parallelepiped_bound", pp_ok);

  const SliceFunction lin = SliceFunction::linear(8, 0b10110, 0.0, 0);
  const TestOutcome out = linearity_pass_rate(lin, EstimateMode::Exact, 0, 0);
  r.check("testers.linear_function_passes", out.pass_rate == 1.0);

  const LinearDecoding dec = decode_linear(lin);
  r.check("testers.decode_recovers_parity", dec.subset == 0b10110 && dec.agreement == 1.0);

  bool mf_ok = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    try {
      max_fourier_lower_bound_check(random_table(6, 6000 + seed, -1.0, 1.0));
    } catch (const std::logic_error&) {
      mf_ok = false;
    }
  }
  r.check("testers.max_fourier_lower_bound_dim6", mf_ok);
}

void nonclassical_invariants(Runner& r) {
  bool deg_ok = true;
  for (int d = 1; d <= 3; ++d) {
    const TorusPolynomial p = weight_polynomial(3, 1, d, 0);
    if (!verify_degree(p, d)) deg_ok = false;
    if (d >= 1 && verify_degree(p, d - 1)) deg_ok = false;  // degree is exactly d
    if (!verify_degree(p, d + 1)) deg_ok = false;           // and monotone above
  }
  r.check("nonclassical.weight_polynomial_degrees_dim6", deg_ok);

  bool res_ok = true;
  for (int d = 0; d <= 3; ++d)
    if (!residue_decomposition_check(8, d)) res_ok = false;
  r.check("nonclassical.residue_decomposition_dim8", res_ok);

  // bias of j(|x|-n)/2 on the slice is exactly 1 (constant there)
  const TorusPolynomial p = weight_polynomial(4, 1, 1, 4);
  const CorrelationReport bias = polynomial_bias(p, DomainSpec::slice(8));
  r.check("nonclassical.slice_constant_bias", std::fabs(bias.magnitude - 1.0) < 1e-12);
}

}  // namespace

SelftestResult run_selftest() {
  Runner r;
  xor_group_laws(r);
  weight_identity(r);
  fourier_invariants(r);
  gowers_invariants(r);
  slice_invariants(r);
  tester_invariants(r);
  nonclassical_invariants(r);
  r.out << (r.failures == 0 ? "selftest passed, " : "selftest FAILED, ")
        << r.checks << " checks, " << r.failures << " failures\n";
  return SelftestResult{r.checks, r.failures, r.out.str()};
}

}  // namespace slicelab
