#include "slicelab/slicelab.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "core/errors.hpp"
#include "core/fourier.hpp"
#include "core/gowers.hpp"
#include "core/nonclassical.hpp"
#include "core/parallel.hpp"
#include "core/selftest.hpp"
#include "core/slicemodel.hpp"
#include "core/table.hpp"
#include "core/testers.hpp"
#include "core/version.hpp"

using namespace slicelab;

struct sl_table {
  FunctionTable table;
};

struct sl_domain {
  DomainSpec spec;
};

struct sl_torus_poly {
  TorusPolynomial poly;
};

namespace {

thread_local std::string g_last_error = "";

void set_error(const std::string& msg) { g_last_error = msg; }

// translates the core exception vocabulary onto status codes
template <typename Fn>
sl_status guarded(Fn&& fn) {
  try {
    fn();
    return SL_OK;
  } catch (const BudgetError& e) {
    set_error(e.what());
    return SL_ERR_BUDGET;
  } catch (const StallError& e) {
    set_error(e.what());
    return SL_ERR_STALL;
  } catch (const NoWitnessError& e) {
    set_error(e.what());
    return SL_ERR_NO_WITNESS;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return SL_ERR_ARGUMENT;
  } catch (const std::ios_base::failure& e) {
    set_error(e.what());
    return SL_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SL_ERR_INTERNAL;
  }
}

sl_status require(bool ok, const char* msg) {
  if (!ok) {
    set_error(msg);
    return SL_ERR_ARGUMENT;
  }
  return SL_OK;
}

sl_gowers_estimate to_c(const GowersEstimate& e) {
  sl_gowers_estimate out;
  out.order = e.order;
  out.value_pow = e.value_pow;
  out.value = e.value;
  out.mode = e.mode == EstimateMode::Exact ? SL_MODE_EXACT : SL_MODE_MONTE_CARLO;
  out.samples = e.samples;
  out.seed = e.seed;
  out.ci_radius = e.ci_radius;
  out.clipped = e.clipped ? 1 : 0;
  return out;
}

sl_test_outcome to_c(const TestOutcome& t) {
  sl_test_outcome out;
  out.pass_rate = t.pass_rate;
  out.mode = t.mode == EstimateMode::Exact ? SL_MODE_EXACT : SL_MODE_MONTE_CARLO;
  out.trials = t.trials;
  out.seed = t.seed;
  out.ci_radius = t.ci_radius;
  return out;
}

EstimateMode from_c(sl_mode mode) {
  return mode == SL_MODE_EXACT ? EstimateMode::Exact : EstimateMode::MonteCarlo;
}

}  // namespace

extern "C" {

const char* sl_version(void) { return kVersion; }

const char* sl_status_name(sl_status status) {
  switch (status) {
    case SL_OK: return "ok";
    case SL_ERR_ARGUMENT: return "argument";
    case SL_ERR_BUDGET: return "budget";
    case SL_ERR_IO: return "io";
    case SL_ERR_STALL: return "stall";
    case SL_ERR_NO_WITNESS: return "no-witness";
    case SL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* sl_last_error(void) { return g_last_error.c_str(); }

void sl_set_threads(int n) { set_max_threads(n); }

/* tables ----------------------------------------------------------- */

sl_status sl_table_create(int dim, const double* values, sl_table** out) {
  if (sl_status s = require(out != nullptr, "out is NULL")) return s;
  return guarded([&] {
    if (dim < 0 || dim > kMaxTableDim)
      throw std::invalid_argument("sl_table_create: dim must be in [0, 32]");
    const std::uint64_t n = std::uint64_t{1} << dim;
    std::vector<double> v =
        values ? std::vector<double>(values, values + n) : std::vector<double>(n, 0.0);
    *out = new sl_table{FunctionTable(dim, std::move(v))};
  });
}

sl_status sl_table_read_file(const char* path, sl_table** out) {
  if (sl_status s = require(out != nullptr && path != nullptr, "NULL argument")) return s;
  return guarded([&] {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure(std::string("cannot open '") + path + "'");
    *out = new sl_table{read_table(in)};
  });
}

sl_status sl_table_write_file(const sl_table* t, const char* path) {
  if (sl_status s = require(t != nullptr && path != nullptr, "NULL argument")) return s;
  return guarded([&] {
    std::ofstream outf(path);
    if (!outf) throw std::ios_base::failure(std::string("cannot open '") + path + "'");
    write_table(outf, t->table);
  });
}

void sl_table_free(sl_table* t) { delete t; }

int sl_table_dim(const sl_table* t) { return t ? t->table.dim() : -1; }

const double* sl_table_values(const sl_table* t) {
  return t ? t->table.values().data() : nullptr;
}

sl_status sl_table_synthetic_linear(int dim, uint32_t subset, double flip_rate, uint64_t seed,
                                    sl_table** out) {
  if (sl_status s = require(out != nullptr, "out is NULL")) return s;
  return guarded([&] {
    *out = new sl_table{SliceFunction::linear(dim, subset, flip_rate, seed).to_table()};
  });
}

sl_status sl_table_random_boolean(int dim, uint64_t seed, sl_table** out) {
  if (sl_status s = require(out != nullptr, "out is NULL")) return s;
  return guarded([&] { *out = new sl_table{SliceFunction::random(dim, seed).to_table()}; });
}

/* domains ---------------------------------------------------------- */

sl_status sl_domain_create(sl_domain_kind kind, int dim, int k, sl_domain** out) {
  if (sl_status s = require(out != nullptr, "out is NULL")) return s;
  return guarded([&] {
    switch (kind) {
      case SL_DOMAIN_CUBE:
        *out = new sl_domain{DomainSpec::cube(dim)};
        return;
      case SL_DOMAIN_SLICE:
        *out = new sl_domain{DomainSpec::slice(dim)};
        return;
      case SL_DOMAIN_RESIDUE:
        *out = new sl_domain{DomainSpec::residue(dim, k)};
        return;
    }
    throw std::invalid_argument("sl_domain_create: unknown kind");
  });
}

void sl_domain_free(sl_domain* d) { delete d; }

sl_status sl_domain_member(const sl_domain* d, uint64_t x, int* out) {
  if (sl_status s = require(d != nullptr && out != nullptr, "NULL argument")) return s;
  return guarded([&] { *out = d->spec.member(x) ? 1 : 0; });
}

sl_status sl_domain_density(const sl_domain* d, double* density, char* exact_buf,
                            size_t exact_len) {
  if (sl_status s = require(d != nullptr && density != nullptr, "NULL argument")) return s;
  return guarded([&] {
    const Dyadic dens = d->spec.density();
    *density = dens.to_double();
    if (exact_buf != nullptr && exact_len > 0) {
      const std::string s = dens.to_string();
      std::strncpy(exact_buf, s.c_str(), exact_len - 1);
      exact_buf[exact_len - 1] = '\0';
    }
  });
}

sl_status sl_domain_indicator(const sl_domain* d, int normalized, sl_table** out) {
  if (sl_status s = require(d != nullptr && out != nullptr, "NULL argument")) return s;
  return guarded([&] { *out = new sl_table{indicator(d->spec, normalized != 0)}; });
}

/* fourier ---------------------------------------------------------- */

sl_status sl_character_eval(uint32_t subset, uint64_t x, int dim, int* out) {
  if (sl_status s = require(out != nullptr, "out is NULL")) return s;
  return guarded([&] { *out = character_eval(subset, BitVector(x, dim)); });
}

sl_status sl_wht(const sl_table* f, sl_table** spectrum) {
  if (sl_status s = require(f != nullptr && spectrum != nullptr, "NULL argument")) return s;
  return guarded([&] {
    FourierSpectrum spec = wht(f->table);
    *spectrum = new sl_table{FunctionTable(spec.dim, std::move(spec.coeffs))};
  });
}

sl_status sl_wht_inverse(const sl_table* spectrum, sl_table** f) {
  if (sl_status s = require(spectrum != nullptr && f != nullptr, "NULL argument")) return s;
  return guarded([&] {
    const FourierSpectrum spec{spectrum->table.dim(), spectrum->table.values()};
    *f = new sl_table{wht_inverse(spec)};
  });
}

sl_status sl_level_weight(const sl_table* spectrum, int d, double* out) {
  if (sl_status s = require(spectrum != nullptr && out != nullptr, "NULL argument")) return s;
  return guarded([&] {
    const FourierSpectrum spec{spectrum->table.dim(), spectrum->table.values()};
    *out = level_weight(spec, d);
  });
}

sl_status sl_level_inequality_report(const sl_table* f, int d, sl_level_inequality* out) {
  if (sl_status s = require(f != nullptr && out != nullptr, "NULL argument")) return s;
  return guarded([&] {
    const LevelInequalityReport r = level_inequality_report(f->table, d);
    out->alpha = r.alpha;
    out->weight = r.weight;
    out->ratio = r.ratio;
  });
}

sl_status sl_spectrum_top(const sl_table* spectrum, int k, uint32_t* subsets,
                          double* coefficients, int* written) {
  if (sl_status s = require(spectrum != nullptr && subsets != nullptr &&
                                coefficients != nullptr && written != nullptr,
                            "NULL argument"))
    return s;
  return guarded([&] {
    const FourierSpectrum spec{spectrum->table.dim(), spectrum->table.values()};
    const auto top = top_coefficients(spec, k);
    for (std::size_t i = 0; i < top.size(); ++i) {
      subsets[i] = top[i].first;
      coefficients[i] = top[i].second;
    }
    *written = static_cast<int>(top.size());
  });
}

/* gowers ----------------------------------------------------------- */

sl_status sl_derivative(const sl_table* f, uint64_t h, sl_table** out) {
  if (sl_status s = require(f != nullptr && out != nullptr, "NULL argument")) return s;
  return guarded([&] {
    *out = new sl_table{derivative(f->table, BitVector(h, f->table.dim()))};
  });
}

sl_status sl_gowers_exact(const sl_table* f, int s, sl_gowers_estimate* out) {
  if (sl_status st = require(f != nullptr && out != nullptr, "NULL argument")) return st;
  return guarded([&] { *out = to_c(gowers_norm_exact(f->table, s)); });
}

sl_status sl_gowers_mc(const sl_table* f, int s, uint64_t samples, uint64_t seed,
                       sl_gowers_estimate* out) {
  if (sl_status st = require(f != nullptr && out != nullptr, "NULL argument")) return st;
  return guarded([&] { *out = to_c(gowers_norm_mc(f->table, s, samples, seed)); });
}

/* slice model ------------------------------------------------------ */

sl_status sl_dense_model_distance(int n, int k, int s, sl_mode mode, uint64_t samples,
                                  uint64_t seed, sl_gowers_estimate* out) {
  if (sl_status st = require(out != nullptr, "out is NULL")) return st;
  return guarded([&] {
    *out = to_c(dense_model_distance(n, k, s, from_c(mode), samples, seed));
  });
}

sl_status sl_weight_intersection_residue(uint64_t x, uint64_t z, int dim, int j, int* out) {
  if (sl_status s = require(out != nullptr, "out is NULL")) return s;
  return guarded([&] {
    *out = weight_intersection_residue(BitVector(x, dim), BitVector(z, dim), j);
  });
}

sl_status sl_orbit_size(uint64_t subset, int dim, const uint64_t* generators, int t,
                        uint64_t* out) {
  if (sl_status s = require(out != nullptr && (t == 0 || generators != nullptr),
                            "NULL generators"))
    return s;
  return guarded([&] {
    const AtomAlgebra algebra(dim, std::vector<std::uint64_t>(generators, generators + t));
    *out = orbit_size(subset, algebra);
  });
}

sl_status sl_joint_slice_probability(int dim, const uint64_t* generators, int t,
                                     const uint64_t* zs, const int* weights, int constraints,
                                     uint64_t* count, int* log2_den) {
  if (sl_status s =
          require(count != nullptr && log2_den != nullptr && (t == 0 || generators != nullptr) &&
                      (constraints == 0 || (zs != nullptr && weights != nullptr)),
                  "NULL argument"))
    return s;
  return guarded([&] {
    const AtomAlgebra algebra(dim, std::vector<std::uint64_t>(generators, generators + t));
    std::vector<WeightConstraint> cs(static_cast<std::size_t>(constraints));
    for (int i = 0; i < constraints; ++i) cs[static_cast<std::size_t>(i)] = {zs[i], weights[i]};
    const Dyadic p = joint_slice_probability(algebra, cs);
    *count = static_cast<uint64_t>(p.num);
    *log2_den = p.log2_den;
  });
}

sl_status sl_atom_determinism_check(int dim, const uint64_t* generators, int t, int* out) {
  if (sl_status s = require(out != nullptr && (t == 0 || generators != nullptr),
                            "NULL generators"))
    return s;
  return guarded([&] {
    const AtomAlgebra algebra(dim, std::vector<std::uint64_t>(generators, generators + t));
    *out = atom_weight_determinism_check(algebra) ? 1 : 0;
  });
}

/* testers ---------------------------------------------------------- */

sl_status sl_linearity_pass_rate(const sl_table* f, sl_mode mode, uint64_t trials,
                                 uint64_t seed, sl_test_outcome* out) {
  if (sl_status st = require(f != nullptr && out != nullptr, "NULL argument")) return st;
  return guarded([&] {
    *out = to_c(linearity_pass_rate(SliceFunction(f->table), from_c(mode), trials, seed));
  });
}

sl_status sl_gowers_test_pass_rate(const sl_table* f, int d, sl_mode mode, uint64_t trials,
                                   uint64_t seed, sl_test_outcome* out) {
  if (sl_status st = require(f != nullptr && out != nullptr, "NULL argument")) return st;
  return guarded([&] {
    *out = to_c(gowers_test_pass_rate(SliceFunction(f->table), d, from_c(mode), trials, seed));
  });
}

sl_status sl_parallelepiped_probability(int n, int d, double* probability, double* bound,
                                        int* equality) {
  if (sl_status s = require(probability != nullptr && bound != nullptr, "NULL argument"))
    return s;
  return guarded([&] {
    const ParallelepipedCheck c = parallelepiped_probability_check(n, d);
    *probability = c.probability.to_double();
    *bound = c.bound.to_double();
    if (equality != nullptr) *equality = c.equality ? 1 : 0;
  });
}

sl_status sl_decode_linear(const sl_table* f, int k_residue, sl_linear_decoding* out) {
  if (sl_status st = require(f != nullptr && out != nullptr, "NULL argument")) return st;
  return guarded([&] {
    const LinearDecoding d = decode_linear(SliceFunction(f->table), k_residue);
    out->subset = d.subset;
    out->sign_bit = d.sign_bit;
    out->coefficient = d.coefficient;
    out->agreement = d.agreement;
  });
}

sl_status sl_max_fourier_check(const sl_table* F, double* eps, double* max_coeff) {
  if (sl_status s = require(F != nullptr && eps != nullptr && max_coeff != nullptr,
                            "NULL argument"))
    return s;
  return guarded([&] {
    const MaxFourierCheck c = max_fourier_lower_bound_check(F->table);
    *eps = c.eps;
    *max_coeff = c.max_coeff;
  });
}

/* non-classical ---------------------------------------------------- */

sl_status sl_torus_poly_create(int dim, int q, const uint64_t* numerators, sl_torus_poly** out) {
  if (sl_status s = require(out != nullptr && numerators != nullptr, "NULL argument")) return s;
  return guarded([&] {
    if (dim < 0 || dim > kMaxTableDim)
      throw std::invalid_argument("sl_torus_poly_create: dim must be in [0, 32]");
    const std::uint64_t n = std::uint64_t{1} << dim;
    *out = new sl_torus_poly{
        TorusPolynomial(dim, q, std::vector<std::uint64_t>(numerators, numerators + n))};
  });
}

sl_status sl_torus_poly_read_file(const char* path, sl_torus_poly** out) {
  if (sl_status s = require(out != nullptr && path != nullptr, "NULL argument")) return s;
  return guarded([&] {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure(std::string("cannot open '") + path + "'");
    const FunctionTable t = read_table(in);
    // convert: every entry must be a dyadic rational in [0,1) with q <= 40
    int q = 0;
    std::vector<std::uint64_t> num(t.size());
    for (std::uint64_t x = 0; x < t.size(); ++x) {
      const double v = t[x];
      if (v < 0.0 || v >= 1.0)
        throw std::invalid_argument("torus table entries must lie in [0, 1)");
      double scaled = v;
      int e = 0;
      while (scaled != std::floor(scaled)) {
        scaled *= 2.0;
        if (++e > 40)
          throw std::invalid_argument("torus table entry is not dyadic with q <= 40");
      }
      q = std::max(q, e);
    }
    for (std::uint64_t x = 0; x < t.size(); ++x)
      num[x] = static_cast<std::uint64_t>(std::ldexp(t[x], q));
    *out = new sl_torus_poly{TorusPolynomial(t.dim(), q, std::move(num))};
  });
}

void sl_torus_poly_free(sl_torus_poly* p) { delete p; }

int sl_torus_poly_dim(const sl_torus_poly* p) { return p ? p->poly.dim() : -1; }

int sl_torus_poly_q(const sl_torus_poly* p) { return p ? p->poly.q() : -1; }

sl_status sl_torus_poly_numerators(const sl_torus_poly* p, uint64_t* out) {
  if (sl_status s = require(p != nullptr && out != nullptr, "NULL argument")) return s;
  const auto& num = p->poly.numerators();
  std::memcpy(out, num.data(), num.size() * sizeof(uint64_t));
  return SL_OK;
}

sl_status sl_additive_derivative(const sl_torus_poly* p, uint64_t h, sl_torus_poly** out) {
  if (sl_status s = require(p != nullptr && out != nullptr, "NULL argument")) return s;
  return guarded([&] {
    *out = new sl_torus_poly{additive_derivative(p->poly, BitVector(h, p->poly.dim()))};
  });
}

sl_status sl_verify_degree(const sl_torus_poly* p, int d, int* out) {
  if (sl_status s = require(p != nullptr && out != nullptr, "NULL argument")) return s;
  return guarded([&] { *out = verify_degree(p->poly, d) ? 1 : 0; });
}

sl_status sl_verify_degree_full(const sl_torus_poly* p, int d, int* out) {
  if (sl_status s = require(p != nullptr && out != nullptr, "NULL argument")) return s;
  return guarded([&] { *out = verify_degree_full(p->poly, d) ? 1 : 0; });
}

sl_status sl_weight_polynomial(int n, uint32_t j, int d, int a, sl_torus_poly** out) {
  if (sl_status s = require(out != nullptr, "out is NULL")) return s;
  return guarded([&] { *out = new sl_torus_poly{weight_polynomial(n, j, d, a)}; });
}

sl_status sl_residue_decomposition_check(int dim, int d, int* out) {
  if (sl_status s = require(out != nullptr, "out is NULL")) return s;
  return guarded([&] { *out = residue_decomposition_check(dim, d) ? 1 : 0; });
}

sl_status sl_correlation_f_p(const sl_table* f, const sl_torus_poly* p, const sl_domain* domain,
                             sl_correlation* out) {
  if (sl_status s = require(f != nullptr && p != nullptr && domain != nullptr && out != nullptr,
                            "NULL argument"))
    return s;
  return guarded([&] {
    const CorrelationReport r = correlation(f->table, p->poly, domain->spec);
    out->re = r.value.real();
    out->im = r.value.imag();
    out->magnitude = r.magnitude;
  });
}

sl_status sl_polynomial_bias(const sl_torus_poly* P, const sl_domain* domain,
                             sl_correlation* out) {
  if (sl_status s = require(P != nullptr && domain != nullptr && out != nullptr,
                            "NULL argument"))
    return s;
  return guarded([&] {
    const CorrelationReport r = polynomial_bias(P->poly, domain->spec);
    out->re = r.value.real();
    out->im = r.value.imag();
    out->magnitude = r.magnitude;
  });
}

sl_status sl_biased_rank_witness(const sl_torus_poly* P, int n, int d, double delta,
                                 uint32_t* j, double* bias, double* profile) {
  if (sl_status s = require(P != nullptr && j != nullptr && bias != nullptr, "NULL argument"))
    return s;
  try {
    const BiasedRankWitness w = biased_rank_witness(P->poly, n, d, delta);
    *j = w.j;
    *bias = w.bias;
    if (profile != nullptr)
      std::memcpy(profile, w.profile.data(), w.profile.size() * sizeof(double));
    return SL_OK;
  } catch (const NoWitnessError& e) {
    set_error(e.what());
    if (profile != nullptr)
      std::memcpy(profile, e.profile.data(), e.profile.size() * sizeof(double));
    return SL_ERR_NO_WITNESS;
  } catch (const BudgetError& e) {
    set_error(e.what());
    return SL_ERR_BUDGET;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return SL_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SL_ERR_INTERNAL;
  }
}

/* selftest --------------------------------------------------------- */

sl_status sl_selftest(sl_write_fn write, void* user) {
  try {
    const SelftestResult r = run_selftest();
    if (write != nullptr) {
      std::istringstream lines(r.report);
      std::string line;
      while (std::getline(lines, line)) write(line.c_str(), user);
    }
    if (r.failures != 0) {
      set_error("selftest reported " + std::to_string(r.failures) + " failures");
      return SL_ERR_INTERNAL;
    }
    return SL_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SL_ERR_INTERNAL;
  }
}

} /* extern "C" */
