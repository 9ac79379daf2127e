// Acceptance suite: one line per criterion, PASS/FAIL plus timing. Exits
// nonzero if any criterion fails. Criterion 10 invokes the CLI binary; its
// path comes from the SLICELAB_CLI environment variable (set by ctest).

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "core/fourier.hpp"
#include "core/gowers.hpp"
#include "core/nonclassical.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/slicemodel.hpp"
#include "core/table.hpp"
#include "core/testers.hpp"

using namespace slicelab;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, double seconds,
            const std::string& detail = "") {
  std::printf("[%s] criterion %2d %-34s (%6.2fs)%s%s\n", pass ? "PASS" : "FAIL", index, name,
              seconds, detail.empty() ? "" : " ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run(int index, const char* name, const std::function<bool(std::string&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(index, name, pass, seconds, detail);
}

FunctionTable random_table(int dim, std::uint64_t seed) {
  RandomStream stream(seed, 0);
  std::vector<double> v(std::uint64_t{1} << dim);
  for (auto& x : v) x = 2.0 * stream.next_unit() - 1.0;
  return FunctionTable(dim, std::move(v));
}

// ---------------------------------------------------------------- 1
bool fourier_correctness(std::string& detail) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const FunctionTable f = random_table(8, 10000 + seed);
    const FourierSpectrum spec = wht(f);
    KahanSum sq;
    for (double v : f.values()) sq.add(v * v);
    const double rhs = sq.value() / static_cast<double>(f.size());
    if (std::fabs(parseval_total(spec) - rhs) > 1e-12 * std::max(1.0, std::fabs(rhs))) {
      detail = "parseval deviation at seed " + std::to_string(seed);
      return false;
    }
    const FunctionTable back = wht_inverse(spec);
    for (std::uint64_t x = 0; x < f.size(); ++x)
      if (std::fabs(back[x] - f[x]) > 1e-12) {
        detail = "involution deviation at seed " + std::to_string(seed);
        return false;
      }
  }
  for (std::uint32_t s = 0; s < 256; ++s) {
    std::vector<double> v(256);
    for (std::uint64_t x = 0; x < 256; ++x)
      v[x] = character_eval(s, BitVector(x, 8));
    const FourierSpectrum spec = wht(FunctionTable(8, std::move(v)));
    for (std::uint64_t t = 0; t < 256; ++t)
      if (spec.coeffs[t] != (t == s ? 1.0 : 0.0)) {
        detail = "character spectrum not exact";
        return false;
      }
  }
  return true;
}

// ---------------------------------------------------------------- 2
bool gowers_cross_validation(std::string& detail) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const FunctionTable f = random_table(6, 20000 + seed);
    KahanSum acc;
    const std::uint64_t n = f.size();
    for (std::uint64_t x = 0; x < n; ++x)
      for (std::uint64_t h1 = 0; h1 < n; ++h1)
        for (std::uint64_t h2 = 0; h2 < n; ++h2)
          acc.add(f[x] * f[x ^ h1] * f[x ^ h2] * f[x ^ h1 ^ h2]);
    const double direct = acc.value() / static_cast<double>(n * n * n);
    const double viaspec = gowers_norm_exact(f, 2).value_pow;
    if (std::fabs(direct - viaspec) > 1e-10 * std::max(1.0, std::fabs(direct))) {
      detail = "U2 dual route mismatch at seed " + std::to_string(seed);
      return false;
    }
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const FunctionTable f = random_table(8, 30000 + seed);
    const double u1 = gowers_norm_exact(f, 1).value;
    const double u2 = gowers_norm_exact(f, 2).value;
    const double u3 = gowers_norm_exact(f, 3).value;
    if (u1 > u2 + 1e-9 || u2 > u3 + 1e-9) {
      detail = "monotonicity violated at seed " + std::to_string(seed);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- 3
bool dense_model_trend(std::string& detail) {
  std::vector<double> values;
  for (int two_n : {8, 12, 16, 20}) {
    const GowersEstimate e =
        dense_model_distance(two_n / 2, 2, 2, EstimateMode::Exact, 0, 0);
    values.push_back(e.value);
    const GowersEstimate u1 = dense_model_distance(two_n / 2, 2, 1, EstimateMode::Exact, 0, 0);
    if (u1.value != 0.0) {
      detail = "s=1 distance not exactly 0";
      return false;
    }
  }
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] < values[i - 1])) {
      detail = "sweep not strictly decreasing";
      return false;
    }
  if (!(values[3] < (2.0 / 3.0) * values[0])) {
    detail = "2n=20 value not below two thirds of 2n=8";
    return false;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "values %.6f %.6f %.6f %.6f", values[0], values[1],
                values[2], values[3]);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------- 4
bool fact_weight_residues(std::string& detail) {
  for (std::uint64_t x = 0; x < 256; ++x)
    for (std::uint64_t z = 0; z < 256; ++z)
      for (int j = 1; j <= 3; ++j) {
        try {
          weight_intersection_residue(BitVector(x, 8), BitVector(z, 8), j);
        } catch (const std::logic_error&) {
          detail = "violation at x=" + std::to_string(x) + " z=" + std::to_string(z);
          return false;
        }
      }
  return true;
}

// ---------------------------------------------------------------- 5
bool orbit_sizes(std::string& detail) {
  const std::vector<std::pair<int, std::vector<std::uint64_t>>> cases = {
      {4, {}},
      {4, {0b0011}},
      {6, {0b000111}},
      {6, {0b001111, 0b111100}},
      {8, {}},
      {8, {0b00001111}},
      {8, {0b00001111, 0b00110011}},
      {8, {0b01110001, 0b00011111}},
  };
  for (const auto& [dim, gens] : cases) {
    const AtomAlgebra algebra(dim, gens);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << dim); ++s) {
      // breadth-first closure under in-atom transpositions
      std::set<std::uint64_t> orbit{s};
      std::vector<std::uint64_t> frontier{s};
      while (!frontier.empty()) {
        std::vector<std::uint64_t> next;
        for (std::uint64_t cur : frontier)
          for (std::uint32_t b = 0; b < algebra.atom_count(); ++b) {
            const std::uint64_t mask = algebra.atom_mask(b);
            for (int i = 0; i < dim; ++i)
              for (int j = i + 1; j < dim; ++j) {
                if (!(mask >> i & 1) || !(mask >> j & 1)) continue;
                std::uint64_t img = cur;
                const std::uint64_t bi = img >> i & 1, bj = img >> j & 1;
                img &= ~((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
                img |= bi << j | bj << i;
                if (orbit.insert(img).second) next.push_back(img);
              }
          }
        frontier = std::move(next);
      }
      if (orbit.size() != orbit_size(s, algebra)) {
        detail = "closed form != enumeration at dim " + std::to_string(dim);
        return false;
      }
      // size 1 exactly for unions of atoms
      bool is_union = true;
      for (std::uint32_t b = 0; b < algebra.atom_count(); ++b) {
        const std::uint64_t overlap = s & algebra.atom_mask(b);
        if (overlap != 0 && overlap != algebra.atom_mask(b)) is_union = false;
      }
      if ((orbit_size(s, algebra) == 1) != is_union) {
        detail = "orbit size 1 does not characterize the algebra";
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------- 6
bool parallelepiped_bound(std::string& detail) {
  for (int n : {2, 3, 4})
    for (int d : {1, 2}) {
      const ParallelepipedCheck c = parallelepiped_probability_check(n, d);
      if (!c.holds) {
        detail = "bound violated at n=" + std::to_string(n) + " d=" + std::to_string(d);
        return false;
      }
      if (d == 1 && !c.equality) {
        detail = "no equality at d=1, n=" + std::to_string(n);
        return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------- 7
bool linearity_end_to_end(std::string& detail) {
  const std::uint32_t planted = 0b1011;  // no top coordinate: canonical under complementation
  double min_margin = 1.0;
  for (double eta : {0.0, 0.05, 0.1, 0.2})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SliceFunction f = SliceFunction::linear(12, planted, eta, 100 + seed);
      const TestOutcome out = linearity_pass_rate(f, EstimateMode::Exact, 0, 0);
      if (out.pass_rate < 0.5) continue;  // premise of the theorem not met
      const double eps = out.pass_rate - 0.5;
      const LinearDecoding dec = decode_linear(f);
      const double bar = 0.5 + std::sqrt(eps) / 200.0;
      if (dec.agreement < bar) {
        detail = "agreement below the sqrt(eps)/200 bar at eta " + std::to_string(eta);
        return false;
      }
      min_margin = std::min(min_margin, dec.agreement - bar);
      if (eta <= 0.1 && dec.subset != planted) {
        detail = "decoded subset differs from the planted one at eta " + std::to_string(eta);
        return false;
      }
    }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "min margin over the bar %.4f", min_margin);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------- 8
bool nonclassical_degrees(std::string& detail) {
  for (int n : {3, 4})
    for (int d = 1; d <= 3; ++d)
      for (std::uint32_t j = 1; j < (1u << d); j += 2) {
        const TorusPolynomial p = weight_polynomial(n, j, d, 0);
        if (!verify_degree(p, d) || verify_degree(p, d - 1)) {
          detail = "degree of j|x|/2^d wrong at j=" + std::to_string(j) +
                   " d=" + std::to_string(d);
          return false;
        }
      }
  for (int d = 0; d <= 3; ++d)
    for (int dim : {8, 12})
      if (!residue_decomposition_check(dim, d)) {
        detail = "residue decomposition failed at dim " + std::to_string(dim);
        return false;
      }
  return true;
}

// ---------------------------------------------------------------- 9
bool mc_consistency(std::string& detail) {
  const FunctionTable diff = pointwise_difference(indicator(DomainSpec::slice(12), true),
                                                  indicator(DomainSpec::residue(12, 3), true));
  const GowersEstimate exact = gowers_norm_exact(diff, 3);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GowersEstimate mc = gowers_norm_mc(diff, 3, 4096, seed);
    if (mc.ci_radius <= 0.0) {
      detail = "degenerate confidence radius";
      return false;
    }
    const double pulls = std::fabs(mc.value_pow - exact.value_pow) / mc.ci_radius;
    worst = std::max(worst, pulls);
    if (pulls > 3.0) {
      detail = "MC estimate " + std::to_string(mc.value_pow) + " vs exact " +
               std::to_string(exact.value_pow) + " at seed " + std::to_string(seed);
      return false;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "worst deviation %.2f ci", worst);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------- 10
std::string run_cli(const std::string& cli, const std::string& args, int* exit_code) {
  const std::string cmd = cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    *exit_code = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

bool determinism(std::string& detail) {
  const char* cli_env = std::getenv("SLICELAB_CLI");
  if (cli_env == nullptr || *cli_env == '\0') {
    detail = "SLICELAB_CLI not set";
    return false;
  }
  const std::string cli = cli_env;

  int code = 0;
  const std::string self1 = run_cli(cli, "selftest --threads 1", &code);
  if (code != 0) {
    detail = "selftest exited " + std::to_string(code);
    return false;
  }
  const std::string self2 = run_cli(cli, "selftest --threads 4", &code);
  if (code != 0 || self1 != self2 || self1.empty()) {
    detail = "selftest output differs across runs/threads";
    return false;
  }

  const std::string sweep_args = "dense-model --sweep 8,12 --k 2 --order 2 --threads ";
  const std::string sweep1 = run_cli(cli, sweep_args + "1", &code);
  if (code != 0) {
    detail = "dense-model exited " + std::to_string(code);
    return false;
  }
  const std::string sweep4 = run_cli(cli, sweep_args + "4", &code);
  const std::string sweep4b = run_cli(cli, sweep_args + "4", &code);
  if (sweep1 != sweep4 || sweep4 != sweep4b || sweep1.empty()) {
    detail = "dense-model output differs across runs/threads";
    return false;
  }

  const std::string mc_args =
      "dense-model --n 12 --k 3 --order 3 --mode mc --samples 2000 --seed 7 --threads ";
  const std::string mc1 = run_cli(cli, mc_args + "1", &code);
  if (code != 0) {
    detail = "dense-model mc exited " + std::to_string(code);
    return false;
  }
  const std::string mc4 = run_cli(cli, mc_args + "4", &code);
  if (mc1 != mc4 || mc1.empty()) {
    detail = "Monte Carlo output differs across thread counts";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  std::printf("slicelab acceptance suite\n");
  run(1, "fourier correctness", fourier_correctness);
  run(2, "gowers cross-validation", gowers_cross_validation);
  run(3, "dense-model distance trend", dense_model_trend);
  run(4, "weight-residue identity", fact_weight_residues);
  run(5, "orbit sizes", orbit_sizes);
  run(6, "parallelepiped probability", parallelepiped_bound);
  run(7, "linearity tester end-to-end", linearity_end_to_end);
  run(8, "non-classical degrees", nonclassical_degrees);
  run(9, "monte carlo consistency", mc_consistency);
  run(10, "determinism", determinism);
  if (g_failures != 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
