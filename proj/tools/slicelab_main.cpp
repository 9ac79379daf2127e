// slicelab command-line interface. Everything computational goes through the
// shared-library C API; this file owns argument parsing, seeds, and report
// emission. Reports are deterministic: identical configurations produce
// byte-identical files, independent of --threads.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slicelab/slicelab.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssertion = 2;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError{code, message};
}

[[noreturn]] void fail_status(sl_status status) {
  const int code = status == SL_ERR_NO_WITNESS ? kExitAssertion : kExitUsage;
  fail(code, std::string(sl_status_name(status)) + ": " + sl_last_error());
}

void check(sl_status status) {
  if (status != SL_OK) fail_status(status);
}

struct TableHandle {
  sl_table* t = nullptr;
  TableHandle() = default;
  TableHandle(TableHandle&& other) noexcept : t(other.t) { other.t = nullptr; }
  TableHandle& operator=(TableHandle&& other) noexcept {
    std::swap(t, other.t);
    return *this;
  }
  TableHandle(const TableHandle&) = delete;
  ~TableHandle() { sl_table_free(t); }
};

struct PolyHandle {
  sl_torus_poly* p = nullptr;
  ~PolyHandle() { sl_torus_poly_free(p); }
};

struct DomainHandle {
  sl_domain* d = nullptr;
  ~DomainHandle() { sl_domain_free(d); }
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GSL_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      fail(kExitUsage, "GSL_SEED is not a valid unsigned integer");
    }
  }
  return 0;
}

std::string hex_subset(std::uint32_t subset) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "0x%" PRIx32, subset);
  return buf;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << json(v);  // shortest round-trip, locale-independent
  return os.str();
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) fail(kExitUsage, "cannot open output file '" + output_path + "'");
  out << text;
}

std::string json_report(const json& config, const json& result) {
  json root;
  root["version"] = sl_version();
  root["config"] = config;
  root["result"] = result;
  return root.dump(2) + "\n";
}

std::string csv_header(const json& config) {
  return std::string("# ") + sl_version() + "\n# config " + config.dump() + "\n";
}

json estimate_json(const sl_gowers_estimate& e) {
  json j;
  j["order"] = e.order;
  j["value_pow"] = e.value_pow;
  j["value"] = e.value;
  j["mode"] = e.mode == SL_MODE_EXACT ? "exact" : "monte-carlo";
  j["samples"] = e.samples;
  j["seed"] = e.seed;
  j["ci_radius"] = e.ci_radius;
  j["clipped"] = e.clipped != 0;
  return j;
}

json outcome_json(const sl_test_outcome& o) {
  json j;
  j["pass_rate"] = o.pass_rate;
  j["mode"] = o.mode == SL_MODE_EXACT ? "exact" : "monte-carlo";
  j["trials"] = o.trials;
  j["seed"] = o.seed;
  j["ci_radius"] = o.ci_radius;
  return j;
}

enum class ModeChoice { Auto, Exact, MonteCarlo };

ModeChoice parse_mode(const std::string& mode) {
  if (mode == "auto") return ModeChoice::Auto;
  if (mode == "exact") return ModeChoice::Exact;
  if (mode == "mc") return ModeChoice::MonteCarlo;
  fail(kExitUsage, "mode must be auto, exact or mc");
}

// synthetic instance spec: linear:S=0x5,flip=0.1
TableHandle make_synthetic(const std::string& spec, int dim, std::uint64_t seed) {
  if (spec.rfind("linear:", 0) != 0)
    fail(kExitUsage, "synthetic spec must look like linear:S=0x5,flip=0.1");
  std::uint32_t subset = 0;
  double flip = 0.0;
  bool have_subset = false;
  std::stringstream body(spec.substr(7));
  std::string item;
  while (std::getline(body, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      fail(kExitUsage, "synthetic: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "S") {
        subset = static_cast<std::uint32_t>(std::stoul(value, nullptr, 0));
        have_subset = true;
      } else if (key == "flip") {
        flip = std::stod(value);
      } else {
        fail(kExitUsage, "synthetic: unknown key '" + key + "'");
      }
    } catch (const CliError&) {
      throw;
    } catch (...) {
      fail(kExitUsage, "synthetic: bad value for '" + key + "'");
    }
  }
  if (!have_subset) fail(kExitUsage, "synthetic: missing S=<mask>");
  TableHandle table;
  check(sl_table_synthetic_linear(dim, subset, flip, seed, &table.t));
  return table;
}

TableHandle load_tester_input(const std::string& input, const std::string& synthetic, int* dim,
                              std::uint64_t seed) {
  if (input.empty() == synthetic.empty())
    fail(kExitUsage, "exactly one of --input and --synthetic is required");
  if (!input.empty()) {
    TableHandle table;
    check(sl_table_read_file(input.c_str(), &table.t));
    const int table_dim = sl_table_dim(table.t);
    if (*dim != 0 && *dim != table_dim)
      fail(kExitUsage, "--n disagrees with the table dimension");
    *dim = table_dim;
    return table;
  }
  if (*dim == 0) fail(kExitUsage, "--n is required with --synthetic");
  return make_synthetic(synthetic, *dim, seed);
}

/* ------------------------------------------------------------------ */

int run_fourier(const std::string& input, int level_weight_d, int top,
                const std::string& format, const std::string& output) {
  TableHandle table;
  check(sl_table_read_file(input.c_str(), &table.t));
  TableHandle spectrum;
  check(sl_wht(table.t, &spectrum.t));
  const int dim = sl_table_dim(spectrum.t);
  const std::int64_t total = std::int64_t{1} << dim;

  json config;
  config["subcommand"] = "fourier";
  config["input"] = input;
  if (top >= 0) config["top"] = top;
  if (level_weight_d >= 0) config["level_weight"] = level_weight_d;

  std::vector<std::uint32_t> subsets;
  std::vector<double> coefficients;
  if (top >= 0) {
    subsets.resize(static_cast<std::size_t>(std::min<std::int64_t>(top, total)));
    coefficients.resize(subsets.size());
    int written = 0;
    check(sl_spectrum_top(spectrum.t, top, subsets.data(), coefficients.data(), &written));
    subsets.resize(static_cast<std::size_t>(written));
    coefficients.resize(static_cast<std::size_t>(written));
  } else {
    const double* values = sl_table_values(spectrum.t);
    subsets.resize(static_cast<std::size_t>(total));
    coefficients.assign(values, values + total);
    for (std::int64_t s = 0; s < total; ++s)
      subsets[static_cast<std::size_t>(s)] = static_cast<std::uint32_t>(s);
  }

  double level_weight_value = 0.0;
  if (level_weight_d >= 0)
    check(sl_level_weight(spectrum.t, level_weight_d, &level_weight_value));

  if (format == "json") {
    json result;
    if (level_weight_d >= 0) {
      result["level_weight"]["d"] = level_weight_d;
      result["level_weight"]["value"] = level_weight_value;
    }
    json rows = json::array();
    for (std::size_t i = 0; i < subsets.size(); ++i)
      rows.push_back({{"subset", hex_subset(subsets[i])}, {"coefficient", coefficients[i]}});
    result["coefficients"] = std::move(rows);
    emit(json_report(config, result), output);
  } else {
    std::ostringstream os;
    os << csv_header(config);
    if (level_weight_d >= 0)
      os << "# level_weight d=" << level_weight_d << " value="
         << format_double(level_weight_value) << "\n";
    os << "subset,coefficient\n";
    for (std::size_t i = 0; i < subsets.size(); ++i)
      os << hex_subset(subsets[i]) << "," << format_double(coefficients[i]) << "\n";
    emit(os.str(), output);
  }
  return kExitOk;
}

int run_gowers(const std::string& input, int order, const std::string& mode_str,
               std::uint64_t samples, std::uint64_t seed, const std::string& output) {
  TableHandle table;
  check(sl_table_read_file(input.c_str(), &table.t));
  const int dim = sl_table_dim(table.t);

  ModeChoice mode = parse_mode(mode_str);
  if (mode == ModeChoice::Auto)
    mode = (order <= 2 && dim <= 24) || (order >= 3 && dim * (order - 2) <= 28)
               ? ModeChoice::Exact
               : ModeChoice::MonteCarlo;

  sl_gowers_estimate estimate;
  if (mode == ModeChoice::Exact)
    check(sl_gowers_exact(table.t, order, &estimate));
  else
    check(sl_gowers_mc(table.t, order, samples, seed, &estimate));

  json config;
  config["subcommand"] = "gowers";
  config["input"] = input;
  config["order"] = order;
  config["mode"] = mode == ModeChoice::Exact ? "exact" : "mc";
  if (mode == ModeChoice::MonteCarlo) {
    config["samples"] = samples;
    config["seed"] = seed;
  }
  emit(json_report(config, estimate_json(estimate)), output);
  return kExitOk;
}

int run_dense_model(const std::vector<int>& two_ns, int k, int order,
                    const std::string& mode_str, std::uint64_t samples, std::uint64_t seed,
                    const std::string& format, const std::string& output) {
  json config;
  config["subcommand"] = "dense-model";
  config["sweep"] = two_ns;
  config["k"] = k;
  config["order"] = order;
  config["mode"] = mode_str;
  config["samples"] = samples;
  config["seed"] = seed;

  std::vector<sl_gowers_estimate> estimates;
  for (int two_n : two_ns) {
    if (two_n < 2 || two_n % 2 != 0)
      fail(kExitUsage, "dense-model: dimensions must be positive even integers (2n)");
    ModeChoice mode = parse_mode(mode_str);
    if (mode == ModeChoice::Auto)
      mode = (order <= 2 && two_n <= 24) || (order >= 3 && two_n * (order - 2) <= 28)
                 ? ModeChoice::Exact
                 : ModeChoice::MonteCarlo;
    sl_gowers_estimate e;
    check(sl_dense_model_distance(
        two_n / 2, k, order, mode == ModeChoice::Exact ? SL_MODE_EXACT : SL_MODE_MONTE_CARLO,
        samples, seed, &e));
    estimates.push_back(e);
  }

  if (format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      json row = estimate_json(estimates[i]);
      row["2n"] = two_ns[i];
      row["k"] = k;
      rows.push_back(std::move(row));
    }
    emit(json_report(config, rows), output);
  } else {
    std::ostringstream os;
    os << csv_header(config);
    os << "2n,k,s,value,mode,samples,seed\n";
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      const auto& e = estimates[i];
      os << two_ns[i] << "," << k << "," << e.order << "," << format_double(e.value) << ","
         << (e.mode == SL_MODE_EXACT ? "exact" : "monte-carlo") << "," << e.samples << ","
         << e.seed << "\n";
    }
    emit(os.str(), output);
  }
  return kExitOk;
}

int run_test_linearity(const std::string& input, const std::string& synthetic, int dim,
                       const std::string& mode_str, std::uint64_t trials, std::uint64_t seed,
                       const std::string& output) {
  TableHandle table = load_tester_input(input, synthetic, &dim, seed);

  ModeChoice mode = parse_mode(mode_str);
  if (mode == ModeChoice::Auto) mode = dim <= 12 ? ModeChoice::Exact : ModeChoice::MonteCarlo;

  sl_test_outcome outcome;
  check(sl_linearity_pass_rate(
      table.t, mode == ModeChoice::Exact ? SL_MODE_EXACT : SL_MODE_MONTE_CARLO, trials, seed,
      &outcome));
  sl_linear_decoding decoding;
  check(sl_decode_linear(table.t, 4, &decoding));

  json config;
  config["subcommand"] = "test-linearity";
  config["n"] = dim;
  if (!input.empty()) config["input"] = input;
  if (!synthetic.empty()) config["synthetic"] = synthetic;
  config["mode"] = mode == ModeChoice::Exact ? "exact" : "mc";
  if (mode == ModeChoice::MonteCarlo) config["trials"] = trials;
  config["seed"] = seed;

  json result;
  result["outcome"] = outcome_json(outcome);
  result["decoding"] = {{"subset", hex_subset(decoding.subset)},
                        {"sign_bit", decoding.sign_bit},
                        {"coefficient", decoding.coefficient},
                        {"agreement", decoding.agreement}};
  emit(json_report(config, result), output);
  return kExitOk;
}

int run_test_gowers(const std::string& input, const std::string& synthetic, int dim, int d,
                    const std::string& mode_str, std::uint64_t trials, std::uint64_t seed,
                    const std::string& output) {
  TableHandle table = load_tester_input(input, synthetic, &dim, seed);

  ModeChoice mode = parse_mode(mode_str);
  if (mode == ModeChoice::Auto)
    mode = dim * (d + 1) <= 26 ? ModeChoice::Exact : ModeChoice::MonteCarlo;

  sl_test_outcome outcome;
  check(sl_gowers_test_pass_rate(
      table.t, d, mode == ModeChoice::Exact ? SL_MODE_EXACT : SL_MODE_MONTE_CARLO, trials,
      seed, &outcome));

  json config;
  config["subcommand"] = "test-gowers";
  config["n"] = dim;
  config["d"] = d;
  if (!input.empty()) config["input"] = input;
  if (!synthetic.empty()) config["synthetic"] = synthetic;
  config["mode"] = mode == ModeChoice::Exact ? "exact" : "mc";
  if (mode == ModeChoice::MonteCarlo) config["trials"] = trials;
  config["seed"] = seed;

  emit(json_report(config, outcome_json(outcome)), output);
  return kExitOk;
}

int run_nonclassical(const std::string& weight_poly_spec, int n, int verify_d,
                     const std::vector<std::string>& correlate, const std::string& domain_spec,
                     const std::string& biased_rank_spec, const std::string& input,
                     const std::string& save_poly, const std::string& output) {
  json config;
  config["subcommand"] = "nonclassical";

  const int ops = (!weight_poly_spec.empty() ? 1 : 0) + (verify_d >= 0 ? 1 : 0) +
                  (!correlate.empty() ? 1 : 0) + (!biased_rank_spec.empty() ? 1 : 0);
  if (ops != 1)
    fail(kExitUsage,
         "nonclassical: choose exactly one of --weight-poly, --verify-degree, --correlate, "
         "--biased-rank");

  if (!weight_poly_spec.empty()) {
    unsigned j = 0;
    int d = 0, a = 0;
    if (std::sscanf(weight_poly_spec.c_str(), "%u,%d,%d", &j, &d, &a) != 3)
      fail(kExitUsage, "--weight-poly expects j,d,a");
    if (n <= 0) fail(kExitUsage, "--weight-poly requires --n <2n>");
    if (n % 2 != 0) fail(kExitUsage, "--n must be even (the ambient dimension 2n)");
    config["n"] = n;
    config["weight_poly"] = weight_poly_spec;
    PolyHandle poly;
    check(sl_weight_polynomial(n / 2, j, d, a, &poly.p));
    int deg = 0;
    while (deg <= d) {
      int ok = 0;
      check(sl_verify_degree(poly.p, deg, &ok));
      if (ok) break;
      ++deg;
    }
    if (!save_poly.empty()) {
      // write as a dense table of dyadic values
      const int dim = sl_torus_poly_dim(poly.p);
      const int q = sl_torus_poly_q(poly.p);
      std::vector<std::uint64_t> nums(std::size_t{1} << dim);
      check(sl_torus_poly_numerators(poly.p, nums.data()));
      std::vector<double> values(nums.size());
      for (std::size_t i = 0; i < nums.size(); ++i)
        values[i] = std::ldexp(static_cast<double>(nums[i]), -q);
      TableHandle t;
      check(sl_table_create(dim, values.data(), &t.t));
      check(sl_table_write_file(t.t, save_poly.c_str()));
    }
    json result;
    result["j"] = j;
    result["d"] = d;
    result["a"] = a;
    result["q"] = sl_torus_poly_q(poly.p);
    result["degree"] = deg;
    if (!save_poly.empty()) result["saved"] = save_poly;
    emit(json_report(config, result), output);
    return kExitOk;
  }

  if (verify_d >= 0) {
    if (input.empty()) fail(kExitUsage, "--verify-degree requires --input <poly table>");
    config["input"] = input;
    config["verify_degree"] = verify_d;
    PolyHandle poly;
    check(sl_torus_poly_read_file(input.c_str(), &poly.p));
    int ok = 0;
    check(sl_verify_degree(poly.p, verify_d, &ok));
    json result;
    result["degree_at_most"] = verify_d;
    result["holds"] = ok != 0;
    emit(json_report(config, result), output);
    return kExitOk;
  }

  if (!correlate.empty()) {
    if (correlate.size() != 2)
      fail(kExitUsage, "--correlate expects two paths: <f table> <p table>");
    config["correlate"] = correlate;
    config["domain"] = domain_spec;
    TableHandle f;
    check(sl_table_read_file(correlate[0].c_str(), &f.t));
    PolyHandle p;
    check(sl_torus_poly_read_file(correlate[1].c_str(), &p.p));
    DomainHandle domain;
    const int dim = sl_table_dim(f.t);
    if (domain_spec == "cube")
      check(sl_domain_create(SL_DOMAIN_CUBE, dim, 0, &domain.d));
    else if (domain_spec == "slice")
      check(sl_domain_create(SL_DOMAIN_SLICE, dim, 0, &domain.d));
    else if (domain_spec.rfind("residue:", 0) == 0)
      check(sl_domain_create(SL_DOMAIN_RESIDUE, dim, std::stoi(domain_spec.substr(8)),
                             &domain.d));
    else
      fail(kExitUsage, "--domain must be cube, slice or residue:<k>");
    sl_correlation corr;
    check(sl_correlation_f_p(f.t, p.p, domain.d, &corr));
    json result;
    result["re"] = corr.re;
    result["im"] = corr.im;
    result["magnitude"] = corr.magnitude;
    emit(json_report(config, result), output);
    return kExitOk;
  }

  // --biased-rank d,delta
  int d = 0;
  double delta = 0.0;
  if (std::sscanf(biased_rank_spec.c_str(), "%d,%lf", &d, &delta) != 2)
    fail(kExitUsage, "--biased-rank expects d,delta");
  if (input.empty()) fail(kExitUsage, "--biased-rank requires --input <poly table>");
  if (d < 0 || d > 20) fail(kExitUsage, "--biased-rank: d out of range");
  config["input"] = input;
  config["biased_rank"] = biased_rank_spec;
  PolyHandle poly;
  check(sl_torus_poly_read_file(input.c_str(), &poly.p));
  const int dim = sl_torus_poly_dim(poly.p);
  if (dim % 2 != 0) fail(kExitUsage, "--biased-rank needs an even-dimensional polynomial");
  std::uint32_t j = 0;
  double bias = 0.0;
  std::vector<double> profile(std::size_t{1} << d, 0.0);
  const sl_status status =
      sl_biased_rank_witness(poly.p, dim / 2, d, delta, &j, &bias, profile.data());
  json result;
  result["d"] = d;
  result["delta"] = delta;
  json profile_json = json::array();
  for (double b : profile) profile_json.push_back(b);
  if (status == SL_OK) {
    result["witness_j"] = j;
    result["bias"] = bias;
    result["profile"] = std::move(profile_json);
    emit(json_report(config, result), output);
    return kExitOk;
  }
  if (status == SL_ERR_NO_WITNESS) {
    result["error"] = sl_last_error();
    result["profile"] = std::move(profile_json);
    emit(json_report(config, result), output);
    return kExitAssertion;
  }
  fail_status(status);
}

void line_writer(const char* line, void* user) {
  auto* os = static_cast<std::ostringstream*>(user);
  (*os) << line << "\n";
}

int run_selftest(const std::string& output) {
  std::ostringstream os;
  const sl_status status = sl_selftest(&line_writer, &os);
  emit(os.str(), output);
  return status == SL_OK ? kExitOk : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slicelab: Gowers norms, slice dense models, and slice testers"};
  app.require_subcommand(1);

  std::string input, synthetic, output, format = "csv", mode = "auto", domain = "slice";
  int threads = 0, order = 2, top = -1, level_weight_d = -1, dim = 0, d = 1, k = 2;
  int verify_d = -1;
  std::uint64_t trials = 100000, samples = 100000;
  std::optional<std::uint64_t> seed_opt;
  std::vector<int> sweep;
  std::string weight_poly_spec, biased_rank_spec, save_poly;
  std::vector<std::string> correlate;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "worker thread cap (0 = hardware)");
    sub->add_option("--output", output, "write the report to this file instead of stdout");
    sub->add_option("--seed", seed_opt, "random seed (default: env GSL_SEED, else 0)");
  };

  auto* fourier = app.add_subcommand("fourier", "Walsh-Hadamard spectrum of a table");
  fourier->add_option("--input", input, "table file")->required();
  fourier->add_option("--top", top, "emit only the k largest |coefficients|");
  fourier->add_option("--level-weight", level_weight_d, "also report W_{<=d}");
  fourier->add_option("--format", format, "csv (default) or json");
  add_common(fourier);

  auto* gowers = app.add_subcommand("gowers", "Gowers U_s norm of a table");
  gowers->add_option("--input", input, "table file")->required();
  gowers->add_option("--order", order, "norm order s")->required();
  gowers->add_option("--mode", mode, "exact, mc or auto (default auto)");
  gowers->add_option("--samples", samples, "Monte Carlo samples (default 100000)");
  add_common(gowers);

  auto* dense = app.add_subcommand(
      "dense-model", "U_s distance between normalized slice and residue indicators");
  dense->add_option("--n", dim, "ambient dimension 2n (even)");
  dense->add_option("--sweep", sweep, "comma-separated list of dimensions 2n")->delimiter(',');
  dense->add_option("--k", k, "residue parameter k (class modulus 2^{k-1})")->required();
  dense->add_option("--order", order, "norm order s (s <= k)")->required();
  dense->add_option("--mode", mode, "exact, mc or auto (default auto)");
  dense->add_option("--samples", samples, "Monte Carlo samples (default 100000)");
  dense->add_option("--format", format, "csv (default) or json");
  add_common(dense);

  auto* lin = app.add_subcommand("test-linearity",
                                 "quadruple linearity test on the slice, with decoding");
  lin->add_option("--n", dim, "ambient dimension 2n (even)");
  lin->add_option("--input", input, "0/1 table file for f");
  lin->add_option("--synthetic", synthetic, "synthetic instance, e.g. linear:S=0x5,flip=0.1");
  lin->add_option("--mode", mode, "exact, mc or auto (default auto)");
  lin->add_option("--trials", trials, "Monte Carlo trials (default 100000)");
  add_common(lin);

  auto* gtest = app.add_subcommand("test-gowers", "d-Gowers parity test on the slice");
  gtest->add_option("--n", dim, "ambient dimension 2n (even)");
  gtest->add_option("--d", d, "test dimension d")->required();
  gtest->add_option("--input", input, "0/1 table file for f");
  gtest->add_option("--synthetic", synthetic, "synthetic instance, e.g. linear:S=0x5,flip=0.1");
  gtest->add_option("--mode", mode, "exact, mc or auto (default auto)");
  gtest->add_option("--trials", trials, "Monte Carlo trials (default 100000)");
  add_common(gtest);

  auto* nc = app.add_subcommand("nonclassical", "torus polynomial operations");
  nc->add_option("--n", dim, "ambient dimension 2n (even), for --weight-poly");
  nc->add_option("--weight-poly", weight_poly_spec, "build j(|x|-a)/2^d: j,d,a");
  nc->add_option("--verify-degree", verify_d, "check degree <= d of --input");
  nc->add_option("--correlate", correlate, "two paths: <f table> <p table>")->expected(2);
  nc->add_option("--domain", domain, "cube, slice or residue:<k> (default slice)");
  nc->add_option("--biased-rank", biased_rank_spec, "witness search: d,delta");
  nc->add_option("--input", input, "polynomial table file");
  nc->add_option("--save-poly", save_poly, "also write the built polynomial to this file");
  add_common(nc);

  auto* selftest = app.add_subcommand("selftest", "run the exhaustive invariant suite");
  selftest->add_option("--threads", threads, "worker thread cap (0 = hardware)");
  selftest->add_option("--output", output, "write the report to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  sl_set_threads(threads);

  try {
    const std::uint64_t seed = seed_opt.value_or(default_seed());
    if (fourier->parsed())
      return run_fourier(input, level_weight_d, top, format, output);
    if (gowers->parsed())
      return run_gowers(input, order, mode, samples, seed, output);
    if (dense->parsed()) {
      std::vector<int> dims = sweep;
      if (dim != 0) dims.insert(dims.begin(), dim);
      if (dims.empty()) fail(kExitUsage, "dense-model: provide --n or --sweep");
      return run_dense_model(dims, k, order, mode, samples, seed, format, output);
    }
    if (lin->parsed())
      return run_test_linearity(input, synthetic, dim, mode, trials, seed, output);
    if (gtest->parsed())
      return run_test_gowers(input, synthetic, dim, d, mode, trials, seed, output);
    if (nc->parsed())
      return run_nonclassical(weight_poly_spec, dim, verify_d, correlate, domain,
                              biased_rank_spec, input, save_poly, output);
    if (selftest->parsed()) return run_selftest(output);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
