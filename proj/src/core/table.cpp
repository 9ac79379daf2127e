#include "core/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "core/parallel.hpp"

namespace slicelab {

FunctionTable::FunctionTable(int dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim < 0 || dim > kMaxTableDim)
    throw std::invalid_argument("FunctionTable: dim must be in [0, 32]");
  if (values_.size() != (std::uint64_t{1} << dim))
    throw std::invalid_argument("FunctionTable: expected 2^dim values");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("FunctionTable: non-finite entry");
}

FunctionTable FunctionTable::constant(int dim, double c) {
  return FunctionTable(dim, std::vector<double>(std::uint64_t{1} << dim, c));
}

double FunctionTable::at(const BitVector& x) const {
  if (x.dim != dim_) throw std::invalid_argument("FunctionTable::at: dimension mismatch");
  return values_[x.bits];
}

double FunctionTable::mean() const {
  KahanSum acc;
  for (double v : values_) acc.add(v);
  return acc.value() / static_cast<double>(size());
}

FunctionTable pointwise_combine(
    const std::vector<const FunctionTable*>& tables,
    const std::function<double(std::span<const double>)>& combine) {
  if (tables.empty()) throw std::invalid_argument("pointwise_combine: no tables");
  const int dim = tables.front()->dim();
  for (const auto* t : tables)
    if (t->dim() != dim) throw std::invalid_argument("pointwise_combine: dimension mismatch");
  const std::uint64_t n = std::uint64_t{1} << dim;
  std::vector<double> out(n);
  std::vector<double> row(tables.size());
  for (std::uint64_t x = 0; x < n; ++x) {
    for (std::size_t i = 0; i < tables.size(); ++i) row[i] = (*tables[i])[x];
    out[x] = combine(std::span<const double>(row));
  }
  return FunctionTable(dim, std::move(out));
}

FunctionTable pointwise_product(const FunctionTable& a, const FunctionTable& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("pointwise_product: dimension mismatch");
  std::vector<double> out(a.size());
  for (std::uint64_t x = 0; x < a.size(); ++x) out[x] = a[x] * b[x];
  return FunctionTable(a.dim(), std::move(out));
}

FunctionTable pointwise_difference(const FunctionTable& a, const FunctionTable& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("pointwise_difference: dimension mismatch");
  std::vector<double> out(a.size());
  for (std::uint64_t x = 0; x < a.size(); ++x) out[x] = a[x] - b[x];
  return FunctionTable(a.dim(), std::move(out));
}

namespace {

int parse_header(std::istream& in, bool* bits_mode) {
  std::string tok;
  if (!(in >> tok)) throw std::runtime_error("table: empty input");
  const auto eq = tok.find('=');
  if (eq == std::string::npos) throw std::runtime_error("table: expected dim=<m> or bits=<m>");
  const std::string key = tok.substr(0, eq);
  const std::string val = tok.substr(eq + 1);
  if (key == "dim")
    *bits_mode = false;
  else if (key == "bits")
    *bits_mode = true;
  else
    throw std::runtime_error("table: unknown header key '" + key + "'");
  int m = -1;
  const auto res = std::from_chars(val.data(), val.data() + val.size(), m);
  if (res.ec != std::errc{} || res.ptr != val.data() + val.size())
    throw std::runtime_error("table: bad dimension '" + val + "'");
  if (m < 0 || m > kMaxTableDim) throw std::runtime_error("table: dim must be in [0, 32]");
  return m;
}

}  // namespace

FunctionTable read_table(std::istream& in) {
  bool bits_mode = false;
  const int m = parse_header(in, &bits_mode);
  const std::uint64_t n = std::uint64_t{1} << m;
  std::vector<double> values;
  values.reserve(n);
  if (bits_mode) {
    char c;
    while (values.size() < n && in >> c) {
      if (c == '0')
        values.push_back(0.0);
      else if (c == '1')
        values.push_back(1.0);
      else
        throw std::runtime_error("table: bits payload must be 0/1");
    }
  } else {
    double v;
    while (values.size() < n && in >> v) values.push_back(v);
  }
  if (values.size() != n)
    throw std::runtime_error("table: expected " + std::to_string(n) + " values, got " +
                             std::to_string(values.size()));
  return FunctionTable(m, std::move(values));
}

FunctionTable read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file '" + path + "'");
  try {
    return read_table(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_table(std::ostream& out, const FunctionTable& t) {
  out << "dim=" << t.dim() << "\n";
  char buf[64];
  for (std::uint64_t x = 0; x < t.size(); ++x) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), t[x]);
    out.write(buf, res.ptr - buf);
    out.put(x + 1 == t.size() ? '\n' : ' ');
  }
}

}  // namespace slicelab
