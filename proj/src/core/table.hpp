#pragma once

// Dense real-valued function tables on {0,1}^m. Tables are immutable after
// construction; every operation below is pure, so tables can be shared
// freely across workers.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "core/bits.hpp"

namespace slicelab {

class FunctionTable {
 public:
  FunctionTable(int dim, std::vector<double> values);  // checks size 2^dim, finiteness
  static FunctionTable constant(int dim, double c);

  int dim() const { return dim_; }
  std::uint64_t size() const { return values_.size(); }
  double operator[](std::uint64_t x) const { return values_[x]; }
  double at(const BitVector& x) const;
  const std::vector<double>& values() const { return values_; }

  double mean() const;  // Kahan, index order

 private:
  int dim_;
  std::vector<double> values_;
};

// Entrywise application of combine to the same index of every input table.
FunctionTable pointwise_combine(
    const std::vector<const FunctionTable*>& tables,
    const std::function<double(std::span<const double>)>& combine);

FunctionTable pointwise_product(const FunctionTable& a, const FunctionTable& b);
FunctionTable pointwise_difference(const FunctionTable& a, const FunctionTable& b);

// Text format, either of:
//   dim=<m>   followed by 2^m whitespace-separated decimal values
//   bits=<m>  followed by a 2^m-character 0/1 string (whitespace ignored)
FunctionTable read_table(std::istream& in);
FunctionTable read_table_file(const std::string& path);
void write_table(std::ostream& out, const FunctionTable& t);

}  // namespace slicelab
