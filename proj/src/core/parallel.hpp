#pragma once

// Minimal fork-join helper. The global cap is what the CLI --threads flag
// sets. Every parallel loop in the project merges its results either with
// integer arithmetic or in a fixed order, so the cap changes wall time, not
// output bytes.

#include <cstdint>
#include <functional>

namespace slicelab {

void set_max_threads(int n);  // n <= 0 restores the hardware default
int max_threads();

// Invokes fn(begin, end) on disjoint contiguous chunks covering [begin, end).
// Runs inline when the range is small or only one worker is allowed.
void parallel_chunks(std::uint64_t begin, std::uint64_t end,
                     const std::function<void(std::uint64_t, std::uint64_t)>& fn);

// Compensated (Kahan) accumulator; used wherever a float reduction must be
// reproducible under a documented summation order.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace slicelab
