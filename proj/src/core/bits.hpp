#pragma once

// Bit-vector points of {0,1}^m and the indexing convention shared by every
// module: coordinate i of a point is bit i of its integer encoding
// (little-endian). Dense tables are indexed the same way.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace slicelab {

inline constexpr int kMaxTableDim = 32;  // dense-table dimensions
inline constexpr int kMaxPointDim = 64;  // sampling-only points

inline std::uint64_t dim_mask(int dim) {
  return dim >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << dim) - 1);
}

struct BitVector {
  std::uint64_t bits = 0;
  int dim = 0;

  BitVector() = default;
  BitVector(std::uint64_t bits_, int dim_) : bits(bits_), dim(dim_) {
    if (dim_ < 0 || dim_ > kMaxPointDim)
      throw std::invalid_argument("BitVector: dim must be in [0, 64]");
    if ((bits_ & ~dim_mask(dim_)) != 0)
      throw std::invalid_argument("BitVector: set bit at position >= dim");
  }

  bool operator==(const BitVector&) const = default;
};

inline int weight(const BitVector& v) { return std::popcount(v.bits); }

inline void require_same_dim(const BitVector& u, const BitVector& v) {
  if (u.dim != v.dim) throw std::invalid_argument("BitVector: dimension mismatch");
}

inline BitVector xor_of(const BitVector& u, const BitVector& v) {
  require_same_dim(u, v);
  return BitVector(u.bits ^ v.bits, u.dim);
}

inline BitVector and_of(const BitVector& u, const BitVector& v) {
  require_same_dim(u, v);
  return BitVector(u.bits & v.bits, u.dim);
}

// Parses a coordinate string like "1100": character j is coordinate j,
// so "1100" has coordinates 0 and 1 set (mask 0b0011).
inline BitVector parse_bits(const std::string& s) {
  std::uint64_t bits = 0;
  if (s.size() > kMaxPointDim) throw std::invalid_argument("bit string too long");
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == '1')
      bits |= std::uint64_t{1} << j;
    else if (s[j] != '0')
      throw std::invalid_argument("bit string must contain only 0/1");
  }
  return BitVector(bits, static_cast<int>(s.size()));
}

}  // namespace slicelab
