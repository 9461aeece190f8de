#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hodisc/genmat.hpp"

namespace hodisc {

/// N points in [0,1)^d with coordinate value num / 2^precision_bits.
class DyadicPointSet {
 public:
  DyadicPointSet() = default;
  DyadicPointSet(std::size_t dim, int precision_bits, std::vector<std::uint64_t> coords,
                 std::uint64_t start_index = 0);

  std::size_t dim() const { return dim_; }
  int precision_bits() const { return precision_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::uint64_t start_index() const { return start_; }

  std::uint64_t num(std::size_t k, std::size_t i) const { return coords_[k * dim_ + i]; }
  std::span<const std::uint64_t> point(std::size_t k) const {
    return {coords_.data() + k * dim_, dim_};
  }
  double value(std::size_t k, std::size_t i) const;
  std::span<const std::uint64_t> coords() const { return coords_; }

  /// Smallest e <= precision_bits such that every numerator is a multiple of
  /// 2^(precision_bits - e); the coordinates are exact at precision e.
  int effective_precision() const;
  /// Same points re-expressed at another precision (must be exact).
  DyadicPointSet with_precision(int bits) const;
  /// First n points.
  DyadicPointSet head(std::size_t n) const;

  friend bool operator==(const DyadicPointSet&, const DyadicPointSet&) = default;

 private:
  std::size_t dim_ = 0;
  int precision_ = 0;
  std::uint64_t start_ = 0;
  std::vector<std::uint64_t> coords_;
};

/// Numerators (precision q_rows) of the k-th point: C_j times the LSB-first digits of k.
std::vector<std::uint64_t> point_at(const GeneratingMatrixSet& g, std::uint64_t k);

/// Points with indices start .. start+count-1 in index order.
DyadicPointSet prefix(const GeneratingMatrixSet& g, std::size_t count, std::uint64_t start = 0);

// CSV: header "k,num_1,...,num_d,precision_bits" then one row per point.
void write_points_csv(std::ostream& out, const DyadicPointSet& p);
DyadicPointSet read_points_csv(std::istream& in);
// Binary: little-endian u64 header (d, b, N), then N*d little-endian u64 numerators.
void write_points_binary(std::ostream& out, const DyadicPointSet& p);
DyadicPointSet read_points_binary(std::istream& in);
/// Sniffs the format from the first bytes.
DyadicPointSet read_points(std::istream& in);

}  // namespace hodisc
