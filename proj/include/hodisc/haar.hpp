#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "hodisc/dyadic.hpp"
#include "hodisc/points.hpp"

namespace hodisc {

/// Level j in {-1, 0, 1, ...}^d and position m in D_j (m_i = 0 when j_i = -1).
struct HaarIndex {
  std::vector<int> j;
  std::vector<std::uint64_t> m;

  /// |j| = sum of max(j_i, 0).
  int order() const;
  void validate() const;
};

// Haar functions are the unnormalised tensor products h_{j,m} taking values
// +1 on the left half and -1 on the right half of each dyadic factor, and
// h_{-1,0} = 1 on [0,1).

/// <x_1 ... x_d, h_{j,m}>: 1/2 per coordinate with j_i = -1 and -2^(-2 j_i - 2) otherwise.
DyadicRational volume_coeff(std::span<const int> j);

/// <chi_{(z,1)}, h_{j,m}> in one dimension with z = num / 2^bits. Scale is `bits`.
DyadicRational counting_coeff_1d(std::uint64_t num, int bits, int j, std::uint64_t m);

/// Integer numerator of counting_coeff_1d at scale `bits` (fast path).
Int128 counting_numerator_1d(std::uint64_t num, int bits, int j, std::uint64_t m);

struct HaarCoefficient {
  DyadicRational counting;
  DyadicRational volume;
  /// <D, h> = counting - volume.
  DyadicRational value() const { return counting - volume; }
};

/// Direct evaluation over all points (no table).
HaarCoefficient haar_coefficient(const DyadicPointSet& points, const HaarIndex& idx);

class HaarTable;
inline constexpr std::size_t default_table_cap = std::size_t{1} << 28;

/// Builds the table. `box_limit` defaults to the points' precision_bits and
/// must be at least their effective precision. Throws when the number of
/// candidate entries (levels with counting support times N) exceeds `max_entries`.
HaarTable build_table(const DyadicPointSet& points, std::optional<int> box_limit = std::nullopt,
                      std::size_t max_entries = default_table_cap);
HaarTable read_haar_csv(std::istream& in);

/// Nonzero counting parts for one level vector, sorted by packed position key.
struct HaarLevel {
  std::vector<int> j;
  std::vector<std::uint64_t> keys;
  std::vector<Int128> counting;  // numerator at the table's counting scale, divisor N
};

/// Sparse table of <D, h_{j,m}> for all j in {-1, ..., J-1}^d. Only nonzero
/// counting parts are stored; volume parts are recomputed per level.
class HaarTable {
 public:
  std::size_t dim() const { return dim_; }
  std::uint64_t count() const { return count_; }
  int box_limit() const { return box_limit_; }
  /// Precision e of the coordinates inside the table; counting numerators have scale d*e.
  int precision() const { return precision_; }
  int counting_scale() const { return static_cast<int>(dim_) * precision_; }

  std::span<const HaarLevel> levels() const { return levels_; }
  const HaarLevel& level(std::span<const int> j) const;
  std::size_t stored_entries() const;

  /// Packs m into a key (coordinate 1 in the high bits, max(j_i,0) bits each).
  static std::uint64_t pack(std::span<const int> j, std::span<const std::uint64_t> m);
  static std::vector<std::uint64_t> unpack(std::span<const int> j, std::uint64_t key);

  DyadicRational counting_value(Int128 numerator) const;
  double counting_double(Int128 numerator) const;

  /// Coefficient for any index; outside the box the counting part is zero.
  HaarCoefficient coefficient(const HaarIndex& idx) const;

  friend HaarTable build_table(const DyadicPointSet&, std::optional<int>, std::size_t);
  friend HaarTable read_haar_csv(std::istream& in);

 private:
  std::size_t level_slot(std::span<const int> j) const;

  std::size_t dim_ = 0;
  std::uint64_t count_ = 0;
  int box_limit_ = 0;
  int precision_ = 0;
  std::vector<HaarLevel> levels_;
};

/// Per-coordinate weights of the out-of-box volume aggregate.
/// Kind l2: 2^{2|j|} v_j^2 summed (Parseval). Kind besov: 2^{|j|(s+1)q} |v_j|^q.
struct TailWeights {
  enum class Kind { l2, besov };
  Kind kind = Kind::l2;
  double p = 2, q = 2, s = 0;

  static TailWeights l2() { return {}; }
  static TailWeights besov(double p, double q, double s) { return {Kind::besov, p, q, s}; }
};

enum class LevelRange { all, nonnegative };

/// Sum of the weighted pure-volume aggregate over levels j with some j_i >= J.
double volume_tail_sums(std::size_t dim, int box_limit, const TailWeights& w,
                        LevelRange range = LevelRange::all);
/// Exact L2 version.
Rational volume_tail_sums_l2_exact(std::size_t dim, int box_limit,
                                   LevelRange range = LevelRange::all);
/// Table-aware overload; rejects tables whose box does not cover the counting support.
double volume_tail_sums(const HaarTable& table, const TailWeights& w,
                        LevelRange range = LevelRange::all);

// CSV: "# hodisc-haar v1 d=<d> N=<N> b=<e> J=<J>" then
// j_1..j_d,m_1..m_d,counting_num,counting_scale,volume_num,volume_scale,divisor
void write_haar_csv(std::ostream& out, const HaarTable& table);

}  // namespace hodisc
