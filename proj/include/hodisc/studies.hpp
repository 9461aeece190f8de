#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hodisc/genmat.hpp"
#include "hodisc/haar.hpp"
#include "hodisc/norms.hpp"
#include "hodisc/points.hpp"

namespace hodisc {

/// Exponents n_r > ... > n_1 >= 0 with N = sum 2^{n_i}, largest first.
std::vector<int> binary_decomposition(std::uint64_t count);

enum class Regime { small_occupied, small_empty, large };

std::string to_string(Regime r);

struct BoundCase {
  Regime regime = Regime::large;
  int t = 0;
  std::uint64_t count = 1;
  std::size_t dim = 1;
  std::vector<int> decomposition;  // as from binary_decomposition
};

/// Regime implied by (|j|, t, N); `occupied` decides between the two small-box cases.
BoundCase classify_bound(int order, int t, std::uint64_t count, std::size_t dim, bool occupied);

/// Right-hand side of the coefficient bound for a level of order |j| (constant omitted).
/// Small boxes: 2^{t/2} / (N 2^|j|) when occupied, 2^{-2|j|} when empty. Large boxes
/// (n_mu <= |j| + t/2 < n_{mu+1}, n_0 = 0, n_{r+1} = ld N):
/// 2^t / N (2^-|j| + (2 n_{mu+1} - t - 2|j|)^{d-1} 2^{-n_{mu+1}}).
double lemma42_bound(int order, const BoundCase& c);

struct RegimeRatio {
  Regime regime;
  double max_ratio = 0;
  std::size_t coefficients = 0;
  std::optional<HaarIndex> argmax;
};

struct BoundAudit {
  std::uint64_t count = 0;
  std::size_t dim = 0;
  int t = 0;
  std::vector<RegimeRatio> regimes;  // small_occupied, small_empty, large
};

/// Max |<D,h>| / bound per regime over every index of the table's box.
/// Occupancy uses half-open boxes of the points the table was built from.
BoundAudit bound_ratio_audit(const HaarTable& table, const DyadicPointSet& points, int t);
/// Rejects generating sets without the order-2 row sparsity before auditing.
BoundAudit bound_ratio_audit(const GeneratingMatrixSet& g, std::uint64_t count, int t);

struct LiftedSet {
  DyadicPointSet points;
  bool exact = true;
};

/// Appends the coordinate k/N to point k. Exact when N is a power of two; otherwise
/// k/N is rounded to 52 fractional bits and the result is flagged inexact.
LiftedSet lift_sequence(const DyadicPointSet& prefix_points, std::uint64_t count);

/// Exact comparison max_{n' <= N} n' ||D^{n'}|D_0^d|| + 1 >= N ||D_lift|D_0^{d+1}||.
struct LiftCheck {
  std::uint64_t count = 0;
  std::uint64_t argmax_n = 0;
  Rational max_lhs_squared;   // max n'^2 A_{n'}
  Rational rhs_squared;       // N^2 B
  double lhs = 0;             // max n' sqrt(A) + 1
  double rhs = 0;
  bool holds = false;
};

LiftCheck lift_inequality_check(const GeneratingMatrixSet& g, std::uint64_t count);

struct ScalingRow {
  std::uint64_t count = 0;
  double value = 0;
  double normalized = 0;
  double exponent = 0;
  std::string theorem;
  NormReport report;
};

/// Rate exponent e and the power of N used for normalisation (N^{1-s}).
struct RateShape {
  double log_exponent = 0;
  double n_power = 1;
  std::string label;
};

RateShape rate_shape(const NormSpec& spec, std::size_t dim);

/// Norm of every prefix in `counts` with its rate-normalised value.
std::vector<ScalingRow> scaling_study(const GeneratingMatrixSet& g, const NormSpec& spec,
                                      const std::vector<std::uint64_t>& counts);

/// Powers of two 2^nmin .. 2^nmax.
std::vector<std::uint64_t> dyadic_counts(int nmin, int nmax);

/// CSV: N,value,normalized,exponent,theorem
void write_study_csv(std::ostream& out, const std::vector<ScalingRow>& rows);

}  // namespace hodisc
