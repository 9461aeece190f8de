#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hodisc/genmat.hpp"
#include "hodisc/points.hpp"

namespace hodisc {

/// A row selection that is linearly dependent although its weight is admissible.
struct NetWitness {
  int t_tested = 0;
  /// 1-based row indices chosen from each generating matrix.
  std::vector<std::vector<std::size_t>> rows;
  std::size_t selection_size = 0;
  std::size_t rank = 0;
};

struct TValueReport {
  int alpha = 1;
  std::size_t n = 0;
  std::size_t dim = 0;
  int t = 0;
  /// Violation for t - 1 (absent when t == 0).
  std::optional<NetWitness> witness;
};

/// Truncated weight of a row selection: for every coordinate the sum of its
/// `alpha` largest indices.
std::size_t selection_weight(const std::vector<std::vector<std::size_t>>& rows, int alpha);

/// Rank of the selected rows restricted to the first n columns.
std::size_t selection_rank(const GeneratingMatrixSet& g, std::size_t n,
                           const std::vector<std::vector<std::size_t>>& rows);

/// First dependent admissible selection for parameter t, if any.
std::optional<NetWitness> find_net_violation(const GeneratingMatrixSet& g, std::size_t n,
                                             int alpha, int t);

bool is_order_alpha_net(const GeneratingMatrixSet& g, std::size_t n, int alpha, int t);

TValueReport minimal_t(const GeneratingMatrixSet& g, std::size_t n, int alpha);

struct SequenceCheck {
  bool holds = true;
  std::optional<std::size_t> failing_n;
};

/// The left upper (alpha n x n) submatrices form order-alpha (t, n, d)-nets
/// for every n with t/alpha < n <= n_max.
SequenceCheck is_order_alpha_sequence_prefix(const GeneratingMatrixSet& g, std::size_t n_max,
                                             int alpha, int t);

/// Smallest t for which is_order_alpha_sequence_prefix holds.
int minimal_sequence_t(const GeneratingMatrixSet& g, std::size_t n_max, int alpha);

struct FairIntervalReport {
  std::size_t n = 0;
  long order = 0;
  std::size_t bound = 0;
  std::size_t max_occupancy = 0;
  std::size_t level_vectors = 0;
  bool passed = true;
  bool vacuous = false;
  std::string warning;
};

/// Max number of points of a 2^n-point net in any dyadic box of order n - ceil(t/alpha).
FairIntervalReport fair_interval_audit(const DyadicPointSet& points, int alpha, int t);

}  // namespace hodisc
