#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hodisc/haar.hpp"
#include "hodisc/points.hpp"

namespace hodisc {

enum class NormKind { l2, lp, linf_star, bmo_dyadic, d0_projection, besov, triebel_bracket, orlicz_exp };

std::string to_string(NormKind kind);
/// Accepts the CLI spellings: l2, lp, star, bmo, d0, besov, triebel, orlicz.
NormKind parse_norm_kind(const std::string& name);

/// How a reported value relates to the quantity it stands for.
enum class Estimate { exact, approximate, lower, upper, equivalent };

std::string to_string(Estimate e);

/// exact: rational arithmetic; floating: double; automatic picks exact for small inputs.
enum class Arithmetic { automatic, exact, floating };

struct NormReport {
  NormKind kind = NormKind::l2;
  std::optional<double> p, q, s, beta;
  double value = 0;
  std::string method;
  std::optional<int> box_limit;
  double tail_value = 0;
  Estimate estimate = Estimate::exact;
  std::uint64_t count = 0;
  std::size_t dim = 0;

  /// Squared value as "num/den" when computed in rational arithmetic.
  std::optional<std::string> exact_square;
  /// |value(R) - value(R/2)| for grid quadrature.
  std::optional<double> refinement_delta;
  std::optional<int> resolution;
  std::optional<int> depth;
  std::vector<double> p_grid;
  /// Grid p at which the Orlicz maximum was attained.
  std::optional<double> argmax_p;
};

/// Squared L2 discrepancy from the closed-form double sum.
Rational l2_warnock_squared_exact(const DyadicPointSet& points);
double l2_warnock_squared(const DyadicPointSet& points);
NormReport l2_warnock(const DyadicPointSet& points, Arithmetic mode = Arithmetic::automatic);

/// Squared L2 discrepancy from Parseval over the table plus the closed-form tail.
Rational l2_parseval_squared_exact(const HaarTable& table);
NormReport l2_parseval(const HaarTable& table, Arithmetic mode = Arithmetic::automatic);

struct LpGridResult {
  std::vector<double> p;
  std::vector<double> value;
  std::vector<double> delta;
};

/// Lp norms for several p from one sweep over the grid refined by the point coordinates.
LpGridResult lp_grid_multi(const DyadicPointSet& points, const std::vector<double>& p, int resolution);
NormReport lp_grid(const DyadicPointSet& points, double p, int resolution = 1024);

/// sup |D| over [0,1]^d for d <= 2 by critical-box enumeration.
Rational star_discrepancy_exact_value(const DyadicPointSet& points);
NormReport star_discrepancy_exact(const DyadicPointSet& points);

/// Lower estimate of the BMO seminorm: max over the unit cube and the dyadic boxes
/// of order <= depth. Depth defaults to min(box_limit, ceil(ld N)).
NormReport bmo_dyadic(const HaarTable& table, std::optional<int> depth = std::nullopt);

/// L2 norm of the projection onto Haar functions with all levels >= 0.
Rational d0_projection_squared_exact(const HaarTable& table);
NormReport d0_projection_norm(const HaarTable& table, Arithmetic mode = Arithmetic::automatic);

/// Rejects s outside (1/p - 1, min(1/p, 1)) and non-positive p, q.
void check_besov_parameters(double p, double q, double s);
/// Haar-characterisation quasi-norm of D in the Besov space with dominating mixed smoothness.
NormReport besov_quasinorm(const HaarTable& table, double p, double q, double s);

/// Besov values with min(p,q) and max(p,q) bracketing the Triebel-Lizorkin norm.
std::pair<NormReport, NormReport> triebel_bracket(const HaarTable& table, double p, double q, double s);

/// {2, 4, ..., 4 * 2^ceil(ld ld N)}.
std::vector<double> default_orlicz_grid(std::uint64_t count);
NormReport orlicz_exp_estimate(const DyadicPointSet& points, double beta,
                               std::vector<double> p_grid = {}, int resolution = 256);

/// Everything needed to evaluate one norm, used by the CLI and the study harness.
struct NormSpec {
  NormKind kind = NormKind::l2;
  std::string method;  // l2: "warnock" (default) or "parseval"
  double p = 2, q = 2, s = 0, beta = 2;
  std::optional<int> depth;
  std::optional<int> box_limit;
  int resolution = 256;
  std::vector<double> p_grid;
  Arithmetic arithmetic = Arithmetic::automatic;
};

/// Evaluates `spec` on `points`. A table is built when the norm needs one and
/// `table` is null. Triebel brackets return the upper endpoint with the lower one in `lower`.
NormReport evaluate_norm(const DyadicPointSet& points, const NormSpec& spec,
                         const HaarTable* table = nullptr, NormReport* lower = nullptr);

}  // namespace hodisc
