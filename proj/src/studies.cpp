#include "hodisc/studies.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "hodisc/error.hpp"
#include "hodisc/levels.hpp"

namespace hodisc {

std::vector<int> binary_decomposition(std::uint64_t count) {
  require(count >= 1, "binary_decomposition: N must be >= 1");
  std::vector<int> out;
  for (int b = 63; b >= 0; --b)
    if ((count >> b) & 1) out.push_back(b);
  return out;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::small_occupied: return "small_boxes";
    case Regime::small_empty: return "small_boxes_empty";
    case Regime::large: return "large_boxes";
  }
  return "?";
}

BoundCase classify_bound(int order, int t, std::uint64_t count, std::size_t dim, bool occupied) {
  require(order >= 0 && t >= 0, "classify_bound: |j| and t must be >= 0");
  BoundCase c;
  c.t = t;
  c.count = count;
  c.dim = dim;
  c.decomposition = binary_decomposition(count);
  const bool small = order + t / 2.0 >= std::log2(static_cast<double>(count));
  c.regime = small ? (occupied ? Regime::small_occupied : Regime::small_empty) : Regime::large;
  return c;
}

double lemma42_bound(int order, const BoundCase& c) {
  require(c.count >= 1 && c.dim >= 1, "lemma42_bound: N and d must be >= 1");
  const double ld = std::log2(static_cast<double>(c.count));
  const double x = order + c.t / 2.0;
  const double n = static_cast<double>(c.count);
  if (c.regime != Regime::large) {
    if (x < ld) throw ValidationError("lemma42_bound: |j| + t/2 < ld N is not a small-box case");
    if (c.regime == Regime::small_empty) return std::exp2(-2.0 * order);
    return std::exp2(c.t / 2.0 - order) / n;
  }
  if (x >= ld) throw ValidationError("lemma42_bound: |j| + t/2 >= ld N is not a large-box case");
  // n_0 = 0 < n_1 < ... < n_r, and n_{r+1} = ld N.
  std::vector<double> ns{0.0};
  for (auto it = c.decomposition.rbegin(); it != c.decomposition.rend(); ++it) ns.push_back(*it);
  ns.push_back(ld);
  std::size_t mu = 0;
  for (std::size_t i = 0; i + 1 < ns.size(); ++i)
    if (ns[i] <= x) mu = i;
  const double next = ns[mu + 1];
  const double poly = std::pow(2 * next - c.t - 2.0 * order, static_cast<double>(c.dim) - 1);
  return std::exp2(c.t) / n * (std::exp2(-order) + poly * std::exp2(-next));
}

BoundAudit bound_ratio_audit(const HaarTable& table, const DyadicPointSet& points, int t) {
  require(t >= 0, "bound_ratio_audit: t must be >= 0");
  require(points.size() == table.count() && points.dim() == table.dim(),
          "bound_ratio_audit: points do not match the table");
  const std::size_t d = table.dim();
  const std::uint64_t n = table.count();
  const int b = points.precision_bits();
  BoundAudit audit;
  audit.count = n;
  audit.dim = d;
  audit.t = t;
  for (Regime r : {Regime::small_occupied, Regime::small_empty, Regime::large})
    audit.regimes.push_back(RegimeRatio{r, 0, 0, std::nullopt});
  auto record = [&](Regime r, double ratio, const std::vector<int>& j, std::uint64_t key) {
    RegimeRatio& rr = audit.regimes[static_cast<std::size_t>(r)];
    ++rr.coefficients;
    if (!std::isfinite(ratio)) throw std::runtime_error("bound_ratio_audit: non-finite ratio");
    if (!rr.argmax || ratio > rr.max_ratio) {
      rr.max_ratio = ratio;
      rr.argmax = HaarIndex{j, HaarTable::unpack(j, key)};
    }
  };

  std::vector<std::uint64_t> occupied;
  std::vector<std::uint64_t> m(d);
  for (const HaarLevel& lvl : table.levels()) {
    const int order = level_order(lvl.j);
    const double v = volume_coeff(lvl.j).to_double();
    const double boxes = std::exp2(order);
    std::unordered_map<std::uint64_t, double> value;  // stored |<D,h>|
    for (std::size_t e = 0; e < lvl.keys.size(); ++e)
      value[lvl.keys[e]] = std::abs(table.counting_double(lvl.counting[e]) - v);
    // Half-open occupancy of the points at this level.
    occupied.clear();
    for (std::size_t k = 0; k < points.size(); ++k) {
      for (std::size_t i = 0; i < d; ++i)
        m[i] = lvl.j[i] <= 0 ? 0
               : lvl.j[i] <= b ? points.num(k, i) >> (b - lvl.j[i])
                               : points.num(k, i) << (lvl.j[i] - b);
      occupied.push_back(HaarTable::pack(lvl.j, m));
    }
    std::sort(occupied.begin(), occupied.end());
    occupied.erase(std::unique(occupied.begin(), occupied.end()), occupied.end());

    const BoundCase occ = classify_bound(order, t, n, d, true);
    if (occ.regime == Regime::large) {
      const double bound = lemma42_bound(order, occ);
      for (const auto& [key, val] : value) record(Regime::large, val / bound, lvl.j, key);
      if (static_cast<double>(value.size()) < boxes) {
        // Some box carries only the volume part; pick any such key for the argmax.
        std::uint64_t key = 0;
        while (value.count(key)) ++key;
        record(Regime::large, std::abs(v) / bound, lvl.j, key);
      }
      continue;
    }
    const double bound_occ = lemma42_bound(order, occ);
    for (std::uint64_t key : occupied) {
      const auto it = value.find(key);
      record(Regime::small_occupied, (it == value.end() ? std::abs(v) : it->second) / bound_occ,
             lvl.j, key);
    }
    if (static_cast<double>(occupied.size()) < boxes) {
      std::uint64_t key = 0;
      while (std::binary_search(occupied.begin(), occupied.end(), key)) ++key;
      const BoundCase emp = classify_bound(order, t, n, d, false);
      record(Regime::small_empty, std::abs(v) / lemma42_bound(order, emp), lvl.j, key);
    }
  }
  return audit;
}

BoundAudit bound_ratio_audit(const GeneratingMatrixSet& g, std::uint64_t count, int t) {
  if (g.row_bound_factor != 2 || !g.satisfies_row_bound())
    throw ValidationError(
        "bound_ratio_audit: needs order-2 generating matrices with entries zero below row 2l "
        "(row bound factor 2)");
  const DyadicPointSet pts = prefix(g, count);
  const HaarTable table = build_table(pts, pts.effective_precision());
  return bound_ratio_audit(table, pts, t);
}

LiftedSet lift_sequence(const DyadicPointSet& prefix_points, std::uint64_t count) {
  require(count >= 1, "lift_sequence: N must be >= 1");
  require(prefix_points.size() >= count, "lift_sequence: fewer than N input points");
  const std::size_t d = prefix_points.dim();
  const int b = prefix_points.precision_bits();
  LiftedSet out;
  out.exact = std::has_single_bit(count);
  const int n = std::countr_zero(count);
  const int bits = out.exact ? std::max(b, n) : std::max(b, 52);
  require(bits <= 64, "lift_sequence: precision above 64 bits");
  std::vector<std::uint64_t> coords;
  coords.reserve(count * (d + 1));
  for (std::uint64_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < d; ++i) coords.push_back(prefix_points.num(k, i) << (bits - b));
    if (out.exact) {
      coords.push_back(k << (bits - n));
    } else {
      // round(k 2^52 / N), then widen to the output precision
      const unsigned __int128 scaled = (static_cast<unsigned __int128>(k) << 53) / count;
      coords.push_back(static_cast<std::uint64_t>((scaled + 1) >> 1) << (bits - 52));
    }
  }
  out.points = DyadicPointSet(d + 1, bits, std::move(coords), prefix_points.start_index());
  return out;
}

LiftCheck lift_inequality_check(const GeneratingMatrixSet& g, std::uint64_t count) {
  require(std::has_single_bit(count), "lift check: N must be a power of two");
  const DyadicPointSet pts = prefix(g, count);
  LiftCheck c;
  c.count = count;
  for (std::uint64_t np = 1; np <= count; ++np) {
    const DyadicPointSet head = pts.head(np);
    const HaarTable t = build_table(head, head.effective_precision());
    const Rational a = d0_projection_squared_exact(t) * np * np;
    if (np == 1 || a > c.max_lhs_squared) {
      c.max_lhs_squared = a;
      c.argmax_n = np;
    }
  }
  const LiftedSet lifted = lift_sequence(pts, count);
  const HaarTable lt = build_table(lifted.points, lifted.points.effective_precision());
  c.rhs_squared = d0_projection_squared_exact(lt) * count * count;
  c.lhs = std::sqrt(c.max_lhs_squared.convert_to<double>()) + 1;
  c.rhs = std::sqrt(c.rhs_squared.convert_to<double>());
  // a + 1 >= b with a^2, b^2 known exactly: trivially true if b <= 1; otherwise
  // square a >= b - 1 >= 0, i.e. a^2 >= b^2 - 2b + 1, i.e. 2b >= b^2 + 1 - a^2.
  const Rational& a2 = c.max_lhs_squared;
  const Rational& b2 = c.rhs_squared;
  if (b2 <= 1) {
    c.holds = true;
  } else {
    const Rational gap = b2 + 1 - a2;
    c.holds = gap <= 0 || gap * gap <= 4 * b2;
  }
  return c;
}

RateShape rate_shape(const NormSpec& spec, std::size_t dim) {
  const double d = static_cast<double>(dim);
  switch (spec.kind) {
    case NormKind::l2:
    case NormKind::lp: return {d / 2, 1, "lp-upper"};
    case NormKind::bmo_dyadic: return {d / 2, 1, "bmo-upper"};
    case NormKind::d0_projection: return {d / 2, 1, "d0-lower"};
    case NormKind::linf_star: return {d, 1, "star-upper"};
    case NormKind::orlicz_exp: return {d - 1 / spec.beta, 1, "orlicz-upper"};
    case NormKind::besov:
    case NormKind::triebel_bracket: {
      const std::string base = spec.kind == NormKind::besov ? "besov" : "triebel";
      if (spec.s == 0) return {d / spec.q, 1, base + "-upper-s0"};
      return {(d - 1) / spec.q, 1 - spec.s, base + "-upper-s"};
    }
  }
  return {};
}

std::vector<ScalingRow> scaling_study(const GeneratingMatrixSet& g, const NormSpec& spec,
                                      const std::vector<std::uint64_t>& counts) {
  require(!counts.empty(), "scaling_study: empty N list");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    require(counts[i] >= 2, "scaling_study: every N must be >= 2");
    require(i == 0 || counts[i] > counts[i - 1], "scaling_study: N list must be ascending");
  }
  const std::uint64_t limit = g.n_cols >= 64 ? ~std::uint64_t{0} : std::uint64_t{1} << g.n_cols;
  require(counts.back() <= limit, "scaling_study: N exceeds 2^n_cols of the generating matrices");
  const RateShape shape = rate_shape(spec, g.dim);
  const DyadicPointSet all = prefix(g, counts.back());
  std::vector<ScalingRow> rows;
  for (std::uint64_t n : counts) {
    const DyadicPointSet pts = all.head(n);
    ScalingRow row;
    row.count = n;
    row.report = evaluate_norm(pts, spec);
    row.value = row.report.value;
    row.exponent = shape.log_exponent;
    row.theorem = shape.label;
    const double nd = static_cast<double>(n);
    row.normalized = std::pow(nd, shape.n_power) * row.value / std::pow(std::log2(nd), shape.log_exponent);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::uint64_t> dyadic_counts(int nmin, int nmax) {
  require(nmin >= 1 && nmin <= nmax && nmax < 64, "dyadic_counts: need 1 <= nmin <= nmax < 64");
  std::vector<std::uint64_t> out;
  for (int n = nmin; n <= nmax; ++n) out.push_back(std::uint64_t{1} << n);
  return out;
}

void write_study_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "N,value,normalized,exponent,theorem\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", r.value, r.normalized, r.exponent);
    out << r.count << ',' << buf << ',' << r.theorem << '\n';
  }
}

}  // namespace hodisc
