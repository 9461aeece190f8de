#include "hodisc/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "hodisc/error.hpp"
#include "hodisc/levels.hpp"
#include "hodisc/parallel.hpp"

namespace hodisc {

namespace {

constexpr std::uint64_t exact_threshold = 256;

bool use_exact(Arithmetic mode, std::uint64_t count) {
  if (mode == Arithmetic::automatic) return count <= exact_threshold;
  return mode == Arithmetic::exact;
}

int bit_length(std::uint64_t v) { return 64 - std::countl_zero(v); }

double to_double(const Rational& r) { return r.convert_to<double>(); }

NormReport base_report(NormKind kind, std::uint64_t count, std::size_t dim) {
  NormReport r;
  r.kind = kind;
  r.count = count;
  r.dim = dim;
  return r;
}

void require_points(const DyadicPointSet& points, const char* who) {
  if (points.size() == 0 || points.dim() == 0)
    throw ValidationError(std::string(who) + ": empty point set");
}

// Sums of the Besov-type Haar aggregate. The weights reduce to Parseval for
// (p, q, s) = (2, 2, 0), and the L2 routes call this function with exactly
// those parameters so the two agree bit for bit.
struct HaarSum {
  double in_box = 0;
  double tail = 0;
};

HaarSum haar_sum(const HaarTable& table, double p, double q, double s, LevelRange range) {
  const auto levels = table.levels();
  std::vector<double> per_level(levels.size(), 0.0);
  const double weight_exp = (s - 1 / p + 1) * q;
  parallel_for(levels.size(), [&](std::size_t li) {
    const HaarLevel& lvl = levels[li];
    if (range == LevelRange::nonnegative &&
        std::any_of(lvl.j.begin(), lvl.j.end(), [](int v) { return v < 0; }))
      return;
    const int order = level_order(lvl.j);
    const double v = volume_coeff(lvl.j).to_double();
    double inner = 0;
    for (Int128 num : lvl.counting) inner += std::pow(std::abs(table.counting_double(num) - v), p);
    const double boxes = std::exp2(order);
    inner += (boxes - static_cast<double>(lvl.keys.size())) * std::pow(std::abs(v), p);
    per_level[li] = std::exp2(order * weight_exp) * std::pow(inner, q / p);
  });
  HaarSum out;
  for (double x : per_level) out.in_box += x;
  out.tail = volume_tail_sums(table, TailWeights::besov(p, q, s), range);
  return out;
}

Rational parseval_exact(const HaarTable& table, LevelRange range) {
  require(table.box_limit() >= table.precision(),
          "Parseval: box limit must cover the counting support");
  const std::uint64_t n = table.count();
  const int cs = table.counting_scale();
  Rational total = 0;
  for (const HaarLevel& lvl : table.levels()) {
    if (range == LevelRange::nonnegative &&
        std::any_of(lvl.j.begin(), lvl.j.end(), [](int v) { return v < 0; }))
      continue;
    const int order = level_order(lvl.j);
    const DyadicRational v = volume_coeff(lvl.j);
    const int vs = v.scale();
    const int common = std::max(cs, vs);
    const BigInt v_num = BigInt(static_cast<long long>(v.numerator())) * n << (common - vs);
    BigInt sq = 0;
    for (Int128 num : lvl.counting) {
      const BigInt x = (to_bigint(num) << (common - cs)) - v_num;
      sq += x * x;
    }
    BigInt den = BigInt(n) * n;
    den <<= 2 * common;
    BigInt empty = BigInt(1) << order;
    empty -= lvl.keys.size();
    total += Rational(sq << order, den);
    total += Rational(empty << order, BigInt(1) << (2 * vs));
  }
  return total + volume_tail_sums_l2_exact(table.dim(), table.box_limit(), range);
}

}  // namespace

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::l2: return "L2";
    case NormKind::lp: return "Lp";
    case NormKind::linf_star: return "Linf_star";
    case NormKind::bmo_dyadic: return "BMO_dyadic";
    case NormKind::d0_projection: return "D0_projection";
    case NormKind::besov: return "Besov";
    case NormKind::triebel_bracket: return "TriebelBracket";
    case NormKind::orlicz_exp: return "OrliczExp";
  }
  return "?";
}

NormKind parse_norm_kind(const std::string& name) {
  if (name == "l2" || name == "L2") return NormKind::l2;
  if (name == "lp" || name == "Lp") return NormKind::lp;
  if (name == "star" || name == "linf" || name == "Linf_star") return NormKind::linf_star;
  if (name == "bmo" || name == "BMO_dyadic") return NormKind::bmo_dyadic;
  if (name == "d0" || name == "D0_projection") return NormKind::d0_projection;
  if (name == "besov" || name == "Besov") return NormKind::besov;
  if (name == "triebel" || name == "TriebelBracket") return NormKind::triebel_bracket;
  if (name == "orlicz" || name == "OrliczExp") return NormKind::orlicz_exp;
  throw ValidationError("unknown norm kind '" + name +
                        "' (expected l2, lp, star, bmo, d0, besov, triebel, orlicz)");
}

std::string to_string(Estimate e) {
  switch (e) {
    case Estimate::exact: return "exact";
    case Estimate::approximate: return "approximate";
    case Estimate::lower: return "lower";
    case Estimate::upper: return "upper";
    case Estimate::equivalent: return "equivalent";
  }
  return "?";
}

// ---- L2, closed form ----

Rational l2_warnock_squared_exact(const DyadicPointSet& points) {
  require_points(points, "l2_warnock");
  const DyadicPointSet pts = points.with_precision(points.effective_precision());
  const std::size_t d = pts.dim();
  const std::size_t n = pts.size();
  const int e = pts.precision_bits();
  const BigInt one = BigInt(1) << e;
  const BigInt one_sq = BigInt(1) << (2 * e);

  BigInt single = 0;  // sum_k prod_i (4^e - a^2)
  for (std::size_t k = 0; k < n; ++k) {
    BigInt prod = 1;
    for (std::size_t i = 0; i < d; ++i) {
      const BigInt a = pts.num(k, i);
      prod *= one_sq - a * a;
    }
    single += prod;
  }
  // sum_{k,l} prod_i (2^e - max); the diagonal once, off-diagonal pairs twice.
  std::vector<BigInt> rows(n);
  parallel_for(n, [&](std::size_t k) {
    BigInt acc = 0;
    for (std::size_t l = k; l < n; ++l) {
      BigInt prod = 1;
      for (std::size_t i = 0; i < d; ++i) prod *= one - std::max(pts.num(k, i), pts.num(l, i));
      acc += l == k ? prod : 2 * prod;
    }
    rows[k] = std::move(acc);
  });
  BigInt pair = 0;
  for (const auto& r : rows) pair += r;

  BigInt three_d = 1;
  for (std::size_t i = 0; i < d; ++i) three_d *= 3;
  const BigInt nn = n;
  Rational out(1, three_d);
  out -= Rational(2 * single, nn * (BigInt(1) << (d + 2 * e * d)));
  out += Rational(pair, nn * nn * (BigInt(1) << (e * d)));
  return out;
}

double l2_warnock_squared(const DyadicPointSet& points) {
  require_points(points, "l2_warnock");
  const std::size_t d = points.dim();
  const std::size_t n = points.size();
  std::vector<double> z(points.coords().size());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < d; ++i) z[k * d + i] = points.value(k, i);
  double single = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double prod = 1;
    for (std::size_t i = 0; i < d; ++i) prod *= (1 - z[k * d + i] * z[k * d + i]) / 2;
    single += prod;
  }
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t k) {
    double acc = 0;
    for (std::size_t l = 0; l < n; ++l) {
      double prod = 1;
      for (std::size_t i = 0; i < d; ++i) prod *= 1 - std::max(z[k * d + i], z[l * d + i]);
      acc += prod;
    }
    rows[k] = acc;
  });
  double pair = 0;
  for (double r : rows) pair += r;
  const double nd = static_cast<double>(n);
  return std::pow(3.0, -static_cast<double>(d)) - 2 / nd * single + pair / (nd * nd);
}

NormReport l2_warnock(const DyadicPointSet& points, Arithmetic mode) {
  require_points(points, "l2_warnock");
  NormReport r = base_report(NormKind::l2, points.size(), points.dim());
  r.p = 2;
  r.method = "warnock";
  if (use_exact(mode, points.size())) {
    const Rational sq = l2_warnock_squared_exact(points);
    r.value = std::sqrt(to_double(sq));
    r.exact_square = to_string(sq);
  } else {
    r.value = std::sqrt(std::max(0.0, l2_warnock_squared(points)));
    r.estimate = Estimate::approximate;
  }
  return r;
}

// ---- L2 and D0 via Parseval ----

Rational l2_parseval_squared_exact(const HaarTable& table) {
  return parseval_exact(table, LevelRange::all);
}

NormReport l2_parseval(const HaarTable& table, Arithmetic mode) {
  NormReport r = base_report(NormKind::l2, table.count(), table.dim());
  r.p = 2;
  r.method = "parseval";
  r.box_limit = table.box_limit();
  if (use_exact(mode, table.count())) {
    const Rational sq = parseval_exact(table, LevelRange::all);
    r.value = std::sqrt(to_double(sq));
    r.exact_square = to_string(sq);
    r.tail_value = to_double(volume_tail_sums_l2_exact(table.dim(), table.box_limit()));
  } else {
    const HaarSum h = haar_sum(table, 2, 2, 0, LevelRange::all);
    r.value = std::pow(h.in_box + h.tail, 0.5);
    r.tail_value = h.tail;
    r.estimate = Estimate::approximate;
  }
  return r;
}

Rational d0_projection_squared_exact(const HaarTable& table) {
  return parseval_exact(table, LevelRange::nonnegative);
}

NormReport d0_projection_norm(const HaarTable& table, Arithmetic mode) {
  NormReport r = base_report(NormKind::d0_projection, table.count(), table.dim());
  r.method = "parseval-nonnegative";
  r.box_limit = table.box_limit();
  if (use_exact(mode, table.count())) {
    const Rational sq = parseval_exact(table, LevelRange::nonnegative);
    r.value = std::sqrt(to_double(sq));
    r.exact_square = to_string(sq);
    r.tail_value = to_double(
        volume_tail_sums_l2_exact(table.dim(), table.box_limit(), LevelRange::nonnegative));
  } else {
    const HaarSum h = haar_sum(table, 2, 2, 0, LevelRange::nonnegative);
    r.value = std::pow(h.in_box + h.tail, 0.5);
    r.tail_value = h.tail;
    r.estimate = Estimate::approximate;
  }
  return r;
}

// ---- Lp by grid quadrature ----

namespace {

struct Grid {
  std::vector<std::vector<double>> breaks;  // per axis, ascending, from 0 to 1
  std::size_t cells = 1;
};

Grid make_grid(const DyadicPointSet& points, int resolution) {
  Grid g;
  for (std::size_t i = 0; i < points.dim(); ++i) {
    std::vector<double> b;
    b.reserve(static_cast<std::size_t>(resolution) + 1 + points.size());
    for (int k = 0; k <= resolution; ++k) b.push_back(static_cast<double>(k) / resolution);
    for (std::size_t k = 0; k < points.size(); ++k) b.push_back(points.value(k, i));
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    g.cells *= b.size() - 1;
    g.breaks.push_back(std::move(b));
  }
  return g;
}

// Sum over cells of the Gauss-Legendre (order 2 per axis) integral of |D|^p, for each p.
std::vector<double> grid_integrals(const DyadicPointSet& points, const std::vector<double>& ps,
                                   int resolution) {
  const std::size_t d = points.dim();
  const std::size_t n = points.size();
  const Grid g = make_grid(points, resolution);
  require(g.cells <= (std::size_t{1} << 26),
          "lp_grid: " + std::to_string(g.cells) + " cells exceed the 2^26 limit; lower the resolution");

  // Inclusive count table over breakpoint indices: cnt[c] = #{k : idx(z_k) <= c}.
  std::vector<std::size_t> extent(d), stride(d);
  std::size_t total = 1;
  for (std::size_t i = d; i > 0; --i) {
    stride[i - 1] = total;
    extent[i - 1] = g.breaks[i - 1].size();
    total *= extent[i - 1];
  }
  std::vector<std::uint32_t> cnt(total, 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t at = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const auto& b = g.breaks[i];
      at += static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), points.value(k, i)) -
                                     b.begin()) * stride[i];
    }
    ++cnt[at];
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t at = 0; at < total; ++at)
      if ((at / stride[i]) % extent[i] > 0) cnt[at] += cnt[at - stride[i]];

  const double off = 0.5 / std::sqrt(3.0);
  const std::size_t nodes = std::size_t{1} << d;
  const std::size_t slices = extent[0] - 1;
  std::vector<std::vector<double>> partial(slices, std::vector<double>(ps.size(), 0.0));
  parallel_for(slices, [&](std::size_t c0) {
    std::vector<std::size_t> c(d, 0);
    c[0] = c0;
    std::vector<double> x0(d), x1(d);
    auto& acc = partial[c0];
    std::size_t rest = 1;
    for (std::size_t i = 1; i < d; ++i) rest *= extent[i] - 1;
    for (std::size_t r = 0; r < rest; ++r) {
      for (std::size_t i = d, left = r; i > 1; --i) {
        c[i - 1] = left % (extent[i - 1] - 1);
        left /= extent[i - 1] - 1;
      }
      std::size_t at = 0;
      double vol = 1;
      for (std::size_t i = 0; i < d; ++i) {
        const double lo = g.breaks[i][c[i]], hi = g.breaks[i][c[i] + 1];
        const double mid = (lo + hi) / 2, h = hi - lo;
        x0[i] = mid - off * h;
        x1[i] = mid + off * h;
        vol *= h;
        at += c[i] * stride[i];
      }
      const double frac = static_cast<double>(cnt[at]) / static_cast<double>(n);
      const double w = vol / static_cast<double>(nodes);
      for (std::size_t node = 0; node < nodes; ++node) {
        double prod = 1;
        for (std::size_t i = 0; i < d; ++i) prod *= (node >> i) & 1 ? x1[i] : x0[i];
        const double dv = std::abs(frac - prod);
        for (std::size_t pi = 0; pi < ps.size(); ++pi) acc[pi] += w * std::pow(dv, ps[pi]);
      }
    }
  });
  std::vector<double> out(ps.size(), 0.0);
  for (const auto& part : partial)
    for (std::size_t pi = 0; pi < ps.size(); ++pi) out[pi] += part[pi];
  return out;
}

}  // namespace

LpGridResult lp_grid_multi(const DyadicPointSet& points, const std::vector<double>& p,
                           int resolution) {
  require_points(points, "lp_grid");
  require(resolution >= 2, "lp_grid: resolution must be >= 2");
  require(!p.empty(), "lp_grid: no exponents given");
  for (double v : p)
    require(v >= 1 && std::isfinite(v), "lp_grid: p = " + std::to_string(v) + " must satisfy 1 <= p < inf");
  const auto fine = grid_integrals(points, p, resolution);
  const auto coarse = grid_integrals(points, p, resolution / 2);
  LpGridResult out;
  out.p = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = std::pow(fine[i], 1 / p[i]);
    const double b = std::pow(coarse[i], 1 / p[i]);
    out.value.push_back(a);
    out.delta.push_back(std::abs(a - b));
  }
  return out;
}

NormReport lp_grid(const DyadicPointSet& points, double p, int resolution) {
  const LpGridResult g = lp_grid_multi(points, {p}, resolution);
  NormReport r = base_report(NormKind::lp, points.size(), points.dim());
  r.p = p;
  r.method = "grid-gauss-legendre-2";
  r.value = g.value[0];
  r.refinement_delta = g.delta[0];
  r.resolution = resolution;
  r.estimate = Estimate::approximate;
  return r;
}

// ---- star discrepancy ----

namespace {

template <class Int>
Int star_numerator_2d(const std::vector<std::uint64_t>& a1, const std::vector<std::uint64_t>& a2,
                      std::uint64_t one, std::uint64_t n, int scale_bits) {
  // Critical values per axis: coordinates and 1 (= 2^e).
  auto axis = [&](const std::vector<std::uint64_t>& a) {
    std::vector<std::uint64_t> g(a);
    g.push_back(one);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
  };
  const auto g1 = axis(a1), g2 = axis(a2);
  auto index = [](const std::vector<std::uint64_t>& g, std::uint64_t v) {
    return static_cast<std::size_t>(std::lower_bound(g.begin(), g.end(), v) - g.begin());
  };
  std::vector<std::pair<std::size_t, std::size_t>> pts(a1.size());
  for (std::size_t k = 0; k < a1.size(); ++k) pts[k] = {index(g1, a1[k]), index(g2, a2[k])};
  std::sort(pts.begin(), pts.end());

  const Int full = Int(1) << scale_bits;  // 2^(2e)
  std::vector<std::uint64_t> hist(g2.size(), 0);  // points with idx1 < u
  std::vector<std::uint64_t> hist_c(g2.size(), 0);
  Int best = 0;
  std::size_t next = 0;
  for (std::size_t u = 0; u < g1.size(); ++u) {
    hist_c = hist;
    std::size_t stop = next;
    while (stop < pts.size() && pts[stop].first == u) ++hist_c[pts[stop++].second];
    std::uint64_t closed = 0, open = 0;
    for (std::size_t v = 0; v < g2.size(); ++v) {
      closed += hist_c[v];
      const Int vol = Int(g1[u]) * Int(g2[v]) * Int(n);
      const Int over = Int(closed) * full - vol;
      const Int under = vol - Int(open) * full;
      best = std::max(best, std::max(over, under));
      open += hist[v];
    }
    hist = hist_c;
    next = stop;
  }
  return best;
}

}  // namespace

Rational star_discrepancy_exact_value(const DyadicPointSet& points) {
  require_points(points, "star_discrepancy_exact");
  const std::size_t d = points.dim();
  if (d > 2)
    throw ValidationError("star_discrepancy_exact: d = " + std::to_string(d) +
                          " > 2 is not supported; use lp_grid with large p as a fallback");
  require(points.size() <= (std::size_t{1} << 14), "star_discrepancy_exact: N > 2^14");
  const DyadicPointSet pts = points.with_precision(points.effective_precision());
  const int e = pts.precision_bits();
  require(e <= 62, "star_discrepancy_exact: precision above 62 bits");
  const std::uint64_t n = pts.size();
  const std::uint64_t one = std::uint64_t{1} << e;
  if (d == 1) {
    std::vector<std::uint64_t> a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = pts.num(k, 0);
    std::sort(a.begin(), a.end());
    std::vector<std::uint64_t> g(a);
    g.push_back(one);
    g.erase(std::unique(g.begin(), g.end()), g.end());
    Int128 best = 0;
    for (std::uint64_t y : g) {
      const auto closed = static_cast<Int128>(std::upper_bound(a.begin(), a.end(), y) - a.begin());
      const auto open = static_cast<Int128>(std::lower_bound(a.begin(), a.end(), y) - a.begin());
      const Int128 vol = static_cast<Int128>(y) * n;
      best = std::max({best, closed * one - vol, vol - open * one});
    }
    return Rational(to_bigint(best), BigInt(n) << e);
  }
  std::vector<std::uint64_t> a1(n), a2(n);
  for (std::size_t k = 0; k < n; ++k) {
    a1[k] = pts.num(k, 0);
    a2[k] = pts.num(k, 1);
  }
  const BigInt den = BigInt(n) << (2 * e);
  if (2 * e + bit_length(n) + 2 <= 126)
    return Rational(to_bigint(star_numerator_2d<Int128>(a1, a2, one, n, 2 * e)), den);
  return Rational(star_numerator_2d<BigInt>(a1, a2, one, n, 2 * e), den);
}

NormReport star_discrepancy_exact(const DyadicPointSet& points) {
  const Rational v = star_discrepancy_exact_value(points);
  NormReport r = base_report(NormKind::linf_star, points.size(), points.dim());
  r.method = "critical-boxes";
  r.value = to_double(v);
  r.exact_square = to_string(Rational(v * v));
  return r;
}

// ---- dyadic BMO ----

NormReport bmo_dyadic(const HaarTable& table, std::optional<int> depth) {
  const std::size_t d = table.dim();
  const int J = table.box_limit();
  require(J >= table.precision(), "bmo_dyadic: box limit must cover the counting support");
  const int ld = bit_length(table.count() - 1);  // ceil(ld N)
  const int D = depth.value_or(std::min(J, ld));
  require(D >= 0, "bmo_dyadic: depth must be >= 0");
  require(D <= J, "bmo_dyadic: depth " + std::to_string(D) + " exceeds the box limit " +
                      std::to_string(J));
  require(static_cast<long>(d) * D <= 40, "bmo_dyadic: d * depth too large");

  // Test boxes U = I_{j',m'} with j' in N_0^d, |j'| <= depth. For U,
  // lambda(U)^-1 sum_{I subset U} 2^|j| <D,h>^2 = prod 4^-j'_i / 12
  //   + 2^|j'| sum_{stored (j,m), j >= j', I_{j,m} subset U} 2^|j| c (c - 2v).
  std::vector<std::vector<int>> targets;
  for (int total = 0; total <= D; ++total)
    for_each_composition(d, total, [&](const std::vector<int>& j) { targets.push_back(j); });

  struct Entry {
    const HaarLevel* level;
    double weight;  // 2^|j| c (c - 2v)
    std::vector<std::uint64_t> m;
  };
  std::vector<std::vector<Entry>> by_level;
  for (const HaarLevel& lvl : table.levels()) {
    if (lvl.keys.empty() || std::any_of(lvl.j.begin(), lvl.j.end(), [](int v) { return v < 0; }))
      continue;
    const double v = volume_coeff(lvl.j).to_double();
    const double scale = std::exp2(level_order(lvl.j));
    std::vector<Entry> entries;
    entries.reserve(lvl.keys.size());
    for (std::size_t e = 0; e < lvl.keys.size(); ++e) {
      const double c = table.counting_double(lvl.counting[e]);
      entries.push_back({&lvl, scale * c * (c - 2 * v), HaarTable::unpack(lvl.j, lvl.keys[e])});
    }
    by_level.push_back(std::move(entries));
  }

  std::vector<double> best(targets.size(), 0.0);
  parallel_for(targets.size(), [&](std::size_t ti) {
    const std::vector<int>& jp = targets[ti];
    const int order = level_order(jp);
    std::vector<double> acc(std::size_t{1} << order, 0.0);
    std::vector<char> touched(acc.size(), 0);
    std::vector<std::uint64_t> mp(d);
    for (const auto& entries : by_level) {
      const auto& j = entries.front().level->j;
      bool below = true;
      for (std::size_t i = 0; i < d; ++i) below = below && j[i] >= jp[i];
      if (!below) continue;
      for (const Entry& en : entries) {
        for (std::size_t i = 0; i < d; ++i) mp[i] = en.m[i] >> (j[i] - jp[i]);
        const std::uint64_t key = HaarTable::pack(jp, mp);
        acc[key] += en.weight;
        touched[key] = 1;
      }
    }
    double base = 1;
    for (int v : jp) base *= std::exp2(-2.0 * v) / 12;
    const double boost = std::exp2(order);
    // Boxes without interior points carry only volume parts.
    double m = -1;
    for (std::size_t k = 0; k < acc.size(); ++k) m = std::max(m, touched[k] ? base + boost * acc[k] : base);
    best[ti] = m;
  });
  NormReport r = base_report(NormKind::bmo_dyadic, table.count(), d);
  r.method = "dyadic-test-boxes";
  r.box_limit = J;
  r.depth = D;
  r.estimate = Estimate::lower;
  r.value = std::sqrt(std::max(0.0, *std::max_element(best.begin(), best.end())));
  return r;
}

// ---- Besov and Triebel-Lizorkin ----

void check_besov_parameters(double p, double q, double s) {
  require(p > 0 && q > 0 && std::isfinite(p) && std::isfinite(q),
          "Besov: p and q must be positive and finite");
  const double lo = 1 / p - 1, hi = std::min(1 / p, 1.0);
  if (!(s > lo && s < hi))
    throw ValidationError("Besov: s = " + std::to_string(s) + " outside the admissible range (" +
                          std::to_string(lo) + ", " + std::to_string(hi) + ") for p = " +
                          std::to_string(p));
}

NormReport besov_quasinorm(const HaarTable& table, double p, double q, double s) {
  check_besov_parameters(p, q, s);
  const HaarSum h = haar_sum(table, p, q, s, LevelRange::all);
  NormReport r = base_report(NormKind::besov, table.count(), table.dim());
  r.p = p;
  r.q = q;
  r.s = s;
  r.method = "haar-characterisation";
  r.box_limit = table.box_limit();
  r.tail_value = h.tail;
  r.value = std::pow(h.in_box + h.tail, 1 / q);
  r.estimate = Estimate::equivalent;
  return r;
}

std::pair<NormReport, NormReport> triebel_bracket(const HaarTable& table, double p, double q,
                                                  double s) {
  const double lo = std::min(p, q), hi = std::max(p, q);
  check_besov_parameters(lo, q, s);
  check_besov_parameters(hi, q, s);
  NormReport lower = besov_quasinorm(table, lo, q, s);
  NormReport upper = besov_quasinorm(table, hi, q, s);
  for (NormReport* r : {&lower, &upper}) {
    r->kind = NormKind::triebel_bracket;
    r->p = p;
  }
  lower.method = "besov-p=" + std::to_string(lo);
  upper.method = "besov-p=" + std::to_string(hi);
  lower.estimate = Estimate::lower;
  upper.estimate = Estimate::upper;
  return {lower, upper};
}

// ---- exponential Orlicz ----

std::vector<double> default_orlicz_grid(std::uint64_t count) {
  require(count >= 1, "orlicz: N must be >= 1");
  const double ld = std::log2(static_cast<double>(count));
  const int top = ld > 1 ? static_cast<int>(std::ceil(std::log2(ld) - 1e-12)) : 0;
  std::vector<double> grid;
  for (double p = 2; p <= 4 * std::exp2(top); p *= 2) grid.push_back(p);
  return grid;
}

NormReport orlicz_exp_estimate(const DyadicPointSet& points, double beta,
                               std::vector<double> p_grid, int resolution) {
  require_points(points, "orlicz_exp_estimate");
  require(beta > 0, "orlicz_exp_estimate: beta must be > 0");
  if (p_grid.empty()) p_grid = default_orlicz_grid(points.size());
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    require(p_grid[i] > 1, "orlicz_exp_estimate: grid values must exceed 1");
    require(i == 0 || p_grid[i] > p_grid[i - 1], "orlicz_exp_estimate: grid must be ascending");
  }
  const LpGridResult lp = lp_grid_multi(points, p_grid, resolution);
  NormReport r = base_report(NormKind::orlicz_exp, points.size(), points.dim());
  r.beta = beta;
  r.method = "sup-p-grid";
  r.resolution = resolution;
  r.p_grid = p_grid;
  r.estimate = Estimate::lower;
  double delta = 0;
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    const double w = std::pow(p_grid[i], -1 / beta);
    if (i == 0 || w * lp.value[i] > r.value) {
      r.value = w * lp.value[i];
      r.argmax_p = p_grid[i];
    }
    delta = std::max(delta, w * lp.delta[i]);
  }
  r.refinement_delta = delta;
  return r;
}

// ---- dispatch ----

NormReport evaluate_norm(const DyadicPointSet& points, const NormSpec& spec, const HaarTable* table,
                         NormReport* lower) {
  require_points(points, "norm");
  const bool needs_table = spec.kind == NormKind::bmo_dyadic || spec.kind == NormKind::d0_projection ||
                           spec.kind == NormKind::besov || spec.kind == NormKind::triebel_bracket ||
                           (spec.kind == NormKind::l2 && spec.method == "parseval");
  std::optional<HaarTable> own;
  if (needs_table && table == nullptr) {
    own = build_table(points, spec.box_limit.value_or(points.effective_precision()));
    table = &*own;
  }
  if (table != nullptr)
    require(table->count() == points.size() && table->dim() == points.dim(),
            "norm: Haar table does not belong to the point set");
  switch (spec.kind) {
    case NormKind::l2:
      if (spec.method.empty() || spec.method == "warnock") return l2_warnock(points, spec.arithmetic);
      if (spec.method == "parseval") return l2_parseval(*table, spec.arithmetic);
      throw ValidationError("l2: unknown method '" + spec.method + "' (warnock or parseval)");
    case NormKind::lp: return lp_grid(points, spec.p, spec.resolution);
    case NormKind::linf_star: return star_discrepancy_exact(points);
    case NormKind::bmo_dyadic: return bmo_dyadic(*table, spec.depth);
    case NormKind::d0_projection: return d0_projection_norm(*table, spec.arithmetic);
    case NormKind::besov: return besov_quasinorm(*table, spec.p, spec.q, spec.s);
    case NormKind::triebel_bracket: {
      auto [lo, hi] = triebel_bracket(*table, spec.p, spec.q, spec.s);
      if (lower != nullptr) *lower = lo;
      return hi;
    }
    case NormKind::orlicz_exp:
      return orlicz_exp_estimate(points, spec.beta, spec.p_grid, spec.resolution);
  }
  throw std::logic_error("unreachable norm kind");
}

}  // namespace hodisc
