#include "hodisc/haar.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hodisc/error.hpp"
#include "hodisc/levels.hpp"
#include "hodisc/parallel.hpp"

namespace hodisc {

namespace {

int ceil_log2(std::uint64_t v) {
  int k = 0;
  while (k < 64 && (std::uint64_t{1} << k) < v) ++k;
  return k;
}

// One-dimensional series term(j) = first * ratio^j for j >= 0, plus the j = -1 term.
struct LevelSeries {
  double minus_one;
  double first;
  double ratio;
};

LevelSeries series_for(const TailWeights& w) {
  if (w.kind == TailWeights::Kind::l2) return {0.25, 1.0 / 16.0, 0.25};
  require(w.s < 1, "volume tail: smoothness s must be < 1 for the series to converge");
  return {std::exp2(-w.q), std::exp2(-2 * w.q), std::exp2(w.q * (w.s - 1))};
}

}  // namespace

int HaarIndex::order() const { return level_order(j); }

void HaarIndex::validate() const {
  require(!j.empty() && j.size() == m.size(), "HaarIndex: j and m must have equal nonzero length");
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i] >= -1 && j[i] < 64, "HaarIndex: level " + std::to_string(j[i]) + " out of range");
    const std::uint64_t limit = j[i] <= 0 ? 1 : std::uint64_t{1} << j[i];
    if (m[i] >= limit)
      throw ValidationError("HaarIndex: m_" + std::to_string(i + 1) + " = " + std::to_string(m[i]) +
                            " outside D_j for j = " + std::to_string(j[i]));
  }
}

DyadicRational volume_coeff(std::span<const int> j) {
  int scale = 0;
  int sign = 1;
  for (int v : j) {
    require(v >= -1, "volume_coeff: level below -1");
    if (v == -1) {
      scale += 1;
    } else {
      scale += 2 * v + 2;
      sign = -sign;
    }
  }
  return DyadicRational(sign, scale);
}

Int128 counting_numerator_1d(std::uint64_t num, int bits, int j, std::uint64_t m) {
  const Int128 z = num;
  if (j == -1) return (Int128{1} << bits) - z;
  if (j >= bits) return 0;  // z sits on the level-j grid, never interior
  const int shift = bits - j;
  const Int128 a = static_cast<Int128>(m) << shift;
  const Int128 w = Int128{1} << shift;
  if (z <= a || z >= a + w) return 0;
  if (z <= a + w / 2) return a - z;
  return -(a + w - z);
}

DyadicRational counting_coeff_1d(std::uint64_t num, int bits, int j, std::uint64_t m) {
  require(bits >= 0 && bits <= 64, "counting_coeff_1d: precision must lie in [0, 64]");
  require(bits == 64 || num < (std::uint64_t{1} << bits), "counting_coeff_1d: z outside [0,1)");
  HaarIndex idx{{j}, {m}};
  idx.validate();
  return DyadicRational(counting_numerator_1d(num, bits, j, m), bits);
}

HaarCoefficient haar_coefficient(const DyadicPointSet& points, const HaarIndex& idx) {
  idx.validate();
  require(idx.j.size() == points.dim(), "haar_coefficient: index dimension differs from points");
  require(points.size() >= 1, "haar_coefficient: empty point set");
  const int e = points.effective_precision();
  const int shift = points.precision_bits() - e;
  DyadicRational counting;
  for (std::size_t k = 0; k < points.size(); ++k) {
    DyadicRational prod(1, 0);
    for (std::size_t i = 0; i < points.dim(); ++i) {
      prod = prod * DyadicRational(counting_numerator_1d(points.num(k, i) >> shift, e, idx.j[i], idx.m[i]), e);
      if (prod.is_zero()) break;
    }
    counting = counting + prod;
  }
  counting = counting * DyadicRational(1, 0, points.size());
  return {counting, volume_coeff(idx.j)};
}

std::uint64_t HaarTable::pack(std::span<const int> j, std::span<const std::uint64_t> m) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < j.size(); ++i)
    if (j[i] > 0) key = (j[i] >= 64 ? 0 : key << j[i]) | m[i];
  return key;
}

std::vector<std::uint64_t> HaarTable::unpack(std::span<const int> j, std::uint64_t key) {
  std::vector<std::uint64_t> m(j.size(), 0);
  for (std::size_t i = j.size(); i > 0; --i) {
    const int w = j[i - 1];
    if (w <= 0) continue;
    m[i - 1] = w >= 64 ? key : key & ((std::uint64_t{1} << w) - 1);
    key = w >= 64 ? 0 : key >> w;
  }
  return m;
}

std::size_t HaarTable::level_slot(std::span<const int> j) const {
  std::size_t slot = 0;
  for (int v : j) slot = slot * static_cast<std::size_t>(box_limit_ + 1) + static_cast<std::size_t>(v + 1);
  return slot;
}

const HaarLevel& HaarTable::level(std::span<const int> j) const {
  require(j.size() == dim_, "HaarTable::level: dimension mismatch");
  for (int v : j) require(v >= -1 && v < box_limit_, "HaarTable::level: level outside the box");
  return levels_[level_slot(j)];
}

std::size_t HaarTable::stored_entries() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.keys.size();
  return n;
}

DyadicRational HaarTable::counting_value(Int128 numerator) const {
  return DyadicRational(numerator, counting_scale(), count_);
}

double HaarTable::counting_double(Int128 numerator) const {
  return std::ldexp(static_cast<double>(numerator) / static_cast<double>(count_), -counting_scale());
}

HaarCoefficient HaarTable::coefficient(const HaarIndex& idx) const {
  idx.validate();
  require(idx.j.size() == dim_, "HaarTable::coefficient: dimension mismatch");
  HaarCoefficient c{DyadicRational(), volume_coeff(idx.j)};
  for (int v : idx.j)
    if (v >= box_limit_) return c;
  const HaarLevel& l = levels_[level_slot(idx.j)];
  const std::uint64_t key = pack(idx.j, idx.m);
  const auto it = std::lower_bound(l.keys.begin(), l.keys.end(), key);
  if (it != l.keys.end() && *it == key)
    c.counting = counting_value(l.counting[static_cast<std::size_t>(it - l.keys.begin())]);
  return c;
}

HaarTable build_table(const DyadicPointSet& points, std::optional<int> box_limit,
                      std::size_t max_entries) {
  const std::size_t d = points.dim();
  const std::size_t n = points.size();
  require(n >= 1, "build_table: empty point set");
  const int e = points.effective_precision();
  const int J = box_limit.value_or(points.precision_bits());
  require(J >= 0, "build_table: box limit must be >= 0");
  if (J < e)
    throw ValidationError("build_table: box limit " + std::to_string(J) +
                          " is below the effective precision " + std::to_string(e) +
                          "; counting parts would leak outside the box");
  require(static_cast<int>(d) * e + ceil_log2(n + 1) <= 125,
          "build_table: d * precision too large for exact 128-bit numerators");
  const int support = std::min(J, e);  // levels 0..support-1 may carry counting parts
  require(static_cast<long>(d) * std::max(support - 1, 0) <= 64,
          "build_table: level orders exceed the 64-bit position key");
  const double total_levels = std::pow(static_cast<double>(J + 1), static_cast<double>(d));
  require(total_levels <= double(std::size_t{1} << 24), "build_table: too many level vectors");
  const double candidates =
      std::pow(static_cast<double>(support + 1), static_cast<double>(d)) * static_cast<double>(n);
  if (candidates > static_cast<double>(max_entries))
    throw ValidationError("build_table: " + std::to_string(static_cast<long double>(candidates)) +
                          " candidate entries exceed the cap of " + std::to_string(max_entries));

  HaarTable t;
  t.dim_ = d;
  t.count_ = n;
  t.box_limit_ = J;
  t.precision_ = e;

  // Per point, coordinate and level l in [-1, support-1]: 1-d counting numerator and position.
  const std::size_t width = static_cast<std::size_t>(support) + 1;
  const int shift = points.precision_bits() - e;
  std::vector<Int128> c1(n * d * width);
  std::vector<std::uint64_t> m1(n * d * width);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < d; ++i) {
      const std::uint64_t z = points.num(k, i) >> shift;
      for (int l = -1; l < support; ++l) {
        const std::size_t at = (k * d + i) * width + static_cast<std::size_t>(l + 1);
        const std::uint64_t m = l <= 0 ? 0 : z >> (e - l);
        m1[at] = m;
        c1[at] = counting_numerator_1d(z, e, l, m);
      }
    }

  std::vector<std::vector<int>> all;
  for_each_level(d, -1, J - 1, [&](const std::vector<int>& j) { all.push_back(j); });
  t.levels_.resize(all.size());
  parallel_for(all.size(), [&](std::size_t s) {
    HaarLevel& lvl = t.levels_[s];
    lvl.j = all[s];
    for (int v : lvl.j)
      if (v >= support) return;
    std::vector<std::pair<std::uint64_t, Int128>> items;
    items.reserve(n);
    std::vector<std::uint64_t> m(d);
    for (std::size_t k = 0; k < n; ++k) {
      Int128 prod = 1;
      for (std::size_t i = 0; i < d && prod != 0; ++i) {
        const std::size_t at = (k * d + i) * width + static_cast<std::size_t>(lvl.j[i] + 1);
        prod *= c1[at];
        m[i] = m1[at];
      }
      if (prod != 0) items.emplace_back(HaarTable::pack(lvl.j, m), prod);
    }
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t a = 0; a < items.size();) {
      Int128 sum = 0;
      std::size_t b = a;
      for (; b < items.size() && items[b].first == items[a].first; ++b) sum += items[b].second;
      if (sum != 0) {
        lvl.keys.push_back(items[a].first);
        lvl.counting.push_back(sum);
      }
      a = b;
    }
  });
  return t;
}

double volume_tail_sums(std::size_t dim, int box_limit, const TailWeights& w, LevelRange range) {
  require(box_limit >= 0, "volume_tail_sums: box limit must be >= 0");
  const LevelSeries s = series_for(w);
  const double head = range == LevelRange::all ? s.minus_one : 0.0;
  const double geometric = s.first / (1 - s.ratio);
  const double full = head + geometric;
  const double outside = geometric * std::pow(s.ratio, box_limit);  // levels j >= J
  const double inside = full - outside;
  // prod(full) - prod(inside) = sum_i full^(i-1) * outside * inside^(d-i)
  double tail = 0;
  for (std::size_t i = 0; i < dim; ++i)
    tail += std::pow(full, static_cast<double>(i)) * outside *
            std::pow(inside, static_cast<double>(dim - 1 - i));
  return tail;
}

Rational volume_tail_sums_l2_exact(std::size_t dim, int box_limit, LevelRange range) {
  require(box_limit >= 0, "volume_tail_sums: box limit must be >= 0");
  const Rational head = range == LevelRange::all ? Rational(1, 4) : Rational(0);
  const Rational geometric(1, 12);  // sum_{j>=0} 2^{2j} 2^{-4j-4}
  BigInt four_j = 1;
  four_j <<= 2 * box_limit;
  const Rational outside = geometric / Rational(four_j);
  const Rational full = head + geometric;
  const Rational inside = full - outside;
  Rational pf = 1, pi = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    pf *= full;
    pi *= inside;
  }
  return pf - pi;
}

double volume_tail_sums(const HaarTable& table, const TailWeights& w, LevelRange range) {
  if (table.box_limit() < table.precision())
    throw ValidationError("volume_tail_sums: box limit " + std::to_string(table.box_limit()) +
                          " below precision " + std::to_string(table.precision()) +
                          "; the tail would not be volume-only");
  return volume_tail_sums(table.dim(), table.box_limit(), w, range);
}

void write_haar_csv(std::ostream& out, const HaarTable& table) {
  const std::size_t d = table.dim();
  out << "# hodisc-haar v1 d=" << d << " N=" << table.count() << " b=" << table.precision()
      << " J=" << table.box_limit() << '\n';
  for (std::size_t i = 1; i <= d; ++i) out << "j_" << i << ',';
  for (std::size_t i = 1; i <= d; ++i) out << "m_" << i << ',';
  out << "counting_num,counting_scale,volume_num,volume_scale,divisor\n";
  for (const auto& lvl : table.levels()) {
    const DyadicRational vol = volume_coeff(lvl.j);
    for (std::size_t e = 0; e < lvl.keys.size(); ++e) {
      const auto m = HaarTable::unpack(lvl.j, lvl.keys[e]);
      // Scale carries the power of two; the divisor column stays N.
      const Int128 num = lvl.counting[e];
      for (int v : lvl.j) out << v << ',';
      for (auto v : m) out << v << ',';
      out << to_string(num) << ',' << table.counting_scale() << ',' << to_string(vol.numerator())
          << ',' << vol.scale() << ',' << table.count() << '\n';
    }
  }
}

HaarTable read_haar_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# hodisc-haar v1", 0) != 0)
    throw ValidationError("haar CSV: missing '# hodisc-haar v1' header");
  std::map<std::string, std::string> f;
  std::istringstream hs(line.substr(std::string("# hodisc-haar v1").size()));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    require(eq != std::string::npos, "haar CSV: bad header field '" + tok + "'");
    f[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"d", "N", "b", "J"})
    require(f.count(key) > 0, std::string("haar CSV: header missing ") + key);
  HaarTable t;
  t.dim_ = std::stoul(f["d"]);
  t.count_ = std::stoull(f["N"]);
  t.precision_ = std::stoi(f["b"]);
  t.box_limit_ = std::stoi(f["J"]);
  require(t.dim_ >= 1 && t.count_ >= 1, "haar CSV: d and N must be >= 1");
  require(t.box_limit_ >= t.precision_, "haar CSV: J below b");
  for_each_level(t.dim_, -1, t.box_limit_ - 1, [&](const std::vector<int>& j) {
    t.levels_.push_back(HaarLevel{j, {}, {}});
  });
  std::getline(in, line);  // column names
  const std::size_t d = t.dim_;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    require(cells.size() == 2 * d + 5, "haar CSV: row '" + line + "' has the wrong cell count");
    HaarIndex idx;
    for (std::size_t i = 0; i < d; ++i) idx.j.push_back(std::stoi(cells[i]));
    for (std::size_t i = 0; i < d; ++i) idx.m.push_back(std::stoull(cells[d + i]));
    idx.validate();
    for (int v : idx.j) require(v < t.box_limit_, "haar CSV: level outside the declared box");
    Int128 num = parse_int128(cells[2 * d]);
    const int scale = std::stoi(cells[2 * d + 1]);
    require(scale <= t.counting_scale(), "haar CSV: counting scale above d*b");
    num *= Int128{1} << (t.counting_scale() - scale);
    require(std::stoull(cells[2 * d + 4]) == t.count_, "haar CSV: divisor differs from N");
    HaarLevel& lvl = t.levels_[t.level_slot(idx.j)];
    lvl.keys.push_back(HaarTable::pack(idx.j, idx.m));
    lvl.counting.push_back(num);
  }
  for (auto& lvl : t.levels_) {
    std::vector<std::size_t> order(lvl.keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return lvl.keys[a] < lvl.keys[b]; });
    HaarLevel sorted{lvl.j, {}, {}};
    for (auto o : order) {
      sorted.keys.push_back(lvl.keys[o]);
      sorted.counting.push_back(lvl.counting[o]);
    }
    lvl = std::move(sorted);
  }
  return t;
}

}  // namespace hodisc
