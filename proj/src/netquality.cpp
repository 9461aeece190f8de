#include "hodisc/netquality.hpp"

#include <algorithm>
#include <bit>

#include "hodisc/error.hpp"
#include "hodisc/levels.hpp"
#include "hodisc/parallel.hpp"

namespace hodisc {

namespace {

struct RowChoice {
  std::vector<std::size_t> rows;  // 1-based, ascending
  std::size_t weight = 0;
};

// Independence is inherited by subsets and the weight only sees the alpha
// largest indices of each coordinate. Once those are fixed, every smaller
// index may be added for free, so it suffices to test the maximal selection
// {1, ..., i_alpha} together with the larger counted indices. For alpha = 1
// this is {1..i}; for alpha = 2 it is {i} (a single counted index) or
// {1..i2} plus {i1} with i1 > i2. Cross-checked against full subset
// enumeration in the tests.
std::vector<RowChoice> maximal_choices(int alpha, std::size_t budget) {
  std::vector<RowChoice> out;
  if (alpha == 1) {
    for (std::size_t i = 1; i <= budget; ++i) {
      RowChoice c;
      for (std::size_t r = 1; r <= i; ++r) c.rows.push_back(r);
      c.weight = i;
      out.push_back(std::move(c));
    }
    return out;
  }
  for (std::size_t i1 = 1; i1 <= budget; ++i1) {
    out.push_back({{i1}, i1});
    for (std::size_t i2 = 1; i2 < i1 && i1 + i2 <= budget; ++i2) {
      RowChoice c;
      for (std::size_t r = 1; r <= i2; ++r) c.rows.push_back(r);
      c.rows.push_back(i1);
      c.weight = i1 + i2;
      out.push_back(std::move(c));
    }
  }
  return out;
}

void check_net_inputs(const GeneratingMatrixSet& g, std::size_t n, int alpha, int t) {
  require(alpha == 1 || alpha == 2, "t-value: alpha must be 1 or 2");
  require(n <= 64, "t-value: n must be <= 64");
  const std::size_t need_rows = static_cast<std::size_t>(alpha) * n;
  if (g.q_rows < need_rows || g.n_cols < n)
    throw ValidationError("t-value: order-" + std::to_string(alpha) + " test with n=" +
                          std::to_string(n) + " needs " + std::to_string(need_rows) + "x" +
                          std::to_string(n) + " matrices, have " + std::to_string(g.q_rows) +
                          "x" + std::to_string(g.n_cols));
  require(t >= 0 && static_cast<std::size_t>(t) <= need_rows,
          "t-value: t must lie in [0, alpha*n]");
}

class NetSearch {
 public:
  NetSearch(const GeneratingMatrixSet& g, std::size_t n, int alpha, int t)
      : g_(g), t_(t),
        budget_(static_cast<std::size_t>(alpha) * n - static_cast<std::size_t>(t)),
        choices_(maximal_choices(alpha, budget_)) {
    const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    words_.resize(g.dim);
    for (std::size_t j = 0; j < g.dim; ++j)
      for (std::size_t r = 0; r < std::min(g.q_rows, budget_); ++r)
        words_[j].push_back(g.matrices[j].row(r).word0() & mask);
  }

  std::optional<NetWitness> run() const {
    if (budget_ == 0 || g_.dim == 0) return std::nullopt;
    // Parallel over the first coordinate's choice (index 0 = empty choice).
    const std::size_t branches = choices_.size() + 1;
    std::vector<std::optional<NetWitness>> found(branches);
    parallel_for(branches, [&](std::size_t b) {
      std::vector<std::size_t> picks(g_.dim, 0);
      picks[0] = b;
      std::vector<std::uint64_t> selection;
      const std::size_t w = b == 0 ? 0 : choices_[b - 1].weight;
      if (b > 0) append(0, b, selection);
      found[b] = search(1, w, picks, selection);
    });
    for (auto& f : found)
      if (f) return f;
    return std::nullopt;
  }

 private:
  void append(std::size_t coord, std::size_t pick, std::vector<std::uint64_t>& sel) const {
    for (std::size_t r : choices_[pick - 1].rows) sel.push_back(words_[coord][r - 1]);
  }

  std::optional<NetWitness> search(std::size_t coord, std::size_t used,
                                   std::vector<std::size_t>& picks,
                                   std::vector<std::uint64_t>& selection) const {
    // Remaining coordinates may choose nothing, so every node is a candidate.
    const std::size_t rk = rank_words(selection);
    if (rk < selection.size()) return witness(picks, selection.size(), rk);
    if (coord == g_.dim) return std::nullopt;
    if (auto w = search(coord + 1, used, picks, selection)) return w;
    for (std::size_t c = 1; c <= choices_.size(); ++c) {
      if (used + choices_[c - 1].weight > budget_) continue;
      const std::size_t mark = selection.size();
      append(coord, c, selection);
      picks[coord] = c;
      auto w = search(coord + 1, used + choices_[c - 1].weight, picks, selection);
      picks[coord] = 0;
      selection.resize(mark);
      if (w) return w;
    }
    return std::nullopt;
  }

  NetWitness witness(const std::vector<std::size_t>& picks, std::size_t size,
                     std::size_t rk) const {
    NetWitness w;
    w.t_tested = t_;
    w.selection_size = size;
    w.rank = rk;
    for (std::size_t p : picks) w.rows.push_back(p == 0 ? std::vector<std::size_t>{} : choices_[p - 1].rows);
    return w;
  }

  const GeneratingMatrixSet& g_;
  int t_;
  std::size_t budget_;
  std::vector<RowChoice> choices_;
  std::vector<std::vector<std::uint64_t>> words_;
};

int hint_for(const GeneratingMatrixSet& g, int alpha, int cap) {
  if (!g.declared_t) return cap;
  int t = *g.declared_t;
  if (g.declared_alpha != alpha) {
    if (g.declared_alpha == 2 && alpha == 1)
      t = (t + 1) / 2;
    else
      return cap;
  }
  return std::clamp(t, 0, cap);
}

}  // namespace

std::size_t selection_weight(const std::vector<std::vector<std::size_t>>& rows, int alpha) {
  std::size_t w = 0;
  for (auto sel : rows) {
    std::sort(sel.begin(), sel.end(), std::greater<>());
    for (std::size_t l = 0; l < sel.size() && l < static_cast<std::size_t>(alpha); ++l) w += sel[l];
  }
  return w;
}

std::size_t selection_rank(const GeneratingMatrixSet& g, std::size_t n,
                           const std::vector<std::vector<std::size_t>>& rows) {
  std::vector<BitVector> vs;
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t r : rows[j]) vs.push_back(g.matrices[j].row(r - 1).prefix(n));
  return rank(vs);
}

std::optional<NetWitness> find_net_violation(const GeneratingMatrixSet& g, std::size_t n,
                                             int alpha, int t) {
  check_net_inputs(g, n, alpha, t);
  return NetSearch(g, n, alpha, t).run();
}

bool is_order_alpha_net(const GeneratingMatrixSet& g, std::size_t n, int alpha, int t) {
  return !find_net_violation(g, n, alpha, t).has_value();
}

TValueReport minimal_t(const GeneratingMatrixSet& g, std::size_t n, int alpha) {
  check_net_inputs(g, n, alpha, 0);
  const int cap = alpha * static_cast<int>(n);
  int t = hint_for(g, alpha, cap);
  // t = alpha*n always passes (empty budget).
  while (t < cap && !is_order_alpha_net(g, n, alpha, t)) ++t;
  while (t > 0 && is_order_alpha_net(g, n, alpha, t - 1)) --t;
  TValueReport report;
  report.alpha = alpha;
  report.n = n;
  report.dim = g.dim;
  report.t = t;
  if (t > 0) report.witness = find_net_violation(g, n, alpha, t - 1);
  return report;
}

SequenceCheck is_order_alpha_sequence_prefix(const GeneratingMatrixSet& g, std::size_t n_max,
                                             int alpha, int t) {
  require(alpha == 1 || alpha == 2, "sequence check: alpha must be 1 or 2");
  require(t >= 0, "sequence check: t must be >= 0");
  if (g.q_rows < static_cast<std::size_t>(alpha) * n_max || g.n_cols < n_max)
    throw ValidationError("sequence check: need " + std::to_string(alpha * n_max) + "x" +
                          std::to_string(n_max) + " matrices");
  for (std::size_t n = static_cast<std::size_t>(t / alpha) + 1; n <= n_max; ++n) {
    GeneratingMatrixSet sub = g;
    for (auto& m : sub.matrices) m = m.submatrix_upper_left(static_cast<std::size_t>(alpha) * n, n);
    sub.q_rows = static_cast<std::size_t>(alpha) * n;
    sub.n_cols = n;
    if (!is_order_alpha_net(sub, n, alpha, t)) return {false, n};
  }
  return {};
}

int minimal_sequence_t(const GeneratingMatrixSet& g, std::size_t n_max, int alpha) {
  const int cap = alpha * static_cast<int>(n_max);
  int t = hint_for(g, alpha, cap);
  while (t < cap && !is_order_alpha_sequence_prefix(g, n_max, alpha, t).holds) ++t;
  while (t > 0 && is_order_alpha_sequence_prefix(g, n_max, alpha, t - 1).holds) --t;
  return t;
}

FairIntervalReport fair_interval_audit(const DyadicPointSet& points, int alpha, int t) {
  require(alpha >= 1, "fair_interval_audit: alpha must be >= 1");
  require(t >= 0, "fair_interval_audit: t must be >= 0");
  const std::size_t count = points.size();
  require(count >= 1 && (count & (count - 1)) == 0,
          "fair_interval_audit: point count " + std::to_string(count) + " is not a power of two");
  FairIntervalReport rep;
  rep.n = static_cast<std::size_t>(std::countr_zero(count));
  const long slack = (t + alpha - 1) / alpha;
  rep.order = static_cast<long>(rep.n) - slack;
  rep.bound = std::size_t{1} << slack;
  if (rep.order < 0) {
    rep.vacuous = true;
    rep.warning = "n < ceil(t/alpha): no dyadic boxes of negative order, check is vacuous";
    return rep;
  }
  require(rep.order < 64, "fair_interval_audit: order too large for packed box keys");
  const int b = points.precision_bits();
  std::vector<std::uint64_t> keys(count);
  for_each_composition(points.dim(), static_cast<int>(rep.order), [&](const std::vector<int>& j) {
    ++rep.level_vectors;
    for (std::size_t k = 0; k < count; ++k) {
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < points.dim(); ++i) {
        const std::uint64_t z = points.num(k, i);
        // Box digit along axis i: floor(z * 2^j_i).
        const std::uint64_t m = j[i] <= b ? (j[i] == 0 ? 0 : z >> (b - j[i])) : z << (j[i] - b);
        key = j[i] == 0 ? key : (key << j[i]) | m;
      }
      keys[k] = key;
    }
    std::sort(keys.begin(), keys.end());
    std::size_t run = 1;
    for (std::size_t k = 1; k <= count; ++k) {
      if (k < count && keys[k] == keys[k - 1]) {
        ++run;
        continue;
      }
      rep.max_occupancy = std::max(rep.max_occupancy, run);
      run = 1;
    }
  });
  rep.passed = rep.max_occupancy <= rep.bound;
  return rep;
}

}  // namespace hodisc
