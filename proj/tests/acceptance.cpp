// Acceptance suite: one PASS/FAIL line per criterion; exits nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hodisc/genmat.hpp"
#include "hodisc/haar.hpp"
#include "hodisc/netquality.hpp"
#include "hodisc/norms.hpp"
#include "hodisc/points.hpp"
#include "hodisc/studies.hpp"
#include "oracles.hpp"

using namespace hodisc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_over_min(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome tezuka_t_values() {
  const auto start = Clock::now();
  Outcome o{true, ""};
  for (std::size_t d : {1u, 2u}) {
    const auto g = tezuka_matrices(d, 10, 10);
    std::vector<int> ts;
    for (std::size_t n = 1; n <= 10; ++n) ts.push_back(minimal_t(g, n, 1).t);
    const bool ok = std::all_of(ts.begin(), ts.end(), [](int t) { return t == 0; }) &&
                    minimal_sequence_t(g, 10, 1) == tezuka_t_value(d);
    o.pass = o.pass && ok;
    o.detail += "d'=" + std::to_string(d) + " t(n=1..10)=" + join(ts) + "; ";
  }
  const auto g3 = tezuka_matrices(3, 8, 8);
  std::vector<int> ts;
  for (std::size_t n = 1; n <= 8; ++n) ts.push_back(minimal_t(g3, n, 1).t);
  const int seq = minimal_sequence_t(g3, 8, 1);
  o.pass = o.pass && seq == 1 && tezuka_t_value(3) == 1 && *std::max_element(ts.begin(), ts.end()) == 1;
  const double secs = seconds_since(start);
  o.pass = o.pass && secs < 60;
  o.detail += "d'=3 net t(n=1..8)=" + join(ts) + ", sequence t=" + std::to_string(seq) + "; " +
              fmt("%.2f s", secs);
  return o;
}

Outcome interlacing() {
  const auto start = Clock::now();
  const auto g = tezuka_interlaced(1, 8);
  const auto c = is_order_alpha_sequence_prefix(g, 8, 2, 1);
  const double secs = seconds_since(start);
  return {c.holds && secs < 300 && g.declared_t == 1,
          std::string("interlaced d=1 order-2 sequence with t=1 up to n=8: ") +
              (c.holds ? "holds" : "fails at n=" + std::to_string(*c.failing_n)) + "; " + fmt("%.2f s", secs)};
}

Outcome fair_intervals() {
  const auto g = tezuka_interlaced(1, 10);
  const auto all = prefix(g, 1024);
  long violations = 0;
  std::size_t worst = 0;
  for (int n = 1; n <= 10; ++n) {
    const auto pts = all.head(std::size_t{1} << n);
    // Direct count per dyadic interval of order n - 1.
    const int order = n - 1;
    std::map<std::uint64_t, std::size_t> hits;
    for (std::size_t k = 0; k < pts.size(); ++k) ++hits[pts.num(k, 0) >> (pts.precision_bits() - order)];
    for (const auto& [box, c] : hits) {
      worst = std::max(worst, c);
      if (c > 2) ++violations;
    }
    const auto report = fair_interval_audit(pts, 2, 1);
    if (!report.passed || report.max_occupancy > 2) ++violations;
  }
  return {violations == 0, "n=1..10, order n-1 intervals: max occupancy " + std::to_string(worst) +
                               ", violations " + std::to_string(violations)};
}

Outcome l2_routes() {
  long exact_cases = 0, exact_mismatch = 0;
  for (std::size_t d : {1u, 2u})
    for (auto g : {tezuka_interlaced(d, 4), tezuka_matrices(d, 4, 4)}) {
      const auto all = prefix(g, 16);
      for (std::size_t n = 1; n <= 16; ++n) {
        const auto pts = all.head(n);
        ++exact_cases;
        if (l2_warnock_squared_exact(pts) != l2_parseval_squared_exact(build_table(pts))) ++exact_mismatch;
      }
    }
  double worst = 0;
  long float_cases = 0;
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto all = prefix(tezuka_interlaced(d, 7), 128);
    for (std::size_t n = 1; n <= 128; ++n) {
      const auto pts = all.head(n);
      const double w = l2_warnock(pts, Arithmetic::floating).value;
      const double p = l2_parseval(build_table(pts, pts.effective_precision()), Arithmetic::floating).value;
      worst = std::max(worst, std::abs(w - p));
      ++float_cases;
    }
  }
  return {exact_mismatch == 0 && worst <= 1e-9,
          std::to_string(exact_cases) + " exact prefixes, " + std::to_string(exact_mismatch) +
              " mismatches; " + std::to_string(float_cases) + " float prefixes, max |diff| " +
              fmt("%.3g", worst)};
}

Outcome closed_forms() {
  std::mt19937_64 rng(20240501);
  double worst_vol = 0, worst_cnt = 0, worst_tail = 0;
  int cases = 0;
  for (; cases < 120; ++cases) {
    // Volume: product of 1-d quadratures of x h_{j,m}(x) on Haar-aligned cells.
    const std::size_t d = 1 + rng() % 3;
    std::vector<int> j(d);
    double expected = 1;
    for (std::size_t i = 0; i < d; ++i) {
      j[i] = static_cast<int>(rng() % 16) - 1;
      const std::uint64_t m = j[i] <= 0 ? 0 : rng() % (std::uint64_t{1} << j[i]);
      expected *= oracle::midpoint([&](double x) { return x * oracle::haar_1d(j[i], m, x); }, 0, 1,
                                   1 << (std::max(j[i], 0) + 2));
    }
    worst_vol = std::max(worst_vol, std::abs(volume_coeff(j).to_double() - expected));

    // Counting: quadrature of h over [z, 1).
    const int bits = 1 + static_cast<int>(rng() % 12);
    const std::uint64_t num = rng() % (std::uint64_t{1} << bits);
    const int jc = static_cast<int>(rng() % static_cast<std::uint64_t>(bits + 2)) - 1;
    const std::uint64_t mc = jc <= 0 ? 0 : rng() % (std::uint64_t{1} << jc);
    const double z = std::ldexp(static_cast<double>(num), -bits);
    const double cnt = oracle::midpoint([&](double x) { return x >= z ? oracle::haar_1d(jc, mc, x) : 0.0; },
                                        0, 1, 1 << (std::max(bits, jc + 1) + 1));
    worst_cnt = std::max(worst_cnt, std::abs(counting_coeff_1d(num, bits, jc, mc).to_double() - cnt));

    // Tail: brute-force level sum versus the closed form, L2 and Besov weights.
    const std::size_t dt = 1 + rng() % 2;
    const int J = static_cast<int>(rng() % 5);
    std::uniform_real_distribution<double> unit(0, 1);
    double closed, brute;
    if (cases % 2 == 0) {
      closed = volume_tail_sums(dt, J, TailWeights::l2());
      brute = oracle::tail_bruteforce(dt, J, 60, [](int l) { return l < 0 ? 0.25 : std::exp2(-2.0 * l - 4); },
                                      false);
    } else {
      const double p = 1 + 3 * unit(rng), q = 1 + 3 * unit(rng);
      const double lo = 1 / p - 1, hi = std::min(1 / p, 1 - 0.5 / q);
      const double s = lo + (hi - lo) * unit(rng);
      closed = volume_tail_sums(dt, J, TailWeights::besov(p, q, s));
      brute = oracle::tail_bruteforce(
          dt, J, 200, [&](int l) { return l < 0 ? std::exp2(-q) : std::exp2(-2 * q + l * q * (s - 1)); }, false);
    }
    worst_tail = std::max(worst_tail, std::abs(closed - brute));
  }
  const bool twelfth = volume_tail_sums_l2_exact(1, 0) == Rational(1, 12);
  const double tol = 1e-12;
  return {worst_vol <= tol && worst_cnt <= tol && worst_tail <= tol && twelfth,
          std::to_string(cases) + " cases each; max err volume " + fmt("%.2g", worst_vol) + ", counting " +
              fmt("%.2g", worst_cnt) + ", tail " + fmt("%.2g", worst_tail) + "; 1-d tail " +
              to_string(volume_tail_sums_l2_exact(1, 0))};
}

Outcome bound_audit() {
  bool ok = true;
  std::string detail;
  for (std::size_t d : {1u, 2u}) {
    const auto g = tezuka_interlaced(d, 10);
    const int t = minimal_sequence_t(g, 10, 2);
    std::vector<std::vector<double>> ratios(3);
    for (int n = 4; n <= 10; ++n) {
      const auto audit = bound_ratio_audit(g, std::uint64_t{1} << n, t);
      for (std::size_t r = 0; r < 3; ++r) ratios[r].push_back(audit.regimes[r].max_ratio);
    }
    detail += "d=" + std::to_string(d) + " t=" + std::to_string(t) + ":";
    for (std::size_t r = 0; r < 3; ++r) {
      const auto& v = ratios[r];
      const bool finite = std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0; });
      const double spread = finite ? max_over_min(v) : INFINITY;
      ok = ok && finite && spread < 4;
      detail += " " + to_string(static_cast<Regime>(r)) + " " + fmt("%.3f", spread);
    }
    detail += "; ";
  }
  return {ok, detail};
}

struct StudyRun {
  std::vector<ScalingRow> rows;
  double secs = 0;
};

StudyRun run_study(const GeneratingMatrixSet& g, const NormSpec& spec, int nmin, int nmax) {
  const auto start = Clock::now();
  StudyRun s;
  s.rows = scaling_study(g, spec, dyadic_counts(nmin, nmax));
  s.secs = seconds_since(start);
  return s;
}

std::vector<double> normalized(const std::vector<ScalingRow>& rows, std::uint64_t from) {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.count >= from) v.push_back(r.normalized);
  return v;
}

Outcome scaling(const StudyRun& l2, const StudyRun& bmo, const StudyRun& b0, const StudyRun& bs) {
  // Upper half of N = 2^4 .. 2^12.
  const std::uint64_t from = std::uint64_t{1} << 8;
  const double r_l2 = max_over_min(normalized(l2.rows, from));
  const double r_bmo = max_over_min(normalized(bmo.rows, from));
  const double r_b0 = max_over_min(normalized(b0.rows, from));
  const double r_bs = max_over_min(normalized(bs.rows, from));
  const double secs = l2.secs + bmo.secs + b0.secs + bs.secs;
  return {r_l2 <= 3 && r_bmo <= 3 && r_b0 <= 3 && r_bs <= 3 && secs < 600,
          "max/min over N=2^8..2^12: L2 " + fmt("%.3f", r_l2) + ", BMO " + fmt("%.3f", r_bmo) +
              ", Besov(2,2,0) " + fmt("%.3f", r_b0) + ", Besov(2,2,0.25) " + fmt("%.3f", r_bs) + "; " +
              fmt("%.1f s", secs)};
}

Outcome orlicz_shape() {
  const auto g = tezuka_interlaced(2, 10);
  NormSpec spec;
  spec.kind = NormKind::orlicz_exp;
  spec.beta = 2;
  const auto s = run_study(g, spec, 4, 10);
  std::vector<double> v;
  std::string argmax;
  for (const auto& r : s.rows) {
    v.push_back(r.normalized);
    argmax += fmt("%g", r.report.argmax_p.value_or(0)) + (&r == &s.rows.back() ? "" : ",");
  }
  const double spread = max_over_min(v);
  return {spread <= 4, "max/min over N=2^4..2^10: " + fmt("%.3f", spread) + " (normalized " +
                           fmt("%.4f", v.front()) + " .. " + fmt("%.4f", v.back()) + ", argmax p " + argmax +
                           "); " + fmt("%.1f s", s.secs)};
}

Outcome lifting() {
  const auto g = tezuka_interlaced(1, 6);
  bool ok = true;
  std::string detail;
  for (std::uint64_t n = 1; n <= 64; n *= 2) {
    const auto c = lift_inequality_check(g, n);
    ok = ok && c.holds;
    detail += "N=" + std::to_string(n) + (c.holds ? " ok" : " FAIL") + fmt(" (%.3f", c.lhs) +
              fmt(" >= %.3f) ", c.rhs);
  }
  return {ok, detail};
}

Outcome besov_floor(const StudyRun& bs) {
  std::vector<double> v = normalized(bs.rows, 0);
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double lo = sorted.front();
  return {lo > 0.01 * median, "normalized Besov(2,2,0.25) over N=2^4..2^12: min " + fmt("%.4f", lo) +
                                  ", median " + fmt("%.4f", median)};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const Outcome& o) {
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };
  auto guarded = [&](int id, const std::function<Outcome()>& f) {
    try {
      report(id, f());
    } catch (const std::exception& e) {
      report(id, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, tezuka_t_values);
  guarded(2, interlacing);
  guarded(3, fair_intervals);
  guarded(4, l2_routes);
  guarded(5, closed_forms);
  guarded(6, bound_audit);

  // Criteria 7 and 10 share the order-2 d=2 study.
  StudyRun l2, bmo, b0, bs;
  std::string study_error;
  try {
    const auto g = tezuka_interlaced(2, 12);
    NormSpec spec;
    l2 = run_study(g, spec, 4, 12);
    spec.kind = NormKind::bmo_dyadic;
    bmo = run_study(g, spec, 4, 12);
    spec.kind = NormKind::besov;
    spec.p = spec.q = 2;
    spec.s = 0;
    b0 = run_study(g, spec, 4, 12);
    spec.s = 0.25;
    bs = run_study(g, spec, 4, 12);
  } catch (const std::exception& e) {
    study_error = e.what();
  }
  if (study_error.empty())
    guarded(7, [&] { return scaling(l2, bmo, b0, bs); });
  else
    report(7, {false, "exception: " + study_error});
  guarded(8, orlicz_shape);
  guarded(9, lifting);
  if (study_error.empty())
    guarded(10, [&] { return besov_floor(bs); });
  else
    report(10, {false, "exception: " + study_error});

  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
