#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "hodisc/error.hpp"
#include "hodisc/levels.hpp"
#include "hodisc/norms.hpp"
#include "hodisc/parallel.hpp"
#include "oracles.hpp"

using namespace hodisc;

namespace {

Rational frac(long a, long b) { return Rational(a) / b; }

// sum over j in [0, jmax]^d of 2^{|j|} <D,h_{j,m}>^2 restricted to boxes inside
// I_{j',m'}, scaled by 2^{|j'|}.
struct Projection {
  std::size_t d;
  int jmax;
  std::map<std::pair<std::vector<int>, std::vector<std::uint64_t>>, double> coeff;

  Projection(const DyadicPointSet& p, int jmax_) : d(p.dim()), jmax(jmax_) {
    for_each_level(d, 0, jmax, [&](const std::vector<int>& j) {
      std::uint64_t positions = std::uint64_t{1} << level_order(j);
      for (std::uint64_t key = 0; key < positions; ++key) {
        HaarIndex idx{j, HaarTable::unpack(j, key)};
        coeff[{idx.j, idx.m}] = haar_coefficient(p, idx).value().to_double();
      }
    });
  }

  double energy(const std::vector<int>& jp, const std::vector<std::uint64_t>& mp) const {
    double s = 0;
    for (const auto& [key, c] : coeff) {
      const auto& [j, m] = key;
      bool inside = true;
      for (std::size_t i = 0; i < d && inside; ++i)
        inside = j[i] >= jp[i] && (m[i] >> (j[i] - jp[i])) == mp[i];
      if (inside) s += std::exp2(level_order(j)) * c * c;
    }
    return std::exp2(level_order(jp)) * s;
  }

  double bmo_squared(int depth) const {
    double best = 0;
    for (int total = 0; total <= depth; ++total)
      for_each_composition(d, total, [&](const std::vector<int>& jp) {
        for (std::uint64_t key = 0; key < (std::uint64_t{1} << total); ++key)
          best = std::max(best, energy(jp, HaarTable::unpack(jp, key)));
      });
    return best;
  }
};

// Haar-characterisation sum with in-range levels computed coefficient by coefficient
// and levels at or above the precision summed per level in closed form.
double besov_bruteforce(const DyadicPointSet& pts, double p, double q, double s, int jmax) {
  const int e = pts.effective_precision();
  double total = 0;
  for_each_level(pts.dim(), -1, jmax, [&](const std::vector<int>& j) {
    const int order = level_order(j);
    bool inside = true;
    for (int v : j) inside = inside && v < e;
    double inner = 0;
    if (inside) {
      for (std::uint64_t key = 0; key < (std::uint64_t{1} << order); ++key) {
        HaarIndex idx{j, HaarTable::unpack(j, key)};
        inner += std::pow(std::abs(haar_coefficient(pts, idx).value().to_double()), p);
      }
    } else {
      inner = std::exp2(order) * std::pow(std::abs(volume_coeff(j).to_double()), p);
    }
    total += std::exp2(order * (s - 1 / p + 1) * q) * std::pow(inner, q / p);
  });
  return std::pow(total, 1 / q);
}

}  // namespace

TEST_CASE("Warnock examples") {
  CHECK(l2_warnock_squared_exact(DyadicPointSet(1, 1, {0})) == frac(1, 3));
  // D = 1/2 - x on (0, 1/2] and 1 - x on (1/2, 1].
  const DyadicPointSet two(1, 1, {0, 1});
  CHECK(l2_warnock_squared_exact(two) == frac(1, 12));
  CHECK(l2_warnock_squared_exact(prefix(identity_matrices(1, 2, 2), 4)) == frac(1, 48));
}

TEST_CASE("Warnock matches cell integration") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const auto p = oracle::random_points(rng, d, 1 + rng() % 8, 1 + static_cast<int>(rng() % 8));
    const Rational exact = l2_warnock_squared_exact(p);
    CHECK(exact == oracle::l2_squared_cells(p));
    CHECK(std::abs(l2_warnock_squared(p) - static_cast<double>(exact)) <= 1e-14);
  }
}

TEST_CASE("Parseval route equals Warnock exactly") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const auto p = oracle::random_points(rng, d, 1 + rng() % 12, 1 + static_cast<int>(rng() % 5));
    CAPTURE(trial);
    CHECK(l2_parseval_squared_exact(build_table(p)) == l2_warnock_squared_exact(p));
  }
  const auto vdc = prefix(identity_matrices(1, 4, 4), 16);
  CHECK(l2_parseval_squared_exact(build_table(vdc)) == l2_warnock_squared_exact(vdc));
  const DyadicPointSet origin(1, 3, {0});
  CHECK(l2_parseval_squared_exact(build_table(origin)) == frac(1, 3));

  const auto r = l2_parseval(build_table(vdc), Arithmetic::floating);
  CHECK(r.estimate == Estimate::approximate);
  CHECK(std::abs(r.value - l2_warnock(vdc).value) <= 1e-14);
}

TEST_CASE("Lp grid quadrature") {
  const DyadicPointSet origin(1, 1, {0});
  CHECK(std::abs(lp_grid(origin, 2, 1024).value - std::sqrt(1.0 / 3)) <= 1e-6);
  CHECK(std::abs(lp_grid(origin, 1, 1024).value - 0.5) <= 1e-6);
  CHECK_THROWS_AS(lp_grid(origin, 0.5), ValidationError);

  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const auto p = oracle::random_points(rng, d, 1 + rng() % 16, 6);
    const auto r = lp_grid(p, 2, 64);
    CHECK(std::abs(r.value - std::sqrt(l2_warnock_squared(p))) <= 1e-10);
    REQUIRE(r.refinement_delta.has_value());
  }
}

TEST_CASE("star discrepancy") {
  CHECK(star_discrepancy_exact_value(DyadicPointSet(1, 1, {0})) == 1);
  CHECK(star_discrepancy_exact_value(DyadicPointSet(1, 1, {0, 1})) == frac(1, 2));
  CHECK_THROWS_AS(star_discrepancy_exact(DyadicPointSet(3, 1, {0, 0, 0})), ValidationError);

  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const auto p = oracle::random_points(rng, d, 1 + rng() % 10, 1 + static_cast<int>(rng() % 5));
    CAPTURE(trial);
    CHECK(star_discrepancy_exact_value(p) == oracle::star_bruteforce(p));
  }

  // N D*_N of van der Corput stays below ld(N)/3 + 1.
  for (int n = 1; n <= 10; ++n) {
    const auto p = prefix(identity_matrices(1, 10, 10), std::size_t{1} << n);
    const double nd = std::ldexp(star_discrepancy_exact(p).value, n);
    CHECK(nd <= n / 3.0 + 1);
    CHECK(nd >= 1);
  }
}

TEST_CASE("D0 projection") {
  const auto origin = build_table(DyadicPointSet(1, 1, {0}));
  CHECK(d0_projection_squared_exact(origin) == frac(1, 12));

  // In one dimension D0^2 = L2^2 - (integral of D)^2.
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracle::random_points(rng, 1, 1 + rng() % 10, 1 + static_cast<int>(rng() % 6));
    const Rational mean = oracle::haar_coefficient_cells(p, {-1}, {0});
    CHECK(d0_projection_squared_exact(build_table(p)) == oracle::l2_squared_cells(p) - mean * mean);
  }

  for (int trial = 0; trial < 4; ++trial) {
    const auto p = oracle::random_points(rng, 2, 1 + rng() % 6, 2);
    const Projection proj(p, 7);
    const double d0 = d0_projection_norm(build_table(p), Arithmetic::floating).value;
    CHECK(std::abs(d0 * d0 - proj.energy({0, 0}, {0, 0})) <= 1e-4);
  }
}

TEST_CASE("dyadic BMO lower estimate") {
  const auto origin = build_table(DyadicPointSet(1, 1, {0}));
  const auto r = bmo_dyadic(origin, 0);
  CHECK(std::abs(r.value - std::sqrt(1.0 / 12)) <= 1e-15);
  CHECK(r.estimate == Estimate::lower);

  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const int b = 3;
    const auto p = oracle::random_points(rng, d, 2 + rng() % 8, b);
    const int jmax = d == 1 ? 14 : 7;
    const Projection proj(p, jmax);
    const auto table = build_table(p);
    for (int depth = 0; depth <= b; ++depth) {
      const double v = bmo_dyadic(table, depth).value;
      CAPTURE(trial);
      CAPTURE(depth);
      CHECK(std::abs(v * v - proj.bmo_squared(depth)) <= (d == 1 ? 1e-9 : 1e-4));
    }
  }
}

TEST_CASE("Besov quasi-norm") {
  CHECK_THROWS_AS(check_besov_parameters(2, 2, 0.6), ValidationError);
  CHECK_THROWS_AS(check_besov_parameters(2, 2, -0.6), ValidationError);
  CHECK_NOTHROW(check_besov_parameters(2, 2, 0.25));

  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const auto p = oracle::random_points(rng, d, 1 + rng() % 8, 3);
    const auto table = build_table(p);
    CHECK(std::abs(besov_quasinorm(table, 2, 2, 0).value - l2_warnock(p).value) <= 1e-12);
    const double pp = 1.5, q = 2, s = 0.3;
    const double brute = besov_bruteforce(p, pp, q, s, d == 1 ? 200 : 120);
    CHECK(std::abs(besov_quasinorm(table, pp, q, s).value - brute) <= 1e-10 * brute);
  }
}

TEST_CASE("Triebel bracket") {
  const auto p = prefix(tezuka_interlaced(2, 6), 32);
  const auto table = build_table(p);
  const auto [lo, hi] = triebel_bracket(table, 1.5, 3, 0.2);
  CHECK(lo.kind == NormKind::triebel_bracket);
  CHECK(lo.estimate == Estimate::lower);
  CHECK(hi.estimate == Estimate::upper);
  CHECK(lo.value == besov_quasinorm(table, 1.5, 3, 0.2).value);
  CHECK(hi.value == besov_quasinorm(table, 3, 3, 0.2).value);
}

TEST_CASE("exponential Orlicz estimate") {
  CHECK(default_orlicz_grid(2) == std::vector<double>{2, 4});
  CHECK(default_orlicz_grid(16) == std::vector<double>{2, 4, 8, 16});
  CHECK(default_orlicz_grid(1024) == std::vector<double>{2, 4, 8, 16, 32, 64});

  const auto p = prefix(tezuka_interlaced(2, 5), 16);
  const auto r = orlicz_exp_estimate(p, 2, {}, 64);
  double best = 0;
  for (double q : r.p_grid) best = std::max(best, lp_grid(p, q, 64).value / std::sqrt(q));
  CHECK(std::abs(r.value - best) <= 1e-12);
  REQUIRE(r.argmax_p.has_value());
  CHECK(r.estimate == Estimate::lower);
}

TEST_CASE("dispatch and kind names") {
  for (auto name : {"l2", "lp", "star", "bmo", "d0", "besov", "triebel", "orlicz"})
    CHECK(parse_norm_kind(to_string(parse_norm_kind(name))) == parse_norm_kind(name));
  CHECK_THROWS_AS(parse_norm_kind("sobolev"), ValidationError);

  const auto p = prefix(tezuka_interlaced(1, 5), 16);
  NormSpec spec;
  const auto w = evaluate_norm(p, spec);
  spec.method = "parseval";
  const auto pv = evaluate_norm(p, spec);
  CHECK(w.exact_square == pv.exact_square);
  spec.method = "monte-carlo";
  CHECK_THROWS_AS(evaluate_norm(p, spec), ValidationError);

  spec = NormSpec{};
  spec.kind = NormKind::triebel_bracket;
  spec.p = 1.5;
  spec.q = 2;
  spec.s = 0.1;
  NormReport lower;
  const auto upper = evaluate_norm(p, spec, nullptr, &lower);
  CHECK(lower.estimate == Estimate::lower);
  CHECK(upper.estimate == Estimate::upper);
}

TEST_CASE("results do not depend on the worker count") {
  const auto p = prefix(tezuka_interlaced(2, 8), 200);
  set_thread_count(1);
  const auto table1 = build_table(p);
  const double lp1 = lp_grid(p, 3, 128).value;
  const double bmo1 = bmo_dyadic(table1).value;
  const double l21 = l2_warnock_squared(p);
  set_thread_count(4);
  const auto table4 = build_table(p);
  CHECK(lp_grid(p, 3, 128).value == lp1);
  CHECK(bmo_dyadic(table4).value == bmo1);
  CHECK(l2_warnock_squared(p) == l21);
  CHECK(table4.stored_entries() == table1.stored_entries());
  set_thread_count(0);
}
