#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hodisc/error.hpp"
#include "hodisc/haar.hpp"
#include "hodisc/levels.hpp"
#include "oracles.hpp"

using namespace hodisc;

namespace {

Rational frac(long a, long b) { return Rational(a) / b; }

// Quadrature of x * h_{j,m}(x) on cells aligned with the Haar breakpoints.
double volume_1d_quadrature(int j, std::uint64_t m) {
  const int cells = 1 << (std::max(j, 0) + 2);
  return oracle::midpoint([&](double x) { return x * oracle::haar_1d(j, m, x); }, 0, 1, cells);
}

HaarIndex random_index(std::mt19937_64& rng, std::size_t d, int jmax) {
  HaarIndex idx;
  for (std::size_t i = 0; i < d; ++i) {
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(jmax + 2)) - 1;
    idx.j.push_back(j);
    idx.m.push_back(j <= 0 ? 0 : rng() % (std::uint64_t{1} << j));
  }
  return idx;
}

}  // namespace

TEST_CASE("volume coefficient examples") {
  CHECK(volume_coeff(std::vector<int>{-1}).to_rational() == frac(1, 2));
  CHECK(volume_coeff(std::vector<int>{0}).to_rational() == frac(-1, 4));
  CHECK(volume_coeff(std::vector<int>{1, -1}).to_rational() == frac(-1, 32));
}

TEST_CASE("volume coefficients match quadrature") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const auto idx = random_index(rng, d, 12);
    double expected = 1;
    for (std::size_t i = 0; i < d; ++i) expected *= volume_1d_quadrature(idx.j[i], idx.m[i]);
    CHECK(std::abs(volume_coeff(idx.j).to_double() - expected) <= 1e-12);
  }
}

TEST_CASE("one-dimensional counting coefficient examples") {
  CHECK(counting_coeff_1d(0, 4, -1, 0).to_rational() == 1);
  CHECK(counting_coeff_1d(0, 4, 0, 0).to_rational() == 0);
  CHECK(counting_coeff_1d(1, 2, 0, 0).to_rational() == frac(-1, 4));
  CHECK_THROWS_AS(counting_coeff_1d(0, 4, 2, 4), ValidationError);
  CHECK_THROWS_AS(counting_coeff_1d(16, 4, 0, 0), ValidationError);
}

TEST_CASE("counting coefficients match quadrature") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int bits = 1 + static_cast<int>(rng() % 10);
    const std::uint64_t num = rng() % (std::uint64_t{1} << bits);
    const auto idx = random_index(rng, 1, bits + 1);
    const double z = std::ldexp(static_cast<double>(num), -bits);
    const int cells = 1 << (std::max(bits, idx.j[0] + 1) + 1);
    const double expected = oracle::midpoint(
        [&](double x) { return x >= z ? oracle::haar_1d(idx.j[0], idx.m[0], x) : 0.0; }, 0, 1, cells);
    CHECK(std::abs(counting_coeff_1d(num, bits, idx.j[0], idx.m[0]).to_double() - expected) <= 1e-12);
  }
}

TEST_CASE("coefficients of small point sets") {
  const DyadicPointSet origin(1, 4, {0});
  const auto a = haar_coefficient(origin, {{-1}, {0}});
  CHECK(a.counting.to_rational() == 1);
  CHECK(a.volume.to_rational() == frac(1, 2));
  CHECK(a.value().to_rational() == frac(1, 2));
  const auto b = haar_coefficient(origin, {{0}, {0}});
  CHECK(b.counting.to_rational() == 0);
  CHECK(b.value().to_rational() == frac(1, 4));

  // z = 1/2 is interior to [0,1): its counting part is -1/2, and <D,h> = 1/8 - 1/8.
  const auto vdc2 = prefix(identity_matrices(1, 1, 1), 2);
  const auto c = haar_coefficient(vdc2, {{0}, {0}});
  CHECK(c.counting.to_rational() == frac(-1, 4));
  CHECK(c.value().to_rational() == 0);
  CHECK(c.value().to_rational() == oracle::haar_coefficient_cells(vdc2, {0}, {0}));
}

TEST_CASE("coefficients agree with cell integration of D") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const int b = 1 + static_cast<int>(rng() % 5);
    const auto p = oracle::random_points(rng, d, 1 + rng() % 6, b);
    const auto idx = random_index(rng, d, b + 1);
    CAPTURE(trial);
    CHECK(haar_coefficient(p, idx).value().to_rational() ==
          oracle::haar_coefficient_cells(p, idx.j, idx.m));
  }
}

TEST_CASE("table matches direct evaluation") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const int b = 2 + static_cast<int>(rng() % 3);
    const auto p = oracle::random_points(rng, d, 1 + rng() % 20, b);
    const auto table = build_table(p);
    CHECK(table.box_limit() == b);
    for_each_level(d, -1, b - 1, [&](const std::vector<int>& j) {
      // Every position of this level.
      std::uint64_t positions = 1;
      for (int v : j) positions <<= std::max(v, 0);
      for (std::uint64_t key = 0; key < positions; ++key) {
        HaarIndex idx{j, HaarTable::unpack(j, key)};
        CHECK(table.coefficient(idx).value() == haar_coefficient(p, idx).value());
      }
      for (const auto& c : table.level(j).counting) CHECK(c != 0);
    });
  }
}

TEST_CASE("single point table") {
  const DyadicPointSet origin(1, 1, {0});
  const auto t = build_table(origin, 1);
  CHECK(t.stored_entries() == 1);  // j = 0 has zero counting part
  CHECK(t.coefficient({{-1}, {0}}).value().to_rational() == frac(1, 2));
  CHECK(t.coefficient({{0}, {0}}).value().to_rational() == frac(1, 4));
  CHECK_THROWS_AS(build_table(DyadicPointSet(1, 3, {1}), 2), ValidationError);
}

TEST_CASE("table csv round-trip") {
  std::mt19937_64 rng(31);
  const auto p = oracle::random_points(rng, 2, 9, 4);
  const auto t = build_table(p);
  std::stringstream ss;
  write_haar_csv(ss, t);
  const auto back = read_haar_csv(ss);
  CHECK(back.dim() == t.dim());
  CHECK(back.count() == t.count());
  CHECK(back.box_limit() == t.box_limit());
  CHECK(back.stored_entries() == t.stored_entries());
  for (const auto& level : t.levels())
    for (std::size_t k = 0; k < level.keys.size(); ++k) {
      HaarIndex idx{level.j, HaarTable::unpack(level.j, level.keys[k])};
      CHECK(back.coefficient(idx).value() == t.coefficient(idx).value());
    }
}

TEST_CASE("volume tail closed forms") {
  CHECK(volume_tail_sums_l2_exact(1, 0) == frac(1, 12));
  CHECK(std::abs(volume_tail_sums(1, 0, TailWeights::l2()) - 1.0 / 12) <= 1e-15);

  const auto l2_coord = [](int j) { return j < 0 ? 0.25 : std::exp2(-2.0 * j - 4); };
  for (std::size_t d = 1; d <= 3; ++d)
    for (int J = 0; J <= 4; ++J) {
      const double brute = oracle::tail_bruteforce(d, J, 40, l2_coord, false);
      CHECK(std::abs(volume_tail_sums(d, J, TailWeights::l2()) - brute) <= 1e-12);
      CHECK(std::abs(static_cast<double>(volume_tail_sums_l2_exact(d, J)) - brute) <= 1e-12);
      const double brute0 = oracle::tail_bruteforce(d, J, 40, l2_coord, true);
      CHECK(std::abs(volume_tail_sums(d, J, TailWeights::l2(), LevelRange::nonnegative) - brute0) <= 1e-12);
    }

  double previous = volume_tail_sums(2, 0, TailWeights::l2());
  for (int J = 1; J < 30; ++J) {
    const double v = volume_tail_sums(2, J, TailWeights::l2());
    CHECK(v < previous);
    previous = v;
  }
  CHECK(previous < 1e-15);
}

TEST_CASE("Besov volume tails match brute force") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const double p = 1 + 3 * unit(rng), q = 1 + 3 * unit(rng);
    // Keep the ratio 2^{q(s-1)} <= 2^{-1/2} so the brute-force range converges.
    const double lo = 1 / p - 1, hi = std::min(1 / p, 1 - 0.5 / q);
    const double s = lo + (hi - lo) * (0.1 + 0.8 * unit(rng));
    const std::size_t d = 1 + trial % 3;
    const int J = trial % 4;
    const auto coord = [&](int j) {
      return j < 0 ? std::exp2(-q) : std::exp2(-2 * q) * std::exp2(j * q * (s - 1));
    };
    const int jmax = d == 3 ? 110 : 200;
    const double brute = oracle::tail_bruteforce(d, J, jmax, coord, false);
    CAPTURE(trial);
    CHECK(std::abs(volume_tail_sums(d, J, TailWeights::besov(p, q, s)) - brute) <= 1e-12 * std::max(1.0, brute));
  }
}
