#include <doctest.h>

#include <bit>
#include <sstream>

#include "hodisc/error.hpp"
#include "hodisc/genmat.hpp"
#include "oracles.hpp"

using namespace hodisc;

namespace {

// p^i as a coefficient word.
std::uint64_t poly_pow(std::uint64_t p, int i) {
  std::uint64_t r = 1;
  for (int k = 0; k < i; ++k) r = oracle::clmul(r, p);
  return r;
}

int deg(std::uint64_t p) { return 63 - std::countl_zero(p); }

// Multiplies the truncated expansion back by p^i and compares the part of
// degree >= deg(p^i) with the expected monomial.
bool remultiplies(std::uint64_t p, int i, int z, std::size_t L) {
  const BitVector a = laurent_coeffs(F2Poly(p), i, z, L);
  std::uint64_t series = 0;  // sum a_l x^{L-l}
  for (std::size_t l = 1; l <= L; ++l)
    if (a.get(l - 1)) series |= std::uint64_t{1} << (L - l);
  const std::uint64_t pp = poly_pow(p, i);
  const std::uint64_t product = oracle::clmul(pp, series);
  const long target = static_cast<long>(L) + deg(p) - z - 1;
  std::uint64_t diff = product;
  if (target >= 0) diff ^= std::uint64_t{1} << target;
  return diff == 0 || deg(diff) < deg(pp);
}

}  // namespace

TEST_CASE("irreducibles in the required order") {
  auto two = enumerate_irreducibles(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == F2Poly(0b10));
  CHECK(two[1] == F2Poly(0b11));
  CHECK(enumerate_irreducibles(3)[2] == F2Poly(0b111));

  auto five = enumerate_irreducibles(5);
  std::vector<int> degrees;
  for (auto p : five) degrees.push_back(p.degree());
  CHECK(degrees == std::vector<int>{1, 1, 2, 3, 3});
  CHECK(five[3] == F2Poly(0b1011));
  CHECK(five[4] == F2Poly(0b1101));
}

TEST_CASE("irreducible enumeration matches trial division") {
  const auto list = enumerate_irreducibles(60);
  std::vector<std::uint64_t> expected;
  for (std::uint64_t p = 2; expected.size() < 60; ++p)
    if (oracle::is_irreducible(p)) expected.push_back(p);
  REQUIRE(list.size() == expected.size());
  for (std::size_t k = 0; k < list.size(); ++k) CHECK(list[k].coeffs() == expected[k]);
}

TEST_CASE("laurent expansion examples") {
  CHECK(laurent_coeffs(F2Poly(0b10), 1, 0, 4) == BitVector{1, 0, 0, 0});
  CHECK(laurent_coeffs(F2Poly(0b11), 1, 0, 4) == BitVector{1, 1, 1, 1});
  CHECK(laurent_coeffs(F2Poly(0b111), 1, 1, 3) == BitVector{0, 1, 1});
  CHECK_THROWS_AS(laurent_coeffs(F2Poly(0b111), 1, 2, 3), ValidationError);
}

TEST_CASE("laurent expansion re-multiplies to the numerator") {
  for (std::uint64_t p : {0b10ULL, 0b11ULL, 0b111ULL, 0b1011ULL, 0b1101ULL, 0b10011ULL})
    for (int i = 1; i <= 4; ++i)
      for (int z = 0; z < deg(p); ++z) {
        CAPTURE(p);
        CAPTURE(i);
        CAPTURE(z);
        CHECK(remultiplies(p, i, z, 20));
      }
}

TEST_CASE("Tezuka matrices") {
  const auto one = tezuka_matrices(1, 8, 8);
  CHECK(one.matrices[0] == BitMatrix::identity(8));

  const auto two = tezuka_matrices(2, 4, 4);
  // 1/(x+1)^i expansions give the binomial pattern mod 2.
  const BitMatrix expected{{1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}};
  CHECK(two.matrices[1] == expected);
  CHECK(tezuka_t_value(2) == 0);
  CHECK(tezuka_t_value(3) == 1);
  CHECK(tezuka_t_value(5) == 5);
  CHECK(two.satisfies_row_bound());
}

TEST_CASE("interlacing") {
  GeneratingMatrixSet src = identity_matrices(2, 2, 2);
  const auto e = interlace(src);
  CHECK(e.dim == 1);
  CHECK(e.q_rows == 4);
  CHECK(e.row_bound_factor == 2);
  CHECK(e.matrices[0] == BitMatrix{{1, 0}, {1, 0}, {0, 1}, {0, 1}});

  const auto tz = tezuka_matrices(4, 8, 8);
  const auto back = deinterlace(interlace(tz));
  REQUIRE(back.matrices.size() == 4);
  for (std::size_t j = 0; j < 4; ++j) CHECK(back.matrices[j] == tz.matrices[j]);

  CHECK_THROWS_AS(interlace(tezuka_matrices(3, 4, 4)), ValidationError);

  const auto il = tezuka_interlaced(1, 8);
  REQUIRE(il.declared_t.has_value());
  CHECK(*il.declared_t == 1);
  CHECK(il.declared_alpha == 2);
  CHECK(il.satisfies_row_bound());
}

TEST_CASE("generating matrix file round-trip") {
  for (auto kind : {GenmatKind::identity, GenmatKind::tezuka, GenmatKind::interlaced}) {
    const auto g = make_generating_matrices(kind, 2, 6);
    std::stringstream ss;
    write_genmat(ss, g);
    const auto back = read_genmat(ss);
    CHECK(back.dim == g.dim);
    CHECK(back.q_rows == g.q_rows);
    CHECK(back.n_cols == g.n_cols);
    CHECK(back.kind == g.kind);
    CHECK(back.row_bound_factor == g.row_bound_factor);
    CHECK(back.matrices == g.matrices);
  }
  CHECK(parse_genmat_kind(to_string(GenmatKind::interlaced)) == GenmatKind::interlaced);
  CHECK_THROWS_AS(parse_genmat_kind("sobol"), ValidationError);
}
