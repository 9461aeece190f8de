#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hodisc/f2linalg.hpp"

namespace hodisc {

/// Polynomial over F2 of degree < 64; bit i is the coefficient of x^i.
class F2Poly {
 public:
  constexpr F2Poly() = default;
  constexpr explicit F2Poly(std::uint64_t coeffs) : coeffs_(coeffs) {}

  constexpr std::uint64_t coeffs() const { return coeffs_; }
  constexpr bool is_zero() const { return coeffs_ == 0; }
  /// Degree of a nonzero polynomial.
  int degree() const;
  std::string to_string() const;

  friend constexpr bool operator==(F2Poly, F2Poly) = default;

 private:
  std::uint64_t coeffs_ = 0;
};

/// The first `count` irreducible polynomials over F2, by degree, ties broken
/// by the coefficient bitset read as an integer.
std::vector<F2Poly> enumerate_irreducibles(std::size_t count);

/// Coefficients a_1..a_L of x^{-l} in the expansion of x^{deg(p)-z-1} / p(x)^i.
/// Entry l-1 of the result holds a_l.
BitVector laurent_coeffs(F2Poly p, int power, int shift, std::size_t length);

enum class GenmatKind { identity, tezuka, interlaced };

std::string to_string(GenmatKind kind);
GenmatKind parse_genmat_kind(const std::string& name);

/// Generating matrices C_1..C_d of a digital sequence, truncated to
/// q_rows x n_cols. Entry (k, l) (1-based) vanishes whenever k > row_bound_factor * l.
struct GeneratingMatrixSet {
  std::size_t dim = 0;
  std::size_t q_rows = 0;
  std::size_t n_cols = 0;
  std::vector<BitMatrix> matrices;
  std::size_t row_bound_factor = 1;
  GenmatKind kind = GenmatKind::identity;
  /// Quality parameter the construction guarantees, with its order (if known).
  std::optional<int> declared_t;
  int declared_alpha = 1;

  /// Full scan of the row-bound sparsity condition.
  bool satisfies_row_bound() const;
};

/// d copies of the q x n identity (van der Corput in every coordinate).
GeneratingMatrixSet identity_matrices(std::size_t dim, std::size_t n_cols, std::size_t q_rows);

/// Tezuka's generalised Niederreiter matrices from the first d' irreducibles.
GeneratingMatrixSet tezuka_matrices(std::size_t dim, std::size_t q_rows, std::size_t n_cols);

/// Sum of (deg p_j - 1) over the first d' irreducibles.
int tezuka_t_value(std::size_t dim);

/// Interlacing with factor 2: row 2u+v of E_j is row u+1 of C_{2(j-1)+v}.
/// `target_rows` defaults to 2 * source.q_rows.
GeneratingMatrixSet interlace(const GeneratingMatrixSet& source,
                              std::optional<std::size_t> target_rows = std::nullopt);

/// Inverse of interlace on the consumed rows.
GeneratingMatrixSet deinterlace(const GeneratingMatrixSet& interlaced);

/// Order-2 matrices in dimension d: Tezuka in 2d dimensions, interlaced.
/// q_rows defaults to 2 * n_cols.
GeneratingMatrixSet tezuka_interlaced(std::size_t dim, std::size_t n_cols,
                                      std::optional<std::size_t> q_rows = std::nullopt);

/// Dispatch on kind; `q_rows` defaults per kind (n for identity/tezuka, 2n interlaced).
GeneratingMatrixSet make_generating_matrices(GenmatKind kind, std::size_t dim, std::size_t n_cols,
                                             std::optional<std::size_t> q_rows = std::nullopt);

void write_genmat(std::ostream& out, const GeneratingMatrixSet& g);
GeneratingMatrixSet read_genmat(std::istream& in);

}  // namespace hodisc
