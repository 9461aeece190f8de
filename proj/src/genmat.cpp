#include "hodisc/genmat.hpp"

#include <bit>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "hodisc/error.hpp"

namespace hodisc {

namespace {

// Remainder of a modulo b over F2, b nonzero.
std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const int db = 63 - std::countl_zero(b);
  while (a != 0) {
    const int da = 63 - std::countl_zero(a);
    if (da < db) break;
    a ^= b << (da - db);
  }
  return a;
}

using Coeffs = std::vector<std::uint8_t>;

Coeffs poly_mul(const Coeffs& a, const Coeffs& b) {
  Coeffs out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] ^= b[k];
  }
  return out;
}

Coeffs to_coeffs(F2Poly p) {
  Coeffs out(static_cast<std::size_t>(p.degree()) + 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (p.coeffs() >> i) & 1U;
  return out;
}

const std::map<std::string, GenmatKind>& kind_names() {
  static const std::map<std::string, GenmatKind> names = {
      {"identity", GenmatKind::identity},
      {"tezuka", GenmatKind::tezuka},
      {"tezuka-interlaced", GenmatKind::interlaced},
  };
  return names;
}

}  // namespace

int F2Poly::degree() const {
  require(coeffs_ != 0, "degree of the zero polynomial is undefined");
  return 63 - std::countl_zero(coeffs_);
}

std::string F2Poly::to_string() const {
  if (coeffs_ == 0) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    if (!((coeffs_ >> i) & 1U)) continue;
    if (!out.empty()) out += "+";
    if (i == 0)
      out += "1";
    else if (i == 1)
      out += "x";
    else
      out += "x^" + std::to_string(i);
  }
  return out;
}

std::vector<F2Poly> enumerate_irreducibles(std::size_t count) {
  require(count >= 1, "enumerate_irreducibles: count must be >= 1");
  std::vector<F2Poly> found;
  for (int deg = 1; found.size() < count; ++deg) {
    require(deg < 63, "enumerate_irreducibles: degree limit reached");
    const std::uint64_t lo = std::uint64_t{1} << deg;
    for (std::uint64_t c = lo; c < (lo << 1) && found.size() < count; ++c) {
      bool irreducible = true;
      // Trial division by the irreducibles of degree <= deg/2 found so far.
      for (F2Poly f : found) {
        if (2 * f.degree() > deg) break;
        if (poly_mod(c, f.coeffs()) == 0) {
          irreducible = false;
          break;
        }
      }
      if (irreducible) found.emplace_back(c);
    }
  }
  return found;
}

BitVector laurent_coeffs(F2Poly p, int power, int shift, std::size_t length) {
  require(!p.is_zero(), "laurent_coeffs: p must be nonzero");
  const int e = p.degree();
  require(power >= 1, "laurent_coeffs: power must be >= 1");
  require(shift >= 0 && shift < e, "laurent_coeffs: shift " + std::to_string(shift) +
                                       " outside [0, " + std::to_string(e) + ")");
  require(length >= 1, "laurent_coeffs: length must be >= 1");

  Coeffs pp{1};
  const Coeffs base = to_coeffs(p);
  for (int k = 0; k < power; ++k) pp = poly_mul(pp, base);
  const long deg = static_cast<long>(pp.size()) - 1;

  // 1/p^i = x^{-D} / R(x^{-1}) with R the reversal of p^i (R_0 = 1).
  // Coefficient of x^{-l} in x^{e-z-1}/p^i is s_k with k = l + e - z - 1 - D.
  const long offset = static_cast<long>(e) - shift - 1 - deg;
  const long kmax = static_cast<long>(length) + offset;
  BitVector out(length);
  if (kmax < 0) return out;
  std::vector<std::uint8_t> s(static_cast<std::size_t>(kmax) + 1, 0);
  s[0] = 1;
  for (long k = 1; k <= kmax; ++k) {
    std::uint8_t acc = 0;
    for (long r = 1; r <= std::min(k, deg); ++r)
      acc ^= static_cast<std::uint8_t>(pp[static_cast<std::size_t>(deg - r)] & s[static_cast<std::size_t>(k - r)]);
    s[static_cast<std::size_t>(k)] = acc;
  }
  for (std::size_t l = 1; l <= length; ++l) {
    const long k = static_cast<long>(l) + offset;
    if (k >= 0 && s[static_cast<std::size_t>(k)]) out.set(l - 1);
  }
  return out;
}

std::string to_string(GenmatKind kind) {
  switch (kind) {
    case GenmatKind::identity:
      return "identity";
    case GenmatKind::tezuka:
      return "tezuka";
    case GenmatKind::interlaced:
      return "tezuka-interlaced";
  }
  return "unknown";
}

GenmatKind parse_genmat_kind(const std::string& name) {
  const auto it = kind_names().find(name);
  if (it == kind_names().end())
    throw ValidationError("unknown generating matrix kind '" + name +
                          "' (expected identity, tezuka or tezuka-interlaced)");
  return it->second;
}

bool GeneratingMatrixSet::satisfies_row_bound() const {
  for (const auto& m : matrices)
    for (std::size_t l = 1; l <= m.cols(); ++l)
      if (m.last_nonzero_row(l) > row_bound_factor * l) return false;
  return true;
}

GeneratingMatrixSet identity_matrices(std::size_t dim, std::size_t n_cols, std::size_t q_rows) {
  require(dim >= 1, "identity_matrices: dimension must be >= 1");
  GeneratingMatrixSet g;
  g.dim = dim;
  g.q_rows = q_rows;
  g.n_cols = n_cols;
  g.matrices.assign(dim, BitMatrix::identity(q_rows, n_cols));
  g.row_bound_factor = 1;
  g.kind = GenmatKind::identity;
  if (dim == 1) g.declared_t = 0;
  return g;
}

int tezuka_t_value(std::size_t dim) {
  int t = 0;
  for (F2Poly p : enumerate_irreducibles(dim)) t += p.degree() - 1;
  return t;
}

GeneratingMatrixSet tezuka_matrices(std::size_t dim, std::size_t q_rows, std::size_t n_cols) {
  require(dim >= 1, "tezuka_matrices: dimension must be >= 1");
  const auto polys = enumerate_irreducibles(dim);
  GeneratingMatrixSet g;
  g.dim = dim;
  g.q_rows = q_rows;
  g.n_cols = n_cols;
  g.row_bound_factor = 1;
  g.kind = GenmatKind::tezuka;
  g.declared_t = tezuka_t_value(dim);
  g.declared_alpha = 1;
  for (F2Poly p : polys) {
    const int e = p.degree();
    std::vector<BitVector> rows;
    rows.reserve(q_rows);
    for (std::size_t k = 1; k <= q_rows; ++k) {
      // k - 1 = (i - 1) e + z
      const int i = static_cast<int>((k - 1) / static_cast<std::size_t>(e)) + 1;
      const int z = static_cast<int>((k - 1) % static_cast<std::size_t>(e));
      rows.push_back(n_cols == 0 ? BitVector() : laurent_coeffs(p, i, z, n_cols));
    }
    g.matrices.push_back(BitMatrix::from_rows(std::move(rows), n_cols));
  }
  return g;
}

GeneratingMatrixSet interlace(const GeneratingMatrixSet& source,
                              std::optional<std::size_t> target_rows) {
  require(source.dim % 2 == 0, "interlace: source dimension " + std::to_string(source.dim) +
                                   " is odd");
  const std::size_t out_rows = target_rows.value_or(2 * source.q_rows);
  const std::size_t consumed = (out_rows + 1) / 2;
  require(consumed <= source.q_rows, "interlace: " + std::to_string(out_rows) +
                                         " target rows need " + std::to_string(consumed) +
                                         " source rows, have " + std::to_string(source.q_rows));
  GeneratingMatrixSet g;
  g.dim = source.dim / 2;
  g.q_rows = out_rows;
  g.n_cols = source.n_cols;
  g.row_bound_factor = 2 * source.row_bound_factor;
  g.kind = GenmatKind::interlaced;
  if (source.declared_t && source.declared_alpha == 1) {
    g.declared_t = 2 * *source.declared_t + static_cast<int>(g.dim);
    g.declared_alpha = 2;
  }
  for (std::size_t j = 0; j < g.dim; ++j) {
    std::vector<BitVector> rows;
    rows.reserve(out_rows);
    for (std::size_t r = 0; r < out_rows; ++r) {
      // 0-based row r = 2u + (v - 1)
      const std::size_t u = r / 2, v = r % 2;
      rows.push_back(source.matrices[2 * j + v].row(u));
    }
    g.matrices.push_back(BitMatrix::from_rows(std::move(rows), source.n_cols));
  }
  return g;
}

GeneratingMatrixSet deinterlace(const GeneratingMatrixSet& interlaced) {
  require(interlaced.row_bound_factor % 2 == 0, "deinterlace: input is not interlaced");
  GeneratingMatrixSet g;
  g.dim = 2 * interlaced.dim;
  g.q_rows = interlaced.q_rows / 2;
  g.n_cols = interlaced.n_cols;
  g.row_bound_factor = interlaced.row_bound_factor / 2;
  g.kind = GenmatKind::tezuka;
  for (std::size_t src = 0; src < g.dim; ++src) {
    const auto& e = interlaced.matrices[src / 2];
    std::vector<BitVector> rows;
    for (std::size_t u = 0; u < g.q_rows; ++u) rows.push_back(e.row(2 * u + src % 2));
    g.matrices.push_back(BitMatrix::from_rows(std::move(rows), g.n_cols));
  }
  return g;
}

GeneratingMatrixSet tezuka_interlaced(std::size_t dim, std::size_t n_cols,
                                      std::optional<std::size_t> q_rows) {
  const std::size_t rows = q_rows.value_or(2 * n_cols);
  return interlace(tezuka_matrices(2 * dim, (rows + 1) / 2, n_cols), rows);
}

GeneratingMatrixSet make_generating_matrices(GenmatKind kind, std::size_t dim, std::size_t n_cols,
                                             std::optional<std::size_t> q_rows) {
  switch (kind) {
    case GenmatKind::identity:
      return identity_matrices(dim, n_cols, q_rows.value_or(n_cols));
    case GenmatKind::tezuka:
      return tezuka_matrices(dim, q_rows.value_or(n_cols), n_cols);
    case GenmatKind::interlaced:
      return tezuka_interlaced(dim, n_cols, q_rows);
  }
  throw ValidationError("unknown generating matrix kind");
}

void write_genmat(std::ostream& out, const GeneratingMatrixSet& g) {
  out << "# hodisc-genmat v1 kind=" << to_string(g.kind) << " d=" << g.dim << " n=" << g.n_cols
      << " q=" << g.q_rows << " rbf=" << g.row_bound_factor << '\n';
  for (std::size_t j = 0; j < g.matrices.size(); ++j) {
    if (j > 0) out << '\n';
    write_matrix(out, g.matrices[j]);
  }
}

GeneratingMatrixSet read_genmat(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# hodisc-genmat v1", 0) != 0)
    throw ValidationError("genmat file: missing '# hodisc-genmat v1' header");
  std::map<std::string, std::string> fields;
  std::istringstream hs(line.substr(std::string("# hodisc-genmat v1").size()));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ValidationError("genmat header: bad field '" + tok + "'");
    fields[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"kind", "d", "n", "q", "rbf"})
    if (!fields.count(key)) throw ValidationError(std::string("genmat header: missing ") + key);

  GeneratingMatrixSet g;
  g.kind = parse_genmat_kind(fields["kind"]);
  g.dim = std::stoul(fields["d"]);
  g.n_cols = std::stoul(fields["n"]);
  g.q_rows = std::stoul(fields["q"]);
  g.row_bound_factor = std::stoul(fields["rbf"]);
  for (std::size_t j = 0; j < g.dim; ++j) {
    BitMatrix m = read_matrix(in);
    if (m.rows() != g.q_rows || m.cols() != g.n_cols)
      throw ValidationError("genmat file: matrix " + std::to_string(j + 1) + " has shape " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            ", header says " + std::to_string(g.q_rows) + "x" +
                            std::to_string(g.n_cols));
    g.matrices.push_back(std::move(m));
  }
  switch (g.kind) {
    case GenmatKind::identity:
      if (g.dim == 1) g.declared_t = 0;
      break;
    case GenmatKind::tezuka:
      g.declared_t = tezuka_t_value(g.dim);
      break;
    case GenmatKind::interlaced:
      g.declared_t = 2 * tezuka_t_value(2 * g.dim) + static_cast<int>(g.dim);
      g.declared_alpha = 2;
      break;
  }
  if (!g.satisfies_row_bound())
    throw ValidationError("genmat file: matrices violate declared rbf=" +
                          std::to_string(g.row_bound_factor));
  return g;
}

}  // namespace hodisc
