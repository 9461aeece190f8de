#include "hodisc/points.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hodisc/error.hpp"

namespace hodisc {

namespace {

void check_generating_set(const GeneratingMatrixSet& g) {
  require(g.q_rows <= 64, "points: q_rows " + std::to_string(g.q_rows) +
                              " exceeds the 64-bit numerator limit");
  require(g.matrices.size() == g.dim, "points: generating set has " +
                                          std::to_string(g.matrices.size()) +
                                          " matrices for dimension " + std::to_string(g.dim));
}

bool index_fits(const GeneratingMatrixSet& g, std::uint64_t k) {
  return g.n_cols >= 64 || k < (std::uint64_t{1} << g.n_cols);
}

// Numerator contributed by column l of C: sum_r C[r, l] 2^(q - r), r 1-based.
std::uint64_t column_numerator(const BitMatrix& c, std::size_t col, std::size_t q) {
  std::uint64_t num = 0;
  for (std::size_t r = 0; r < q; ++r)
    if (c.get(r, col)) num |= std::uint64_t{1} << (q - 1 - r);
  return num;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw ValidationError("binary points: truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

}  // namespace

DyadicPointSet::DyadicPointSet(std::size_t dim, int precision_bits,
                               std::vector<std::uint64_t> coords, std::uint64_t start_index)
    : dim_(dim), precision_(precision_bits), start_(start_index), coords_(std::move(coords)) {
  require(dim >= 1, "DyadicPointSet: dimension must be >= 1");
  require(precision_bits >= 0 && precision_bits <= 64,
          "DyadicPointSet: precision_bits must lie in [0, 64]");
  require(coords_.size() % dim == 0, "DyadicPointSet: coordinate count not a multiple of d");
  if (precision_bits < 64) {
    const std::uint64_t limit = std::uint64_t{1} << precision_bits;
    for (auto v : coords_)
      if (v >= limit)
        throw ValidationError("DyadicPointSet: numerator " + std::to_string(v) +
                              " outside [0, 2^" + std::to_string(precision_bits) + ")");
  }
}

double DyadicPointSet::value(std::size_t k, std::size_t i) const {
  return std::ldexp(static_cast<double>(num(k, i)), -precision_);
}

int DyadicPointSet::effective_precision() const {
  std::uint64_t all = 0;
  for (auto v : coords_) all |= v;
  if (all == 0) return 0;
  return precision_ - std::countr_zero(all);
}

DyadicPointSet DyadicPointSet::with_precision(int bits) const {
  require(bits >= effective_precision() && bits <= 64,
          "with_precision: " + std::to_string(bits) + " bits cannot hold these points exactly");
  std::vector<std::uint64_t> c(coords_);
  for (auto& v : c) v = bits >= precision_ ? v << (bits - precision_) : v >> (precision_ - bits);
  return DyadicPointSet(dim_, bits, std::move(c), start_);
}

DyadicPointSet DyadicPointSet::head(std::size_t n) const {
  require(n <= size(), "head: " + std::to_string(n) + " > " + std::to_string(size()));
  return DyadicPointSet(dim_, precision_,
                        std::vector<std::uint64_t>(coords_.begin(),
                                                   coords_.begin() + static_cast<std::ptrdiff_t>(n * dim_)),
                        start_);
}

std::vector<std::uint64_t> point_at(const GeneratingMatrixSet& g, std::uint64_t k) {
  check_generating_set(g);
  if (!index_fits(g, k))
    throw ValidationError("point_at: index " + std::to_string(k) + " needs more than " +
                          std::to_string(g.n_cols) + " digits");
  BitVector digits(g.n_cols);
  for (std::size_t l = 0; l < g.n_cols && l < 64; ++l) digits.set(l, (k >> l) & 1U);
  std::vector<std::uint64_t> out(g.dim, 0);
  for (std::size_t j = 0; j < g.dim; ++j) {
    const BitVector x = g.matrices[j].matvec(digits);
    for (std::size_t r = 0; r < g.q_rows; ++r)
      if (x.get(r)) out[j] |= std::uint64_t{1} << (g.q_rows - 1 - r);
  }
  return out;
}

DyadicPointSet prefix(const GeneratingMatrixSet& g, std::size_t count, std::uint64_t start) {
  check_generating_set(g);
  if (count > 0 && !index_fits(g, start + count - 1))
    throw ValidationError("prefix: indices up to " + std::to_string(start + count - 1) +
                          " need more than " + std::to_string(g.n_cols) + " digits");
  const std::size_t cols = std::min<std::size_t>(g.n_cols, 64);
  // cumulative[j][c] = XOR of column numerators 0..c, the update when k-1 -> k
  // flips digits 0..ctz(k).
  std::vector<std::vector<std::uint64_t>> cumulative(g.dim, std::vector<std::uint64_t>(cols, 0));
  for (std::size_t j = 0; j < g.dim; ++j) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      acc ^= column_numerator(g.matrices[j], c, g.q_rows);
      cumulative[j][c] = acc;
    }
  }
  std::vector<std::uint64_t> coords;
  coords.reserve(count * g.dim);
  if (count > 0) {
    std::vector<std::uint64_t> x = point_at(g, start);
    coords.insert(coords.end(), x.begin(), x.end());
    for (std::uint64_t k = start + 1; k < start + count; ++k) {
      const auto c = static_cast<std::size_t>(std::countr_zero(k));
      for (std::size_t j = 0; j < g.dim; ++j) x[j] ^= cumulative[j][c];
      coords.insert(coords.end(), x.begin(), x.end());
    }
  }
  return DyadicPointSet(g.dim, static_cast<int>(g.q_rows), std::move(coords), start);
}

void write_points_csv(std::ostream& out, const DyadicPointSet& p) {
  out << 'k';
  for (std::size_t i = 1; i <= p.dim(); ++i) out << ",num_" << i;
  out << ",precision_bits\n";
  for (std::size_t k = 0; k < p.size(); ++k) {
    out << p.start_index() + k;
    for (std::size_t i = 0; i < p.dim(); ++i) out << ',' << p.num(k, i);
    out << ',' << p.precision_bits() << '\n';
  }
}

DyadicPointSet read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("k,", 0) != 0)
    throw ValidationError("points CSV: missing 'k,num_1,...' header");
  const std::size_t columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  require(columns >= 3, "points CSV: header needs k, at least one num column, precision_bits");
  const std::size_t dim = columns - 2;
  std::vector<std::uint64_t> coords;
  std::uint64_t start = 0;
  int precision = -1;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != columns)
      throw ValidationError("points CSV: row " + std::to_string(row + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(columns));
    const std::uint64_t k = std::stoull(cells[0]);
    if (row == 0) start = k;
    if (k != start + row) throw ValidationError("points CSV: indices must be consecutive");
    for (std::size_t i = 0; i < dim; ++i) coords.push_back(std::stoull(cells[1 + i]));
    const int b = std::stoi(cells.back());
    if (precision >= 0 && b != precision)
      throw ValidationError("points CSV: mixed precision_bits");
    precision = b;
    ++row;
  }
  if (precision < 0) precision = 0;
  return DyadicPointSet(dim, precision, std::move(coords), start);
}

void write_points_binary(std::ostream& out, const DyadicPointSet& p) {
  put_u64(out, p.dim());
  put_u64(out, static_cast<std::uint64_t>(p.precision_bits()));
  put_u64(out, p.size());
  for (auto v : p.coords()) put_u64(out, v);
}

DyadicPointSet read_points_binary(std::istream& in) {
  const std::uint64_t d = get_u64(in);
  const std::uint64_t b = get_u64(in);
  const std::uint64_t n = get_u64(in);
  require(d >= 1 && d <= 64 && b <= 64, "binary points: implausible header");
  std::vector<std::uint64_t> coords(n * d);
  for (auto& v : coords) v = get_u64(in);
  return DyadicPointSet(d, static_cast<int>(b), std::move(coords));
}

DyadicPointSet read_points(std::istream& in) {
  return in.peek() == 'k' ? read_points_csv(in) : read_points_binary(in);
}

}  // namespace hodisc
