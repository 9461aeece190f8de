#include "hodisc/f2linalg.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

#include "hodisc/error.hpp"

namespace hodisc {

namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

BitVector::BitVector(std::size_t size) : size_(size), words_(word_count(size), 0) {}

BitVector::BitVector(std::initializer_list<int> bits) : BitVector(bits.size()) {
  std::size_t i = 0;
  for (int b : bits) set(i++, b != 0);
}

BitVector BitVector::from_word(std::uint64_t word, std::size_t size) {
  require(size <= 64, "BitVector::from_word: size " + std::to_string(size) + " > 64");
  BitVector v(size);
  if (size > 0) v.words_[0] = size == 64 ? word : word & ((std::uint64_t{1} << size) - 1);
  return v;
}

void BitVector::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value)
    words_[i >> 6] |= mask;
  else
    words_[i >> 6] &= ~mask;
}

bool BitVector::any() const {
  return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::size_t BitVector::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitVector::dot(const BitVector& other) const {
  std::uint64_t acc = 0;
  const std::size_t n = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i) acc ^= words_[i] & other.words_[i];
  return (std::popcount(acc) & 1) != 0;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  require(size_ == other.size_, "BitVector xor: size mismatch " + std::to_string(size_) +
                                    " vs " + std::to_string(other.size_));
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitVector BitVector::prefix(std::size_t n) const {
  require(n <= size_, "BitVector::prefix: " + std::to_string(n) + " > size " +
                          std::to_string(size_));
  BitVector out(n);
  for (std::size_t i = 0; i < out.words_.size(); ++i) out.words_[i] = words_[i];
  if (n % 64 != 0 && !out.words_.empty())
    out.words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
  return out;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix::BitMatrix(std::initializer_list<std::initializer_list<int>> rows) {
  cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
  for (const auto& r : rows) {
    require(r.size() == cols_, "BitMatrix: ragged initializer");
    rows_.emplace_back(r);
  }
}

BitMatrix BitMatrix::identity(std::size_t rows, std::size_t cols) {
  BitMatrix m(rows, cols);
  for (std::size_t k = 0; k < std::min(rows, cols); ++k) m.set(k, k);
  return m;
}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows, std::size_t cols) {
  for (const auto& r : rows)
    require(r.size() == cols, "BitMatrix::from_rows: row of length " +
                                  std::to_string(r.size()) + ", expected " + std::to_string(cols));
  BitMatrix m;
  m.cols_ = cols;
  m.rows_ = std::move(rows);
  return m;
}

BitVector BitMatrix::column(std::size_t c) const {
  BitVector out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out.set(r, get(r, c));
  return out;
}

BitVector BitMatrix::matvec(const BitVector& v) const {
  if (v.size() != cols_)
    throw ValidationError("matvec: matrix is " + dims(rows(), cols_) + " but vector has length " +
                          std::to_string(v.size()));
  BitVector out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out.set(r, rows_[r].dot(v));
  return out;
}

BitMatrix BitMatrix::submatrix_upper_left(std::size_t r, std::size_t c) const {
  if (r > rows() || c > cols_)
    throw ValidationError("submatrix_upper_left: requested " + dims(r, c) + " from " +
                          dims(rows(), cols_));
  BitMatrix out;
  out.cols_ = c;
  out.rows_.reserve(r);
  for (std::size_t k = 0; k < r; ++k) out.rows_.push_back(rows_[k].prefix(c));
  return out;
}

std::size_t BitMatrix::last_nonzero_row(std::size_t col) const {
  for (std::size_t r = rows(); r > 0; --r)
    if (get(r - 1, col - 1)) return r;
  return 0;
}

std::size_t rank(std::span<const BitVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t len = rows.front().size();
  for (const auto& r : rows)
    require(r.size() == len, "rank: mixed vector lengths " + std::to_string(len) + " and " +
                                 std::to_string(r.size()));
  if (len <= 64) {
    std::vector<std::uint64_t> words;
    words.reserve(rows.size());
    for (const auto& r : rows) words.push_back(r.word0());
    return rank_words(words);
  }
  std::vector<BitVector> work(rows.begin(), rows.end());
  std::size_t rk = 0;
  for (std::size_t col = 0; col < len && rk < work.size(); ++col) {
    auto pivot = std::find_if(work.begin() + static_cast<std::ptrdiff_t>(rk), work.end(),
                              [col](const BitVector& v) { return v.get(col); });
    if (pivot == work.end()) continue;
    std::swap(*pivot, work[rk]);
    for (std::size_t i = rk + 1; i < work.size(); ++i)
      if (work[i].get(col)) work[i] ^= work[rk];
    ++rk;
  }
  return rk;
}

std::size_t rank_words(std::span<const std::uint64_t> rows) {
  // XOR basis indexed by leading bit.
  std::uint64_t basis[64] = {};
  std::size_t rk = 0;
  for (std::uint64_t v : rows) {
    while (v != 0) {
      const int top = 63 - std::countl_zero(v);
      if (basis[top] == 0) {
        basis[top] = v;
        ++rk;
        break;
      }
      v ^= basis[top];
    }
  }
  return rk;
}

std::string row_to_hex(const BitVector& row) {
  static constexpr char digits[] = "0123456789abcdef";
  const std::size_t n = (row.size() + 3) / 4;
  std::string out(n, '0');
  for (std::size_t h = 0; h < n; ++h) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t col = 4 * h + b;
      nibble <<= 1;
      if (col < row.size() && row.get(col)) nibble |= 1;
    }
    out[h] = digits[nibble];
  }
  return out;
}

BitVector row_from_hex(const std::string& hex, std::size_t cols) {
  const std::size_t n = (cols + 3) / 4;
  if (hex.size() != n)
    throw ValidationError("matrix row '" + hex + "' has " + std::to_string(hex.size()) +
                          " hex digits, expected " + std::to_string(n));
  BitVector row(cols);
  for (std::size_t h = 0; h < n; ++h) {
    const char ch = hex[h];
    unsigned nibble;
    if (ch >= '0' && ch <= '9')
      nibble = static_cast<unsigned>(ch - '0');
    else if (ch >= 'a' && ch <= 'f')
      nibble = static_cast<unsigned>(ch - 'a' + 10);
    else if (ch >= 'A' && ch <= 'F')
      nibble = static_cast<unsigned>(ch - 'A' + 10);
    else
      throw ValidationError("matrix row '" + hex + "': invalid hex digit");
    for (std::size_t b = 0; b < 4; ++b) {
      const bool bit = (nibble >> (3 - b)) & 1U;
      const std::size_t col = 4 * h + b;
      if (col < cols)
        row.set(col, bit);
      else if (bit)
        throw ValidationError("matrix row '" + hex + "': padding bits must be zero");
    }
  }
  return row;
}

void write_matrix(std::ostream& out, const BitMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) out << row_to_hex(m.row(r)) << '\n';
}

BitMatrix read_matrix(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && line.empty()) {
  }
  std::istringstream head(line);
  std::size_t rows = 0, cols = 0;
  if (!(head >> rows >> cols)) throw ValidationError("matrix header '" + line + "' is not 'rows cols'");
  std::vector<BitVector> data;
  data.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      throw ValidationError("matrix truncated after " + std::to_string(r) + " of " +
                            std::to_string(rows) + " rows");
    data.push_back(row_from_hex(line, cols));
  }
  return BitMatrix::from_rows(std::move(data), cols);
}

}  // namespace hodisc
