#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hodisc {

/// Dense vector over F2. Bit `i` (0-based) lives in word i/64 at bit i%64.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size);
  BitVector(std::initializer_list<int> bits);

  static BitVector from_word(std::uint64_t word, std::size_t size);

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  bool any() const;
  std::size_t popcount() const;
  /// Parity of the popcount of (*this AND other).
  bool dot(const BitVector& other) const;

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend bool operator==(const BitVector&, const BitVector&) = default;

  std::span<const std::uint64_t> words() const { return words_; }
  /// First word; only meaningful for size() <= 64.
  std::uint64_t word0() const { return words_.empty() ? 0 : words_[0]; }

  /// The first `n` bits as a new vector.
  BitVector prefix(std::size_t n) const;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Dense matrix over F2, stored row-wise. Entry (k, l) is 0-based here;
/// column l sits at bit l of the row word (LSB-first).
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);
  BitMatrix(std::initializer_list<std::initializer_list<int>> rows);

  static BitMatrix identity(std::size_t rows, std::size_t cols);
  static BitMatrix identity(std::size_t k) { return identity(k, k); }
  static BitMatrix from_rows(std::vector<BitVector> rows, std::size_t cols);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool value = true) { rows_[r].set(c, value); }
  const BitVector& row(std::size_t r) const { return rows_[r]; }
  std::span<const BitVector> row_span() const { return rows_; }
  BitVector column(std::size_t c) const;

  BitVector matvec(const BitVector& v) const;
  BitMatrix submatrix_upper_left(std::size_t r, std::size_t c) const;

  /// Largest 1-based row index k with a nonzero entry in 1-based column l, 0 if none.
  std::size_t last_nonzero_row(std::size_t col) const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

/// Dimension of the F2-span of `rows`. Works on a copy.
std::size_t rank(std::span<const BitVector> rows);
/// Fast path for vectors of length <= 64 packed into words.
std::size_t rank_words(std::span<const std::uint64_t> rows);

// Text format: "rows cols" then one hex string per row, ceil(cols/4) digits,
// the most significant bit of the string is column 1.
void write_matrix(std::ostream& out, const BitMatrix& m);
BitMatrix read_matrix(std::istream& in);
std::string row_to_hex(const BitVector& row);
BitVector row_from_hex(const std::string& hex, std::size_t cols);

}  // namespace hodisc
