#pragma once

// Bit-packed GF(2) vectors and matrices.
//
// Indexing in the public API is 1-based so that bit j lines up with qubit j
// and with column j of a parity-check matrix.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cyclicflag {

class Bits {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Bits() = default;
  explicit Bits(std::size_t length) : length_(length), words_((length + kWordBits - 1) / kWordBits, 0) {}

  /// Parses a string of '0'/'1' characters; bit 1 is the first character.
  static Bits from_string(std::string_view s) {
    Bits b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') {
        b.set(i + 1);
      } else if (s[i] != '0') {
        throw std::invalid_argument("bit string contains a character other than 0/1: '" + std::string(s) + "'");
      }
    }
    return b;
  }

  /// Builds a vector with the listed 1-based positions set.
  static Bits with_ones(std::size_t length, std::initializer_list<std::size_t> ones) {
    Bits b(length);
    for (auto i : ones) b.set(i);
    return b;
  }

  std::size_t size() const { return length_; }
  bool empty() const { return length_ == 0; }

  bool get(std::size_t i) const {
    check(i);
    return (words_[(i - 1) / kWordBits] >> ((i - 1) % kWordBits)) & 1U;
  }
  void set(std::size_t i, bool value = true) {
    check(i);
    const Word mask = Word{1} << ((i - 1) % kWordBits);
    if (value) {
      words_[(i - 1) / kWordBits] |= mask;
    } else {
      words_[(i - 1) / kWordBits] &= ~mask;
    }
  }
  void flip(std::size_t i) {
    check(i);
    words_[(i - 1) / kWordBits] ^= Word{1} << ((i - 1) % kWordBits);
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
  }
  bool none() const { return !any(); }

  /// 1-based position of the lowest set bit, or 0 when no bit is set.
  std::size_t first_set() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w])) + 1;
    }
    return 0;
  }

  /// GF(2) inner product.
  bool dot(const Bits& other) const {
    same_length(other);
    Word acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
  }

  Bits& operator^=(const Bits& other) {
    same_length(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }
  Bits& operator&=(const Bits& other) {
    same_length(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
  }
  Bits& operator|=(const Bits& other) {
    same_length(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    return *this;
  }
  friend Bits operator^(Bits a, const Bits& b) { return a ^= b; }
  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }

  friend bool operator==(const Bits& a, const Bits& b) = default;

  /// Lexicographic order of the written bit string (bit 1 most significant, 0 < 1).
  friend std::strong_ordering lex_compare(const Bits& a, const Bits& b) {
    const std::size_t common = std::min(a.size(), b.size());
    for (std::size_t i = 1; i <= common; ++i) {
      const bool x = a.get(i);
      const bool y = b.get(i);
      if (x != y) return x ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return a.size() <=> b.size();
  }

  /// Bits first..last (inclusive, 1-based) as a new vector.
  Bits slice(std::size_t first, std::size_t last) const {
    if (first < 1 || last > length_ || first > last + 1) throw std::out_of_range("Bits::slice range out of bounds");
    Bits out(last + 1 - first);
    for (std::size_t i = first; i <= last; ++i) {
      if (get(i)) out.set(i - first + 1);
    }
    return out;
  }

  Bits concat(const Bits& tail) const {
    Bits out(length_ + tail.length_);
    for (std::size_t i = 1; i <= length_; ++i) {
      if (get(i)) out.set(i);
    }
    for (std::size_t i = 1; i <= tail.length_; ++i) {
      if (tail.get(i)) out.set(length_ + i);
    }
    return out;
  }

  /// Cyclic rotation with out[j] = in[j + l mod n] (a left shift by l).
  Bits rotate_left(std::size_t l) const {
    Bits out(length_);
    if (length_ == 0) return out;
    for (std::size_t j = 1; j <= length_; ++j) {
      if (get((j - 1 + l) % length_ + 1)) out.set(j);
    }
    return out;
  }

  std::string to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 1; i <= length_; ++i) {
      if (get(i)) s[i - 1] = '1';
    }
    return s;
  }

  std::span<const Word> words() const { return words_; }

  std::size_t hash() const {
    std::size_t h = std::hash<std::size_t>{}(length_);
    for (Word w : words_) h ^= std::hash<Word>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  void check(std::size_t i) const {
    if (i < 1 || i > length_) {
      throw std::out_of_range("bit index " + std::to_string(i) + " outside 1.." + std::to_string(length_));
    }
  }
  void same_length(const Bits& other) const {
    if (other.length_ != length_) {
      throw std::invalid_argument("bit vector length mismatch: " + std::to_string(length_) + " vs " +
                                  std::to_string(other.length_));
    }
  }

  std::size_t length_ = 0;
  std::vector<Word> words_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return b.hash(); }
};

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, Bits(cols)) {}
  BitMatrix(std::size_t cols, std::vector<Bits> rows) : cols_(cols), rows_(std::move(rows)) {
    for (const auto& r : rows_) {
      if (r.size() != cols_) throw std::invalid_argument("BitMatrix rows must all have the same length");
    }
  }

  static BitMatrix from_strings(std::initializer_list<std::string_view> rows) {
    return from_strings(std::vector<std::string_view>(rows));
  }
  static BitMatrix from_strings(const std::vector<std::string_view>& rows) {
    if (rows.empty()) return {};
    std::vector<Bits> out;
    for (auto r : rows) out.push_back(Bits::from_string(r));
    const std::size_t cols = out.front().size();
    return BitMatrix(cols, std::move(out));
  }
  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 1; i <= n; ++i) m.rows_[i - 1].set(i);
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  /// Row i, 1-based.
  const Bits& row(std::size_t i) const {
    if (i < 1 || i > rows_.size()) throw std::out_of_range("row index " + std::to_string(i) + " out of range");
    return rows_[i - 1];
  }
  bool get(std::size_t i, std::size_t j) const { return row(i).get(j); }
  void set(std::size_t i, std::size_t j, bool v = true) {
    if (i < 1 || i > rows_.size()) throw std::out_of_range("row index out of range");
    rows_[i - 1].set(j, v);
  }
  const std::vector<Bits>& row_list() const { return rows_; }

  void append_row(Bits r) {
    if (rows_.empty() && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw std::invalid_argument("appended row has wrong length");
    rows_.push_back(std::move(r));
  }

  /// Column j as a vector of length rows().
  Bits column(std::size_t j) const {
    Bits c(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i].get(j)) c.set(i + 1);
    }
    return c;
  }

  BitMatrix transpose() const {
    BitMatrix t(cols_, rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t j = 1; j <= cols_; ++j) {
        if (rows_[i].get(j)) t.rows_[j - 1].set(i + 1);
      }
    }
    return t;
  }

  /// M v over GF(2).
  Bits multiply(const Bits& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
    Bits out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i].dot(v)) out.set(i + 1);
    }
    return out;
  }

  /// Every row cyclically left-shifted by l columns.
  BitMatrix rotate_columns_left(std::size_t l) const {
    std::vector<Bits> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.rotate_left(l));
    return BitMatrix(cols_, std::move(out));
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<Bits> rows_;
};

/// Reduced row-echelon basis of a row space; supports membership and reduction.
///
/// Pivots are chosen as the leftmost nonzero column of each row in insertion
/// order, so the basis (and any witness derived from it) is reproducible.
class RowSpace {
 public:
  explicit RowSpace(std::size_t cols) : cols_(cols) {}
  explicit RowSpace(const BitMatrix& m) : cols_(m.cols()) {
    for (const auto& r : m.row_list()) insert(r);
  }

  /// Adds v to the spanning set; returns false if v was already in the span.
  bool insert(const Bits& v) {
    Bits r = reduce(v);
    const std::size_t p = r.first_set();
    if (p == 0) return false;
    for (auto& b : basis_) {
      if (b.get(p)) b ^= r;
    }
    // keep basis sorted by pivot so reduce() is a single pass
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), p);
    const auto pos = static_cast<std::size_t>(it - pivots_.begin());
    pivots_.insert(it, p);
    basis_.insert(basis_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
    return true;
  }

  /// v minus its component in the span (zero iff v is in the span).
  Bits reduce(Bits v) const {
    if (v.size() != cols_) throw std::invalid_argument("RowSpace: vector length does not match column count");
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      if (v.get(pivots_[k])) v ^= basis_[k];
    }
    return v;
  }

  bool contains(const Bits& v) const { return reduce(v).none(); }
  std::size_t dimension() const { return basis_.size(); }
  std::size_t cols() const { return cols_; }
  const std::vector<Bits>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

 private:
  std::size_t cols_;
  std::vector<Bits> basis_;
  std::vector<std::size_t> pivots_;
};

inline std::size_t rank(const BitMatrix& m) { return RowSpace(m).dimension(); }

/// True iff v is a GF(2) combination of the rows of m.
inline bool in_row_space(const BitMatrix& m, const Bits& v) {
  if (v.size() != m.cols()) {
    throw std::invalid_argument("in_row_space: vector length " + std::to_string(v.size()) + " != matrix columns " +
                                std::to_string(m.cols()));
  }
  return RowSpace(m).contains(v);
}

/// Basis of { v : m v = 0 }.
inline BitMatrix null_space(const BitMatrix& m) {
  const std::size_t n = m.cols();
  RowSpace rs(m);
  const auto& pivots = rs.pivots();
  const auto& basis = rs.basis();
  std::vector<bool> is_pivot(n + 1, false);
  for (auto p : pivots) is_pivot[p] = true;
  BitMatrix out(0, n);
  for (std::size_t free = 1; free <= n; ++free) {
    if (is_pivot[free]) continue;
    Bits v(n);
    v.set(free);
    // basis is fully reduced: pivot column p of row k is the only pivot set in that row
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (basis[k].get(free)) v.set(pivots[k]);
    }
    out.append_row(std::move(v));
  }
  return out;
}

/// True iff every row of a is orthogonal to every row of b.
inline bool rows_orthogonal(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows() > 0 && b.rows() > 0 && a.cols() != b.cols()) {
    throw std::invalid_argument("rows_orthogonal: column count mismatch");
  }
  for (const auto& ra : a.row_list()) {
    for (const auto& rb : b.row_list()) {
      if (ra.dot(rb)) return false;
    }
  }
  return true;
}

}  // namespace cyclicflag
