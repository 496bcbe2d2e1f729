#pragma once

// Binary polynomials and classical (cyclic) linear codes.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclicflag/bits.hpp"

namespace cyclicflag {

/// Polynomial over GF(2); coefficient j multiplies x^j.
class BinaryPolynomial {
 public:
  BinaryPolynomial() = default;

  static BinaryPolynomial from_exponents(const std::vector<std::size_t>& exponents) {
    BinaryPolynomial p;
    for (auto e : exponents) p.flip(e);
    return p;
  }
  /// "0,2,3,4" means 1 + x^2 + x^3 + x^4.
  static BinaryPolynomial parse(std::string_view text) {
    std::vector<std::size_t> exps;
    std::string cur;
    auto flush = [&] {
      if (cur.empty()) return;
      std::size_t v = 0;
      for (char c : cur) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad exponent '" + cur + "' in polynomial");
        v = v * 10 + static_cast<std::size_t>(c - '0');
      }
      exps.push_back(v);
      cur.clear();
    };
    for (char c : text) {
      if (c == ',' || c == ' ' || c == '\t') {
        flush();
      } else {
        cur.push_back(c);
      }
    }
    flush();
    if (exps.empty()) throw std::invalid_argument("empty exponent list");
    std::vector<std::size_t> sorted = exps;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("repeated exponent in polynomial '" + std::string(text) + "'");
    }
    return from_exponents(exps);
  }
  static BinaryPolynomial monomial(std::size_t e) { return from_exponents({e}); }
  static BinaryPolynomial one() { return monomial(0); }
  /// x^n - 1 (= x^n + 1 over GF(2)).
  static BinaryPolynomial x_pow_minus_one(std::size_t n) { return from_exponents({0, n}); }

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  bool coeff(std::size_t j) const { return j < coeffs_.size() && coeffs_[j]; }

  std::vector<std::size_t> exponents() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (coeffs_[j]) out.push_back(j);
    }
    return out;
  }

  /// Coefficient vector (c_0, ..., c_{len-1}) as Bits of the given length.
  Bits coefficient_bits(std::size_t length) const {
    if (static_cast<long>(length) <= degree()) throw std::invalid_argument("coefficient vector too short for degree");
    Bits b(length);
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (coeffs_[j]) b.set(j + 1);
    }
    return b;
  }

  friend BinaryPolynomial operator+(const BinaryPolynomial& a, const BinaryPolynomial& b) {
    BinaryPolynomial r = a;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      if (b.coeffs_[j]) r.flip(j);
    }
    return r;
  }
  friend BinaryPolynomial operator*(const BinaryPolynomial& a, const BinaryPolynomial& b) {
    BinaryPolynomial r;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (!a.coeffs_[i]) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        if (b.coeffs_[j]) r.flip(i + j);
      }
    }
    return r;
  }
  friend bool operator==(const BinaryPolynomial&, const BinaryPolynomial&) = default;

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (!coeffs_[j]) continue;
      if (!s.empty()) s += "+";
      s += j == 0 ? "1" : (j == 1 ? "x" : "x^" + std::to_string(j));
    }
    return s;
  }

 private:
  void flip(std::size_t e) {
    if (e >= coeffs_.size()) coeffs_.resize(e + 1, false);
    coeffs_[e] = !coeffs_[e];
    while (!coeffs_.empty() && !coeffs_.back()) coeffs_.pop_back();
  }

  std::vector<bool> coeffs_;
};

/// a = q b + r with deg r < deg b.
inline std::pair<BinaryPolynomial, BinaryPolynomial> poly_divide(const BinaryPolynomial& a, const BinaryPolynomial& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  BinaryPolynomial q;
  BinaryPolynomial r = a;
  const long db = b.degree();
  while (!r.is_zero() && r.degree() >= db) {
    const auto shift = static_cast<std::size_t>(r.degree() - db);
    const auto m = BinaryPolynomial::monomial(shift);
    q = q + m;
    r = r + m * b;
  }
  return {q, r};
}

inline bool divides_x_pow_minus_one(const BinaryPolynomial& p, std::size_t n) {
  if (p.is_zero()) return false;
  return poly_divide(BinaryPolynomial::x_pow_minus_one(n), p).second.is_zero();
}

/// Parity-check matrix of the cyclic code with check polynomial h: n - deg(h)
/// rows, row i holding (h_deg, ..., h_1, h_0) starting at column i.
inline BitMatrix check_matrix_from_h(const BinaryPolynomial& h, std::size_t n) {
  if (!divides_x_pow_minus_one(h, n)) {
    throw std::invalid_argument("h(x) = " + h.to_string() + " does not divide x^" + std::to_string(n) +
                                " - 1; not a check polynomial for length " + std::to_string(n));
  }
  const auto beta = static_cast<std::size_t>(h.degree());
  BitMatrix m(n - beta, n);
  for (std::size_t i = 1; i <= n - beta; ++i) {
    for (std::size_t j = 0; j <= beta; ++j) {
      if (h.coeff(beta - j)) m.set(i, i + j);
    }
  }
  return m;
}

/// Generator matrix of the cyclic code with generator polynomial g: n - deg(g)
/// rows, row i holding (g_0, ..., g_deg) starting at column i.
inline BitMatrix generator_matrix_from_g(const BinaryPolynomial& g, std::size_t n) {
  if (!divides_x_pow_minus_one(g, n)) {
    throw std::invalid_argument("g(x) = " + g.to_string() + " does not divide x^" + std::to_string(n) + " - 1");
  }
  const auto alpha = static_cast<std::size_t>(g.degree());
  if (alpha >= n) throw std::invalid_argument("g(x) = x^n - 1 generates the zero code");
  BitMatrix m(n - alpha, n);
  for (std::size_t i = 1; i <= n - alpha; ++i) {
    for (std::size_t j = 0; j <= alpha; ++j) {
      if (g.coeff(j)) m.set(i, i + j);
    }
  }
  return m;
}

/// Classical binary linear code given by a parity-check matrix H and a
/// generator matrix G with G H^T = 0.
struct ClassicalCode {
  std::size_t n = 0;
  std::size_t k = 0;
  BitMatrix H;
  BitMatrix G;
  std::optional<BinaryPolynomial> check_polynomial;

  /// Cyclic code from its check polynomial (validated to divide x^n - 1).
  static ClassicalCode from_check_polynomial(const BinaryPolynomial& h, std::size_t n) {
    ClassicalCode c;
    c.n = n;
    c.H = check_matrix_from_h(h, n);
    const auto g = poly_divide(BinaryPolynomial::x_pow_minus_one(n), h).first;
    c.k = static_cast<std::size_t>(h.degree());
    c.G = c.k == 0 ? BitMatrix(0, n) : generator_matrix_from_g(g, n);
    c.check_polynomial = h;
    return c;
  }

  /// Code defined by an explicit parity-check matrix (rows may be dependent).
  static ClassicalCode from_parity_check(BitMatrix H) {
    ClassicalCode c;
    c.n = H.cols();
    c.G = null_space(H);
    c.k = c.G.rows();
    c.H = std::move(H);
    return c;
  }
};

/// Minimum weight of a nonzero codeword if it is <= cap, otherwise nullopt.
/// Enumerates the message space when k <= 24, else searches error patterns of
/// weight <= cap against H.
inline std::optional<std::size_t> code_distance(const ClassicalCode& code, std::size_t cap) {
  if (cap < 1) throw std::invalid_argument("code_distance: cap must be >= 1");
  const std::size_t n = code.n;
  if (code.k == 0) return std::nullopt;
  if (code.k <= 24 && n <= 64) {
    // Gray-code walk over all 2^k messages; one row XOR per step.
    std::vector<std::uint64_t> rows;
    for (const auto& r : code.G.row_list()) rows.push_back(r.words().empty() ? 0 : r.words()[0]);
    std::uint64_t word = 0;
    std::size_t best = n + 1;
    const std::uint64_t total = std::uint64_t{1} << code.k;
    for (std::uint64_t step = 1; step < total; ++step) {
      word ^= rows[static_cast<std::size_t>(std::countr_zero(step))];
      const auto w = static_cast<std::size_t>(std::popcount(word));
      if (w < best) best = w;
    }
    if (best > cap) return std::nullopt;
    return best;
  }
  // pattern search: a weight-w codeword is a w-subset of columns of H summing to zero
  std::vector<Bits> cols;
  for (std::size_t j = 1; j <= n; ++j) cols.push_back(code.H.column(j));
  const std::size_t r = code.H.rows();
  std::vector<std::size_t> idx;
  for (std::size_t w = 1; w <= std::min(cap, n); ++w) {
    idx.assign(w, 0);
    for (std::size_t i = 0; i < w; ++i) idx[i] = i;
    while (true) {
      Bits s(r);
      for (auto i : idx) s ^= cols[i];
      if (s.none()) return w;
      std::size_t pos = w;
      while (pos > 0 && idx[pos - 1] == n - w + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < w; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return std::nullopt;
}

/// True iff the one-step cyclic shift of every generator row stays in the code.
inline bool is_cyclic(const ClassicalCode& code) {
  RowSpace span(code.G);
  for (const auto& r : code.G.row_list()) {
    // (c_1..c_n) -> (c_n, c_1, ..., c_{n-1}) is a left rotation by n-1
    if (!span.contains(r.rotate_left(code.n - 1))) return false;
  }
  return true;
}

/// True iff the row space of m is closed under cyclic shifts.
inline bool row_space_is_cyclic(const BitMatrix& m) {
  if (m.cols() == 0) return true;
  RowSpace span(m);
  for (const auto& r : m.row_list()) {
    if (!span.contains(r.rotate_left(m.cols() - 1))) return false;
  }
  return true;
}

/// Hx Hz^T = 0 (equivalently C_x^perp is contained in C_z).
inline bool dual_containment(const BitMatrix& hx, const BitMatrix& hz) {
  if (hx.rows() > 0 && hz.rows() > 0 && hx.cols() != hz.cols()) {
    throw std::invalid_argument("dual_containment: column counts differ");
  }
  return rows_orthogonal(hx, hz);
}

}  // namespace cyclicflag
