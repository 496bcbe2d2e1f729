#pragma once

// Phaseless n-qubit Pauli operators in symplectic form.

#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cyclicflag/bits.hpp"

namespace cyclicflag {

enum class PauliKind : unsigned char { I = 0, X = 1, Z = 2, Y = 3 };

inline char to_char(PauliKind k) {
  switch (k) {
    case PauliKind::I: return 'I';
    case PauliKind::X: return 'X';
    case PauliKind::Z: return 'Z';
    case PauliKind::Y: return 'Y';
  }
  return '?';
}

inline PauliKind pauli_kind_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I': return PauliKind::I;
    case 'X': return PauliKind::X;
    case 'Z': return PauliKind::Z;
    case 'Y': return PauliKind::Y;
    default: throw std::invalid_argument(std::string("not a Pauli letter: '") + c + "'");
  }
}

inline bool has_x(PauliKind k) { return k == PauliKind::X || k == PauliKind::Y; }
inline bool has_z(PauliKind k) { return k == PauliKind::Z || k == PauliKind::Y; }
inline PauliKind make_kind(bool x, bool z) {
  return static_cast<PauliKind>((x ? 1 : 0) | (z ? 2 : 0));
}
inline PauliKind operator*(PauliKind a, PauliKind b) {
  return static_cast<PauliKind>(static_cast<unsigned char>(a) ^ static_cast<unsigned char>(b));
}
/// Single-qubit anticommutation.
inline bool anticommute(PauliKind a, PauliKind b) {
  return (has_x(a) && has_z(b)) != (has_z(a) && has_x(b));
}

class Pauli {
 public:
  Pauli() = default;
  explicit Pauli(std::size_t n) : x_(n), z_(n) {}
  Pauli(Bits x, Bits z) : x_(std::move(x)), z_(std::move(z)) {
    if (x_.size() != z_.size()) throw std::invalid_argument("Pauli: x and z parts differ in length");
  }

  static Pauli identity(std::size_t n) { return Pauli(n); }
  static Pauli single(std::size_t n, std::size_t qubit, PauliKind kind) {
    Pauli p(n);
    p.set(qubit, kind);
    return p;
  }
  /// X-type operator with the given support.
  static Pauli x_type(Bits support) {
    Bits z(support.size());
    return Pauli(std::move(support), std::move(z));
  }
  static Pauli z_type(Bits support) {
    Bits x(support.size());
    return Pauli(std::move(x), std::move(support));
  }

  /// Dense form over {I,X,Y,Z}, e.g. "IXZYI".
  static Pauli from_dense(std::string_view s) {
    Pauli p(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) p.set(i + 1, pauli_kind_from_char(s[i]));
    return p;
  }

  /// Sparse form "X1 Z3 Y5" (1-based, whitespace separated, any order).
  static Pauli from_sparse(std::string_view s, std::size_t n) {
    Pauli p(n);
    std::set<std::size_t> seen;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok) {
      if (tok.size() < 2) throw std::invalid_argument("malformed sparse Pauli token '" + tok + "'");
      const PauliKind k = pauli_kind_from_char(tok[0]);
      std::size_t q = 0;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) {
          throw std::invalid_argument("malformed sparse Pauli token '" + tok + "'");
        }
        q = q * 10 + static_cast<std::size_t>(tok[i] - '0');
        if (q > n) break;
      }
      if (q < 1 || q > n) {
        throw std::invalid_argument("qubit index in '" + tok + "' outside 1.." + std::to_string(n));
      }
      if (!seen.insert(q).second) throw std::invalid_argument("duplicate qubit index " + std::to_string(q));
      p.set(q, k);
    }
    return p;
  }

  /// Accepts either text format. A string made only of I/X/Y/Z letters is
  /// dense and must have length n; anything else is parsed as sparse.
  static Pauli parse(std::string_view s, std::size_t n) {
    std::string trimmed;
    for (char c : s) {
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
    }
    const bool dense = !trimmed.empty() && trimmed.find_first_not_of("IXYZixyz") == std::string::npos &&
                       s.find_first_of(" \t") == std::string_view::npos;
    if (dense) {
      if (trimmed.size() != n) {
        throw std::invalid_argument("dense Pauli '" + trimmed + "' has length " + std::to_string(trimmed.size()) +
                                    ", expected " + std::to_string(n));
      }
      return from_dense(trimmed);
    }
    return from_sparse(s, n);
  }

  std::size_t n() const { return x_.size(); }
  const Bits& x() const { return x_; }
  const Bits& z() const { return z_; }

  PauliKind at(std::size_t qubit) const { return make_kind(x_.get(qubit), z_.get(qubit)); }
  void set(std::size_t qubit, PauliKind k) {
    x_.set(qubit, has_x(k));
    z_.set(qubit, has_z(k));
  }
  /// Multiplies a single-qubit factor into position `qubit`.
  void apply(std::size_t qubit, PauliKind k) {
    if (has_x(k)) x_.flip(qubit);
    if (has_z(k)) z_.flip(qubit);
  }

  /// (x_1..x_n | z_1..z_n).
  Bits symplectic() const { return x_.concat(z_); }

  std::size_t weight() const { return (x_ | z_).popcount(); }
  bool is_identity() const { return x_.none() && z_.none(); }
  bool is_x_type() const { return z_.none(); }
  bool is_z_type() const { return x_.none(); }

  Pauli& operator*=(const Pauli& other) {
    if (other.n() != n()) throw std::invalid_argument("Pauli product of operators on different qubit counts");
    x_ ^= other.x_;
    z_ ^= other.z_;
    return *this;
  }
  friend Pauli operator*(Pauli a, const Pauli& b) { return a *= b; }

  bool commutes(const Pauli& other) const {
    if (other.n() != n()) throw std::invalid_argument("commutation check on different qubit counts");
    return x_.dot(other.z_) == z_.dot(other.x_);
  }

  /// P_{l+1} ⊗ ... ⊗ P_n ⊗ P_1 ⊗ ... ⊗ P_l.
  Pauli left_cyclic_shift(std::size_t l) const {
    if (l >= n() && !(n() == 0 && l == 0)) {
      throw std::out_of_range("cyclic shift offset " + std::to_string(l) + " outside 0.." +
                              std::to_string(n() == 0 ? 0 : n() - 1));
    }
    return Pauli(x_.rotate_left(l), z_.rotate_left(l));
  }

  /// Qubits first..last as an operator on last-first+1 qubits.
  Pauli slice(std::size_t first, std::size_t last) const { return Pauli(x_.slice(first, last), z_.slice(first, last)); }
  /// Tensor product this ⊗ tail.
  Pauli tensor(const Pauli& tail) const { return Pauli(x_.concat(tail.x_), z_.concat(tail.z_)); }

  std::string to_dense() const {
    std::string s(n(), 'I');
    for (std::size_t q = 1; q <= n(); ++q) s[q - 1] = to_char(at(q));
    return s;
  }
  /// Sparse form in ascending qubit order; "I" for the identity.
  std::string to_sparse() const {
    std::string s;
    for (std::size_t q = 1; q <= n(); ++q) {
      const auto k = at(q);
      if (k == PauliKind::I) continue;
      if (!s.empty()) s.push_back(' ');
      s.push_back(to_char(k));
      s += std::to_string(q);
    }
    return s.empty() ? "I" : s;
  }

  friend bool operator==(const Pauli&, const Pauli&) = default;

  std::size_t hash() const { return x_.hash() * 31 + z_.hash(); }

 private:
  Bits x_;
  Bits z_;
};

struct PauliHash {
  std::size_t operator()(const Pauli& p) const { return p.hash(); }
};

inline Bits symplectic(const Pauli& p) { return p.symplectic(); }
inline Pauli multiply(const Pauli& a, const Pauli& b) { return a * b; }
inline bool commutes(const Pauli& a, const Pauli& b) { return a.commutes(b); }
inline std::size_t weight(const Pauli& p) { return p.weight(); }
inline Pauli left_cyclic_shift(const Pauli& p, std::size_t l) { return p.left_cyclic_shift(l); }

/// Lexicographic order on the symplectic vector.
inline std::strong_ordering symplectic_compare(const Pauli& a, const Pauli& b) {
  if (auto c = lex_compare(a.x(), b.x()); c != 0) return c;
  return lex_compare(a.z(), b.z());
}

}  // namespace cyclicflag
