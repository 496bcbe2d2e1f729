#pragma once

// Consecutive error sets and their distinguishability by a CSS code: a direct
// syndrome oracle plus the column-parity criteria for cyclic codes.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cyclicflag/bits.hpp"
#include "cyclicflag/classical_code.hpp"
#include "cyclicflag/css_code.hpp"
#include "cyclicflag/pauli.hpp"

namespace cyclicflag {

enum class ConsecutiveKind { X, Z, Product };

inline std::string to_string(ConsecutiveKind k) {
  switch (k) {
    case ConsecutiveKind::X: return "x";
    case ConsecutiveKind::Z: return "z";
    case ConsecutiveKind::Product: return "product";
  }
  return "?";
}

/// L(I^{n-p} ⊗ P^p, l) for p = 0..n-1 (P = X or Z), or all products of the
/// x and z families for Product (x index outer, z index inner).
struct ConsecutiveSet {
  ConsecutiveKind kind = ConsecutiveKind::Z;
  std::size_t l = 0;
  std::size_t n = 0;
  std::vector<Pauli> elements;
};

/// I^{n-p} ⊗ P^{p} shifted left by l.
inline Pauli consecutive_element(PauliKind type, std::size_t p, std::size_t l, std::size_t n) {
  if (p >= n) throw std::out_of_range("suffix length p must be below n");
  Pauli e(n);
  for (std::size_t j = n - p + 1; j <= n; ++j) e.set(j, type);
  return e.left_cyclic_shift(l);
}

inline ConsecutiveSet consecutive_set(ConsecutiveKind kind, std::size_t l, std::size_t n) {
  if (n == 0) throw std::invalid_argument("consecutive set needs n >= 1");
  if (l >= n) throw std::out_of_range("shift l = " + std::to_string(l) + " outside 0.." + std::to_string(n - 1));
  ConsecutiveSet s{kind, l, n, {}};
  if (kind == ConsecutiveKind::Product) {
    s.elements.reserve(n * n);
    for (std::size_t px = 0; px < n; ++px) {
      const Pauli ex = consecutive_element(PauliKind::X, px, l, n);
      for (std::size_t pz = 0; pz < n; ++pz) s.elements.push_back(ex * consecutive_element(PauliKind::Z, pz, l, n));
    }
  } else {
    const PauliKind type = kind == ConsecutiveKind::X ? PauliKind::X : PauliKind::Z;
    for (std::size_t p = 0; p < n; ++p) s.elements.push_back(consecutive_element(type, p, l, n));
  }
  return s;
}

enum class DistinguishMethod { Oracle, Lemma1, Lemma3 };

inline std::string to_string(DistinguishMethod m) {
  switch (m) {
    case DistinguishMethod::Oracle: return "oracle";
    case DistinguishMethod::Lemma1: return "lemma1";
    case DistinguishMethod::Lemma3: return "lemma3";
  }
  return "?";
}

struct DistinguishabilityReport {
  bool verdict = true;
  /// Two members with equal syndromes; present iff verdict is false.
  std::optional<std::pair<Pauli, Pauli>> witness;
  DistinguishMethod method = DistinguishMethod::Oracle;
};

/// Pairwise-distinct syndromes over the whole set. On a collision the
/// witness is (earlier element, later element) for the smallest later index.
inline DistinguishabilityReport distinguishable_oracle(const CssCode& code, const ConsecutiveSet& set) {
  if (set.n != code.n()) throw std::invalid_argument("consecutive set length differs from code length");
  DistinguishabilityReport rep;
  std::unordered_map<Bits, std::size_t, BitsHash> seen;
  seen.reserve(set.elements.size());
  for (std::size_t j = 0; j < set.elements.size(); ++j) {
    auto [it, fresh] = seen.emplace(code.syndrome(set.elements[j]).key(), j);
    if (!fresh) {
      rep.verdict = false;
      rep.witness = std::make_pair(set.elements[it->second], set.elements[j]);
      return rep;
    }
  }
  return rep;
}

namespace detail {

// prefix[i][c] = parity of row i over columns 1..c
inline std::vector<std::vector<unsigned char>> row_prefix_parity(const BitMatrix& h) {
  std::vector<std::vector<unsigned char>> out(h.rows(), std::vector<unsigned char>(h.cols() + 1, 0));
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t c = 1; c <= h.cols(); ++c) {
      out[i][c] = static_cast<unsigned char>(out[i][c - 1] ^ (h.get(i + 1, c) ? 1 : 0));
    }
  }
  return out;
}

// some row has odd parity over columns first..last
inline bool some_row_odd(const std::vector<std::vector<unsigned char>>& prefix, std::size_t first, std::size_t last) {
  for (const auto& row : prefix) {
    if (row[last] ^ row[first - 1]) return true;
  }
  return false;
}

inline DistinguishabilityReport lemma1_check(const BitMatrix& h, PauliKind type) {
  DistinguishabilityReport rep;
  rep.method = DistinguishMethod::Lemma1;
  const std::size_t n = h.cols();
  const auto prefix = row_prefix_parity(h);
  for (std::size_t p = 1; p < n; ++p) {
    for (std::size_t q = 0; q < p; ++q) {
      if (!some_row_odd(prefix, n - p + 1, n - q)) {
        rep.verdict = false;
        rep.witness = std::make_pair(consecutive_element(type, q, 0, n), consecutive_element(type, p, 0, n));
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace detail

/// Suffix-block criterion for E^z_{0,n}: for all p > q in 0..n-1 some row of Hx
/// has odd parity on columns n-p+1..n-q.
inline DistinguishabilityReport lemma1_check_z(const BitMatrix& hx) { return detail::lemma1_check(hx, PauliKind::Z); }

/// Same criterion for E^x_{0,n} against Hz.
inline DistinguishabilityReport lemma1_check_x(const BitMatrix& hz) { return detail::lemma1_check(hz, PauliKind::X); }

/// Suffix criterion for a cyclic check matrix: for all u in 2..n some row has
/// odd parity on columns u..n. The witness pairs the identity with the
/// (n-u+1)-qubit suffix error of the given type.
inline DistinguishabilityReport lemma3_check(const BitMatrix& h, PauliKind type = PauliKind::Z) {
  if (!row_space_is_cyclic(h)) {
    throw std::invalid_argument("lemma3_check: row space is not cyclic, the criterion does not apply");
  }
  DistinguishabilityReport rep;
  rep.method = DistinguishMethod::Lemma3;
  const std::size_t n = h.cols();
  const auto prefix = detail::row_prefix_parity(h);
  for (std::size_t u = 2; u <= n; ++u) {
    if (!detail::some_row_odd(prefix, u, n)) {
      rep.verdict = false;
      rep.witness = std::make_pair(Pauli(n), consecutive_element(type, n - u + 1, 0, n));
      return rep;
    }
  }
  return rep;
}

struct ShiftReport {
  std::size_t l = 0;
  DistinguishabilityReport report;
};

struct Theorem2Report {
  std::vector<ShiftReport> shifts;
  bool all_pass() const {
    for (const auto& s : shifts) {
      if (!s.report.verdict) return false;
    }
    return true;
  }
  std::vector<std::size_t> failing_shifts() const {
    std::vector<std::size_t> out;
    for (const auto& s : shifts) {
      if (!s.report.verdict) out.push_back(s.l);
    }
    return out;
  }
};

/// Oracle distinguishability of E^P_{l,n} for every shift l.
inline Theorem2Report theorem2_check(const CssCode& code) {
  if (!code.cyclic()) throw std::invalid_argument("theorem2_check requires a cyclic code");
  Theorem2Report out;
  for (std::size_t l = 0; l < code.n(); ++l) {
    out.shifts.push_back({l, distinguishable_oracle(code, consecutive_set(ConsecutiveKind::Product, l, code.n()))});
  }
  return out;
}

/// First element of the set whose syndrome key equals `key` (already in
/// the code's (sx | sz) layout), or nullopt.
inline std::optional<Pauli> find_by_syndrome(const CssCode& code, const ConsecutiveSet& set, const Bits& key) {
  for (const auto& e : set.elements) {
    if (code.syndrome(e).key() == key) return e;
  }
  return std::nullopt;
}

}  // namespace cyclicflag
