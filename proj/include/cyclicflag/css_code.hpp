#pragma once

// CSS codes: construction from two classical codes, syndromes, stabilizer and
// normalizer membership, minimum-weight decoding, and logical operators.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cyclicflag/bits.hpp"
#include "cyclicflag/classical_code.hpp"
#include "cyclicflag/pauli.hpp"

namespace cyclicflag {

/// Thrown when no correction exists within the requested weight cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LogicalPair {
  Pauli x;
  Pauli z;
};

/// sx: outcomes of the X-type generators (they detect Z components), in Hx
/// row order. sz: outcomes of the Z-type generators, in Hz row order.
struct Syndrome {
  Bits sx;
  Bits sz;

  bool zero() const { return sx.none() && sz.none(); }
  Bits key() const { return sx.concat(sz); }
  std::string to_string() const { return sx.to_string() + "|" + sz.to_string(); }
  friend bool operator==(const Syndrome&, const Syndrome&) = default;
};

class CssCode {
 public:
  /// CSS construction from C_x (checks become X-type generators) and C_z.
  static CssCode build(const ClassicalCode& cx, const ClassicalCode& cz) {
    if (cx.n != cz.n) throw std::invalid_argument("build_css: classical codes have different lengths");
    if (!dual_containment(cx.H, cz.H)) {
      throw std::invalid_argument("build_css: Hx Hz^T != 0, not a valid CSS pair");
    }
    const long k = static_cast<long>(cx.k) + static_cast<long>(cz.k) - static_cast<long>(cx.n);
    if (k <= 0) throw std::invalid_argument("build_css: k = k_x + k_z - n = " + std::to_string(k) + " <= 0");
    CssCode code = from_matrices(cx.H, cz.H);
    code.cyclic_ = is_cyclic(cx) && is_cyclic(cz);
    return code;
  }

  /// Code with the given stabilizer matrices; k = n - rank(Hx) - rank(Hz) (may be 0).
  static CssCode from_matrices(BitMatrix hx, BitMatrix hz) {
    const std::size_t n = std::max(hx.cols(), hz.cols());
    if (hx.rows() == 0) hx = BitMatrix(0, n);
    if (hz.rows() == 0) hz = BitMatrix(0, n);
    if (hx.cols() != hz.cols()) throw std::invalid_argument("Hx and Hz have different column counts");
    if (!rows_orthogonal(hx, hz)) throw std::invalid_argument("Hx Hz^T != 0: generators do not commute");
    if (hx.rows() + hz.rows() == 0) throw std::invalid_argument("degenerate code: no stabilizer generators");
    CssCode c;
    c.n_ = n;
    c.x_span_ = RowSpace(hx);
    c.z_span_ = RowSpace(hz);
    c.k_ = n - c.x_span_.dimension() - c.z_span_.dimension();
    c.hx_ = std::move(hx);
    c.hz_ = std::move(hz);
    c.cyclic_ = row_space_is_cyclic(c.hx_) && row_space_is_cyclic(c.hz_);
    c.logicals_ = c.derive_logicals();
    c.logicals_derived_ = true;
    return c;
  }

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t rx() const { return hx_.rows(); }
  std::size_t rz() const { return hz_.rows(); }
  const BitMatrix& hx() const { return hx_; }
  const BitMatrix& hz() const { return hz_; }
  bool cyclic() const { return cyclic_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// Generators in measurement order: X-type rows of Hx, then Z-type rows of Hz.
  std::vector<Pauli> generators() const {
    std::vector<Pauli> g;
    for (const auto& r : hx_.row_list()) g.push_back(Pauli::x_type(r));
    for (const auto& r : hz_.row_list()) g.push_back(Pauli::z_type(r));
    return g;
  }
  std::size_t generator_count() const { return rx() + rz(); }

  const std::vector<LogicalPair>& logicals() const { return logicals_; }
  bool logicals_derived() const { return logicals_derived_; }
  /// Replaces the logical basis (validate with validate_logicals first).
  void set_logicals(std::vector<LogicalPair> table) {
    if (table.size() != k_) throw std::invalid_argument("logical table size differs from k");
    logicals_ = std::move(table);
    logicals_derived_ = false;
  }

  Syndrome syndrome(const Pauli& e) const {
    if (e.n() != n_) throw std::invalid_argument("syndrome: error acts on " + std::to_string(e.n()) + " qubits, code has " +
                                                 std::to_string(n_));
    return {hx_.multiply(e.z()), hz_.multiply(e.x())};
  }

  bool in_stabilizer_group(const Pauli& p) const {
    check_size(p);
    return x_span_.contains(p.x()) && z_span_.contains(p.z());
  }
  bool in_normalizer(const Pauli& p) const { return syndrome(p).zero(); }
  bool logical_class_equal(const Pauli& a, const Pauli& b) const { return in_stabilizer_group(a * b); }

  /// Commutation pattern against (X̄_1..X̄_k, Z̄_1..Z̄_k); identifies the
  /// logical class of a normalizer element modulo the stabilizer group.
  Bits logical_pattern(const Pauli& p) const {
    Bits out(2 * k_);
    for (std::size_t i = 0; i < k_; ++i) {
      if (!p.commutes(logicals_[i].x)) out.set(i + 1);
      if (!p.commutes(logicals_[i].z)) out.set(k_ + i + 1);
    }
    return out;
  }

  /// Contribution of a single-qubit Pauli on qubit q to the syndrome key.
  Bits syndrome_column(std::size_t q, PauliKind kind) const {
    Bits sx(rx());
    Bits sz(rz());
    if (has_z(kind)) sx = hx_.column(q);
    if (has_x(kind)) sz = hz_.column(q);
    return sx.concat(sz);
  }

 private:
  void check_size(const Pauli& p) const {
    if (p.n() != n_) throw std::invalid_argument("operator size does not match code length");
  }

  // X̄ representatives: ker(Hz) modulo rowspace(Hx); Z̄: ker(Hx) modulo rowspace(Hz).
  // The two lists are then paired so that X̄_i and Z̄_j anticommute iff i = j.
  std::vector<LogicalPair> derive_logicals() const {
    auto pick = [&](const BitMatrix& kernel_of, const RowSpace& modulo) {
      RowSpace acc = modulo;
      std::vector<Bits> reps;
      const BitMatrix kernel = null_space(kernel_of);
      for (const auto& v : kernel.row_list()) {
        if (acc.insert(v)) reps.push_back(v);
      }
      return reps;
    };
    std::vector<Bits> lx = pick(hz_, x_span_);
    std::vector<Bits> lz = pick(hx_, z_span_);
    if (lx.size() != k_ || lz.size() != k_) throw std::logic_error("logical operator count differs from k");
    for (std::size_t i = 0; i < k_; ++i) {
      std::size_t j = i;
      while (j < k_ && !lx[i].dot(lz[j])) ++j;
      if (j == k_) throw std::logic_error("logical operators could not be paired");
      std::swap(lz[i], lz[j]);
      for (std::size_t q = 0; q < k_; ++q) {
        if (q == i) continue;
        if (lx[i].dot(lz[q])) lz[q] ^= lz[i];
        if (lx[q].dot(lz[i])) lx[q] ^= lx[i];
      }
    }
    std::vector<LogicalPair> out;
    for (std::size_t i = 0; i < k_; ++i) out.push_back({Pauli::x_type(lx[i]), Pauli::z_type(lz[i])});
    return out;
  }

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  BitMatrix hx_;
  BitMatrix hz_;
  RowSpace x_span_{0};
  RowSpace z_span_{0};
  bool cyclic_ = false;
  std::string name_;
  std::vector<LogicalPair> logicals_;
  bool logicals_derived_ = false;
};

inline CssCode build_css(const ClassicalCode& cx, const ClassicalCode& cz) { return CssCode::build(cx, cz); }

enum class TieBreak { Lexicographic, ReverseLexicographic };

/// Calls f(qubits, kinds) for every Pauli of weight w on n qubits; supports in
/// ascending combination order, kinds cycling X, Z, Y per position.
template <typename F>
void for_each_pauli_of_weight(std::size_t n, std::size_t w, F&& f) {
  static constexpr PauliKind kKinds[3] = {PauliKind::X, PauliKind::Z, PauliKind::Y};
  if (w > n) return;
  std::vector<std::size_t> idx(w);
  for (std::size_t i = 0; i < w; ++i) idx[i] = i + 1;
  std::vector<unsigned> kind(w, 0);
  std::vector<PauliKind> kinds(w);
  while (true) {
    std::fill(kind.begin(), kind.end(), 0U);
    while (true) {
      for (std::size_t i = 0; i < w; ++i) kinds[i] = kKinds[kind[i]];
      f(static_cast<const std::vector<std::size_t>&>(idx), static_cast<const std::vector<PauliKind>&>(kinds));
      std::size_t p = w;
      while (p > 0 && kind[p - 1] == 2) kind[--p] = 0;
      if (p == 0) break;
      ++kind[p - 1];
    }
    std::size_t pos = w;
    while (pos > 0 && idx[pos - 1] == n - w + pos) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < w; ++i) idx[i] = idx[i - 1] + 1;
  }
}

/// Minimum-weight decoder: syndrome -> lowest-weight Pauli with that syndrome.
///
/// The table is filled weight by weight up to `cap`, stopping early once every
/// reachable syndrome has an entry. Among equal-weight candidates the
/// lexicographically smallest symplectic vector wins (largest under
/// ReverseLexicographic). Codes with n <= 64 and at most 22 generators use a
/// dense word-packed table; larger ones fall back to a hash map.
class Decoder {
 public:
  /// Pass as `cap` to keep enumerating until every syndrome is covered.
  static constexpr std::size_t kFullCover = static_cast<std::size_t>(-1);

  explicit Decoder(const CssCode& code, std::size_t cap = 3, TieBreak tie = TieBreak::Lexicographic)
      : n_(code.n()), rx_(code.rx()), rz_(code.rz()), cap_(cap), tie_(tie) {
    const std::size_t rank_bits = RowSpace(code.hx()).dimension() + RowSpace(code.hz()).dimension();
    reachable_ = rank_bits >= 63 ? static_cast<std::size_t>(-1) : (std::size_t{1} << rank_bits);
    if (n_ <= 64 && rx_ + rz_ <= 22) {
      build_dense(code);
    } else {
      build_sparse(code);
    }
  }

  std::size_t cap() const { return cap_; }
  TieBreak tie_break() const { return tie_; }
  /// True if every reachable syndrome has an entry.
  bool complete() const { return size_ >= reachable_; }
  std::size_t size() const { return size_; }
  /// Largest weight the table was filled to.
  std::size_t covered_weight() const { return covered_weight_; }

  /// E_min(s); throws CapExceeded if no Pauli of weight <= cap has syndrome s.
  Pauli correction(const Syndrome& s) const { return correction_for_key(s.key()); }

  /// Same lookup keyed by the concatenated (sx | sz) bits.
  Pauli correction_for_key(const Bits& key) const {
    if (key.size() != rx_ + rz_) throw std::invalid_argument("syndrome length does not match the code");
    if (!dense_.empty()) {
      std::uint64_t k = 0;
      for (std::size_t i = 1; i <= key.size(); ++i) {
        if (key.get(i)) k |= std::uint64_t{1} << (i - 1);
      }
      const Entry& e = dense_[k];
      if (!e.set) throw_cap(key);
      Pauli p(n_);
      for (std::size_t q = 1; q <= n_; ++q) {
        p.set(q, make_kind((e.x >> (q - 1)) & 1U, (e.z >> (q - 1)) & 1U));
      }
      return p;
    }
    auto it = table_.find(key);
    if (it == table_.end()) throw_cap(key);
    return it->second;
  }

 private:
  struct Entry {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    std::uint32_t weight = 0;
    bool set = false;
  };

  [[noreturn]] void throw_cap(const Bits& key) const {
    throw CapExceeded("no correction of weight <= " + std::to_string(covered_weight_) + " for syndrome " +
                      key.to_string() + "; raise the cap");
  }

  // lexicographic order with bit 1 most significant: the first differing
  // position decides, and the vector holding a 1 there is larger
  static int lex_words(std::uint64_t a, std::uint64_t b) {
    if (a == b) return 0;
    const auto d = std::countr_zero(a ^ b);
    return ((a >> d) & 1U) ? 1 : -1;
  }
  bool better_words(std::uint64_t ax, std::uint64_t az, const Entry& b) const {
    int c = lex_words(ax, b.x);
    if (c == 0) c = lex_words(az, b.z);
    return tie_ == TieBreak::Lexicographic ? c < 0 : c > 0;
  }
  bool better(const Pauli& a, const Pauli& b) const {
    const auto c = symplectic_compare(a, b);
    return tie_ == TieBreak::Lexicographic ? c < 0 : c > 0;
  }

  void build_dense(const CssCode& code) {
    const std::size_t r = rx_ + rz_;
    dense_.assign(std::size_t{1} << r, Entry{});
    // column words: syndrome contribution of X, Z, Y on each qubit
    std::vector<std::array<std::uint64_t, 3>> col(n_);
    for (std::size_t q = 1; q <= n_; ++q) {
      const PauliKind kinds[3] = {PauliKind::X, PauliKind::Z, PauliKind::Y};
      for (int k = 0; k < 3; ++k) {
        const Bits b = code.syndrome_column(q, kinds[k]);
        std::uint64_t w = 0;
        for (std::size_t i = 1; i <= r; ++i) {
          if (b.get(i)) w |= std::uint64_t{1} << (i - 1);
        }
        col[q - 1][static_cast<std::size_t>(k)] = w;
      }
    }
    dense_[0].set = true;
    size_ = 1;
    static constexpr std::uint64_t kX[3] = {1, 0, 1};
    static constexpr std::uint64_t kZ[3] = {0, 1, 1};
    for (std::size_t w = 1; w <= std::min(cap_, n_) && size_ < reachable_; ++w) {
      const auto weight = static_cast<std::uint32_t>(w);
      auto visit = [&](auto&& self, std::size_t start, std::size_t left, std::uint64_t key, std::uint64_t x,
                       std::uint64_t z) -> void {
        if (left == 0) {
          Entry& e = dense_[key];
          if (!e.set) {
            e = Entry{x, z, weight, true};
            ++size_;
          } else if (e.weight == weight && better_words(x, z, e)) {
            e.x = x;
            e.z = z;
          }
          return;
        }
        for (std::size_t q = start; q + left <= n_; ++q) {
          const std::uint64_t bit = std::uint64_t{1} << q;
          for (std::size_t k = 0; k < 3; ++k) {
            self(self, q + 1, left - 1, key ^ col[q][k], x | (kX[k] * bit), z | (kZ[k] * bit));
          }
        }
      };
      visit(visit, 0, w, 0, 0, 0);
      covered_weight_ = w;
    }
  }

  void build_sparse(const CssCode& code) {
    std::vector<std::vector<Bits>> columns(n_ + 1);
    static constexpr PauliKind kKinds[3] = {PauliKind::X, PauliKind::Z, PauliKind::Y};
    for (std::size_t q = 1; q <= n_; ++q) {
      for (auto k : kKinds) columns[q].push_back(code.syndrome_column(q, k));
    }
    auto kind_index = [](PauliKind k) { return k == PauliKind::X ? 0U : (k == PauliKind::Z ? 1U : 2U); };
    table_.emplace(Bits(rx_ + rz_), Pauli(n_));
    size_ = 1;
    for (std::size_t w = 1; w <= std::min(cap_, n_) && size_ < reachable_; ++w) {
      std::unordered_map<Bits, Pauli, BitsHash> level;
      for_each_pauli_of_weight(n_, w, [&](const std::vector<std::size_t>& qs, const std::vector<PauliKind>& ks) {
        Bits key(rx_ + rz_);
        for (std::size_t i = 0; i < qs.size(); ++i) key ^= columns[qs[i]][kind_index(ks[i])];
        if (table_.contains(key)) return;
        Pauli cand(n_);
        for (std::size_t i = 0; i < qs.size(); ++i) cand.set(qs[i], ks[i]);
        auto it = level.find(key);
        if (it == level.end()) {
          level.emplace(std::move(key), std::move(cand));
        } else if (better(cand, it->second)) {
          it->second = std::move(cand);
        }
      });
      for (auto& [key, p] : level) table_.emplace(key, std::move(p));
      size_ = table_.size();
      covered_weight_ = w;
    }
  }

  std::size_t n_, rx_, rz_, cap_;
  TieBreak tie_;
  std::size_t reachable_ = 0;
  std::size_t size_ = 0;
  std::size_t covered_weight_ = 0;
  std::vector<Entry> dense_;
  std::unordered_map<Bits, Pauli, BitsHash> table_;
};

/// E_min(s) by increasing-weight search up to `cap`.
inline Pauli min_weight_correction(const CssCode& code, const Syndrome& s, std::size_t cap = 3) {
  return Decoder(code, cap).correction(s);
}

/// Logical class of E after ideal (fault-free) minimum-weight correction.
inline Bits ideal_decode(const CssCode& code, const Decoder& decoder, const Pauli& e) {
  return code.logical_pattern(e * decoder.correction(code.syndrome(e)));
}

struct DistanceCheck {
  bool holds = true;
  std::optional<Pauli> witness;
};

/// True iff no Pauli of weight < w is a nontrivial logical (in the normalizer
/// but outside the stabilizer group). The first violation found is returned.
inline DistanceCheck quantum_distance_at_least(const CssCode& code, std::size_t w) {
  if (w > 4) throw std::invalid_argument("quantum_distance_at_least supports w <= 4");
  DistanceCheck out;
  for (std::size_t weight = 1; weight < w && out.holds; ++weight) {
    for_each_pauli_of_weight(code.n(), weight, [&](const std::vector<std::size_t>& qs, const std::vector<PauliKind>& ks) {
      if (!out.holds) return;
      Pauli p(code.n());
      for (std::size_t i = 0; i < qs.size(); ++i) p.set(qs[i], ks[i]);
      if (code.in_normalizer(p) && !code.in_stabilizer_group(p)) {
        out.holds = false;
        out.witness = p;
      }
    });
  }
  return out;
}

struct LogicalReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks that every X̄_i, Z̄_i commutes with all generators and that X̄_i
/// anticommutes with Z̄_j exactly when i = j (X̄/X̄ and Z̄/Z̄ pairs commute).
inline LogicalReport validate_logicals(const CssCode& code, const std::vector<LogicalPair>& table) {
  LogicalReport rep;
  if (table.size() != code.k()) {
    rep.violations.push_back("table has " + std::to_string(table.size()) + " pairs, code has k = " +
                             std::to_string(code.k()));
    return rep;
  }
  const auto gens = code.generators();
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (const char* which : {"X", "Z"}) {
      const Pauli& l = which[0] == 'X' ? table[i].x : table[i].z;
      if (l.n() != code.n()) {
        rep.violations.push_back(std::string(which) + "bar_" + std::to_string(i + 1) + " has wrong length");
        continue;
      }
      for (std::size_t g = 0; g < gens.size(); ++g) {
        if (!l.commutes(gens[g])) {
          rep.violations.push_back(std::string(which) + "bar_" + std::to_string(i + 1) +
                                   " anticommutes with generator " + std::to_string(g + 1));
        }
      }
    }
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < table.size(); ++j) {
      if (table[i].x.n() != code.n() || table[j].z.n() != code.n() || table[j].x.n() != code.n()) continue;
      const bool anti = !table[i].x.commutes(table[j].z);
      if (anti != (i == j)) {
        rep.violations.push_back("Xbar_" + std::to_string(i + 1) + (anti ? " anticommutes" : " commutes") +
                                 " with Zbar_" + std::to_string(j + 1));
      }
      if (i < j) {
        if (!table[i].x.commutes(table[j].x)) {
          rep.violations.push_back("Xbar_" + std::to_string(i + 1) + " anticommutes with Xbar_" + std::to_string(j + 1));
        }
        if (!table[i].z.commutes(table[j].z)) {
          rep.violations.push_back("Zbar_" + std::to_string(i + 1) + " anticommutes with Zbar_" + std::to_string(j + 1));
        }
      }
    }
  }
  return rep;
}

}  // namespace cyclicflag
