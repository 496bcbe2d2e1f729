#pragma once

// One-flag syndrome-extraction circuits: sub-block decomposition of the
// measured operator, the location schedule, Pauli-frame propagation with
// injected faults, and exhaustive checks of the flag signatures.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclicflag/bits.hpp"
#include "cyclicflag/css_code.hpp"
#include "cyclicflag/pauli.hpp"

namespace cyclicflag {

/// A maximal run P^{a} followed by an identity gap of length b.
struct SubBlock {
  PauliKind kind = PauliKind::Z;
  std::size_t start = 1;  // first qubit (global, 1-based)
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t segment = 0;  // code block the run belongs to
};

/// One code block inside the concatenated wire space. `offset` counts the
/// leading identities that were folded into the last gap of the segment.
struct Segment {
  std::size_t first = 1;
  std::size_t n = 0;
  std::size_t offset = 0;
};

struct SubBlockDecomposition {
  std::size_t n = 0;
  std::vector<SubBlock> blocks;
  std::vector<Segment> segments;

  std::size_t m() const { return blocks.size(); }
  const SubBlock& block(std::size_t i) const {
    if (i < 1 || i > blocks.size()) throw std::out_of_range("sub-block index " + std::to_string(i) + " out of range");
    return blocks[i - 1];
  }

  /// c_i = sum over blocks j <= i of the same segment of (a_j + b_j).
  std::size_t c(std::size_t i) const {
    const auto& bi = block(i);
    std::size_t total = 0;
    for (std::size_t j = 1; j <= i; ++j) {
      if (blocks[j - 1].segment == bi.segment) total += blocks[j - 1].a + blocks[j - 1].b;
    }
    return total;
  }

  /// Shift l such that E_{l} members end exactly at the last qubit of block i
  /// (segment-local): l = (n_seg - e) mod n_seg with e the block's last qubit.
  std::size_t shift_l(std::size_t i) const {
    const auto& bi = block(i);
    const Segment& seg = segments[bi.segment];
    const std::size_t e = bi.start + bi.a - seg.first;  // local 1-based end
    return (seg.n - e) % seg.n;
  }

  /// The operator P_1^{a_1} I^{b_1} ... on its actual qubits.
  Pauli to_pauli() const {
    Pauli p(n);
    for (const auto& b : blocks) {
      for (std::size_t q = b.start; q < b.start + b.a; ++q) p.set(q, b.kind);
    }
    return p;
  }

  /// P_j on every block j > i (the step-4(b) trailing correction).
  Pauli trailing(std::size_t i) const {
    Pauli p(n);
    for (std::size_t j = i + 1; j <= blocks.size(); ++j) {
      const auto& b = blocks[j - 1];
      for (std::size_t q = b.start; q < b.start + b.a; ++q) p.set(q, b.kind);
    }
    return p;
  }
};

namespace detail {

inline void append_segment(SubBlockDecomposition& d, const Pauli& p, std::size_t first) {
  const std::size_t n = p.n();
  const std::size_t seg = d.segments.size();
  std::size_t offset = 0;
  while (offset < n && p.at(offset + 1) == PauliKind::I) ++offset;
  if (offset == n) throw std::invalid_argument("cannot decompose the identity operator");
  d.segments.push_back({first, n, offset});
  std::size_t q = offset + 1;
  while (q <= n) {
    const PauliKind k = p.at(q);
    std::size_t a = 0;
    while (q + a <= n && p.at(q + a) == k) ++a;
    std::size_t b = 0;
    while (q + a + b <= n && p.at(q + a + b) == PauliKind::I) ++b;
    d.blocks.push_back({k, first + q - 1, a, b, seg});
    q += a + b;
  }
  d.blocks.back().b += offset;
}

}  // namespace detail

/// Maximal-run decomposition; leading identities are folded into b_m.
inline SubBlockDecomposition decompose_operator(const Pauli& p) {
  SubBlockDecomposition d;
  d.n = p.n();
  detail::append_segment(d, p, 1);
  return d;
}

/// Decomposition over concatenated code blocks; every part must be
/// nontrivial and block boundaries are sub-block boundaries.
inline SubBlockDecomposition decompose_multiblock(const std::vector<Pauli>& parts) {
  SubBlockDecomposition d;
  for (const auto& part : parts) {
    detail::append_segment(d, part, d.n + 1);
    d.n += part.n();
  }
  if (parts.empty()) throw std::invalid_argument("decompose_multiblock: no parts");
  return d;
}

enum class LocationKind { Prep, DataCoupling, FlagCoupling, Measure };

/// Ancilla wires: index 0 is m0, index j+1 is flag f_j.
inline constexpr std::size_t kM0 = 0;
inline constexpr std::size_t flag_wire(std::size_t j) { return j + 1; }

inline std::string ancilla_name(std::size_t wire) {
  return wire == kM0 ? std::string("m0") : "f" + std::to_string(wire - 1);
}

struct Location {
  LocationKind kind = LocationKind::Prep;
  std::size_t wire = 0;  // ancilla index, or the data qubit for DataCoupling
  PauliKind basis = PauliKind::Z;
  bool opening = false;   // FlagCoupling only
  std::size_t block = 0;  // DataCoupling only: 1-based sub-block

  bool touches(std::size_t ancilla) const {
    switch (kind) {
      case LocationKind::Prep:
      case LocationKind::Measure: return wire == ancilla;
      case LocationKind::DataCoupling: return ancilla == kM0;
      case LocationKind::FlagCoupling: return ancilla == kM0 || ancilla == wire;
    }
    return false;
  }

  std::string to_string() const {
    switch (kind) {
      case LocationKind::Prep: return "PREP " + ancilla_name(wire) + " " + to_char(basis);
      case LocationKind::Measure: return "MEAS " + ancilla_name(wire) + " " + to_char(basis);
      case LocationKind::DataCoupling: return "CPL q" + std::to_string(wire) + " " + to_char(basis);
      case LocationKind::FlagCoupling: return std::string(opening ? "OPEN " : "CLOSE ") + ancilla_name(wire);
    }
    return "?";
  }
};

class FlagCircuit {
 public:
  FlagCircuit() = default;
  /// Arbitrary schedule over the given decomposition (used for mutation tests).
  FlagCircuit(SubBlockDecomposition d, std::vector<Location> locations, bool flagged)
      : d_(std::move(d)), locations_(std::move(locations)), flagged_(flagged) {
    for (const auto& loc : locations_) {
      if (loc.kind == LocationKind::DataCoupling && (loc.wire < 1 || loc.wire > d_.n)) {
        throw std::out_of_range("data coupling on qubit outside 1..n");
      }
      if (loc.kind != LocationKind::DataCoupling && loc.wire >= ancilla_count()) {
        throw std::out_of_range("location on unknown ancilla wire");
      }
    }
  }

  const SubBlockDecomposition& decomposition() const { return d_; }
  const std::vector<Location>& locations() const { return locations_; }
  bool flagged() const { return flagged_; }
  std::size_t n() const { return d_.n; }
  std::size_t m() const { return d_.m(); }
  /// m0 plus f_0..f_m for a flag circuit; m0 alone otherwise.
  std::size_t ancilla_count() const { return flagged_ ? d_.m() + 2 : 1; }
  Pauli measured_operator() const { return d_.to_pauli(); }

  std::string dump() const {
    std::string out;
    for (const auto& loc : locations_) out += loc.to_string() + "\n";
    return out;
  }

 private:
  SubBlockDecomposition d_;
  std::vector<Location> locations_;
  bool flagged_ = false;
};

/// The one-flag schedule: each sub-block's couplings sit strictly inside its
/// own flag window and outside every other window; f0 spans everything.
inline FlagCircuit build_flag_circuit(const SubBlockDecomposition& d) {
  const std::size_t m = d.m();
  if (m == 0) throw std::invalid_argument("build_flag_circuit: empty decomposition");
  std::vector<Location> locs;
  locs.push_back({LocationKind::Prep, kM0, PauliKind::Z});
  for (std::size_t j = 0; j <= m; ++j) locs.push_back({LocationKind::Prep, flag_wire(j), PauliKind::X});
  locs.push_back({LocationKind::FlagCoupling, flag_wire(0), PauliKind::X, true});
  for (std::size_t i = 1; i <= m; ++i) {
    locs.push_back({LocationKind::FlagCoupling, flag_wire(i), PauliKind::X, true});
    if (i > 1) locs.push_back({LocationKind::FlagCoupling, flag_wire(i - 1), PauliKind::X, false});
    const auto& b = d.block(i);
    for (std::size_t q = b.start; q < b.start + b.a; ++q) {
      locs.push_back({LocationKind::DataCoupling, q, b.kind, false, i});
    }
  }
  locs.push_back({LocationKind::FlagCoupling, flag_wire(m), PauliKind::X, false});
  locs.push_back({LocationKind::FlagCoupling, flag_wire(0), PauliKind::X, false});
  locs.push_back({LocationKind::Measure, kM0, PauliKind::Z});
  for (std::size_t j = 0; j <= m; ++j) locs.push_back({LocationKind::Measure, flag_wire(j), PauliKind::X});
  return FlagCircuit(d, std::move(locs), true);
}

inline FlagCircuit build_flag_circuit(const Pauli& p) { return build_flag_circuit(decompose_operator(p)); }

/// Bare parity measurement: prep m0, couple every support qubit in order, measure.
inline FlagCircuit build_nonflag_circuit(const SubBlockDecomposition& d) {
  std::vector<Location> locs;
  locs.push_back({LocationKind::Prep, kM0, PauliKind::Z});
  for (std::size_t i = 1; i <= d.m(); ++i) {
    const auto& b = d.block(i);
    for (std::size_t q = b.start; q < b.start + b.a; ++q) {
      locs.push_back({LocationKind::DataCoupling, q, b.kind, false, i});
    }
  }
  locs.push_back({LocationKind::Measure, kM0, PauliKind::Z});
  return FlagCircuit(d, std::move(locs), false);
}

inline FlagCircuit build_nonflag_circuit(const Pauli& p) { return build_nonflag_circuit(decompose_operator(p)); }

enum class FaultType { Gate, Prep, Measure, Idle };

struct FaultEvent {
  std::size_t location = 0;  // 0-based index into the circuit's locations
  FaultType type = FaultType::Gate;
  PauliKind control = PauliKind::I;  // Gate: error on the data qubit or flag wire
  PauliKind target = PauliKind::I;   // Gate: error on m0; Idle: error on `ancilla`
  std::size_t ancilla = 0;           // Idle only

  friend bool operator==(const FaultEvent&, const FaultEvent&) = default;

  std::string to_string(const FlagCircuit& c) const {
    const std::string where = "loc " + std::to_string(location) + " [" + c.locations().at(location).to_string() + "]";
    switch (type) {
      case FaultType::Gate: return where + " " + to_char(control) + to_char(target);
      case FaultType::Prep: return where + " prep flip";
      case FaultType::Measure: return where + " outcome flip";
      case FaultType::Idle: return "after " + where + " idle " + ancilla_name(ancilla) + " " + to_char(target);
    }
    return where;
  }
};

struct CircuitRun {
  Pauli residual;
  bool m0_flip = false;
  Bits flags;  // bit j+1 is flag f_j; empty for non-flag circuits

  bool any_flag() const { return flags.any(); }
  bool f0() const { return flags.size() > 0 && flags.get(1); }
  /// Indices i >= 1 with f_i flagged, ascending.
  std::vector<std::size_t> flagged_blocks() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 2; j <= flags.size(); ++j) {
      if (flags.get(j)) out.push_back(j - 1);
    }
    return out;
  }
  friend bool operator==(const CircuitRun&, const CircuitRun&) = default;
};

/// Pauli-frame execution of the circuit on a data frame `input`.
inline CircuitRun propagate(const FlagCircuit& c, const Pauli& input, std::span<const FaultEvent> faults = {}) {
  if (input.n() != c.n()) throw std::invalid_argument("propagate: input error size differs from circuit width");
  const auto& locs = c.locations();
  for (const auto& f : faults) {
    if (f.location >= locs.size()) throw std::out_of_range("fault references a nonexistent location");
    if (f.type == FaultType::Idle && f.ancilla >= c.ancilla_count()) throw std::out_of_range("idle fault on unknown wire");
  }
  CircuitRun run;
  run.residual = input;
  run.flags = Bits(c.flagged() ? c.m() + 1 : 0);
  std::vector<PauliKind> anc(c.ancilla_count(), PauliKind::I);
  auto has_z_on_m0 = [&] { return has_z(anc[kM0]); };

  for (std::size_t k = 0; k < locs.size(); ++k) {
    const Location& loc = locs[k];
    switch (loc.kind) {
      case LocationKind::Prep:
        anc[loc.wire] = PauliKind::I;
        break;
      case LocationKind::DataCoupling: {
        const bool anti = anticommute(run.residual.at(loc.wire), loc.basis);
        const bool mz = has_z_on_m0();
        if (anti) anc[kM0] = anc[kM0] * PauliKind::X;
        if (mz) run.residual.apply(loc.wire, loc.basis);
        break;
      }
      case LocationKind::FlagCoupling: {
        const bool fx = has_x(anc[loc.wire]);
        const bool mz = has_z_on_m0();
        if (fx) anc[kM0] = anc[kM0] * PauliKind::X;
        if (mz) anc[loc.wire] = anc[loc.wire] * PauliKind::Z;
        break;
      }
      case LocationKind::Measure: {
        const bool flip = anticommute(anc[loc.wire], loc.basis);
        if (loc.wire == kM0) {
          run.m0_flip = flip;
        } else if (flip) {
          run.flags.flip(loc.wire);
        }
        break;
      }
    }
    for (const auto& f : faults) {
      if (f.location != k) continue;
      switch (f.type) {
        case FaultType::Gate:
          if (loc.kind == LocationKind::DataCoupling) {
            run.residual.apply(loc.wire, f.control);
          } else if (loc.kind == LocationKind::FlagCoupling) {
            anc[loc.wire] = anc[loc.wire] * f.control;
          } else {
            throw std::invalid_argument("gate fault on a non-coupling location");
          }
          anc[kM0] = anc[kM0] * f.target;
          break;
        case FaultType::Prep:
          if (loc.kind != LocationKind::Prep) throw std::invalid_argument("prep fault on a non-prep location");
          anc[loc.wire] = anc[loc.wire] * (loc.basis == PauliKind::Z ? PauliKind::X : PauliKind::Z);
          break;
        case FaultType::Measure:
          if (loc.kind != LocationKind::Measure) throw std::invalid_argument("measurement fault on a non-measure location");
          if (loc.wire == kM0) {
            run.m0_flip = !run.m0_flip;
          } else {
            run.flags.flip(loc.wire);
          }
          break;
        case FaultType::Idle:
          anc[f.ancilla] = anc[f.ancilla] * f.target;
          break;
      }
    }
  }
  return run;
}

inline CircuitRun propagate(const FlagCircuit& c, const Pauli& input, const std::vector<FaultEvent>& faults) {
  return propagate(c, input, std::span<const FaultEvent>(faults));
}

namespace detail {

// ancilla wire is prepared at or before location k and measured after it
inline bool live_after(const FlagCircuit& c, std::size_t wire, std::size_t k) {
  bool prepared = false;
  const auto& locs = c.locations();
  for (std::size_t j = 0; j < locs.size(); ++j) {
    const auto& loc = locs[j];
    if (loc.kind == LocationKind::Prep && loc.wire == wire && j <= k) prepared = true;
    if (loc.kind == LocationKind::Measure && loc.wire == wire) return prepared && j > k;
  }
  return false;
}

}  // namespace detail

/// Every single fault of the circuit, ordered by location: 15 two-qubit
/// Paulis per coupling, one basis flip per prep, one outcome flip per
/// measurement, then X/Z/Y idle errors on each live ancilla the location
/// touched (minus the prepared basis itself right after a prep). An idle
/// error anywhere between two consecutive locations acting on a wire has the
/// same effect as one right after the first of them, so only that slot is
/// enumerated.
inline std::vector<FaultEvent> enumerate_faults(const FlagCircuit& c) {
  static constexpr PauliKind kAll[4] = {PauliKind::I, PauliKind::X, PauliKind::Z, PauliKind::Y};
  static constexpr PauliKind kNon[3] = {PauliKind::X, PauliKind::Z, PauliKind::Y};
  std::vector<FaultEvent> out;
  const auto& locs = c.locations();
  for (std::size_t k = 0; k < locs.size(); ++k) {
    const auto& loc = locs[k];
    switch (loc.kind) {
      case LocationKind::DataCoupling:
      case LocationKind::FlagCoupling:
        for (auto pc : kAll) {
          for (auto pt : kAll) {
            if (pc == PauliKind::I && pt == PauliKind::I) continue;
            out.push_back({k, FaultType::Gate, pc, pt, 0});
          }
        }
        break;
      case LocationKind::Prep: out.push_back({k, FaultType::Prep}); break;
      case LocationKind::Measure: out.push_back({k, FaultType::Measure}); break;
    }
    for (std::size_t w = 0; w < c.ancilla_count(); ++w) {
      if (!loc.touches(w) || !detail::live_after(c, w, k)) continue;
      for (auto p : kNon) {
        // stabilizer of the freshly prepared state: acts as the identity
        if (loc.kind == LocationKind::Prep && p == loc.basis) continue;
        out.push_back({k, FaultType::Idle, PauliKind::I, p, w});
      }
    }
  }
  return out;
}

enum class FaultForm { A, B, C, None };

inline std::string to_string(FaultForm f) {
  switch (f) {
    case FaultForm::A: return "a";
    case FaultForm::B: return "b";
    case FaultForm::C: return "c";
    case FaultForm::None: return "none";
  }
  return "?";
}

/// Form of a data-coupling fault: (a) no Z component on m0, (b) Z on m0 and
/// nothing on the data qubit, (c) Z on m0 and a data error as well.
inline FaultForm classify_fault_effect(const FlagCircuit& c, const FaultEvent& f) {
  if (f.location >= c.locations().size() || f.type != FaultType::Gate ||
      c.locations()[f.location].kind != LocationKind::DataCoupling) {
    throw std::invalid_argument("classify_fault_effect: fault is not on a data coupling");
  }
  if (f.control == PauliKind::I && f.target == PauliKind::I) return FaultForm::None;
  if (!has_z(f.target)) return FaultForm::A;
  return f.control == PauliKind::I ? FaultForm::B : FaultForm::C;
}

struct Claim1Report {
  std::size_t cases = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string flag_set_string(const Bits& flags) {
  std::string s = "{";
  for (std::size_t j = 1; j <= flags.size(); ++j) {
    if (!flags.get(j)) continue;
    if (s.size() > 1) s += ",";
    s += "f" + std::to_string(j - 1);
  }
  return s + "}";
}

inline Bits flag_set(std::size_t m, std::initializer_list<std::size_t> js) {
  Bits b(m + 1);
  for (auto j : js) b.set(j + 1);
  return b;
}

}  // namespace detail

/// Exhaustive check of the five flag-circuit properties (no-fault silence,
/// ZZ/IZ equivalence, data-coupling signatures, flag-coupling signatures,
/// f0 couplings) for one flag circuit.
inline Claim1Report verify_claim1(const FlagCircuit& c) {
  Claim1Report rep;
  if (!c.flagged()) throw std::invalid_argument("verify_claim1 needs a flag circuit");
  const std::size_t n = c.n();
  const std::size_t m = c.m();
  const Pauli p = c.measured_operator();
  const auto& locs = c.locations();
  auto violation = [&](const std::string& item, const std::string& what) { rep.violations.push_back(item + ": " + what); };

  // item 1: no fault, any single-qubit input error: silent flags, m0 reports the parity
  {
    std::vector<Pauli> inputs{Pauli(n)};
    for (std::size_t q = 1; q <= n; ++q) {
      for (auto k : {PauliKind::X, PauliKind::Z, PauliKind::Y}) inputs.push_back(Pauli::single(n, q, k));
    }
    for (const auto& e : inputs) {
      ++rep.cases;
      const auto run = propagate(c, e);
      if (run.any_flag()) violation("item 1", "input " + e.to_sparse() + " raised flags " + detail::flag_set_string(run.flags));
      if (run.m0_flip == e.commutes(p)) violation("item 1", "input " + e.to_sparse() + " gave the wrong parity");
      if (run.residual != e) violation("item 1", "input " + e.to_sparse() + " was altered without faults");
    }
  }

  std::optional<std::size_t> prev_coupling;
  for (std::size_t k = 0; k < locs.size(); ++k) {
    const auto& loc = locs[k];
    const bool coupling = loc.kind == LocationKind::DataCoupling || loc.kind == LocationKind::FlagCoupling;
    if (!coupling) continue;

    // item 2: (basis ⊗ Z) here equals Z on m0 entering this coupling, and the
    // prior coupling failing with I ⊗ Z
    {
      const PauliKind ctrl = loc.kind == LocationKind::DataCoupling ? loc.basis : PauliKind::Z;
      const std::vector<FaultEvent> here{{k, FaultType::Gate, ctrl, PauliKind::Z, 0}};
      const std::vector<FaultEvent> before{{k - 1, FaultType::Idle, PauliKind::I, PauliKind::Z, kM0}};
      const auto a = propagate(c, Pauli(n), here);
      const auto b = propagate(c, Pauli(n), before);
      ++rep.cases;
      if (!(a == b)) violation("item 2", "location " + std::to_string(k) + " " + loc.to_string());
      if (prev_coupling) {
        const std::vector<FaultEvent> prior{{*prev_coupling, FaultType::Gate, PauliKind::I, PauliKind::Z, 0}};
        ++rep.cases;
        if (!(a == propagate(c, Pauli(n), prior))) {
          violation("item 2", "location " + std::to_string(k) + " differs from prior coupling IZ");
        }
      }
    }
    prev_coupling = k;

    for (auto ctrl : {PauliKind::I, PauliKind::X, PauliKind::Z, PauliKind::Y}) {
      for (auto tgt : {PauliKind::I, PauliKind::X, PauliKind::Z, PauliKind::Y}) {
        if (ctrl == PauliKind::I && tgt == PauliKind::I) continue;
        const std::vector<FaultEvent> f{{k, FaultType::Gate, ctrl, tgt, 0}};
        const auto run = propagate(c, Pauli(n), f);
        const std::string tag = loc.to_string() + " " + to_char(ctrl) + to_char(tgt) + " -> " +
                                detail::flag_set_string(run.flags);
        if (loc.kind == LocationKind::DataCoupling) {
          if (!has_z(tgt)) continue;
          ++rep.cases;  // item 3
          if (run.flags != detail::flag_set(m, {0, loc.block})) violation("item 3", tag);
          continue;
        }
        const std::size_t i = loc.wire - 1;  // flag index
        if (i == 0) {
          ++rep.cases;  // item 5
          const Bits allowed = detail::flag_set(m, {0});
          if ((run.flags & allowed) != run.flags) violation("item 5", tag);
          if (!run.residual.is_identity() && run.residual != p) violation("item 5", tag + " left data error " + run.residual.to_sparse());
          continue;
        }
        if (!has_z(tgt) || has_z(ctrl)) continue;
        ++rep.cases;  // item 4
        Bits expect;
        if (loc.opening) {
          expect = i == 1 ? detail::flag_set(m, {0, 1}) : detail::flag_set(m, {0, i - 1, i});
        } else {
          expect = i == m ? detail::flag_set(m, {0}) : detail::flag_set(m, {0, i + 1});
        }
        if (run.flags != expect) violation("item 4", tag + " expected " + detail::flag_set_string(expect));
      }
    }
  }
  return rep;
}

/// verify_claim1 for the flag circuit of P, after checking that P commutes
/// with every generator of the code.
inline Claim1Report verify_claim1(const CssCode& code, const Pauli& p) {
  if (!code.in_normalizer(p)) throw std::invalid_argument("verify_claim1: operator does not commute with the stabilizer");
  return verify_claim1(build_flag_circuit(p));
}

/// Copy of the circuit with locations `index` and `index + 1` swapped.
inline FlagCircuit mutate_swap(const FlagCircuit& c, std::size_t index) {
  auto locs = c.locations();
  if (index + 1 >= locs.size()) throw std::out_of_range("mutate_swap index out of range");
  std::swap(locs[index], locs[index + 1]);
  return FlagCircuit(c.decomposition(), std::move(locs), c.flagged());
}

struct TFlagReport {
  bool holds = true;
  std::optional<FaultEvent> witness;
  std::optional<Pauli> residual;
};

/// Membership in the group generated by the code's stabilizers and P.
class StabilizerPlusOperator {
 public:
  StabilizerPlusOperator(const CssCode& code, const Pauli& p) : span_(2 * code.n()) {
    for (const auto& g : code.generators()) span_.insert(g.symplectic());
    span_.insert(p.symplectic());
  }
  bool contains(const Pauli& e) const { return span_.contains(e.symplectic()); }
  /// True iff some Q in the group has wt(E Q) <= 1.
  bool within_one(const Pauli& e) const {
    if (contains(e)) return true;
    for (std::size_t q = 1; q <= e.n(); ++q) {
      for (auto k : {PauliKind::X, PauliKind::Z, PauliKind::Y}) {
        Pauli f = e;
        f.apply(q, k);
        if (contains(f)) return true;
      }
    }
    return false;
  }

 private:
  RowSpace span_;
};

/// One-flag property: every single fault that raises no flag leaves a data
/// error E with min over Q in <S, P> of wt(E Q) <= 1.
inline TFlagReport verify_t_flag(const CssCode& code, const FlagCircuit& c) {
  if (c.n() != code.n()) throw std::invalid_argument("verify_t_flag: circuit width differs from code length");
  TFlagReport rep;
  const StabilizerPlusOperator group(code, c.measured_operator());
  const auto clean = propagate(c, Pauli(c.n()));
  if (clean.any_flag()) {
    rep.holds = false;
    return rep;
  }
  for (const auto& f : enumerate_faults(c)) {
    const std::vector<FaultEvent> one{f};
    const auto run = propagate(c, Pauli(c.n()), one);
    if (run.any_flag()) continue;
    if (!group.within_one(run.residual)) {
      rep.holds = false;
      rep.witness = f;
      rep.residual = run.residual;
      return rep;
    }
  }
  return rep;
}

/// Fault taxonomy rows used when tabulating protocol branches.
enum class FaultClass { NoFault, M0, F0, Fi, RedIX, RedYZ, FlagIX, FlagYZ, OrangeIX, OrangeYZ };

inline std::string to_string(FaultClass c) {
  switch (c) {
    case FaultClass::NoFault: return "No fault";
    case FaultClass::M0: return "Qubit or measurement fault on m0";
    case FaultClass::F0: return "Qubit or measurement fault on f0";
    case FaultClass::Fi: return "Qubit or measurement fault on f_i";
    case FaultClass::RedIX: return "Red CNOT fault with I or X error on the target qubit";
    case FaultClass::RedYZ: return "Red CNOT fault with Y or Z error on the target qubit";
    case FaultClass::FlagIX: return "Blue or green CNOT fault with I or X error on the target qubit";
    case FaultClass::FlagYZ: return "Blue or green CNOT fault with Y or Z error on the target qubit";
    case FaultClass::OrangeIX: return "Orange CNOT fault with I or X error on the target qubit";
    case FaultClass::OrangeYZ: return "Orange CNOT fault with Y or Z error on the target qubit";
  }
  return "?";
}

/// Taxonomy row of a fault. An idle error is charged to the location that
/// last acted on its wire: after a prep it is a qubit fault on that wire,
/// after a coupling it is that coupling failing with the error on the
/// corresponding leg.
inline FaultClass fault_class(const FlagCircuit& c, const FaultEvent& f) {
  const auto& loc = c.locations().at(f.location);
  auto wire_class = [](std::size_t wire) {
    if (wire == kM0) return FaultClass::M0;
    return wire == flag_wire(0) ? FaultClass::F0 : FaultClass::Fi;
  };
  PauliKind target = f.target;
  if (f.type == FaultType::Idle) {
    if (loc.kind == LocationKind::Prep || loc.kind == LocationKind::Measure) return wire_class(f.ancilla);
    if (f.ancilla != kM0) target = PauliKind::I;
  } else if (f.type != FaultType::Gate) {
    return wire_class(loc.wire);
  }
  const bool yz = has_z(target);
  if (loc.kind == LocationKind::DataCoupling) return yz ? FaultClass::RedYZ : FaultClass::RedIX;
  if (loc.wire == flag_wire(0)) return yz ? FaultClass::OrangeYZ : FaultClass::OrangeIX;
  return yz ? FaultClass::FlagYZ : FaultClass::FlagIX;
}

}  // namespace cyclicflag
