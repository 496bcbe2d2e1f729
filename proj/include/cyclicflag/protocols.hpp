#pragma once

// Flag-based error-correction and operator-measurement protocols executed in
// the Pauli frame, with faults injected per executed circuit ("slot").

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cyclicflag/bits.hpp"
#include "cyclicflag/consecutive.hpp"
#include "cyclicflag/css_code.hpp"
#include "cyclicflag/flag_circuit.hpp"
#include "cyclicflag/pauli.hpp"

namespace cyclicflag {

enum class Branch {
  Ftec1,
  Ftec2,
  Ftec3,
  Ftec4a,
  Ftec4b,
  Ftec4c,
  FtecUndefined,
  Meas1a,
  Meas1b,
  Meas1c,
  Meas2,
  Meas3,
  Meas4a,
  Meas4bi,
  Meas4bii,
  Meas4biii,
  Meas4c,
  MeasUndefined,
};

inline std::string to_string(Branch b) {
  switch (b) {
    case Branch::Ftec1: return "1";
    case Branch::Ftec2: return "2";
    case Branch::Ftec3: return "3";
    case Branch::Ftec4a: return "4a";
    case Branch::Ftec4b: return "4b";
    case Branch::Ftec4c: return "4c";
    case Branch::FtecUndefined: return "undefined";
    case Branch::Meas1a: return "1a";
    case Branch::Meas1b: return "1b";
    case Branch::Meas1c: return "1c";
    case Branch::Meas2: return "2";
    case Branch::Meas3: return "3";
    case Branch::Meas4a: return "4a";
    case Branch::Meas4bi: return "4b-i";
    case Branch::Meas4bii: return "4b-ii";
    case Branch::Meas4biii: return "4b-iii";
    case Branch::Meas4c: return "4c";
    case Branch::MeasUndefined: return "undefined";
  }
  return "?";
}

inline bool is_undefined(Branch b) { return b == Branch::FtecUndefined || b == Branch::MeasUndefined; }

/// A fault injected into the `slot`-th circuit the protocol executes (0-based).
struct PlannedFault {
  std::size_t slot = 0;
  FaultEvent fault;
};

struct FaultPlan {
  std::vector<PlannedFault> events;
  std::size_t size() const { return events.size(); }
  static FaultPlan none() { return {}; }
  static FaultPlan single(std::size_t slot, const FaultEvent& f) { return FaultPlan{{{slot, f}}}; }
};

enum class RoundKind { SyndromeFlag, Syndrome, OperatorFlag, Operator };

inline std::string to_string(RoundKind k) {
  switch (k) {
    case RoundKind::SyndromeFlag: return "syndrome-flag";
    case RoundKind::Syndrome: return "syndrome";
    case RoundKind::OperatorFlag: return "operator-flag";
    case RoundKind::Operator: return "operator";
  }
  return "?";
}

struct RoundRecord {
  RoundKind kind = RoundKind::Syndrome;
  std::size_t block = 0;  // code block (segment) index
  Bits outcomes;          // one bit per executed circuit, in order
  std::vector<Bits> flags;
  bool stopped = false;  // halted on a flag before finishing the round
};

/// One executed circuit: what it measured and in which round.
struct SlotRecord {
  const FlagCircuit* circuit = nullptr;
  RoundKind kind = RoundKind::Syndrome;
  std::size_t block = 0;
  std::size_t index = 0;  // generator index within the block, 0 for operator circuits
};

struct ProtocolOutcome {
  Branch branch = Branch::FtecUndefined;
  std::vector<Pauli> corrections;
  Pauli residual;
  std::optional<int> reported_outcome;  // +1 / -1, measurement protocol only
  std::vector<RoundRecord> transcript;
  std::vector<SlotRecord> slots;
  std::vector<Branch> block_branches;  // error-correction branch per block (measurement step 1)
  std::size_t max_syndrome_rounds = 0;  // per block
  std::size_t operator_rounds = 0;
  std::optional<std::size_t> lookup_matches;  // consecutive-set matches in a step-4(b)/(c) lookup
  bool lookup_miss = false;
};

struct ProtocolOptions {
  TieBreak tie = TieBreak::Lexicographic;
  /// Mutation switch for harness-sensitivity tests: step 4(b)/(c) applies
  /// only E_min of the full syndrome, skipping the trailing and set corrections.
  bool skip_step4b_correction = false;
};

/// Per-code-block data shared by every protocol run: the code, its decoder,
/// embedded generator circuits, and consecutive-set syndrome lookups.
struct CodeBlockContext {
  CssCode code;
  std::shared_ptr<const Decoder> decoder;
  std::size_t first = 1;  // first global qubit
  std::vector<FlagCircuit> flag_circuits;
  std::vector<FlagCircuit> plain_circuits;

  struct Match {
    std::size_t first_index = 0;
    std::size_t count = 0;
  };
  // per shift l: syndrome part -> first matching element and number of matches
  std::vector<std::unordered_map<Bits, Match, BitsHash>> lookup_z, lookup_x, lookup_p;
  std::vector<ConsecutiveSet> sets_z, sets_x, sets_p;
};

namespace detail {

inline Pauli embed(const Pauli& local, std::size_t first, std::size_t total) {
  const std::size_t after = total - (first - 1) - local.n();
  return Pauli(first - 1).tensor(local).tensor(Pauli(after));
}

inline SubBlockDecomposition embed(SubBlockDecomposition d, std::size_t first, std::size_t total) {
  for (auto& b : d.blocks) b.start += first - 1;
  for (auto& s : d.segments) s.first += first - 1;
  d.n = total;
  return d;
}

inline void build_lookups(CodeBlockContext& cb) {
  const std::size_t n = cb.code.n();
  const std::size_t rx = cb.code.rx();
  const std::size_t rz = cb.code.rz();
  auto fill = [&](ConsecutiveKind kind, std::vector<ConsecutiveSet>& sets,
                  std::vector<std::unordered_map<Bits, CodeBlockContext::Match, BitsHash>>& maps) {
    for (std::size_t l = 0; l < n; ++l) {
      sets.push_back(consecutive_set(kind, l, n));
      std::unordered_map<Bits, CodeBlockContext::Match, BitsHash> map;
      const auto& els = sets.back().elements;
      for (std::size_t i = 0; i < els.size(); ++i) {
        const Syndrome s = cb.code.syndrome(els[i]);
        Bits key = kind == ConsecutiveKind::Z ? s.sx : (kind == ConsecutiveKind::X ? s.sz : s.key());
        auto [it, fresh] = map.emplace(std::move(key), CodeBlockContext::Match{i, 0});
        ++it->second.count;
        (void)fresh;
      }
      maps.push_back(std::move(map));
    }
  };
  fill(ConsecutiveKind::Z, cb.sets_z, cb.lookup_z);
  fill(ConsecutiveKind::X, cb.sets_x, cb.lookup_x);
  fill(ConsecutiveKind::Product, cb.sets_p, cb.lookup_p);
  (void)rx;
  (void)rz;
}

}  // namespace detail

/// Everything a protocol run needs that does not depend on the input error
/// or the fault plan. Build once, run many times (runs are const and may
/// execute concurrently).
class ProtocolContext {
 public:
  /// Error correction on a single code.
  explicit ProtocolContext(const CssCode& code, ProtocolOptions opts = {}, std::size_t decoder_cap = Decoder::kFullCover)
      : ProtocolContext(std::vector<CssCode>{code}, {}, opts, decoder_cap) {}

  /// Measurement of P on a single code (error correction is available too).
  ProtocolContext(const CssCode& code, const Pauli& p, ProtocolOptions opts = {},
                  std::size_t decoder_cap = Decoder::kFullCover)
      : ProtocolContext(std::vector<CssCode>{code}, std::vector<Pauli>{p}, opts, decoder_cap) {}

  /// Several code blocks; `parts` (one per block, or empty) is the operator
  /// to measure, each part acting on its own block.
  ProtocolContext(const std::vector<CssCode>& codes, const std::vector<Pauli>& parts, ProtocolOptions opts = {},
                  std::size_t decoder_cap = Decoder::kFullCover)
      : opts_(opts) {
    if (codes.empty()) throw std::invalid_argument("ProtocolContext: no code blocks");
    if (!parts.empty() && parts.size() != codes.size()) {
      throw std::invalid_argument("ProtocolContext: need one operator part per code block");
    }
    for (const auto& c : codes) n_ += c.n();
    std::size_t first = 1;
    for (std::size_t b = 0; b < codes.size(); ++b) {
      auto cb = std::make_unique<CodeBlockContext>();
      cb->code = codes[b];
      cb->decoder = std::make_shared<const Decoder>(codes[b], decoder_cap, opts.tie);
      cb->first = first;
      for (const auto& g : codes[b].generators()) {
        const auto d = detail::embed(decompose_operator(g), first, n_);
        cb->flag_circuits.push_back(build_flag_circuit(d));
        cb->plain_circuits.push_back(build_nonflag_circuit(d));
      }
      detail::build_lookups(*cb);
      first += codes[b].n();
      blocks_.push_back(std::move(cb));
    }
    if (!parts.empty()) {
      for (std::size_t b = 0; b < codes.size(); ++b) {
        if (parts[b].n() != codes[b].n()) throw std::invalid_argument("operator part size differs from its block");
        if (!codes[b].in_normalizer(parts[b])) {
          throw std::invalid_argument("operator part " + std::to_string(b + 1) +
                                      " anticommutes with a stabilizer generator of its block");
        }
      }
      const auto d = decompose_multiblock(parts);
      op_flag_ = build_flag_circuit(d);
      op_plain_ = build_nonflag_circuit(d);
      op_ = d.to_pauli();
    }
  }

  std::size_t n() const { return n_; }
  std::size_t block_count() const { return blocks_.size(); }
  const CodeBlockContext& block(std::size_t b) const { return *blocks_.at(b); }
  const ProtocolOptions& options() const { return opts_; }
  bool has_operator() const { return op_.has_value(); }
  const Pauli& measured_operator() const {
    if (!op_) throw std::logic_error("context has no measured operator");
    return *op_;
  }
  const FlagCircuit& operator_flag_circuit() const { return op_flag_; }
  const FlagCircuit& operator_plain_circuit() const { return op_plain_; }
  /// Block containing global qubit q.
  std::size_t block_of(std::size_t q) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (q >= blocks_[b]->first && q < blocks_[b]->first + blocks_[b]->code.n()) return b;
    }
    throw std::out_of_range("qubit outside every block");
  }

 private:
  ProtocolOptions opts_;
  std::size_t n_ = 0;
  std::vector<std::unique_ptr<CodeBlockContext>> blocks_;
  std::optional<Pauli> op_;
  FlagCircuit op_flag_;
  FlagCircuit op_plain_;
};

namespace detail {

/// One protocol execution: the data frame, the slot counter and the record.
class ProtocolRun {
 public:
  ProtocolRun(const ProtocolContext& ctx, const Pauli& input, const FaultPlan& plan) : ctx_(ctx), plan_(plan) {
    if (input.n() != ctx.n()) throw std::invalid_argument("input error size differs from the code");
    out_.residual = input;
    syndrome_rounds_.assign(ctx.block_count(), 0);
  }

  struct Round {
    Bits sx, sz;
    bool flagged = false;
    std::size_t gen = 0;  // generator that raised the flag
    CircuitRun run;
    Bits key() const { return sx.concat(sz); }
    bool zero() const { return sx.none() && sz.none(); }
  };

  struct EcResult {
    Branch branch;
    bool first_syndrome_zero;
  };

  CircuitRun exec(const FlagCircuit& c, RoundKind kind, std::size_t block, std::size_t index) {
    std::vector<FaultEvent> faults;
    for (const auto& pf : plan_.events) {
      if (pf.slot == slot_) faults.push_back(pf.fault);
    }
    out_.slots.push_back({&c, kind, block, index});
    ++slot_;
    auto run = propagate(c, out_.residual, faults);
    out_.residual = run.residual;
    return run;
  }

  void apply(const Pauli& corr) {
    out_.residual *= corr;
    out_.corrections.push_back(corr);
  }

  void correct(std::size_t block, const Bits& key) {
    const auto& cb = ctx_.block(block);
    apply(embed(cb.decoder->correction_for_key(key), cb.first, ctx_.n()));
  }

  Round syndrome_round(std::size_t block, bool flag) {
    const auto& cb = ctx_.block(block);
    const std::size_t rx = cb.code.rx();
    const std::size_t rz = cb.code.rz();
    ++syndrome_rounds_[block];
    Round r{Bits(rx), Bits(rz), false, 0, {}};
    RoundRecord rec{flag ? RoundKind::SyndromeFlag : RoundKind::Syndrome, block, Bits(rx + rz), {}, false};
    for (std::size_t g = 0; g < rx + rz; ++g) {
      const auto& circ = flag ? cb.flag_circuits[g] : cb.plain_circuits[g];
      auto run = exec(circ, rec.kind, block, g);
      if (run.m0_flip) {
        rec.outcomes.set(g + 1);
        if (g < rx) {
          r.sx.set(g + 1);
        } else {
          r.sz.set(g - rx + 1);
        }
      }
      if (flag) rec.flags.push_back(run.flags);
      if (flag && run.any_flag()) {
        r.flagged = true;
        r.gen = g;
        r.run = std::move(run);
        rec.stopped = g + 1 < rx + rz;
        rec.outcomes = rec.outcomes.slice(1, g + 1);
        break;
      }
    }
    out_.transcript.push_back(std::move(rec));
    return r;
  }

  CircuitRun operator_round(bool flag) {
    ++out_.operator_rounds;
    const auto& circ = flag ? ctx_.operator_flag_circuit() : ctx_.operator_plain_circuit();
    const RoundKind kind = flag ? RoundKind::OperatorFlag : RoundKind::Operator;
    auto run = exec(circ, kind, 0, 0);
    RoundRecord rec{kind, 0, Bits(1), {}, false};
    if (run.m0_flip) rec.outcomes.set(1);
    if (flag) rec.flags.push_back(run.flags);
    out_.transcript.push_back(std::move(rec));
    return run;
  }

  /// Lower flagged index for the single-flag and adjacent-pair patterns.
  static std::optional<std::size_t> flagged_index(const CircuitRun& run, bool& adjacent_pair, bool& none) {
    const auto fi = run.flagged_blocks();
    none = fi.empty();
    adjacent_pair = fi.size() == 2 && fi[1] == fi[0] + 1;
    if (fi.size() == 1 || adjacent_pair) return fi[0];
    return std::nullopt;
  }

  /// Consecutive-set correction for a Z-on-ancilla fault in sub-block i of a
  /// circuit measuring on `block`, given a fresh syndrome round.
  void consecutive_correction(std::size_t block, PauliKind kind, std::size_t l, const Round& r) {
    const auto& cb = ctx_.block(block);
    const std::size_t rx = cb.code.rx();
    const std::size_t rz = cb.code.rz();
    if (ctx_.options().skip_step4b_correction) {
      correct(block, r.key());
      return;
    }
    const std::unordered_map<Bits, CodeBlockContext::Match, BitsHash>* map = nullptr;
    const ConsecutiveSet* set = nullptr;
    Bits probe;
    if (kind == PauliKind::Z) {
      map = &cb.lookup_z[l];
      set = &cb.sets_z[l];
      probe = r.sx;
    } else if (kind == PauliKind::X) {
      map = &cb.lookup_x[l];
      set = &cb.sets_x[l];
      probe = r.sz;
    } else {
      map = &cb.lookup_p[l];
      set = &cb.sets_p[l];
      probe = r.key();
    }
    auto it = map->find(probe);
    if (it == map->end()) {
      out_.lookup_matches = 0;
      out_.lookup_miss = true;
      correct(block, r.key());
      return;
    }
    out_.lookup_matches = it->second.count;
    apply(embed(set->elements[it->second.first_index], cb.first, ctx_.n()));
    if (kind == PauliKind::Z) {
      correct(block, Bits(rx).concat(r.sz));
    } else if (kind == PauliKind::X) {
      correct(block, r.sx.concat(Bits(rz)));
    }
  }

  Branch ftec_step4(std::size_t block, const Round& flagged_round) {
    const auto& cb = ctx_.block(block);
    const auto& d = cb.flag_circuits[flagged_round.gen].decomposition();
    bool pair = false;
    bool none = false;
    const auto i = flagged_index(flagged_round.run, pair, none);
    if (none) {
      const auto r = syndrome_round(block, false);
      correct(block, r.key());
      return Branch::Ftec4a;
    }
    if (!i) return Branch::FtecUndefined;
    if (!ctx_.options().skip_step4b_correction) apply(d.trailing(*i));
    const auto r = syndrome_round(block, false);
    consecutive_correction(block, d.block(*i).kind, d.shift_l(*i), r);
    return pair ? Branch::Ftec4c : Branch::Ftec4b;
  }

  EcResult ftec(std::size_t block) {
    const auto r1 = syndrome_round(block, true);
    if (r1.flagged) {
      if (r1.run.f0()) return {ftec_step4(block, r1), false};
      const auto r2 = syndrome_round(block, false);
      correct(block, r2.key());
      return {Branch::Ftec3, false};
    }
    const auto r2 = syndrome_round(block, true);
    if (r2.flagged) {
      if (r2.run.f0()) return {ftec_step4(block, r2), r1.zero()};
      correct(block, r1.key());
      return {Branch::Ftec3, r1.zero()};
    }
    if (r1.key() == r2.key()) {
      correct(block, r1.key());
      return {Branch::Ftec1, r1.zero()};
    }
    const auto r3 = syndrome_round(block, false);
    correct(block, r3.key());
    return {Branch::Ftec2, r1.zero()};
  }

  Branch measure_step4(const CircuitRun& flagged) {
    const auto& d = ctx_.operator_flag_circuit().decomposition();
    bool pair = false;
    bool none = false;
    const auto i = flagged_index(flagged, pair, none);
    if (none) {
      report(operator_round(false));
      return Branch::Meas4a;
    }
    if (!i) return Branch::MeasUndefined;
    const auto& sb = d.block(*i);
    const std::size_t block = sb.segment;
    if (!ctx_.options().skip_step4b_correction) apply(d.trailing(*i));
    const auto r = syndrome_round(block, false);
    consecutive_correction(block, sb.kind, d.shift_l(*i), r);
    report(operator_round(false));
    if (pair) return Branch::Meas4c;
    if (sb.kind == PauliKind::Z) return Branch::Meas4bi;
    return sb.kind == PauliKind::X ? Branch::Meas4bii : Branch::Meas4biii;
  }

  Branch measure() {
    const auto o1 = operator_round(true);
    if (o1.any_flag()) {
      if (o1.f0()) return measure_step4(o1);
      report(operator_round(false));
      return Branch::Meas3;
    }
    const auto o2 = operator_round(true);
    if (o2.any_flag()) {
      if (o2.f0()) return measure_step4(o2);
      report(o1);
      return Branch::Meas3;
    }
    if (o1.m0_flip == o2.m0_flip) {
      bool all_one = true;
      bool all_zero = true;
      for (std::size_t b = 0; b < ctx_.block_count(); ++b) {
        const auto ec = ftec(b);
        out_.block_branches.push_back(ec.branch);
        all_one = all_one && ec.branch == Branch::Ftec1;
        all_zero = all_zero && ec.first_syndrome_zero;
      }
      if (all_one && all_zero) {
        report(o1);
        return Branch::Meas1a;
      }
      if (all_one) {
        report(operator_round(false));
        return Branch::Meas1c;
      }
      report(o1);
      return Branch::Meas1b;
    }
    for (std::size_t b = 0; b < ctx_.block_count(); ++b) {
      const auto r = syndrome_round(b, false);
      correct(b, r.key());
    }
    report(operator_round(false));
    return Branch::Meas2;
  }

  void report(const CircuitRun& run) { out_.reported_outcome = run.m0_flip ? -1 : 1; }

  ProtocolOutcome finish(Branch b) {
    for (const auto& pf : plan_.events) {
      if (pf.slot >= slot_) throw std::out_of_range("fault plan references a slot the protocol never executed");
    }
    out_.branch = b;
    out_.max_syndrome_rounds = *std::max_element(syndrome_rounds_.begin(), syndrome_rounds_.end());
    return std::move(out_);
  }

 private:
  const ProtocolContext& ctx_;
  const FaultPlan& plan_;
  ProtocolOutcome out_;
  std::size_t slot_ = 0;
  std::vector<std::size_t> syndrome_rounds_;
};

}  // namespace detail

/// Flag error-correction protocol on one code block (block 0 by default).
inline ProtocolOutcome run_ftec(const ProtocolContext& ctx, const Pauli& input, const FaultPlan& plan = {},
                                std::size_t block = 0) {
  detail::ProtocolRun run(ctx, input, plan);
  const auto ec = run.ftec(block);
  return run.finish(ec.branch);
}

inline ProtocolOutcome run_ftec(const CssCode& code, const Pauli& input, const FaultPlan& plan = {}) {
  const ProtocolContext ctx(code);
  return run_ftec(ctx, input, plan);
}

/// Flag measurement protocol for the context's operator. The input codeword
/// is taken to be a +1 eigenstate of the operator.
inline ProtocolOutcome run_ft_measurement(const ProtocolContext& ctx, const Pauli& input, const FaultPlan& plan = {}) {
  if (!ctx.has_operator()) throw std::invalid_argument("run_ft_measurement: context has no operator to measure");
  detail::ProtocolRun run(ctx, input, plan);
  const Branch b = run.measure();
  return run.finish(b);
}

inline ProtocolOutcome run_ft_measurement(const CssCode& code, const Pauli& p, const Pauli& input,
                                          const FaultPlan& plan = {}) {
  const ProtocolContext ctx(code, p);
  return run_ft_measurement(ctx, input, plan);
}

/// Measurement of parts[0] ⊗ parts[1] ⊗ ... across code blocks; `input` acts
/// on the concatenated blocks.
inline ProtocolOutcome run_multiblock_measurement(const std::vector<CssCode>& codes, const std::vector<Pauli>& parts,
                                                  const Pauli& input, const FaultPlan& plan = {}) {
  if (codes.size() < 2) throw std::invalid_argument("multi-block measurement needs at least two blocks");
  const ProtocolContext ctx(codes, parts);
  return run_ft_measurement(ctx, input, plan);
}

}  // namespace cyclicflag
