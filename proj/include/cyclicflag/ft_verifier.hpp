#pragma once

// Exhaustive single-fault verification of the error-correction and
// measurement protocols, and tabulation of fault class -> branch taken.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclicflag/bits.hpp"
#include "cyclicflag/css_code.hpp"
#include "cyclicflag/flag_circuit.hpp"
#include "cyclicflag/parallel.hpp"
#include "cyclicflag/pauli.hpp"
#include "cyclicflag/protocols.hpp"

namespace cyclicflag {

struct CampaignOptions {
  std::size_t samples = 1000;  // high-weight condition-2 samples (error correction only)
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  TieBreak tie = TieBreak::Lexicographic;
  bool skip_step4b_correction = false;  // mutation switch
};

struct CaseFailure {
  std::string input;
  std::string fault;  // "none" or "slot k <circuit> loc ..."
  std::string branch;
  std::string condition;
  std::string residual;
};

struct CampaignResult {
  std::string code_id;
  std::string protocol;  // "ftec" or "measure"
  std::string operator_string;
  std::uint64_t seed = 0;
  std::size_t cases = 0;  // exhaustive cases
  std::size_t samples = 0;
  std::size_t passes = 0;
  std::size_t failures = 0;
  std::vector<CaseFailure> failure_list;
  /// Taxonomy row -> branches observed in the exhaustive cases.
  std::map<std::string, std::set<std::string>> table;
  /// First case (input and fault) that produced each row/branch cell.
  std::map<std::string, std::map<std::string, std::string>> table_examples;
  std::map<std::string, std::size_t> branch_counts;
  std::size_t max_syndrome_rounds = 0;
  std::size_t max_operator_rounds = 0;

  bool ok() const { return failures == 0; }
};

inline const std::string kRowNoInputNoFault = "No input error, no fault during syndrome measurement";
inline const std::string kRowNoInputOneFault = "No input error, one fault during syndrome measurement";
inline const std::string kRowWeightOneInput = "weight-1 input error, no fault syndrome measurement";

namespace detail {

/// Unbiased draw from [0, bound) by rejection; independent of the standard
/// library's distribution implementations so seeds reproduce everywhere.
inline std::uint64_t bounded(std::mt19937_64& g, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("bounded draw needs a positive bound");
  const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % bound + 1) % bound;
  while (true) {
    const std::uint64_t v = g();
    if (v <= limit) return v % bound;
  }
}

inline Pauli block_part(const ProtocolContext& ctx, std::size_t b, const Pauli& e) {
  const auto& cb = ctx.block(b);
  return e.slice(cb.first, cb.first + cb.code.n() - 1);
}

/// Concatenated per-block logical class after ideal decoding.
inline Bits ideal_pattern(const ProtocolContext& ctx, const Pauli& e) {
  Bits out(0);
  for (std::size_t b = 0; b < ctx.block_count(); ++b) {
    const auto& cb = ctx.block(b);
    out = out.concat(ideal_decode(cb.code, *cb.decoder, block_part(ctx, b, e)));
  }
  return out;
}

/// Concatenated per-block anticommutation pattern against the logicals.
inline Bits raw_pattern(const ProtocolContext& ctx, const Pauli& e) {
  Bits out(0);
  for (std::size_t b = 0; b < ctx.block_count(); ++b) {
    out = out.concat(ctx.block(b).code.logical_pattern(block_part(ctx, b, e)));
  }
  return out;
}

/// Exists F with wt(F) <= v and e F in the normalizer of every block (v <= 1).
inline bool near_normalizer(const ProtocolContext& ctx, const Pauli& e, std::size_t v) {
  std::optional<std::size_t> bad;
  for (std::size_t b = 0; b < ctx.block_count(); ++b) {
    if (ctx.block(b).code.syndrome(block_part(ctx, b, e)).zero()) continue;
    if (bad) return false;
    bad = b;
  }
  if (!bad) return true;
  if (v == 0) return false;
  const auto& cb = ctx.block(*bad);
  const Pauli part = block_part(ctx, *bad, e);
  for (std::size_t q = 1; q <= part.n(); ++q) {
    for (auto k : {PauliKind::X, PauliKind::Z, PauliKind::Y}) {
      Pauli f = part;
      f.apply(q, k);
      if (cb.code.syndrome(f).zero()) return true;
    }
  }
  return false;
}

struct CaseSpec {
  Pauli input;
  std::optional<PlannedFault> fault;
  std::string row;        // taxonomy row, empty for samples
  bool sample = false;    // condition 2 only
  std::size_t weight = 0; // v1
};

struct CaseVerdict {
  std::vector<std::string> violated;
  std::string branch;
  std::string table_branch;
  std::string residual;
  std::size_t syndrome_rounds = 0;
  std::size_t operator_rounds = 0;
};

inline std::string table_branch_name(Branch b) {
  switch (b) {
    case Branch::Meas4bi:
    case Branch::Meas4bii:
    case Branch::Meas4biii: return "4b";
    default: return to_string(b);
  }
}

class Campaign {
 public:
  Campaign(const ProtocolContext& ctx, bool measure, std::string code_id, CampaignOptions opts)
      : ctx_(ctx), measure_(measure), opts_(opts) {
    result_.code_id = std::move(code_id);
    result_.protocol = measure ? "measure" : "ftec";
    result_.seed = opts.seed;
    if (measure) result_.operator_string = ctx.measured_operator().to_sparse();
  }

  ProtocolOutcome run(const Pauli& input, const FaultPlan& plan) const {
    return measure_ ? run_ft_measurement(ctx_, input, plan) : run_ftec(ctx_, input, plan);
  }

  std::string fault_string(const ProtocolOutcome& trace, const PlannedFault& pf) const {
    const auto& slot = trace.slots.at(pf.slot);
    std::string where = "slot " + std::to_string(pf.slot) + " " + to_string(slot.kind);
    if (slot.kind == RoundKind::Syndrome || slot.kind == RoundKind::SyndromeFlag) {
      where += " block " + std::to_string(slot.block + 1) + " generator " + std::to_string(slot.index + 1);
    }
    return where + ": " + pf.fault.to_string(*slot.circuit);
  }

  std::vector<CaseSpec> exhaustive_cases(std::vector<std::string>& fault_text) const {
    const std::size_t n = ctx_.n();
    std::vector<CaseSpec> cases;
    cases.push_back({Pauli(n), std::nullopt, measure_ ? kRowNoInputNoFault : to_string(FaultClass::NoFault), false, 0});
    fault_text.push_back("none");
    for (std::size_t q = 1; q <= n; ++q) {
      for (auto k : {PauliKind::X, PauliKind::Z, PauliKind::Y}) {
        cases.push_back({Pauli::single(n, q, k), std::nullopt,
                         measure_ ? kRowWeightOneInput : to_string(FaultClass::NoFault), false, 1});
        fault_text.push_back("none");
      }
    }
    const auto trace = run(Pauli(n), {});
    for (std::size_t s = 0; s < trace.slots.size(); ++s) {
      const auto& slot = trace.slots[s];
      const bool op_slot = slot.kind == RoundKind::Operator || slot.kind == RoundKind::OperatorFlag;
      for (const auto& f : enumerate_faults(*slot.circuit)) {
        std::string row = to_string(fault_class(*slot.circuit, f));
        if (measure_ && !op_slot) row = kRowNoInputOneFault;
        const PlannedFault pf{s, f};
        cases.push_back({Pauli(n), pf, row, false, 0});
        fault_text.push_back(fault_string(trace, pf));
      }
    }
    return cases;
  }

  std::vector<CaseSpec> sampled_cases(std::vector<std::string>& fault_text) const {
    const std::size_t n = ctx_.n();
    std::mt19937_64 rng(opts_.seed);
    std::vector<CaseSpec> cases;
    if (measure_ || n < 2) return cases;
    for (std::size_t i = 0; i < opts_.samples; ++i) {
      const std::size_t w = 2 + static_cast<std::size_t>(bounded(rng, n - 1));
      std::vector<std::size_t> qubits(n);
      for (std::size_t q = 0; q < n; ++q) qubits[q] = q + 1;
      for (std::size_t j = 0; j < w; ++j) {
        std::swap(qubits[j], qubits[j + static_cast<std::size_t>(bounded(rng, n - j))]);
      }
      Pauli e(n);
      for (std::size_t j = 0; j < w; ++j) {
        static constexpr PauliKind kinds[3] = {PauliKind::X, PauliKind::Z, PauliKind::Y};
        e.set(qubits[j], kinds[bounded(rng, 3)]);
      }
      const auto trace = run(e, {});
      std::vector<std::pair<std::size_t, FaultEvent>> pool;
      for (std::size_t s = 0; s < trace.slots.size(); ++s) {
        for (const auto& f : enumerate_faults(*trace.slots[s].circuit)) pool.emplace_back(s, f);
      }
      // index == pool.size() means no fault
      const auto pick = static_cast<std::size_t>(bounded(rng, pool.size() + 1));
      CaseSpec c{e, std::nullopt, "", true, w};
      if (pick < pool.size()) c.fault = PlannedFault{pool[pick].first, pool[pick].second};
      fault_text.push_back(c.fault ? fault_string(trace, *c.fault) : "none");
      cases.push_back(std::move(c));
    }
    return cases;
  }

  CaseVerdict judge(const CaseSpec& c) const {
    FaultPlan plan;
    if (c.fault) plan.events.push_back(*c.fault);
    const auto out = run(c.input, plan);
    CaseVerdict v;
    v.branch = to_string(out.branch);
    v.table_branch = table_branch_name(out.branch);
    v.residual = out.residual.to_sparse();
    v.syndrome_rounds = out.max_syndrome_rounds;
    v.operator_rounds = out.operator_rounds;
    const std::size_t v2 = c.fault ? 1 : 0;
    if (is_undefined(out.branch)) v.violated.push_back("branch totality");
    const std::size_t max_rounds = 3;
    if (out.max_syndrome_rounds > max_rounds || out.operator_rounds > max_rounds) {
      v.violated.push_back("round bound");
    }
    if (c.sample) {
      if (!near_normalizer(ctx_, out.residual, v2)) v.violated.push_back("condition 2");
      return v;
    }
    const bool step4b = out.branch == Branch::Ftec4b || out.branch == Branch::Ftec4c ||
                        out.branch == Branch::Meas4bi || out.branch == Branch::Meas4bii ||
                        out.branch == Branch::Meas4biii || out.branch == Branch::Meas4c;
    if (step4b && c.weight == 0 && v2 == 1 && !opts_.skip_step4b_correction &&
        (!out.lookup_matches || *out.lookup_matches != 1)) {
      v.violated.push_back("4(b) lookup uniqueness");
    }
    const Bits in_class = ideal_pattern(ctx_, c.input);
    const Bits out_class = ideal_pattern(ctx_, out.residual);
    if (measure_) {
      const Bits p_class = raw_pattern(ctx_, ctx_.measured_operator());
      Bits shifted = in_class;
      shifted ^= p_class;
      if (out.reported_outcome != 1) v.violated.push_back("condition 1 (outcome)");
      if (out_class != in_class && out_class != shifted) v.violated.push_back("condition 1 (state)");
      if (!near_normalizer(ctx_, out.residual, c.weight + v2)) v.violated.push_back("condition 2");
    } else {
      if (out_class != in_class) v.violated.push_back("condition 1");
      if (!near_normalizer(ctx_, out.residual, v2)) v.violated.push_back("condition 2");
    }
    return v;
  }

  CampaignResult execute() {
    std::vector<std::string> fault_text;
    auto cases = exhaustive_cases(fault_text);
    const std::size_t exhaustive = cases.size();
    auto samples = sampled_cases(fault_text);
    for (auto& s : samples) cases.push_back(std::move(s));
    std::vector<CaseVerdict> verdicts(cases.size());
    parallel_for(cases.size(), opts_.jobs, [&](std::size_t i) { verdicts[i] = judge(cases[i]); });

    result_.cases = exhaustive;
    result_.samples = cases.size() - exhaustive;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& c = cases[i];
      const auto& v = verdicts[i];
      result_.max_syndrome_rounds = std::max(result_.max_syndrome_rounds, v.syndrome_rounds);
      result_.max_operator_rounds = std::max(result_.max_operator_rounds, v.operator_rounds);
      if (!c.sample) {
        result_.table[c.row].insert(v.table_branch);
        result_.table_examples[c.row].emplace(v.table_branch, "input " + c.input.to_sparse() + ", " + fault_text[i]);
        ++result_.branch_counts[v.branch];
      }
      if (v.violated.empty()) {
        ++result_.passes;
        continue;
      }
      ++result_.failures;
      std::string cond;
      for (const auto& s : v.violated) cond += (cond.empty() ? "" : "; ") + s;
      result_.failure_list.push_back({c.input.to_sparse(), fault_text[i], v.branch, cond, v.residual});
    }
    return result_;
  }

 private:
  const ProtocolContext& ctx_;
  bool measure_;
  CampaignOptions opts_;
  CampaignResult result_;
};

inline ProtocolOptions protocol_options(const CampaignOptions& o) {
  ProtocolOptions p;
  p.tie = o.tie;
  p.skip_step4b_correction = o.skip_step4b_correction;
  return p;
}

inline std::string code_id(const CssCode& code) {
  if (!code.name().empty()) return code.name();
  return "[[" + std::to_string(code.n()) + "," + std::to_string(code.k()) + "]]";
}

}  // namespace detail

/// Fault-tolerant error correction at t = 1: v1 + v2 <= 1 exhaustively, plus
/// seeded high-weight inputs (with at most one fault) for condition 2.
inline CampaignResult verify_def4(const CssCode& code, const CampaignOptions& opts = {}) {
  const ProtocolContext ctx(code, detail::protocol_options(opts));
  return detail::Campaign(ctx, false, detail::code_id(code), opts).execute();
}

/// Fault-tolerant measurement of P at t = 1 (input is a +1 eigenstate of P).
inline CampaignResult verify_def9(const CssCode& code, const Pauli& p, const CampaignOptions& opts = {}) {
  const ProtocolContext ctx(code, p, detail::protocol_options(opts));
  return detail::Campaign(ctx, true, detail::code_id(code), opts).execute();
}

/// Measurement of parts[0] ⊗ parts[1] ⊗ ... over several code blocks.
inline CampaignResult verify_def9_multiblock(const std::vector<CssCode>& codes, const std::vector<Pauli>& parts,
                                             const CampaignOptions& opts = {}) {
  const ProtocolContext ctx(codes, parts, detail::protocol_options(opts));
  std::string id;
  for (const auto& c : codes) id += (id.empty() ? "" : "x") + detail::code_id(c);
  return detail::Campaign(ctx, true, id, opts).execute();
}

struct FaultTableRow {
  std::string label;
  std::set<std::string> listed;
  std::set<std::string> observed;
  bool exact = false;  // observed must equal listed

  bool pass() const {
    if (exact) return observed == listed;
    return std::includes(listed.begin(), listed.end(), observed.begin(), observed.end());
  }
};

struct FaultTable {
  std::string title;
  std::vector<FaultTableRow> rows;
  bool pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const FaultTableRow& r) { return r.pass(); });
  }
};

/// Rows and listed procedures of the error-correction fault table.
inline FaultTable ftec_table_template() {
  FaultTable t{"flag error correction", {}};
  auto row = [&](FaultClass c, std::set<std::string> listed, bool exact = false) {
    t.rows.push_back({to_string(c), std::move(listed), {}, exact});
  };
  row(FaultClass::NoFault, {"1"}, true);
  row(FaultClass::M0, {"1", "2"});
  row(FaultClass::F0, {"1", "4a"});
  row(FaultClass::Fi, {"1", "3"});
  row(FaultClass::RedIX, {"2"});
  row(FaultClass::RedYZ, {"4b"});
  row(FaultClass::FlagIX, {"1", "2", "3"});
  row(FaultClass::FlagYZ, {"4b", "4c"});
  row(FaultClass::OrangeIX, {"1", "2", "4a"});
  row(FaultClass::OrangeYZ, {"2", "4a"});
  return t;
}

/// Rows and listed procedures of the operator-measurement fault table.
inline FaultTable measurement_table_template() {
  FaultTable t{"flag operator measurement", {}};
  auto row = [&](std::string label, std::set<std::string> listed) {
    t.rows.push_back({std::move(label), std::move(listed), {}, false});
  };
  row(kRowNoInputNoFault, {"1a"});
  row(kRowNoInputOneFault, {"1b", "1c"});
  row(kRowWeightOneInput, {"1c"});
  row(to_string(FaultClass::M0), {"2"});
  row(to_string(FaultClass::F0), {"4a"});
  row(to_string(FaultClass::Fi), {"3"});
  row(to_string(FaultClass::RedIX), {"2"});
  row(to_string(FaultClass::RedYZ), {"4b"});
  row(to_string(FaultClass::FlagIX), {"1a", "2", "3"});
  row(to_string(FaultClass::FlagYZ), {"4b", "4c"});
  row(to_string(FaultClass::OrangeIX), {"1a", "2", "4a"});
  row(to_string(FaultClass::OrangeYZ), {"2", "4a"});
  return t;
}

/// Fills a template from campaign tables; throws on an unknown row label.
inline FaultTable fill_table(FaultTable t, const std::vector<const CampaignResult*>& campaigns) {
  for (const auto* c : campaigns) {
    for (const auto& [label, branches] : c->table) {
      auto it = std::find_if(t.rows.begin(), t.rows.end(), [&](const FaultTableRow& r) { return r.label == label; });
      if (it == t.rows.end()) throw std::logic_error("unclassifiable fault row '" + label + "'");
      it->observed.insert(branches.begin(), branches.end());
    }
  }
  return t;
}

struct FaultTables {
  FaultTable ftec;
  FaultTable measurement;
  bool pass() const { return ftec.pass() && measurement.pass(); }
};

/// Both tables from finished campaigns.
inline FaultTables reproduce_fault_tables(const CampaignResult& ftec, const std::vector<CampaignResult>& measurements) {
  std::vector<const CampaignResult*> meas;
  for (const auto& m : measurements) meas.push_back(&m);
  return {fill_table(ftec_table_template(), {&ftec}), fill_table(measurement_table_template(), meas)};
}

/// Runs the campaigns (measurement over `operators`) and fills both tables.
inline FaultTables reproduce_fault_tables(const CssCode& code, const std::vector<Pauli>& operators,
                                          const CampaignOptions& opts = {}) {
  CampaignOptions exhaustive = opts;
  exhaustive.samples = 0;
  const auto ec = verify_def4(code, exhaustive);
  std::vector<CampaignResult> meas;
  for (const auto& p : operators) meas.push_back(verify_def9(code, p, exhaustive));
  return reproduce_fault_tables(ec, meas);
}

inline std::string render_table(const FaultTable& t) {
  auto join = [](const std::set<std::string>& s) {
    std::string out;
    for (const auto& b : s) out += (out.empty() ? "" : ", ") + b;
    return out.empty() ? std::string("-") : out;
  };
  std::string out = "== " + t.title + " ==\n";
  for (const auto& r : t.rows) {
    out += (r.pass() ? "PASS  " : "FAIL  ") + r.label + "\n      listed: " + join(r.listed) +
           (r.exact ? " (exact)" : "") + "\n      observed: " + join(r.observed) + "\n";
  }
  return out;
}

}  // namespace cyclicflag
