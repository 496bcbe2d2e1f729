#include <gtest/gtest.h>

#include <string>

#include "cyclicflag/code_file.hpp"
#include "cyclicflag/protocols.hpp"

using namespace cyclicflag;

namespace {

const CssCode& steane() {
  static const CssCode c = load_code_file(std::string(CYCLICFLAG_DATA_DIR) + "/steane.code").code;
  return c;
}

const CssCode& code30() {
  static const CssCode c = load_code_file(std::string(CYCLICFLAG_DATA_DIR) + "/code30.code").code;
  return c;
}

const Pauli kXbar = Pauli::parse("XXXXXXX", 7);
const Pauli kZbar = Pauli::parse("ZZZZZZZ", 7);
const Pauli kYbar = Pauli::parse("YYYYYYY", 7);

// some F of weight <= 1 puts E in the normalizer
bool near_normalizer(const CssCode& code, const Pauli& e) {
  if (code.in_normalizer(e)) return true;
  for (std::size_t q = 1; q <= e.n(); ++q) {
    for (auto k : {PauliKind::X, PauliKind::Z, PauliKind::Y}) {
      if (code.in_normalizer(e * Pauli::single(e.n(), q, k))) return true;
    }
  }
  return false;
}

std::size_t location_of(const FlagCircuit& c, const std::string& text) {
  for (std::size_t k = 0; k < c.locations().size(); ++k) {
    if (c.locations()[k].to_string() == text) return k;
  }
  throw std::runtime_error("no location " + text);
}

FaultEvent gate(std::size_t loc, PauliKind ctrl, PauliKind tgt) { return {loc, FaultType::Gate, ctrl, tgt, 0}; }

}  // namespace

TEST(Ftec, CleanRunTakesBranchOne) {
  const auto out = run_ftec(steane(), Pauli(7));
  EXPECT_EQ(out.branch, Branch::Ftec1);
  EXPECT_TRUE(out.residual.is_identity());
  ASSERT_EQ(out.transcript.size(), 2u);
  for (const auto& r : out.transcript) {
    EXPECT_EQ(r.kind, RoundKind::SyndromeFlag);
    EXPECT_EQ(r.outcomes.size(), 6u);
    EXPECT_TRUE(r.outcomes.none());
    EXPECT_EQ(r.flags.size(), 6u);
    EXPECT_FALSE(r.stopped);
  }
  EXPECT_EQ(out.slots.size(), 12u);
  EXPECT_EQ(out.max_syndrome_rounds, 2u);
}

TEST(Ftec, WeightOneInputIsCorrected) {
  const auto z4 = Pauli::parse("Z4", 7);
  const auto out = run_ftec(steane(), z4);
  EXPECT_EQ(out.branch, Branch::Ftec1);
  ASSERT_EQ(out.corrections.size(), 1u);
  EXPECT_EQ(out.corrections[0], z4);
  EXPECT_TRUE(steane().in_stabilizer_group(out.residual));
  // the Z4 syndrome fires X-type generators only
  EXPECT_TRUE(out.transcript[0].outcomes.slice(4, 6).none());
  EXPECT_TRUE(out.transcript[0].outcomes.slice(1, 3).any());
}

TEST(Ftec, EveryWeightOneInputReturnsToTheCodeword) {
  const ProtocolContext ctx(steane());
  for (std::size_t q = 1; q <= 7; ++q) {
    for (auto k : {PauliKind::X, PauliKind::Z, PauliKind::Y}) {
      const auto out = run_ftec(ctx, Pauli::single(7, q, k));
      EXPECT_EQ(out.branch, Branch::Ftec1);
      EXPECT_TRUE(steane().in_stabilizer_group(out.residual)) << q;
    }
  }
}

TEST(Ftec, RedCouplingZOnAncillaMidBlockTakesBranch4b) {
  const ProtocolContext ctx(steane());
  const auto& c = ctx.block(0).flag_circuits[0];
  // Z on m0 after CPL q2 spreads X onto q3 and q5
  const auto out = run_ftec(ctx, Pauli(7), FaultPlan::single(0, gate(location_of(c, "CPL q2 X"), PauliKind::I, PauliKind::Z)));
  EXPECT_EQ(out.branch, Branch::Ftec4b);
  ASSERT_TRUE(out.lookup_matches.has_value());
  EXPECT_EQ(*out.lookup_matches, 1u);
  EXPECT_FALSE(out.lookup_miss);
  EXPECT_TRUE(near_normalizer(steane(), out.residual));
  EXPECT_TRUE(steane().in_stabilizer_group(out.residual)) << out.residual.to_sparse();
  EXPECT_TRUE(out.transcript[0].stopped);
  EXPECT_EQ(out.transcript[0].outcomes.size(), 1u);
}

TEST(Ftec, MeasurementFlipInRoundOneTakesBranchTwo) {
  const ProtocolContext ctx(steane());
  const auto& c = ctx.block(0).flag_circuits[0];
  const auto out = run_ftec(ctx, Pauli(7), FaultPlan::single(0, {location_of(c, "MEAS m0 Z"), FaultType::Measure}));
  EXPECT_EQ(out.branch, Branch::Ftec2);
  EXPECT_EQ(out.max_syndrome_rounds, 3u);
  EXPECT_TRUE(out.residual.is_identity());
  EXPECT_EQ(out.transcript[2].kind, RoundKind::Syndrome);
}

TEST(Ftec, InnerFlagOnlyTakesBranchThree) {
  const ProtocolContext ctx(steane());
  const auto& c = ctx.block(0).flag_circuits[0];
  const auto out = run_ftec(ctx, Pauli(7), FaultPlan::single(0, {location_of(c, "PREP f1 X"), FaultType::Prep}));
  EXPECT_EQ(out.branch, Branch::Ftec3);
  EXPECT_TRUE(steane().in_stabilizer_group(out.residual));
}

TEST(Ftec, OuterFlagOnlyTakesBranch4a) {
  const ProtocolContext ctx(steane());
  const auto& c = ctx.block(0).flag_circuits[0];
  const auto out = run_ftec(ctx, Pauli(7), FaultPlan::single(0, {location_of(c, "PREP f0 X"), FaultType::Prep}));
  EXPECT_EQ(out.branch, Branch::Ftec4a);
  EXPECT_TRUE(steane().in_stabilizer_group(out.residual));
}

TEST(Ftec, OpeningInnerFlagFaultTakesBranch4c) {
  const ProtocolContext ctx(steane());
  const auto& c = ctx.block(0).flag_circuits[0];
  // Z on m0 entering OPEN f2 flags f0, f1 and f2
  const auto out = run_ftec(ctx, Pauli(7), FaultPlan::single(0, gate(location_of(c, "OPEN f2"), PauliKind::I, PauliKind::Z)));
  EXPECT_EQ(out.branch, Branch::Ftec4c);
  EXPECT_TRUE(near_normalizer(steane(), out.residual));
}

TEST(Ftec, RoundTwoFaultIsHandled) {
  const ProtocolContext ctx(steane());
  const auto& c = ctx.block(0).flag_circuits[3];
  const auto out = run_ftec(ctx, Pauli(7), FaultPlan::single(9, gate(location_of(c, "CPL q2 Z"), PauliKind::I, PauliKind::Z)));
  EXPECT_EQ(out.branch, Branch::Ftec4b);
  EXPECT_TRUE(steane().in_stabilizer_group(out.residual)) << out.residual.to_sparse();
}

TEST(Ftec, ReversedTieBreakStillCorrects) {
  ProtocolOptions opts;
  opts.tie = TieBreak::ReverseLexicographic;
  const ProtocolContext ctx(code30(), opts);
  const auto out = run_ftec(ctx, Pauli::parse("Y17", 30));
  EXPECT_EQ(out.branch, Branch::Ftec1);
  EXPECT_TRUE(code30().in_stabilizer_group(out.residual));
}

TEST(Ftec, PlanOutsideExecutedSlotsThrows) {
  EXPECT_THROW(run_ftec(steane(), Pauli(7), FaultPlan::single(999, {0, FaultType::Prep})), std::out_of_range);
  EXPECT_THROW(run_ftec(steane(), Pauli(5)), std::invalid_argument);
}

TEST(Measurement, CleanRunTakesBranch1a) {
  const auto out = run_ft_measurement(steane(), kZbar, Pauli(7));
  EXPECT_EQ(out.branch, Branch::Meas1a);
  ASSERT_TRUE(out.reported_outcome.has_value());
  EXPECT_EQ(*out.reported_outcome, 1);
  EXPECT_TRUE(out.residual.is_identity());
  EXPECT_EQ(out.operator_rounds, 2u);
  ASSERT_EQ(out.block_branches.size(), 1u);
  EXPECT_EQ(out.block_branches[0], Branch::Ftec1);
}

TEST(Measurement, WeightOneInputTakesBranch1c) {
  const auto out = run_ft_measurement(steane(), kZbar, Pauli::parse("X1", 7));
  EXPECT_EQ(out.branch, Branch::Meas1c);
  EXPECT_EQ(*out.reported_outcome, 1);
  ASSERT_EQ(out.corrections.size(), 1u);
  EXPECT_EQ(out.corrections[0].to_sparse(), "X1");
  EXPECT_TRUE(out.residual.is_identity());
  EXPECT_EQ(out.operator_rounds, 3u);
  // both operator rounds saw -1 before the correction
  EXPECT_TRUE(out.transcript[0].outcomes.get(1));
  EXPECT_TRUE(out.transcript[1].outcomes.get(1));
}

TEST(Measurement, SyndromeFaultTakesBranch1b) {
  const ProtocolContext ctx(steane(), kZbar);
  const auto& c = ctx.block(0).flag_circuits[0];
  // slots 0 and 1 are the operator rounds
  const auto out = run_ft_measurement(ctx, Pauli(7), FaultPlan::single(2, {location_of(c, "MEAS m0 Z"), FaultType::Measure}));
  EXPECT_EQ(out.branch, Branch::Meas1b);
  EXPECT_EQ(*out.reported_outcome, 1);
  EXPECT_EQ(out.block_branches[0], Branch::Ftec2);
}

TEST(Measurement, OperatorOutcomeFlipTakesBranchTwo) {
  const ProtocolContext ctx(steane(), kZbar);
  const auto& c = ctx.operator_flag_circuit();
  const auto out = run_ft_measurement(ctx, Pauli(7), FaultPlan::single(0, {location_of(c, "MEAS m0 Z"), FaultType::Measure}));
  EXPECT_EQ(out.branch, Branch::Meas2);
  EXPECT_EQ(*out.reported_outcome, 1);
  EXPECT_EQ(out.operator_rounds, 3u);
}

TEST(Measurement, FlagOnlyBranches) {
  const ProtocolContext ctx(steane(), kZbar);
  const auto& c = ctx.operator_flag_circuit();
  const auto inner = run_ft_measurement(ctx, Pauli(7), FaultPlan::single(0, {location_of(c, "PREP f1 X"), FaultType::Prep}));
  EXPECT_EQ(inner.branch, Branch::Meas3);
  EXPECT_EQ(*inner.reported_outcome, 1);
  const auto outer = run_ft_measurement(ctx, Pauli(7), FaultPlan::single(1, {location_of(c, "PREP f0 X"), FaultType::Prep}));
  EXPECT_EQ(outer.branch, Branch::Meas4a);
  EXPECT_EQ(*outer.reported_outcome, 1);
}

TEST(Measurement, YBlockHookTakesBranch4biii) {
  const ProtocolContext ctx(steane(), kYbar);
  const auto& c = ctx.operator_flag_circuit();
  ASSERT_EQ(c.m(), 1u);
  const auto out = run_ft_measurement(ctx, Pauli(7), FaultPlan::single(0, gate(location_of(c, "CPL q3 Y"), PauliKind::I, PauliKind::Z)));
  EXPECT_EQ(out.branch, Branch::Meas4biii);
  EXPECT_EQ(*out.reported_outcome, 1);
  EXPECT_EQ(*out.lookup_matches, 1u);
  EXPECT_TRUE(steane().in_stabilizer_group(out.residual) || steane().logical_class_equal(out.residual, kYbar))
      << out.residual.to_sparse();
}

TEST(Measurement, ZBlockHookTakesBranch4bi) {
  const auto p = code30().generators()[8];
  ASSERT_TRUE(p.is_z_type());
  const ProtocolContext ctx(code30(), p);
  const auto& c = ctx.operator_flag_circuit();
  const auto& b1 = c.decomposition().block(1);
  const std::string loc = "CPL q" + std::to_string(b1.start) + " Z";
  const auto out = run_ft_measurement(ctx, Pauli(30), FaultPlan::single(1, gate(location_of(c, loc), PauliKind::I, PauliKind::Z)));
  EXPECT_EQ(out.branch, Branch::Meas4bi);
  EXPECT_EQ(*out.reported_outcome, 1);
}

TEST(Measurement, AnticommutingOperatorIsRejected) {
  EXPECT_THROW(ProtocolContext(steane(), Pauli::parse("X1", 7)), std::invalid_argument);
  const ProtocolContext plain(steane());
  EXPECT_THROW(run_ft_measurement(plain, Pauli(7)), std::invalid_argument);
}

TEST(MultiBlock, CleanRunOnTwoSteaneBlocks) {
  const auto out = run_multiblock_measurement({steane(), steane()}, {kXbar, kXbar}, Pauli(14));
  EXPECT_EQ(out.branch, Branch::Meas1a);
  EXPECT_EQ(*out.reported_outcome, 1);
  EXPECT_TRUE(out.residual.is_identity());
  EXPECT_EQ(out.block_branches.size(), 2u);
}

TEST(MultiBlock, BlockTwoFaultIsConfinedToBlockTwo) {
  const ProtocolContext ctx({steane(), steane()}, {kXbar, kXbar});
  const auto& c = ctx.operator_flag_circuit();
  ASSERT_EQ(c.m(), 2u);
  const FaultEvent f = gate(location_of(c, "CPL q10 X"), PauliKind::I, PauliKind::Z);
  const auto run = propagate(c, Pauli(14), std::vector<FaultEvent>{f});
  EXPECT_EQ(run.flagged_blocks(), std::vector<std::size_t>{2});
  EXPECT_TRUE(run.f0());
  const auto out = run_ft_measurement(ctx, Pauli(14), FaultPlan::single(0, f));
  EXPECT_EQ(out.branch, Branch::Meas4bii);
  EXPECT_EQ(*out.reported_outcome, 1);
  for (const auto& corr : out.corrections) EXPECT_TRUE(corr.slice(1, 7).is_identity()) << corr.to_sparse();
  for (const auto& r : out.transcript) {
    if (r.kind == RoundKind::Syndrome || r.kind == RoundKind::SyndromeFlag) {
      EXPECT_EQ(r.block, 1u);
    }
  }
  EXPECT_TRUE(out.residual.slice(1, 7).is_identity());
  EXPECT_TRUE(steane().in_stabilizer_group(out.residual.slice(8, 14)) ||
              steane().logical_class_equal(out.residual.slice(8, 14), kXbar));
}

TEST(MultiBlock, WeightOneInputInBlockOneCorrectsBlockOneOnly) {
  const auto out = run_multiblock_measurement({steane(), steane()}, {kXbar, kXbar}, Pauli::parse("Z3", 14));
  EXPECT_EQ(out.branch, Branch::Meas1c);
  EXPECT_EQ(*out.reported_outcome, 1);
  ASSERT_EQ(out.corrections.size(), 2u);
  EXPECT_EQ(out.corrections[0].to_sparse(), "Z3");
  EXPECT_TRUE(out.corrections[1].is_identity());
  EXPECT_TRUE(out.residual.is_identity());
}

TEST(MultiBlock, NeedsTwoBlocks) {
  EXPECT_THROW(run_multiblock_measurement({steane()}, {kXbar}, Pauli(7)), std::invalid_argument);
}
