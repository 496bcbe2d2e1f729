#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "cyclicflag/code_file.hpp"
#include "cyclicflag/consecutive.hpp"
#include "cyclicflag/flag_circuit.hpp"

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

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Pauli random_pauli(std::mt19937_64& rng, std::size_t n) {
  Pauli p(n);
  for (std::size_t q = 1; q <= n; ++q) p.set(q, static_cast<PauliKind>(rng() % 4));
  if (p.is_identity()) p.set(1 + rng() % n, PauliKind::Y);
  return p;
}

}  // namespace

TEST(Decomposition, SteaneGeneratorOne) {
  const auto d = decompose_operator(Pauli::parse("XXXIXII", 7));
  ASSERT_EQ(d.m(), 2u);
  EXPECT_EQ(d.block(1).a, 3u);
  EXPECT_EQ(d.block(1).b, 1u);
  EXPECT_EQ(d.block(2).start, 5u);
  EXPECT_EQ(d.block(2).a, 1u);
  EXPECT_EQ(d.block(2).b, 2u);
  EXPECT_EQ(d.c(1), 4u);
  EXPECT_EQ(d.c(2), 7u);
  EXPECT_THROW(d.block(3), std::out_of_range);
  EXPECT_THROW(decompose_operator(Pauli(7)), std::invalid_argument);
}

TEST(Decomposition, LeadingIdentitiesFoldIntoLastGap) {
  const auto d = decompose_operator(Pauli::parse("IIZZYX", 6));
  ASSERT_EQ(d.m(), 3u);
  EXPECT_EQ(d.block(1).start, 3u);
  EXPECT_EQ(d.block(3).kind, PauliKind::X);
  EXPECT_EQ(d.block(3).b, 2u);
  EXPECT_EQ(d.c(3), 6u);
}

// The consecutive element of length a_i at shift_l(i) covers exactly sub-block i.
TEST(DecompositionProperty, ShiftAlignsConsecutiveElementWithSubBlock) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    const auto p = random_pauli(rng, n);
    const auto d = decompose_operator(p);
    EXPECT_EQ(d.to_pauli(), p);
    EXPECT_EQ(d.c(d.m()), n);
    for (std::size_t i = 1; i <= d.m(); ++i) {
      const auto& b = d.block(i);
      Pauli run(n);
      for (std::size_t q = b.start; q < b.start + b.a; ++q) run.set(q, b.kind);
      const Pauli e = b.a == n ? run
                               : (b.kind == PauliKind::Y
                                      ? consecutive_element(PauliKind::X, b.a, d.shift_l(i), n) *
                                            consecutive_element(PauliKind::Z, b.a, d.shift_l(i), n)
                                      : consecutive_element(b.kind, b.a, d.shift_l(i), n));
      EXPECT_EQ(e, run) << p.to_dense() << " block " << i;
      Pauli tail(n);
      for (std::size_t j = i + 1; j <= d.m(); ++j) {
        for (std::size_t q = d.block(j).start; q < d.block(j).start + d.block(j).a; ++q) tail.set(q, d.block(j).kind);
      }
      EXPECT_EQ(d.trailing(i), tail);
    }
  }
}

TEST(FlagCircuit, GoldenDumpOfSteaneGeneratorOne) {
  const auto c = build_flag_circuit(steane().generators()[0]);
  EXPECT_EQ(c.dump(), read_file(std::string(CYCLICFLAG_GOLDEN_DIR) + "/steane_g1_flag.txt"));
  EXPECT_EQ(c.ancilla_count(), 4u);
  EXPECT_EQ(c.measured_operator(), steane().generators()[0]);
}

TEST(FlagCircuit, NoFaultParityAndSilence) {
  const auto& code = code30();
  for (const auto& g : code.generators()) {
    const auto c = build_flag_circuit(g);
    for (std::size_t q = 1; q <= code.n(); ++q) {
      const auto e = Pauli::single(code.n(), q, PauliKind::Y);
      const auto run = propagate(c, e);
      EXPECT_FALSE(run.any_flag());
      EXPECT_EQ(run.m0_flip, !e.commutes(g));
      EXPECT_EQ(run.residual, e);
    }
  }
}

TEST(FlagCircuit, Claim1HoldsForEveryGeneratorAndLogical) {
  for (const CssCode* code : {&steane(), &code30()}) {
    for (const auto& g : code->generators()) {
      const auto rep = verify_claim1(*code, g);
      EXPECT_TRUE(rep.ok()) << g.to_sparse() << ": " << (rep.ok() ? "" : rep.violations.front());
      EXPECT_GT(rep.cases, 0u);
    }
    for (const auto& lp : code->logicals()) {
      EXPECT_TRUE(verify_claim1(*code, lp.x).ok()) << lp.x.to_sparse();
      EXPECT_TRUE(verify_claim1(*code, lp.z).ok()) << lp.z.to_sparse();
    }
  }
}

TEST(FlagCircuit, Claim1HoldsForMixedOperators) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_pauli(rng, 2 + rng() % 14);
    EXPECT_TRUE(verify_claim1(build_flag_circuit(p)).ok()) << p.to_dense();
  }
}

TEST(FlagCircuit, Claim1RejectsOperatorOutsideNormalizer) {
  EXPECT_THROW(verify_claim1(steane(), Pauli::parse("X1", 7)), std::invalid_argument);
}

TEST(FlagCircuit, OneFlagPropertyOnBothCodes) {
  for (const CssCode* code : {&steane(), &code30()}) {
    for (const auto& g : code->generators()) {
      const auto rep = verify_t_flag(*code, build_flag_circuit(g));
      EXPECT_TRUE(rep.holds) << g.to_sparse();
    }
    EXPECT_TRUE(verify_t_flag(*code, build_flag_circuit(code->logicals()[0].x)).holds);
  }
}

TEST(FlagCircuit, BareCircuitSpreadsHookErrors) {
  const auto g = steane().generators()[0];
  const auto rep = verify_t_flag(steane(), build_nonflag_circuit(g));
  ASSERT_FALSE(rep.holds);
  ASSERT_TRUE(rep.residual.has_value());
  EXPECT_GE(rep.residual->weight(), 2u);
}

TEST(FlagCircuit, MovingACouplingOutOfItsWindowIsCaught) {
  const auto c = build_flag_circuit(steane().generators()[0]);
  // location 8 is CPL q3, location 9 is OPEN f2
  ASSERT_EQ(c.locations()[8].to_string(), "CPL q3 X");
  const auto mutant = mutate_swap(c, 8);
  EXPECT_FALSE(verify_claim1(mutant).ok());
  EXPECT_TRUE(verify_claim1(c).ok());
}

TEST(FaultEnumeration, HandCountForSteaneGeneratorOne) {
  // 10 couplings x 15, 4 preps, 4 measurements; idle: 2 per prep,
  // 3 per data coupling (m0), 6 per flag coupling (m0 and the flag)
  const auto c = build_flag_circuit(steane().generators()[0]);
  const auto faults = enumerate_faults(c);
  EXPECT_EQ(faults.size(), 150u + 4u + 4u + 4u * 2u + 4u * 3u + 6u * 6u);
  for (const auto& f : faults) {
    const auto& loc = c.locations()[f.location];
    if (f.type != FaultType::Idle) continue;
    EXPECT_NE(loc.kind, LocationKind::Measure);
    if (loc.kind == LocationKind::Prep) {
      EXPECT_NE(f.target, loc.basis);
    }
  }
}

TEST(FaultEnumeration, EveryFaultPropagates) {
  const auto c = build_flag_circuit(code30().logicals()[0].x);
  for (const auto& f : enumerate_faults(c)) {
    const std::vector<FaultEvent> one{f};
    EXPECT_NO_THROW(propagate(c, Pauli(30), one));
  }
  const std::vector<FaultEvent> bad{{c.locations().size(), FaultType::Prep}};
  EXPECT_THROW(propagate(c, Pauli(30), bad), std::out_of_range);
}

TEST(FaultForms, DataCouplingClassification) {
  const auto c = build_flag_circuit(steane().generators()[0]);
  EXPECT_EQ(classify_fault_effect(c, {6, FaultType::Gate, PauliKind::X, PauliKind::X}), FaultForm::A);
  EXPECT_EQ(classify_fault_effect(c, {6, FaultType::Gate, PauliKind::I, PauliKind::Z}), FaultForm::B);
  EXPECT_EQ(classify_fault_effect(c, {6, FaultType::Gate, PauliKind::X, PauliKind::Y}), FaultForm::C);
  EXPECT_THROW(classify_fault_effect(c, {4, FaultType::Gate, PauliKind::X, PauliKind::Y}), std::invalid_argument);
}

TEST(FaultClassification, Rows) {
  const auto c = build_flag_circuit(steane().generators()[0]);
  EXPECT_EQ(fault_class(c, {0, FaultType::Prep}), FaultClass::M0);
  EXPECT_EQ(fault_class(c, {1, FaultType::Idle, PauliKind::I, PauliKind::Z, flag_wire(0)}), FaultClass::F0);
  EXPECT_EQ(fault_class(c, {15, FaultType::Measure}), FaultClass::F0);
  EXPECT_EQ(fault_class(c, {17, FaultType::Measure}), FaultClass::Fi);
  EXPECT_EQ(fault_class(c, {6, FaultType::Gate, PauliKind::X, PauliKind::I}), FaultClass::RedIX);
  EXPECT_EQ(fault_class(c, {6, FaultType::Gate, PauliKind::I, PauliKind::Y}), FaultClass::RedYZ);
  EXPECT_EQ(fault_class(c, {5, FaultType::Gate, PauliKind::Z, PauliKind::X}), FaultClass::FlagIX);
  EXPECT_EQ(fault_class(c, {10, FaultType::Gate, PauliKind::I, PauliKind::Z}), FaultClass::FlagYZ);
  EXPECT_EQ(fault_class(c, {4, FaultType::Gate, PauliKind::X, PauliKind::I}), FaultClass::OrangeIX);
  EXPECT_EQ(fault_class(c, {13, FaultType::Gate, PauliKind::I, PauliKind::Z}), FaultClass::OrangeYZ);
  // idle errors after a coupling follow the leg they sit on
  EXPECT_EQ(fault_class(c, {6, FaultType::Idle, PauliKind::I, PauliKind::Z, kM0}), FaultClass::RedYZ);
  EXPECT_EQ(fault_class(c, {5, FaultType::Idle, PauliKind::I, PauliKind::Z, flag_wire(1)}), FaultClass::FlagIX);
}

TEST(MultiBlock, DecompositionRespectsBlockBoundaries) {
  const auto d = decompose_multiblock({Pauli::parse("XXXXXXX", 7), Pauli::parse("XXXXXXX", 7)});
  ASSERT_EQ(d.m(), 2u);
  EXPECT_EQ(d.block(2).start, 8u);
  EXPECT_EQ(d.block(2).segment, 1u);
  EXPECT_EQ(d.shift_l(1), 0u);
  EXPECT_EQ(d.shift_l(2), 0u);
  EXPECT_TRUE(verify_claim1(build_flag_circuit(d)).ok());
}
