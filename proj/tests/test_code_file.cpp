#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "cyclicflag/code_file.hpp"

using namespace cyclicflag;

namespace {

std::string data(const std::string& name) { return std::string(CYCLICFLAG_DATA_DIR) + "/" + name; }

// line number carried by the error, or -1 when parsing succeeds
long error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_code_spec(in, "t.code");
  } catch (const CodeFileError& e) {
    return static_cast<long>(e.line());
  }
  return -1;
}

}  // namespace

TEST(CodeFile, SteaneFixture) {
  const auto lc = load_code_file(data("steane.code"));
  EXPECT_EQ(lc.spec.name, "steane");
  EXPECT_EQ(lc.code.n(), 7u);
  EXPECT_EQ(lc.code.k(), 1u);
  EXPECT_TRUE(lc.code.cyclic());
  ASSERT_TRUE(lc.logical_report.has_value());
  EXPECT_TRUE(lc.logical_report->ok());
  EXPECT_FALSE(lc.code.logicals_derived());
  EXPECT_EQ(lc.code.logicals()[0].x.to_dense(), "XXXXXXX");
}

TEST(CodeFile, Code30FixtureParsesAllFourteenPairs) {
  const auto lc = load_code_file(data("code30.code"));
  EXPECT_EQ(lc.code.k(), 14u);
  ASSERT_TRUE(lc.logical_table.has_value());
  ASSERT_EQ(lc.logical_table->size(), 14u);
  EXPECT_EQ((*lc.logical_table)[0].x.to_sparse(), "X1 X11 X21");
  EXPECT_EQ((*lc.logical_table)[10].x.to_sparse(), "X1 X7 X9 X11 X17 X19");
  EXPECT_EQ((*lc.logical_table)[13].z.to_sparse(), "Z2 Z8 Z10 Z12 Z18 Z20");
}

TEST(CodeFile, RowFixture) {
  const auto lc = load_code_file(data("lemma1_fail.code"));
  EXPECT_EQ(lc.code.n(), 4u);
  EXPECT_EQ(lc.code.k(), 2u);
  EXPECT_EQ(lc.code.hx().row(1).to_string(), "1100");
  EXPECT_FALSE(lc.logical_report.has_value());
}

TEST(CodeFile, NonDividingPolynomial) {
  try {
    load_code_file(data("bad_poly.code"));
    FAIL() << "expected a throw";
  } catch (const CodeFileError& e) {
    EXPECT_NE(std::string(e.what()).find("does not divide"), std::string::npos) << e.what();
  }
}

TEST(CodeFile, MissingFile) {
  EXPECT_THROW(load_code_file(data("no_such.code")), CodeFileError);
}

TEST(CodeFile, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("n = 7\ncheck_poly_x = 0,2,3,4\ncheck_poly_z = 0,2,3,4\n"), -1);
  EXPECT_EQ(error_line("n = 7\n\n# c\nfoo = 1\n"), 4);
  EXPECT_EQ(error_line("n = 7\njust words\n"), 2);
  EXPECT_EQ(error_line("n = seven\n"), 1);
  EXPECT_EQ(error_line("n = 4\nhx_row = 110\nhz_row = 1100\n"), 2);
  EXPECT_EQ(error_line("n = 4\nhx_row = 11a0\nhz_row = 1100\n"), 2);
  EXPECT_EQ(error_line("n = 7\ncheck_poly_x = 0,x\ncheck_poly_z = 0,2,3,4\n"), 2);
  EXPECT_EQ(error_line("n = 7\ncheck_poly_x = 0,2,3,4\ncheck_poly_x = 0,2,3,4\n"), 3);
  EXPECT_EQ(error_line("n = 7\ncheck_poly_x = 0,2,3,4\nhx_row = 1110100\ncheck_poly_z = 0,2,3,4\n"), 2);
  EXPECT_EQ(error_line("check_poly_x = 0,2,3,4\ncheck_poly_z = 0,2,3,4\n"), 0);
  EXPECT_EQ(error_line("n =\n"), 1);
}

TEST(LogicalTable, ParsesLabelsAndComments) {
  std::istringstream in("# pairs\nX1: XXXXXXX\nZ1: Z1 Z2 Z3 Z4 Z5 Z6 Z7  # sparse\n");
  const auto t = parse_logical_table(in, 7);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].z.to_dense(), "ZZZZZZZ");
}

TEST(LogicalTable, RejectsMalformedTables) {
  auto line_of = [](const std::string& text) -> long {
    std::istringstream in(text);
    try {
      parse_logical_table(in, 7, "t.logicals");
    } catch (const CodeFileError& e) {
      return static_cast<long>(e.line());
    }
    return -1;
  };
  EXPECT_EQ(line_of("XXXXXXX\n"), 1);
  EXPECT_EQ(line_of("ZZZZZZZ\nXXXXXXX\n"), 1);
  EXPECT_EQ(line_of("XXXXXXX\n\nZZQZZZZ\n"), 3);
}

TEST(LogicalTable, ValidationReportsWrongPairing) {
  const auto lc = load_code_file(data("steane.code"));
  // a stabilizer in place of Z-bar: commutes with X-bar, so the pairing is wrong
  const std::vector<LogicalPair> bad{{Pauli::parse("XXXXXXX", 7), lc.code.generators()[3]}};
  const auto rep = validate_logicals(lc.code, bad);
  EXPECT_FALSE(rep.ok());
}
