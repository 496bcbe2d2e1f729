#pragma once

// Plain-text code descriptions ("key = value" lines) and logical-operator tables.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclicflag/classical_code.hpp"
#include "cyclicflag/css_code.hpp"
#include "cyclicflag/pauli.hpp"

namespace cyclicflag {

class CodeFileError : public std::runtime_error {
 public:
  CodeFileError(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct CodeSpec {
  std::string name;
  std::size_t n = 0;
  std::optional<std::string> check_poly_x;
  std::optional<std::string> check_poly_z;
  std::vector<std::string> hx_rows;
  std::vector<std::string> hz_rows;
  std::optional<std::filesystem::path> logicals;  // resolved against the spec's directory
};

struct LoadedCode {
  CodeSpec spec;
  ClassicalCode cx;
  ClassicalCode cz;
  CssCode code;
  std::optional<std::vector<LogicalPair>> logical_table;
  std::optional<LogicalReport> logical_report;  // present iff a table was given
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::string strip_comment(const std::string& s) {
  const auto hash = s.find('#');
  return hash == std::string::npos ? s : s.substr(0, hash);
}

inline Bits parse_row(const std::string& text, std::size_t n) {
  std::string bits;
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(c);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("matrix row may contain only 0 and 1");
    }
  }
  if (bits.size() != n) {
    throw std::invalid_argument("matrix row has " + std::to_string(bits.size()) + " entries, expected n = " +
                                std::to_string(n));
  }
  return Bits::from_string(bits);
}

inline ClassicalCode side_code(const std::optional<std::string>& poly, const std::vector<std::string>& rows,
                               std::size_t n) {
  if (poly) return ClassicalCode::from_check_polynomial(BinaryPolynomial::parse(*poly), n);
  BitMatrix h(0, n);
  for (const auto& r : rows) h.append_row(parse_row(r, n));
  return ClassicalCode::from_parity_check(h);
}

}  // namespace detail

/// Parses a code description. Recognized keys: name, n, check_poly_x,
/// check_poly_z (exponent lists), hx_row, hz_row (repeatable 0/1 strings),
/// logicals (path of a logical table). Each side takes either a polynomial
/// or explicit rows.
inline CodeSpec parse_code_spec(std::istream& in, const std::string& file = "<input>",
                                const std::filesystem::path& base_dir = {}) {
  CodeSpec spec;
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> poly_x_line;
  std::optional<std::size_t> poly_z_line;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CodeFileError(file, line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (value.empty()) throw CodeFileError(file, line_no, "empty value for '" + key + "'");
    if (key == "name") {
      spec.name = value;
    } else if (key == "n") {
      if (value.find_first_not_of("0123456789") != std::string::npos) {
        throw CodeFileError(file, line_no, "n must be a positive integer, got '" + value + "'");
      }
      spec.n = std::stoul(value);
      if (spec.n == 0) throw CodeFileError(file, line_no, "n must be positive");
    } else if (key == "check_poly_x") {
      if (spec.check_poly_x) throw CodeFileError(file, line_no, "check_poly_x given twice");
      spec.check_poly_x = value;
      poly_x_line = line_no;
    } else if (key == "check_poly_z") {
      if (spec.check_poly_z) throw CodeFileError(file, line_no, "check_poly_z given twice");
      spec.check_poly_z = value;
      poly_z_line = line_no;
    } else if (key == "hx_row") {
      spec.hx_rows.push_back(value);
    } else if (key == "hz_row") {
      spec.hz_rows.push_back(value);
    } else if (key == "logicals") {
      spec.logicals = base_dir / value;
    } else {
      throw CodeFileError(file, line_no, "unknown key '" + key + "'");
    }
    try {
      if ((key == "hx_row" || key == "hz_row") && spec.n) detail::parse_row(value, spec.n);
      if (key == "check_poly_x" || key == "check_poly_z") BinaryPolynomial::parse(value);
    } catch (const std::invalid_argument& e) {
      throw CodeFileError(file, line_no, e.what());
    }
  }
  if (spec.n == 0) throw CodeFileError(file, 0, "missing 'n'");
  if (spec.check_poly_x.has_value() == !spec.hx_rows.empty()) {
    throw CodeFileError(file, poly_x_line.value_or(0), "give exactly one of check_poly_x or hx_row lines");
  }
  if (spec.check_poly_z.has_value() == !spec.hz_rows.empty()) {
    throw CodeFileError(file, poly_z_line.value_or(0), "give exactly one of check_poly_z or hz_row lines");
  }
  return spec;
}

/// Logical table: one operator per line, X-bar_1, Z-bar_1, X-bar_2, ...
/// An optional "label:" prefix is ignored; '#' starts a comment.
inline std::vector<LogicalPair> parse_logical_table(std::istream& in, std::size_t n,
                                                    const std::string& file = "<input>") {
  std::vector<Pauli> ops;
  std::vector<std::size_t> lines;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon != std::string::npos) line = detail::trim(line.substr(colon + 1));
    try {
      ops.push_back(Pauli::parse(line, n));
    } catch (const std::invalid_argument& e) {
      throw CodeFileError(file, line_no, e.what());
    }
    lines.push_back(line_no);
  }
  if (ops.size() % 2 != 0) {
    throw CodeFileError(file, lines.empty() ? 0 : lines.back(), "odd number of operators; expected X/Z pairs");
  }
  std::vector<LogicalPair> out;
  for (std::size_t i = 0; i < ops.size(); i += 2) {
    if (!ops[i].is_x_type() || !ops[i + 1].is_z_type()) {
      throw CodeFileError(file, lines[i], "pair " + std::to_string(i / 2 + 1) + " must be an X-type then a Z-type operator");
    }
    out.push_back({ops[i], ops[i + 1]});
  }
  return out;
}

inline LoadedCode build_from_spec(const CodeSpec& spec, const std::string& file = "<input>") {
  LoadedCode out{spec, {}, {}, {}, std::nullopt, std::nullopt};
  try {
    out.cx = detail::side_code(spec.check_poly_x, spec.hx_rows, spec.n);
    out.cz = detail::side_code(spec.check_poly_z, spec.hz_rows, spec.n);
    out.code = build_css(out.cx, out.cz);
  } catch (const std::invalid_argument& e) {
    throw CodeFileError(file, 0, e.what());
  }
  out.code.set_name(spec.name);
  if (spec.logicals) {
    std::ifstream lf(*spec.logicals);
    if (!lf) throw CodeFileError(file, 0, "cannot open logical table '" + spec.logicals->string() + "'");
    auto table = parse_logical_table(lf, spec.n, spec.logicals->string());
    auto report = validate_logicals(out.code, table);
    if (report.ok()) out.code.set_logicals(table);
    out.logical_table = std::move(table);
    out.logical_report = std::move(report);
  }
  return out;
}

inline LoadedCode load_code_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CodeFileError(path.string(), 0, "cannot open file");
  const auto spec = parse_code_spec(in, path.string(), path.parent_path());
  return build_from_spec(spec, path.string());
}

}  // namespace cyclicflag
