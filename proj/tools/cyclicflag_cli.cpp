#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cyclicflag/cyclicflag.hpp"
#include "cyclicflag/report_json.hpp"

namespace cf = cyclicflag;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string distance_text(const cf::ClassicalCode& c) {
  const auto d = cf::code_distance(c, 4);
  return d ? std::to_string(*d) : ">4";
}

std::string quantum_distance_text(const cf::CssCode& code) {
  for (std::size_t w = 2; w <= 4; ++w) {
    if (!cf::quantum_distance_at_least(code, w).holds) return std::to_string(w - 1);
  }
  return ">=4";
}

void write_report(const std::string& explicit_path, const std::string& default_name, const cf::json& j) {
  std::filesystem::path path;
  if (!explicit_path.empty()) {
    path = explicit_path;
  } else if (const char* dir = std::getenv("CYCLICFLAG_REPORT_DIR"); dir && *dir) {
    std::filesystem::create_directories(dir);
    path = std::filesystem::path(dir) / default_name;
  } else {
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report '" + path.string() + "'");
  out << j.dump(2) << "\n";
  std::cout << "report: " << path.string() << "\n";
}

std::string file_stem(const cf::LoadedCode& lc, const std::string& path) {
  return lc.spec.name.empty() ? std::filesystem::path(path).stem().string() : lc.spec.name;
}

cf::Pauli parse_operator(const std::string& text, const cf::CssCode& code) {
  try {
    return cf::Pauli::parse(text, code.n());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid operator: ") + e.what());
  }
}

void require_commuting(const cf::CssCode& code, const cf::Pauli& p) {
  if (p.is_identity()) throw UsageError("operator is the identity");
  const auto gens = code.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (!p.commutes(gens[i])) {
      throw UsageError("operator " + p.to_sparse() + " anticommutes with generator " + std::to_string(i + 1) + " (" +
                       gens[i].to_sparse() + ")");
    }
  }
}

int cmd_build(const std::string& path) {
  const auto lc = cf::load_code_file(path);
  const auto& code = lc.code;
  const std::string d = quantum_distance_text(code);
  std::cout << "[[" << code.n() << "," << code.k() << "," << d << "]] cyclic=" << (code.cyclic() ? "true" : "false")
            << "\n";
  std::cout << "n=" << code.n() << " k=" << code.k() << " r_x=" << code.rx() << " r_z=" << code.rz() << "\n";
  std::cout << "classical distance: C_x=" << distance_text(lc.cx) << " C_z=" << distance_text(lc.cz) << "\n";
  std::cout << "quantum distance >= 3: " << (cf::quantum_distance_at_least(code, 3).holds ? "yes" : "no") << "\n";
  if (lc.logical_report) {
    std::cout << "logical table: " << (lc.logical_report->ok() ? "valid" : "INVALID") << " ("
              << lc.logical_table->size() << " pairs)\n";
  }
  return kExitPass;
}

int cmd_distinguish(const std::string& path, const std::string& method, std::optional<std::size_t> l,
                    const std::string& type, const std::string& report) {
  const auto lc = cf::load_code_file(path);
  const auto& code = lc.code;
  if (l && *l >= code.n()) {
    throw UsageError("--l " + std::to_string(*l) + " outside 0.." + std::to_string(code.n() - 1));
  }
  cf::json j;
  bool pass = true;
  if (method == "theorem2") {
    const auto r = cf::theorem2_check(code);
    j = cf::to_json(r);
    pass = r.all_pass();
    std::cout << r.shifts.size() - r.failing_shifts().size() << "/" << r.shifts.size() << " shifts pass\n";
  } else {
    const auto kind = type == "x" ? cf::ConsecutiveKind::X
                                  : (type == "z" ? cf::ConsecutiveKind::Z : cf::ConsecutiveKind::Product);
    cf::DistinguishabilityReport r;
    if (method == "oracle") {
      r = cf::distinguishable_oracle(code, cf::consecutive_set(kind, l.value_or(0), code.n()));
    } else {
      if (l.value_or(0) != 0) throw UsageError("--l applies to the oracle and theorem2 methods only");
      if (kind == cf::ConsecutiveKind::Product) throw UsageError("lemma checks take --type x or z");
      const auto& h = kind == cf::ConsecutiveKind::Z ? code.hx() : code.hz();
      const auto pk = kind == cf::ConsecutiveKind::Z ? cf::PauliKind::Z : cf::PauliKind::X;
      if (method == "lemma1") {
        r = kind == cf::ConsecutiveKind::Z ? cf::lemma1_check_z(h) : cf::lemma1_check_x(h);
      } else {
        try {
          r = cf::lemma3_check(h, pk);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
    }
    j = cf::to_json(r);
    j["set"] = cf::to_string(kind);
    j["l"] = l.value_or(0);
    pass = r.verdict;
  }
  std::cout << j.dump(2) << "\n";
  write_report(report, file_stem(lc, path) + "-distinguish-" + method + ".json", j);
  return pass ? kExitPass : kExitFail;
}

int cmd_verify(const std::string& path, const std::string& protocol, const std::string& op_text,
               const cf::CampaignOptions& opts, const std::string& report) {
  const auto lc = cf::load_code_file(path);
  const auto& code = lc.code;
  const auto t0 = std::chrono::steady_clock::now();
  cf::CampaignResult r;
  if (protocol == "ftec") {
    if (!op_text.empty()) throw UsageError("--operator applies to --protocol measure only");
    r = cf::verify_def4(code, opts);
  } else {
    if (op_text.empty()) throw UsageError("--protocol measure needs --operator");
    const auto p = parse_operator(op_text, code);
    require_commuting(code, p);
    r = cf::verify_def9(code, p, opts);
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  std::cout << r.code_id << " " << r.protocol << (r.operator_string.empty() ? "" : " [" + r.operator_string + "]")
            << ": cases=" << r.cases << " samples=" << r.samples << " passes=" << r.passes
            << " failures=" << r.failures << "\n";
  for (std::size_t i = 0; i < r.failure_list.size() && i < 10; ++i) {
    const auto& f = r.failure_list[i];
    std::cout << "  FAIL input=" << f.input << " fault=" << f.fault << " branch=" << f.branch << " (" << f.condition
              << ") residual=" << f.residual << "\n";
  }
  std::cerr << "elapsed " << ms << " ms\n";
  write_report(report, file_stem(lc, path) + "-" + protocol + ".json", cf::to_json(r));
  return r.ok() ? kExitPass : kExitFail;
}

int cmd_tables(const std::string& path, const cf::CampaignOptions& opts, const std::string& report) {
  const auto lc = cf::load_code_file(path);
  const auto& code = lc.code;
  std::vector<cf::Pauli> ops;
  for (const auto& lp : code.logicals()) {
    ops.push_back(lp.x);
    ops.push_back(lp.z);
  }
  const auto tables = cf::reproduce_fault_tables(code, ops, opts);
  std::cout << cf::render_table(tables.ftec) << "\n" << cf::render_table(tables.measurement);
  cf::json j;
  j["code"] = file_stem(lc, path);
  j["ftec"] = cf::to_json(tables.ftec);
  j["measurement"] = cf::to_json(tables.measurement);
  write_report(report, file_stem(lc, path) + "-tables.json", j);
  return tables.pass() ? kExitPass : kExitFail;
}

int cmd_circuit(const std::string& path, std::optional<std::size_t> generator, const std::string& op_text,
                bool flag) {
  const auto lc = cf::load_code_file(path);
  const auto& code = lc.code;
  cf::Pauli p;
  if (generator) {
    if (*generator < 1 || *generator > code.generator_count()) {
      throw UsageError("--generator " + std::to_string(*generator) + " outside 1.." +
                       std::to_string(code.generator_count()));
    }
    p = code.generators()[*generator - 1];
  } else {
    p = parse_operator(op_text, code);
    if (p.is_identity()) throw UsageError("cannot build a circuit for the identity operator");
  }
  const auto c = flag ? cf::build_flag_circuit(p) : cf::build_nonflag_circuit(p);
  std::cout << c.dump();
  return kExitPass;
}

int cmd_validate_logicals(const std::string& path) {
  const auto lc = cf::load_code_file(path);
  if (!lc.logical_report) throw UsageError("code file names no logical table");
  const auto& rep = *lc.logical_report;
  for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
  std::cout << lc.logical_table->size() << " pairs, " << lc.code.generator_count() << " generators, "
            << rep.violations.size() << " violations\n";
  return rep.ok() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclicflag: flag fault-tolerance tools for cyclic CSS codes"};
  app.require_subcommand(1);

  std::string spec;
  std::string report;
  cf::CampaignOptions opts;
  opts.jobs = cf::default_jobs();

  auto* build = app.add_subcommand("build", "construct a code and print its parameters");
  build->add_option("spec", spec, "code file")->required();

  std::string method = "oracle";
  std::string type = "product";
  std::optional<std::size_t> l;
  auto* dist = app.add_subcommand("distinguish", "distinguishability of consecutive error sets");
  dist->add_option("spec", spec, "code file")->required();
  dist->add_option("--method", method)->check(CLI::IsMember({"oracle", "lemma1", "lemma3", "theorem2"}));
  dist->add_option("--type", type)->check(CLI::IsMember({"x", "z", "product"}));
  dist->add_option("--l", l, "cyclic shift");
  dist->add_option("--report", report, "JSON report path");

  std::string protocol = "ftec";
  std::string op_text;
  auto* verify = app.add_subcommand("verify", "exhaustive single-fault campaign");
  verify->add_option("spec", spec, "code file")->required();
  verify->add_option("--protocol", protocol)->check(CLI::IsMember({"ftec", "measure"}));
  verify->add_option("--operator", op_text, "operator to measure, e.g. \"X1 X11 X21\"");
  verify->add_option("--seed", opts.seed);
  verify->add_option("--jobs", opts.jobs)->check(CLI::PositiveNumber);
  verify->add_option("--samples", opts.samples, "high-weight samples (error correction)");
  verify->add_option("--report", report, "JSON report path");

  auto* tables = app.add_subcommand("tables", "fault class -> branch tables against the listed procedures");
  tables->add_option("spec", spec, "code file")->required();
  tables->add_option("--seed", opts.seed);
  tables->add_option("--jobs", opts.jobs)->check(CLI::PositiveNumber);
  tables->add_option("--report", report, "JSON report path");

  std::optional<std::size_t> generator;
  bool flag = true;
  auto* circuit = app.add_subcommand("circuit", "print a measurement circuit");
  circuit->add_option("spec", spec, "code file")->required();
  auto* gen_opt = circuit->add_option("--generator", generator, "1-based generator index (X-type first)");
  circuit->add_option("--operator", op_text, "operator string")->excludes(gen_opt);
  circuit->add_flag("--flag,!--no-flag", flag, "flagged (default) or bare circuit");

  auto* vlog = app.add_subcommand("validate-logicals", "check the code file's logical table");
  vlog->add_option("spec", spec, "code file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*build) return cmd_build(spec);
    if (*dist) return cmd_distinguish(spec, method, l, type, report);
    if (*verify) return cmd_verify(spec, protocol, op_text, opts, report);
    if (*tables) return cmd_tables(spec, opts, report);
    if (*circuit) {
      if (!generator && op_text.empty()) throw UsageError("give --generator or --operator");
      return cmd_circuit(spec, generator, op_text, flag);
    }
    if (*vlog) return cmd_validate_logicals(spec);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cf::CodeFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
