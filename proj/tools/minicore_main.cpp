// minicore: lint, analyze and transform programs in the small Core dialect.
//
// Exit codes: 0 success, 1 invariant violation / warnings / malformed input
// program, 2 parse error, 3 usage error.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "minicore/exitify.hpp"
#include "minicore/freevars.hpp"
#include "minicore/frontend.hpp"
#include "minicore/lint.hpp"
#include "minicore/subst.hpp"
#include "minicore/testgen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitParseError = 2;
constexpr int kExitUsage = 3;

struct ParseFailure {
  std::string file;
  minicore::ParseError error;
};

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

minicore::CoreProgram loadProgram(const std::string& path) {
  try {
    return minicore::parseProgram(readFile(path));
  } catch (const minicore::ParseError& e) {
    throw ParseFailure{path, e};
  }
}

void printReport(const minicore::LintReport& report) {
  if (report.ok) {
    std::cout << "lint: OK\n";
    return;
  }
  for (const auto& v : report.violations)
    std::cerr << "violation: " << v.rule << " at " << v.path << ": "
              << v.detail << "\n";
  std::cout << "lint: FAIL (" << report.violations.size() << " violations)\n";
}

int runLint(const std::string& file, bool join_points) {
  minicore::CoreProgram p = loadProgram(file);
  minicore::LintReport report = minicore::lintProgram(p, join_points);
  printReport(report);
  return report.ok ? kExitOk : kExitViolation;
}

int runFreevars(const std::string& file) {
  minicore::CoreProgram p = loadProgram(file);
  for (const auto& [binder, rhs] : minicore::flattenBinds(p)) {
    std::string line;
    minicore::VarSet fvs = minicore::exprFreeVars(rhs);
    for (const auto& [u, v] : fvs.entries()) {
      if (!line.empty()) line += ' ';
      line += minicore::printVarToken(v);
    }
    std::cout << line << "\n";
  }
  return kExitOk;
}

int runSize(const std::string& file) {
  minicore::CoreProgram p = loadProgram(file);
  std::uint64_t total = 0;
  for (const auto& [binder, rhs] : minicore::flattenBinds(p)) {
    std::uint64_t n = minicore::exprSize(rhs);
    total += n;
    std::cout << minicore::printVarToken(binder) << " " << n << "\n";
  }
  std::cout << "total " << total << "\n";
  return kExitOk;
}

int runSubst(const std::string& file, const std::string& spec_file) {
  minicore::CoreProgram p = loadProgram(file);
  minicore::SubstSpec spec;
  try {
    spec = minicore::parseSubstSpec(readFile(spec_file));
  } catch (const minicore::ParseError& e) {
    throw ParseFailure{spec_file, e};
  }

  minicore::Subst subst{
      minicore::mkInScopeSet(minicore::mkVarSet(spec.inscope)), {}};
  for (const auto& [v, e] : spec.mappings)
    subst.id_env = minicore::extendVarEnv(std::move(subst.id_env), v, e);

  std::size_t warning_count = 0;
  minicore::CoreProgram out;
  for (const minicore::Bind& b : p) {
    auto substPair = [&](const minicore::ExprPtr& rhs) {
      auto [result, warnings] = minicore::substExpr(file, subst, rhs);
      for (const auto& w : warnings)
        std::cerr << "scope warning (" << w.doc
                  << "): " << minicore::printVarToken(w.offending_var)
                  << " is not in scope\n";
      warning_count += warnings.size();
      return result;
    };
    out.push_back(std::visit(
        minicore::overloaded{
            [&](const minicore::NonRec& nr) -> minicore::Bind {
              return minicore::NonRec{nr.binder, substPair(nr.rhs)};
            },
            [&](const minicore::Rec& r) -> minicore::Bind {
              minicore::Rec rewritten;
              for (const auto& [v, rhs] : r.pairs)
                rewritten.pairs.emplace_back(v, substPair(rhs));
              return rewritten;
            }},
        b));
  }
  std::cout << minicore::printProgram(out);
  return warning_count == 0 ? kExitOk : kExitViolation;
}

int runExitify(const std::string& file, bool legacy_bug) {
  minicore::CoreProgram p = loadProgram(file);
  try {
    minicore::CoreProgram out = minicore::exitifyProgram(
        legacy_bug ? minicore::ExitifyMode::LegacyBug
                   : minicore::ExitifyMode::Fixed,
        p);
    std::cout << minicore::printProgram(out);
  } catch (const minicore::MalformedJoinRhs& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

int runGen(std::uint64_t seed, std::uint32_t size, double shadow,
           double join_density) {
  std::cout << minicore::printProgram(
      minicore::genProgram(seed, size, shadow, join_density));
  return kExitOk;
}

int runFmt(const std::string& file) {
  std::cout << minicore::printProgram(loadProgram(file));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model of GHC Core variable invariants and passes"};
  app.require_subcommand(1);

  std::string file;
  std::string spec_file;
  bool join_points = false;
  bool legacy_bug = false;
  std::uint64_t seed = 0;
  std::uint32_t size = 30;
  double shadow = 0.25;
  double join_density = 0.5;

  auto* lint = app.add_subcommand("lint", "check well-scopedness (and join points)");
  lint->add_option("file", file)->required();
  lint->add_flag("--join-points", join_points, "also check the join point invariants");

  auto* freevars = app.add_subcommand("freevars", "free local variables of each top rhs");
  freevars->add_option("file", file)->required();

  auto* size_cmd = app.add_subcommand("size", "size of each top rhs and the program total");
  size_cmd->add_option("file", file)->required();

  auto* subst = app.add_subcommand("subst", "apply a substitution spec to each top rhs");
  subst->add_option("file", file)->required();
  subst->add_option("--spec", spec_file, "substitution spec file")->required();

  auto* exitify = app.add_subcommand("exitify", "float exit paths out of recursive join groups");
  exitify->add_option("file", file)->required();
  exitify->add_flag("--legacy-bug", legacy_bug, "reproduce the pre-fix abstraction bug");

  auto* gen = app.add_subcommand("gen", "emit a random invariant-satisfying program");
  gen->add_option("--seed", seed)->required();
  gen->add_option("--size", size)->required();
  gen->add_option("--shadow", shadow, "probability of reusing an in-scope unique");
  gen->add_option("--join-density", join_density, "fraction of recursive join groups");

  auto* fmt = app.add_subcommand("fmt", "parse and reprint in canonical form");
  fmt->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(lint)) return runLint(file, join_points);
    if (app.got_subcommand(freevars)) return runFreevars(file);
    if (app.got_subcommand(size_cmd)) return runSize(file);
    if (app.got_subcommand(subst)) return runSubst(file, spec_file);
    if (app.got_subcommand(exitify)) return runExitify(file, legacy_bug);
    if (app.got_subcommand(gen)) return runGen(seed, size, shadow, join_density);
    if (app.got_subcommand(fmt)) return runFmt(file);
  } catch (const ParseFailure& f) {
    std::cerr << f.file << ":" << f.error.what() << "\n";
    return kExitParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
