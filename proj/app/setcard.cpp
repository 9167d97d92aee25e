// setcard: command-line front end.
//
//   setcard solve FILE [--fix-size] [--timeout MS] [--max-solutions N] [--json]
//   setcard check-unsat FILE [--timeout MS]
//   setcard bench DIR [--timeout MS] [--no-timeout] [--no-infer] [--json]
//
// Exit codes for solve and check-unsat: 0 Sat (check-unsat: proved), 1 Unsat
// (check-unsat: not proved), 2 Timeout, 3 parse, sort or I/O error.
// bench exits 1 when some verdict contradicts its "% expect:" annotation or a
// file fails to parse; timeouts do not count.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "setcard/error.hpp"
#include "setcard/parser.hpp"
#include "setcard/report.hpp"
#include "setcard/solver.hpp"

namespace {

using namespace setcard;

constexpr int kInputError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int exit_code(SolveResult::Verdict v) {
  switch (v) {
    case SolveResult::Verdict::Sat:
      return 0;
    case SolveResult::Verdict::Unsat:
      return 1;
    default:
      return 2;
  }
}

void print_plain(const SolveResult& r) {
  for (std::size_t i = 0; i < r.answers.size(); ++i) {
    if (i > 0) std::cout << "\n";
    std::cout << to_string(r.answers[i]) << "\n";
  }
  std::printf("%s (%.3f ms)\n", verdict_name(r.verdict), r.millis);
}

void report_error(const Error& e) {
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    std::cerr << "parse error at " << pe->line() << ":" << pe->column() << ": " << e.what() << "\n";
  } else {
    std::cerr << "error: " << e.what() << "\n";
  }
}

void print_bench(const BenchReport& r) {
  for (const auto& e : r.entries) {
    if (e.mismatch()) std::cout << "MISMATCH " << e.path << ": expected " << e.expected << ", got " << e.verdict << "\n";
    if (e.verdict == "error") std::cout << "ERROR " << e.path << ": " << e.error << "\n";
  }
  std::printf("%-16s %6s %6s %6s %8s %6s %10s %10s\n", "collection", "files", "sat", "unsat", "unsolved", "errors",
              "mismatch", "time(ms)");
  auto row = [](const std::string& name, const CollectionStats& s) {
    std::printf("%-16s %6ld %6ld %6ld %8ld %6ld %10ld %10.1f\n", name.c_str(), s.total(), s.sat, s.unsat, s.unsolved,
                s.errors, s.mismatches, s.millis);
  };
  for (const auto& [name, s] : r.collections) row(name, s);
  row("total", r.totals());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satisfiability of hereditarily finite hybrid set formulas with cardinality"};
  app.require_subcommand(1);

  std::string file;
  long timeout_ms = 2000;
  bool no_timeout = false;
  bool fix = false;
  bool json_out = false;
  bool no_infer = false;
  int max_solutions = 0;

  auto add_timeout = [&](CLI::App* cmd) {
    cmd->add_option("--timeout", timeout_ms, "Per-formula timeout in milliseconds")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-timeout", no_timeout, "Run without a timeout");
  };

  auto* solve = app.add_subcommand("solve", "Solve a script and print its answers");
  solve->add_option("FILE", file, "Script")->required();
  solve->add_flag("--fix-size", fix, "Minimal-solution mode");
  solve->add_option("--max-solutions", max_solutions, "0 = first answer, N = up to N answers, -1 = all")
      ->check(CLI::Range(-1, 1 << 30));
  solve->add_flag("--json", json_out, "JSON output");
  solve->add_flag("--no-infer", no_infer, "Disable the size inference rules");
  add_timeout(solve);

  auto* check = app.add_subcommand("check-unsat", "Prove a verification condition by refutation");
  check->add_option("FILE", file, "Script")->required();
  add_timeout(check);

  std::string dir;
  auto* bench = app.add_subcommand("bench", "Run every .slog file below a directory");
  bench->add_option("DIR", dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  bench->add_flag("--json", json_out, "JSON report");
  bench->add_flag("--no-infer", no_infer, "Disable the size inference rules");
  add_timeout(bench);

  CLI11_PARSE(app, argc, argv);
  if (no_timeout) timeout_ms = 0;

  if (bench->parsed()) {
    BenchOptions bo;
    bo.timeout_ms = timeout_ms;
    bo.infer_size = !no_infer;
    BenchReport r = run_bench(dir, bo);
    if (json_out) {
      std::cout << to_json(r, 2) << "\n";
    } else {
      print_bench(r);
    }
    CollectionStats t = r.totals();
    return t.mismatches > 0 || t.errors > 0 ? 1 : 0;
  }

  SolveOptions so;
  so.timeout_ms = timeout_ms;
  so.infer_size = !no_infer;
  so.fix_size = fix;
  so.max_solutions = max_solutions;
  SolveResult r;
  try {
    r = sat_card(parse_formula(read_file(file)), so);
  } catch (const TimeoutError&) {
    r.verdict = SolveResult::Verdict::Timeout;
  } catch (const Error& e) {
    report_error(e);
    return kInputError;
  }

  if (check->parsed()) {
    switch (r.verdict) {
      case SolveResult::Verdict::Unsat:
        std::printf("proved (%.3f ms)\n", r.millis);
        return 0;
      case SolveResult::Verdict::Sat:
        std::cout << "not proved; counterexample:\n" << to_string(r.answers.front()) << "\n";
        return 1;
      default:
        std::cout << "timeout\n";
        return 2;
    }
  }

  if (json_out) {
    std::cout << to_json(make_report(r), 2) << "\n";
  } else {
    print_plain(r);
  }
  return exit_code(r.verdict);
}
