#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "setcard/parser.hpp"
#include "setcard/report.hpp"

using namespace setcard;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("setcard_cli_" + std::to_string(std::rand()) + "_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& rel, const std::string& text) const {
    fs::path p = path / rel;
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
    return p;
  }
};

// Exit status of the setcard binary run with `args`; stdout goes to `out`.
int run_cli(const std::string& args, const fs::path& out) {
  std::string cmd = std::string(SETCARD_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("solve report survives a JSON round trip") {
    SolveOptions o;
    o.max_solutions = -1;
    SolveResult r = sat_card(parse_formula("un(A,B,C) & N + K > 5 & size(C,N) & B neq {} ."), o);
    REQUIRE(r.verdict == SolveResult::Verdict::Sat);
    SolveReport rep = make_report(r);
    CHECK(solve_report_from_json(to_json(rep)) == rep);
    CHECK(solve_report_from_json(to_json(rep, 2)) == rep);

    SolveResult fixed = fix_size(parse_formula("un(A,B,C) & N + K > 5 & size(C,N) & B neq {} ."));
    SolveReport frep = make_report(fixed);
    REQUIRE(frep.answers.front().vertex.has_value());
    CHECK(solve_report_from_json(to_json(frep)) == frep);
  }

  TEST_CASE("malformed JSON is an Error") {
    CHECK_THROWS_AS(solve_report_from_json("{\"verdict\": 1"), Error);
    CHECK_THROWS_AS(solve_report_from_json("{\"verdict\": \"sat\"}"), Error);
    CHECK_THROWS_AS(bench_report_from_json("[]"), Error);
  }

  TEST_CASE("expected verdict annotations") {
    CHECK(expected_verdict("% expect: sat\nX = {} .") == "sat");
    CHECK(expected_verdict("% a comment\n%expect:unsat\n1 in {} .") == "unsat");
    CHECK(expected_verdict("X = {} .") == "");
    CHECK(expected_verdict("% expect: saturated\n") == "");
  }

  TEST_CASE("bench report counts and round trip") {
    TempDir d;
    d.write("a/one.slog", "% expect: sat\nX = {1} .\n");
    d.write("a/two.slog", "% expect: unsat\n1 in {} .\n");
    d.write("b/three.slog", "% expect: sat\nX in {} .\n");  // wrong annotation
    d.write("b/bad.slog", "X = = .\n");
    d.write("top.slog", "X neq X .\n");
    d.write("b/ignored.txt", "1 in {} .\n");
    BenchReport r = run_bench(d.path.string(), BenchOptions{});
    REQUIRE(r.entries.size() == 5);
    CHECK(r.collections.at("a").sat == 1);
    CHECK(r.collections.at("a").unsat == 1);
    CHECK(r.collections.at("a").mismatches == 0);
    CHECK(r.collections.at("b").unsat == 1);
    CHECK(r.collections.at("b").errors == 1);
    CHECK(r.collections.at("b").mismatches == 1);
    CHECK(r.collections.at(".").unsat == 1);
    CollectionStats t = r.totals();
    CHECK(t.total() == 5);
    CHECK(bench_report_from_json(to_json(r)) == r);
  }

  TEST_CASE("timeouts are unsolved, not mismatches") {
    TempDir d;
    // Twenty-way union without size inference needs far longer than 1 ms.
    std::string f = "% expect: unsat\nun(A1,A2,U2)";
    for (int i = 3; i <= 20; ++i) {
      f += " & un(U" + std::to_string(i - 1) + ",A" + std::to_string(i) + ",U" + std::to_string(i) + ")";
    }
    f += " & U20 = B";
    std::string sum;
    for (int i = 1; i <= 20; ++i) {
      f += " & size(A" + std::to_string(i) + ",N" + std::to_string(i) + ")";
      sum += (i > 1 ? " + N" : "N") + std::to_string(i);
    }
    f += " & size(B,M) & " + sum + " < M .\n";
    d.write("slow/u20.slog", f);
    BenchOptions o;
    o.timeout_ms = 1;
    o.infer_size = false;
    BenchReport r = run_bench(d.path.string(), o);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].verdict == "timeout");
    CHECK_FALSE(r.entries[0].mismatch());
    CHECK(r.collections.at("slow").unsolved == 1);
  }

  TEST_CASE("exit codes of the command-line front end") {
    TempDir d;
    fs::path out = d.path / "out.txt";
    fs::path unsat = d.write("unsat.slog", "1 in {} .\n");
    fs::path sat = d.write("sat.slog", "X = X .\n");
    fs::path bad = d.write("bad.slog", "X = {1,\n");
    fs::path sort = d.write("sort.slog", "size(A,B) & un(B,A,A) & B = 1 .\n");

    CHECK(run_cli("solve " + unsat.string(), out) == 1);
    CHECK(slurp(out).find("unsat") != std::string::npos);
    CHECK(run_cli("solve " + sat.string(), out) == 0);
    CHECK(run_cli("solve " + bad.string(), out) == 3);
    CHECK(slurp(out).find("parse error at 2:") != std::string::npos);
    CHECK(run_cli("solve " + sort.string(), out) == 3);
    CHECK(run_cli("solve " + (d.path / "missing.slog").string(), out) == 3);

    CHECK(run_cli("check-unsat " + unsat.string(), out) == 0);
    CHECK(slurp(out).find("proved") == 0);
    CHECK(run_cli("check-unsat " + sat.string(), out) != 0);
    CHECK(slurp(out).find("counterexample") != std::string::npos);
  }

  TEST_CASE("solve prints answers with residual constraints") {
    TempDir d;
    fs::path out = d.path / "out.txt";
    fs::path f = d.write("f.slog", "un(A,B,C) & N + K > 5 & size(C,N) & B neq {} .\n");
    CHECK(run_cli("solve " + f.string() + " --fix-size", out) == 0);
    std::string text = slurp(out);
    CHECK(text.find("A = {}") != std::string::npos);
    CHECK(text.find("N = 1") != std::string::npos);
    CHECK(text.find("Constraint:") != std::string::npos);

    CHECK(run_cli("solve " + f.string() + " --json --max-solutions 2", out) == 0);
    SolveReport rep = solve_report_from_json(slurp(out));
    CHECK(rep.verdict == "sat");
    CHECK(rep.answers.size() == 2);
  }

  TEST_CASE("bench exit status") {
    TempDir d;
    fs::path out = d.path / "out.txt";
    fs::create_directories(d.path / "empty");
    CHECK(run_cli("bench " + (d.path / "empty").string(), out) == 0);
    d.write("c/ok/a.slog", "% expect: unsat\n1 in {} .\n");
    CHECK(run_cli("bench " + (d.path / "c").string(), out) == 0);
    CHECK(run_cli("bench --json " + (d.path / "c").string(), out) == 0);
    BenchReport r = bench_report_from_json(slurp(out));
    CHECK(r.collections.at("ok").unsat == 1);
    d.write("c/ok/b.slog", "% expect: unsat\nX = {} .\n");
    CHECK(run_cli("bench " + (d.path / "c").string(), out) == 1);
    CHECK(slurp(out).find("MISMATCH") != std::string::npos);
  }
}
