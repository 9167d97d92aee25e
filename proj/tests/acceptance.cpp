// acceptance: one PASS/FAIL line per acceptance criterion, exit 1 if any
// fails. Every bound used below is fixed here; nothing is read from the
// environment.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "formula_gen.hpp"
#include "ilp_oracle.hpp"
#include "lemmas.hpp"
#include "sat_oracle.hpp"
#include "setcard/oracle.hpp"
#include "setcard/parser.hpp"
#include "setcard/printer.hpp"
#include "setcard/report.hpp"
#include "setcard/solver.hpp"

using namespace setcard;

namespace {

constexpr double kGoldenSeconds = 1.0;         // criteria 1, 3, 4
constexpr long kSlowTimeoutMs = 2000;          // criteria 3 (infer off), 5, 8
constexpr double kRandomSuiteSeconds = 300.0;  // criterion 5
constexpr int kRandomFormulas = 1000;
constexpr unsigned kRandomSeed = 20240601;
constexpr int kIlpProblems = 1000;
constexpr int kCnfs = 200;
constexpr double kSolvedFraction = 0.90;  // criterion 8
constexpr long kMinCorpus = 250;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

struct Timed {
  SolveResult result;
  double seconds = 0;
};

Timed timed_solve(const std::string& text, SolveOptions o = SolveOptions()) {
  auto start = std::chrono::steady_clock::now();
  Timed t;
  t.result = sat_card(parse_formula(text), o);
  t.seconds = seconds_since(start);
  return t;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string union_chain(int n) {
  std::string f = "un(A1,A2,U2)";
  for (int i = 3; i <= n; ++i) {
    f += " & un(U" + std::to_string(i - 1) + ",A" + std::to_string(i) + ",U" + std::to_string(i) + ")";
  }
  return f;
}

const char* const kCache =
    "cache(Cont,N,Cache) :-\n"
    "  0 < N & size(Cont,S) &\n"
    "  (S =< N & Cache = Cont\n"
    "   or\n"
    "   S > N & un(Rest,Cache,Cont) & disj(Rest,Cache) & size(Cache,N)).\n";

const char* const kInsertVc =
    "sl_insert(Content,Size,E,Content_,Size_) :-\n"
    "  un(Content,E,Content_) & Size_ is Size + 1.\n"
    "size(E,1) & inters(E,Content,M1) & size(M1,0) &\n"
    "size(Content,Size) &\n"
    "sl_insert(Content,Size,E,Content_,Size_) &\n"
    "(Size_ =< 0 or size(Content_,M2) & M2 neq Size_).\n";

Outcome golden_suite() {
  Outcome out;
  double slowest = 0;
  int checks = 0;
  auto expect = [&](const std::string& name, const std::string& text, SolveResult::Verdict v,
                    std::function<bool(const SolveResult&)> extra = nullptr, int max_solutions = 0) {
    SolveOptions o;
    o.max_solutions = max_solutions;
    Timed t = timed_solve(text, o);
    ++checks;
    slowest = std::max(slowest, t.seconds);
    bool ok = t.result.verdict == v && t.seconds < kGoldenSeconds && (!extra || extra(t.result));
    if (!ok) {
      out.pass = false;
      out.detail += " " + name + "(" + verdict_name(t.result.verdict) + fmt(", %.3fs)", t.seconds);
    }
  };
  using V = SolveResult::Verdict;
  expect("union-gt", "un(A,B,C) & size(A,M1) & size(B,M2) & size(C,M3) & M3 > M1 + M2 .", V::Unsat);
  expect("union-leq", "un(A,B,C) & size(A,M1) & size(B,M2) & size(C,M3) & M3 =< M1 + M2 .", V::Sat);
  expect("gap", "X > Y & X < Y + 1 .", V::Unsat);
  expect("union-functional", "un(A,B,C) & un(A,B,D) & C neq D .", V::Unsat);
  expect(
      "nested", "size({{X},{Y}},N) .", V::Sat,
      [](const SolveResult& r) {
        return r.answers.size() == 2 && to_string(r.answers[0]) == "N = 2\nConstraint: X neq Y" &&
               to_string(r.answers[1]) == "N = 1,\nY = X";
      },
      -1);
  expect("insert", kInsertVc, V::Unsat);
  expect("subset", "subset(A,B) & size(A,N) & size(B,N) & A neq B .", V::Unsat);
  expect(
      "cache", std::string(kCache) + "cache({1,b,[2,q]},2,Cache).", V::Sat,
      [](const SolveResult& r) { return r.answers.size() == 3; }, -1);
  expect("cache-prop", std::string(kCache) + "cache(Cont,N,Cache) & size(Cont,M) & N < M & Cache = {}.", V::Unsat);
  if (out.pass) out.detail = std::to_string(checks) + " formulas, slowest " + fmt("%.3f s", slowest);
  return out;
}

const Term* binding(const Answer& a, const std::string& name) {
  for (const auto& [n, t] : a.bindings) {
    if (n == name) return &t;
  }
  return nullptr;
}

Outcome minimal_solution() {
  Outcome out;
  SolveResult r = fix_size(parse_formula("size(A,M) & 1 =< M & subset(B,A) & size(B,N) & 5 =< N ."));
  if (r.verdict != SolveResult::Verdict::Sat) return {false, std::string("verdict ") + verdict_name(r.verdict)};
  const Answer& a = r.answers.front();
  const Term* m = binding(a, "M");
  const Term* n = binding(a, "N");
  const Term* set = binding(a, "A");
  if (!m || !n || !set) return {false, "missing binding in " + to_string(a)};
  std::vector<Term> elems = set_elements(*set);
  // Every pair of the five elements must be kept apart by a residual neq.
  std::set<std::pair<Term, Term>> apart;
  for (const auto& c : a.residual) {
    if (c.pred == Pred::Neq) {
      apart.insert({c.arg(0), c.arg(1)});
      apart.insert({c.arg(1), c.arg(0)});
    }
  }
  bool all_different = true;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = i + 1; j < elems.size(); ++j) all_different &= apart.count({elems[i], elems[j]}) > 0;
  }
  out.pass = *m == Term::int_const(5) && *n == Term::int_const(5) && elems.size() == 5 && all_different;
  out.detail = "M = " + to_string(*m) + ", N = " + to_string(*n) + ", A = " + to_string(*set) +
               (all_different ? ", pairwise distinct" : ", NOT pairwise distinct");
  return out;
}

Outcome union_scaling() {
  std::string f = union_chain(20) + " & U20 = B";
  std::string sum;
  for (int i = 1; i <= 20; ++i) {
    f += " & size(A" + std::to_string(i) + ",N" + std::to_string(i) + ")";
    sum += (i > 1 ? " + N" : "N") + std::to_string(i);
  }
  f += " & size(B,M) & " + sum + " < M .";
  Timed with = timed_solve(f);
  SolveOptions off;
  off.infer_size = false;
  off.timeout_ms = kSlowTimeoutMs;
  Timed without = timed_solve(f, off);
  Outcome out;
  out.pass = with.result.verdict == SolveResult::Verdict::Unsat && with.seconds < kGoldenSeconds;
  out.detail = std::string(verdict_name(with.result.verdict)) + fmt(" in %.4f s; ", with.seconds) +
               "without inference: " + verdict_name(without.result.verdict) + fmt(" after %.3f s", without.seconds);
  return out;
}

Outcome membership_scaling() {
  Timed t = timed_solve(union_chain(21) + " & X in U21 .");
  bool residual = !t.result.answers.empty() && !t.result.answers.front().residual.empty();
  Outcome out;
  out.pass = t.result.verdict == SolveResult::Verdict::Sat && t.seconds < kGoldenSeconds && residual;
  out.detail = std::string(verdict_name(t.result.verdict)) + fmt(" in %.4f s", t.seconds) +
               (residual ? ", answer has residual constraints" : ", no residual constraints");
  return out;
}

Outcome oracle_agreement() {
  testing::FormulaGen gen(kRandomSeed);
  Scope ground_scope;
  ground_scope.int_lo = -8;
  ground_scope.int_hi = 8;
  long violations = 0, sat = 0, unsat = 0, timeouts = 0, unrefuted = 0;
  std::string first;
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < kRandomFormulas; ++i) {
    Formula f = gen.next();
    SolveOptions o;
    o.timeout_ms = kSlowTimeoutMs;
    SolveResult r = sat_card(f, o);
    bool bad = false;
    if (r.verdict == SolveResult::Verdict::Sat) {
      ++sat;
      try {
        auto v = ground_answer(r.answers.front(), f, ground_scope);
        bad = !v || !eval_ground(f, *v);
      } catch (const ScopeTooLarge&) {
        bad = true;
      }
    } else if (r.verdict == SolveResult::Verdict::Unsat) {
      ++unsat;
      try {
        bad = oracle_sat(f).sat;
      } catch (const ScopeTooLarge&) {
        ++unrefuted;
      }
    } else {
      ++timeouts;
    }
    if (bad && violations++ == 0) first = to_string(f);
  }
  double secs = seconds_since(start);
  Outcome out;
  out.pass = violations == 0 && secs < kRandomSuiteSeconds;
  out.detail = std::to_string(kRandomFormulas) + " formulas: " + std::to_string(sat) + " sat, " +
               std::to_string(unsat) + " unsat, " + std::to_string(timeouts) + " timeout, " +
               std::to_string(violations) + " violations, " + std::to_string(unrefuted) +
               " unsat beyond oracle budget" + fmt(", %.1f s", secs);
  if (!first.empty()) out.detail += "; first violation: " + first;
  return out;
}

Outcome ilp_agreement() {
  std::mt19937 rng(kRandomSeed);
  long mismatches = 0, infeasible = 0;
  for (int i = 0; i < kIlpProblems; ++i) {
    auto bp = testing_support::random_boxed_problem(rng);
    auto expect = testing_support::brute_force_min(bp);
    ilp::IlpResult r = ilp::bb_inf(bp.problem);
    if (!expect) {
      ++infeasible;
      if (r.status != ilp::IlpResult::Status::Infeasible) ++mismatches;
    } else if (r.status != ilp::IlpResult::Status::Optimal || r.value != *expect) {
      ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(kIlpProblems) + " problems (" + std::to_string(infeasible) +
                               " infeasible), " + std::to_string(mismatches) + " mismatches"};
}

Outcome sat_agreement() {
  std::mt19937 rng(kRandomSeed);
  long mismatches = 0, models = 0;
  for (int i = 0; i < kCnfs; ++i) {
    sat::Cnf cnf = testing_support::random_cnf(rng);
    auto got = sat::sat_enumerate(cnf);
    models += static_cast<long>(got.size());
    if (got != testing_support::truth_table(cnf)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(kCnfs) + " CNFs, " + std::to_string(models) + " models, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome corpus_termination() {
  BenchOptions unlimited;
  unlimited.timeout_ms = 0;
  BenchReport all = run_bench(SETCARD_CORPUS_DIR, unlimited);
  BenchOptions limited;
  limited.timeout_ms = kSlowTimeoutMs;
  BenchReport timed = run_bench(SETCARD_CORPUS_DIR, limited);
  CollectionStats a = all.totals();
  CollectionStats t = timed.totals();
  long files = a.total();
  double solved = files ? static_cast<double>(t.sat + t.unsat) / static_cast<double>(files) : 0.0;
  Outcome out;
  out.pass = files >= kMinCorpus && a.unsolved == 0 && a.errors == 0 && a.mismatches == 0 && t.errors == 0 &&
             t.mismatches == 0 && solved >= kSolvedFraction;
  out.detail = std::to_string(files) + " files; no timeout: " + std::to_string(a.sat + a.unsat) + " decided" +
               fmt(" in %.1f s", a.millis / 1000) + "; 2 s timeout: " + fmt("%.1f%% solved", 100 * solved) +
               ", " + std::to_string(t.mismatches) + " mismatches, " + std::to_string(t.errors) + " errors";
  return out;
}

Outcome lemmas() {
  testing::LemmaReport ext = testing::size_ext_lemma();
  testing::LemmaReport c3 = testing::size_const3_lemma();
  Outcome out;
  out.pass = ext.mismatches.empty() && c3.mismatches.empty() && ext.instances > 0 && c3.instances > 0;
  out.detail = "size:ext " + std::to_string(ext.instances) + " instances, " + std::to_string(ext.mismatches.size()) +
               " mismatches; size:const3 " + std::to_string(c3.instances) + " instances, " +
               std::to_string(c3.mismatches.size()) + " mismatches";
  if (!ext.mismatches.empty()) out.detail += "; e.g. " + ext.mismatches.front();
  if (!c3.mismatches.empty()) out.detail += "; e.g. " + c3.mismatches.front();
  return out;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"golden examples", golden_suite},
      {"minimal solution", minimal_solution},
      {"20-way union scaling", union_scaling},
      {"21-way membership", membership_scaling},
      {"oracle agreement", oracle_agreement},
      {"ILP vs box search", ilp_agreement},
      {"SAT vs truth tables", sat_agreement},
      {"corpus termination", corpus_termination},
      {"size lemmas", lemmas},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
