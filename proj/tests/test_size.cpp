#include <chrono>
#include <random>

#include "doctest.h"
#include "setcard/error.hpp"
#include "setcard/size_solver.hpp"

using namespace setcard;

namespace {

Term S(const std::string& n) { return Term::var(n, Sort::Set); }
Term I(const std::string& n) { return Term::var(n, Sort::Int); }
Term C(long v) { return Term::int_const(v); }

LinForm lv(const std::string& v) { return normalize_int(I(v)); }

Integer eval_row(const ilp::LinConstraint& r, const std::map<std::string, Integer>& p) {
  Rational s = 0;
  for (const auto& [v, c] : r.lhs) s += c * Rational(p.at(v));
  return Integer(s - r.rhs > 0 ? 1 : (s - r.rhs < 0 ? -1 : 0));
}

bool row_holds(const ilp::LinConstraint& r, const std::map<std::string, Integer>& p) {
  Integer sign = eval_row(r, p);
  switch (r.rel) {
    case ilp::Rel::Eq:
      return sign == 0;
    case ilp::Rel::Le:
      return sign <= 0;
    default:
      return sign < 0;
  }
}

// Brute-force verdict for problems over three set variables X0..X2, each
// sized by m0..m2 with m_i <= 2: try every count in 0..2 for each of the
// seven Venn regions.
bool brute_force(const ZaProblem& z) {
  const int n = 3;
  std::vector<int> counts(7, 0);
  for (;;) {
    std::map<std::string, Integer> sizes;
    bool ok = true;
    for (int r = 1; r <= 7 && ok; ++r) {
      if (counts[r - 1] == 0) continue;
      auto in = [&](const std::string& x) { return (r >> (x[1] - '0')) & 1; };
      for (const auto& u : z.unions) ok = ok && (in(u[2]) == (in(u[0]) || in(u[1])));
      for (const auto& d : z.disjoints) ok = ok && !(in(d[0]) && in(d[1]));
    }
    if (ok) {
      for (int i = 0; i < n; ++i) {
        long m = 0;
        for (int r = 1; r <= 7; ++r) {
          if ((r >> i) & 1) m += counts[r - 1];
        }
        sizes["m" + std::to_string(i)] = m;
      }
      for (const auto& row : z.int_constraints) ok = ok && row_holds(row, sizes);
      for (const auto& d : z.int_neqs) {
        Integer v = d.constant;
        for (const auto& [name, c] : d.coeffs) v += c * sizes.at(name);
        ok = ok && v != 0;
      }
      if (ok) return true;
    }
    int k = 0;
    while (k < 7 && counts[k] == 2) counts[k++] = 0;
    if (k == 7) return false;
    ++counts[k];
  }
}

ZaProblem random_problem(std::mt19937& rng) {
  ZaProblem z;
  auto name = [](int i) { return "X" + std::to_string(i); };
  int nu = rng() % 3;
  for (int i = 0; i < nu; ++i) {
    int a = rng() % 3, b = rng() % 3, c = rng() % 3;
    z.unions.push_back({name(a), name(b), name(c)});
  }
  if (rng() % 2) {
    int a = rng() % 3, b = rng() % 3;
    z.disjoints.push_back({name(a), name(b)});
  }
  for (int i = 0; i < 3; ++i) {
    std::string m = "m" + std::to_string(i);
    z.sizes.emplace_back(name(i), lv(m));
    z.int_constraints.push_back(ilp::LinConstraint{{{m, Rational(1)}}, ilp::Rel::Le, 2});
    z.int_constraints.push_back(ilp::LinConstraint{{{m, Rational(-1)}}, ilp::Rel::Le, 0});
  }
  int nr = rng() % 3;
  for (int i = 0; i < nr; ++i) {
    LinForm f;
    for (int j = 0; j < 3; ++j) f.add_term("m" + std::to_string(j), Integer(long(rng() % 5) - 2));
    f.constant = long(rng() % 5) - 2;
    ilp::Rel rel = std::array{ilp::Rel::Eq, ilp::Rel::Le, ilp::Rel::Lt}[rng() % 3];
    z.int_constraints.push_back(ilp::LinConstraint::from_forms(f, rel, LinForm{}));
  }
  if (rng() % 3 == 0) z.int_neqs.push_back(lv("m0") - lv("m1"));
  return z;
}

}  // namespace

TEST_SUITE("size") {
  TEST_CASE("translate examples") {
    ZaProblem z = translate({Constraint::un(S("A"), S("B"), S("C")), Constraint::size(S("A"), C(5)),
                             Constraint::leq(I("n"), I("m"))});
    REQUIRE(z.unions.size() == 1);
    CHECK(z.unions[0] == std::array<std::string, 3>{"A", "B", "C"});
    REQUIRE(z.sizes.size() == 1);
    CHECK(z.sizes[0].first == "A");
    CHECK(z.sizes[0].second.is_constant());
    CHECK(z.sizes[0].second.constant == 5);
    REQUIRE(z.int_constraints.size() == 1);
    const auto& row = z.int_constraints[0];
    CHECK(row.rel == ilp::Rel::Le);
    CHECK(row.lhs.at("n") == 1);
    CHECK(row.lhs.at("m") == -1);
    CHECK(row.rhs == 0);

    Term cons = Term::set_cons(C(1), S("B"));
    CHECK_THROWS_AS(translate({Constraint::un(S("A"), cons, S("C"))}), InternalError);

    ZaProblem dropped = translate({Constraint::neq(S("A"), S("B")), Constraint::nin(C(1), S("A"))});
    CHECK(dropped.unions.empty());
    CHECK(dropped.int_constraints.empty());
  }

  TEST_CASE("infer_size examples") {
    ZaProblem none = translate({Constraint::un(S("A"), S("B"), S("C"))});
    ZaProblem same = infer_size(none);
    CHECK(same.sizes.empty());
    CHECK(same.int_constraints.empty());

    ZaProblem z = translate({Constraint::un(S("A"), S("B"), S("C")), Constraint::size(S("C"), I("m"))});
    ZaProblem inf = infer_size(z);
    CHECK(inf.sizes.size() == 3);
    // Two non-negativity rows for the fresh sizes and m <= m1 + m2.
    CHECK(inf.int_constraints.size() == 3);
    std::map<std::string, Integer> p{{"m", 3}};
    for (const auto& [x, f] : inf.sizes) {
      for (const auto& [v, c] : f.coeffs) p.emplace(v, 1);
    }
    bool violated = false;
    for (const auto& r : inf.int_constraints) violated = violated || !row_holds(r, p);
    CHECK(violated);
  }

  TEST_CASE("encode_boolean examples") {
    ZaProblem z;
    z.unions.push_back({"A", "B", "C"});
    sat::Cnf cnf = encode_boolean(z, {"A", "B", "C"});
    CHECK(cnf.num_vars == 3);
    CHECK(cnf.clauses.size() == 3);
    std::vector<sat::Assignment> s = sat::sat_enumerate(cnf);
    CHECK(s.size() == 3);

    ZaProblem d;
    d.disjoints.push_back({"A", "B"});
    sat::Cnf dc = encode_boolean(d, {"A", "B"});
    REQUIRE(dc.clauses.size() == 1);
    CHECK(dc.clauses[0] == sat::Clause{-1, -2});

    CHECK(encode_boolean(ZaProblem{}, {}).clauses.empty());
  }

  TEST_CASE("build_res_z examples") {
    ZaProblem z;
    z.sizes.emplace_back("A", lv("v"));
    Arrangement arr;
    arr.regions = {{{"A", true}}, {{"A", false}}};
    arr.region_vars = {"p1", "p2"};
    auto rows = build_res_z(arr, z);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].rel == ilp::Rel::Le);
    CHECK(rows[0].lhs.at("p1") == -1);
    CHECK(rows[0].rhs == -1);
    CHECK(rows[2].rel == ilp::Rel::Eq);
    CHECK(rows[2].lhs.size() == 2);
    CHECK(rows[2].lhs.at("v") == 1);
    CHECK(rows[2].lhs.at("p1") == -1);

    auto empty_rows = build_res_z(Arrangement{}, z);
    REQUIRE(empty_rows.size() == 1);
    CHECK(empty_rows[0].lhs.size() == 1);
    CHECK(empty_rows[0].rhs == 0);

    ZaProblem two;
    two.sizes.emplace_back("A", lv("u"));
    two.sizes.emplace_back("B", lv("w"));
    Arrangement one;
    one.regions = {{{"A", true}, {"B", true}}};
    one.region_vars = {"p"};
    auto r2 = build_res_z(one, two);
    std::map<std::string, Integer> pt{{"p", 2}, {"u", 2}, {"w", 2}};
    for (const auto& r : r2) CHECK(row_holds(r, pt));
    pt["w"] = 3;
    CHECK_FALSE(row_holds(r2[2], pt));
  }

  TEST_CASE("union bound is refuted") {
    // |A| + |B| < |A u B|
    std::vector<Constraint> phi{Constraint::un(S("A"), S("B"), S("C")),
                                Constraint::size(S("A"), I("ma")),
                                Constraint::size(S("B"), I("mb")),
                                Constraint::size(S("C"), I("mc")),
                                Constraint::make(Pred::Lt, {Term::int_add(I("ma"), I("mb")), I("mc")})};
    CHECK(solve_size(phi).status == SizeResult::Status::Unsat);
    SizeOptions no_infer;
    no_infer.infer = false;
    SizeResult r = solve_size(phi, no_infer);
    CHECK(r.status == SizeResult::Status::Unsat);
    CHECK_FALSE(r.refuted_by_inference);
  }

  TEST_CASE("subset with lower bound minimises to five") {
    // size(A,m), 1 =< m, subset(B,A) as un(B,A,A), size(B,n), 5 =< n
    std::vector<Constraint> phi{Constraint::size(S("A"), I("m")), Constraint::leq(C(1), I("m")),
                                Constraint::un(S("B"), S("A"), S("A")),
                                Constraint::size(S("B"), I("n")), Constraint::leq(C(5), I("n"))};
    SizeResult r = solve_size(phi);
    REQUIRE(r.status == SizeResult::Status::Sat);
    CHECK(r.vertex.at("m") == 5);
    CHECK(r.vertex.at("n") == 5);
    for (const auto& [k, v] : r.vertex) CHECK(k[0] != '$');
  }

  TEST_CASE("two sized unions are satisfiable") {
    // un(A,B,C), size(C,N), N + K > 5, plus a second sized set D = A u C.
    std::vector<Constraint> phi{Constraint::un(S("A"), S("B"), S("C")),
                                Constraint::un(S("A"), S("C"), S("D")),
                                Constraint::size(S("C"), I("N")),
                                Constraint::size(S("D"), I("M")),
                                Constraint::make(Pred::Gt, {Term::int_add(I("N"), I("K")), C(5)}),
                                Constraint::make(Pred::Neq, {I("M"), C(0)})};
    SizeResult r = solve_size(phi);
    REQUIRE(r.status == SizeResult::Status::Sat);
    CHECK(r.vertex.at("N") == 1);
    CHECK(r.vertex.at("M") == 1);
    CHECK(r.vertex.at("N") + r.vertex.at("K") > 5);
  }

  TEST_CASE("twenty-way union refuted by inference quickly") {
    std::vector<Constraint> phi;
    std::string prev = "A1";
    Term sum = I("m1");
    phi.push_back(Constraint::size(S("A1"), I("m1")));
    for (int i = 2; i <= 20; ++i) {
      std::string a = "A" + std::to_string(i);
      std::string acc = i == 20 ? "B" : "U" + std::to_string(i);
      phi.push_back(Constraint::un(S(prev), S(a), S(acc)));
      phi.push_back(Constraint::size(S(a), I("m" + std::to_string(i))));
      sum = Term::int_add(sum, I("m" + std::to_string(i)));
      prev = acc;
    }
    phi.push_back(Constraint::size(S("B"), I("mb")));
    phi.push_back(Constraint::make(Pred::Lt, {sum, I("mb")}));
    auto t0 = std::chrono::steady_clock::now();
    SizeResult r = solve_size(phi);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    CHECK(r.status == SizeResult::Status::Unsat);
    CHECK(r.refuted_by_inference);
    CHECK(ms < 1000.0);
  }

  TEST_CASE("no sizes: integer feasibility only") {
    std::vector<Constraint> phi{Constraint::un(S("A"), S("B"), S("C")), Constraint::leq(I("x"), C(2)),
                                Constraint::make(Pred::Geq, {I("x"), C(2)}),
                                Constraint::make(Pred::Neq, {I("y"), I("x")})};
    SizeResult r = solve_size(phi);
    REQUIRE(r.status == SizeResult::Status::Sat);
    CHECK(r.vertex.at("x") == 2);
    CHECK(r.vertex.at("y") != 2);
    phi.push_back(Constraint::make(Pred::Lt, {I("x"), C(2)}));
    CHECK(solve_size(phi).status == SizeResult::Status::Unsat);
  }

  TEST_CASE("vertex is exact and minimal for its arrangement") {
    std::mt19937 rng(11);
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
      ZaProblem z = random_problem(rng);
      SizeOptions opts;
      SizeResult r = solve_za(z, opts);
      if (r.status != SizeResult::Status::Sat) continue;
      ++checked;
      std::map<std::string, Integer> p = r.vertex;
      for (const auto& row : z.int_constraints) CHECK(row_holds(row, p));
      for (const auto& d : z.int_neqs) {
        Integer v = d.constant;
        for (const auto& [name, c] : d.coeffs) v += c * p.at(name);
        CHECK(v != 0);
      }
      // Lowering any size below its vertex value breaks the arrangement.
      for (const auto& [x, m] : z.sizes) {
        ilp::LinProblem q;
        q.constraints = z.int_constraints;
        for (auto& row : build_res_z(r.arrangement, z)) q.constraints.push_back(row);
        std::map<std::string, Integer> lowered = p;
        for (auto& [name, val] : lowered) {
          if (m.coeffs.count(name)) val -= 1;
          q.constraints.push_back(ilp::LinConstraint{{{name, Rational(1)}}, ilp::Rel::Eq, Rational(val)});
        }
        bool neqs_hold = true;
        for (const auto& d : z.int_neqs) {
          Integer v = d.constant;
          for (const auto& [name, c] : d.coeffs) v += c * lowered.at(name);
          neqs_hold = neqs_hold && v != 0;
        }
        for (const auto& v : q.variables()) q.integers.insert(v);
        CHECK((!neqs_hold || ilp::bb_inf(q).status == ilp::IlpResult::Status::Infeasible));
      }
    }
    CHECK(checked > 20);
  }

  TEST_CASE("verdict agrees with region brute force") {
    std::mt19937 rng(5);
    int sat = 0, unsat = 0;
    for (int i = 0; i < 250; ++i) {
      ZaProblem z = random_problem(rng);
      bool expect = brute_force(z);
      SizeResult r = solve_za(z);
      CHECK(expect == (r.status == SizeResult::Status::Sat));
      SizeOptions no_infer;
      no_infer.infer = false;
      CHECK(expect == (solve_za(z, no_infer).status == SizeResult::Status::Sat));
      (expect ? sat : unsat)++;
    }
    CHECK(sat > 30);
    CHECK(unsat > 30);
  }

  TEST_CASE("deadline propagates") {
    SizeOptions opts;
    opts.deadline = Deadline::after_ms(0);
    std::vector<Constraint> phi{Constraint::size(S("A"), I("m"))};
    CHECK_THROWS_AS(solve_size(phi, opts), TimeoutError);
  }
}
