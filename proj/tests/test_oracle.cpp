#include "doctest.h"
#include "setcard/oracle.hpp"
#include "setcard/parser.hpp"

using namespace setcard;

namespace {

bool ground(const char* text) { return eval_ground(parse_formula(text), {}); }

Value ur(const char* n) { return Value::ur(n); }
Value num(long v) { return Value::integer(v); }

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("ground evaluation") {
    CHECK(ground("size({1,2},2)."));
    CHECK_FALSE(ground("disj({1},{1})."));
    CHECK(ground("un({1},{2},{1,2})."));
    CHECK(ground("{1,1,2} = {2,1}."));
    CHECK(ground("size({1,1,2},2)."));
    CHECK(ground("inters({1,2},{2,3},{2})."));
    CHECK(ground("diff({1,2},{2,3},{1})."));
    CHECK(ground("subset({1},{1,2}) & nun({1},{2},{1}) & ndisj({1,2},{2})."));
    CHECK(ground("{a} neq {b} & a in {b,a} & c nin {a,b}."));
    CHECK(ground("[1,q] in {[1,q]} & [1,q] neq [q,1]."));
    CHECK(ground("3 =< 3 & 2 < 3 & 4 > 3 & 3 >= 3."));
    CHECK_FALSE(ground("{} in {1}."));
  }

  TEST_CASE("evaluation under a valuation") {
    Formula f = parse_formula("A = {X / B} & X nin B & size(A,N).");
    Valuation v{{"A", Value::set({ur("a"), ur("b")})}, {"B", Value::set({ur("b")})}, {"X", ur("a")}, {"N", num(2)}};
    CHECK(eval_ground(f, v));
    v["N"] = num(1);
    CHECK_FALSE(eval_ground(f, v));
    v.erase("N");
    CHECK_FALSE(eval_partial(f, v).has_value());
    CHECK_THROWS_AS(eval_ground(f, v), Error);
  }

  TEST_CASE("set values are canonical") {
    Value s = Value::set({num(2), ur("a"), num(2), Value::set({})});
    CHECK(s.items.size() == 3);
    CHECK(s == Value::set({Value::set({}), ur("a"), num(2)}));
    CHECK(to_string(Value::set({num(1), num(2)})) == "{1,2}");
    CHECK(eval_term(to_term(s), {}) == s);
  }

  TEST_CASE("true has the empty witness") {
    OracleResult r = oracle_sat(Formula::truth());
    CHECK(r.sat);
    CHECK(r.witness.empty());
  }

  TEST_CASE("nested sets give both cardinality families") {
    Formula f = parse_formula("size({{X},{Y}},N).");
    bool two = false, one = false;
    oracle_models(f, Scope(), [&](const Valuation& v) {
      CHECK(eval_ground(f, v));
      if (v.at("N") == num(2)) {
        CHECK(v.at("X") != v.at("Y"));
        two = true;
      } else {
        CHECK(v.at("N") == num(1));
        CHECK(v.at("X") == v.at("Y"));
        one = true;
      }
      return true;
    });
    CHECK(two);
    CHECK(one);
  }

  TEST_CASE("subset with equal sizes and disequality has no model in scope") {
    OracleResult r = oracle_sat(parse_formula("subset(A,B) & size(A,N) & size(B,N) & A neq B."));
    CHECK_FALSE(r.sat);
  }

  TEST_CASE("witnesses satisfy the formula") {
    const char* cases[] = {
        "un(A,B,C) & size(C,N) & N > 1 & B neq {}.",
        "inters(A,B,C) & 1 in C & a in A & size(B,2).",
        "diff(A,B,C) & size(C,2) & A neq {}.",
        "X is Y + 2 & Y >= 1.",
        "A = {X / B} & X nin B & size(A,3).",
    };
    for (const char* text : cases) {
      Formula f = parse_formula(text);
      OracleResult r = oracle_sat(f);
      CHECK_MESSAGE(r.sat, std::string(text));
      if (r.sat) CHECK(eval_ground(f, r.witness));
    }
  }

  TEST_CASE("integer equations are solved, not enumerated") {
    Scope s;
    s.int_lo = 0;
    s.int_hi = 0;
    OracleResult r = oracle_sat(parse_formula("X is 2*Y + 7 & Y = 0."), s);
    REQUIRE(r.sat);
    CHECK(r.witness.at("X") == num(7));
    CHECK_FALSE(oracle_sat(parse_formula("2*X = 3."), s).sat);
  }

  TEST_CASE("budget overflow is reported") {
    Scope s;
    s.budget = 50;
    CHECK_THROWS_AS(oracle_sat(parse_formula("disj(A,B) & disj(B,C) & A neq B & size(A,4)."), s),
                    ScopeTooLarge);
  }

  TEST_CASE("grounding a solver answer") {
    Formula f = parse_formula("un(A,B,C) & N + K > 5 & size(C,N) & B neq {}.");
    SolveResult res = fix_size(f);
    REQUIRE(res.verdict == SolveResult::Verdict::Sat);
    Scope wide;
    wide.int_lo = -8;
    wide.int_hi = 8;
    auto v = ground_answer(res.answers.front(), f, wide);
    REQUIRE(v.has_value());
    CHECK(eval_ground(f, *v));
  }
}
