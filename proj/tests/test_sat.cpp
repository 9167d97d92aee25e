#include <random>

#include "doctest.h"
#include "sat_oracle.hpp"
#include "setcard/sat_enum.hpp"

using namespace setcard::sat;

TEST_SUITE("sat") {
  TEST_CASE("union clauses over (A,B,C)") {
    Cnf cnf{3, {{-3, 1, 2}, {-1, 3}, {-2, 3}}};
    auto s = sat_enumerate(cnf);
    std::vector<Assignment> expect = {{false, true, true}, {true, false, true}, {true, true, true}};
    CHECK(s == expect);
    CHECK(s == testing_support::truth_table(cnf));
  }

  TEST_CASE("contradiction") {
    Cnf cnf{1, {{1}, {-1}}};
    CHECK(sat_enumerate(cnf).empty());
  }

  TEST_CASE("empty CNF over one variable") {
    Cnf cnf{1, {}};
    auto s = sat_enumerate(cnf);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == Assignment{true});
  }

  TEST_CASE("empty CNF over twelve variables") {
    Cnf cnf{12, {}};
    CHECK(sat_enumerate(cnf).size() == 4095);
  }

  TEST_CASE("matches truth tables") {
    std::mt19937 rng(3);
    for (int i = 0; i < 100; ++i) {
      Cnf cnf = testing_support::random_cnf(rng);
      CHECK(sat_enumerate(cnf) == testing_support::truth_table(cnf));
    }
  }
}
