#pragma once

#include <vector>

#include "setcard/deadline.hpp"

namespace setcard::sat {

// Literals are +v / -v for variables 1..num_vars.
using Clause = std::vector<int>;

struct Cnf {
  int num_vars = 0;
  std::vector<Clause> clauses;
};

// assignment[v - 1] is the value of variable v.
using Assignment = std::vector<bool>;

// All satisfying total assignments with at least one true variable, sorted
// by the binary number they spell (variable 1 most significant). DPLL with
// unit propagation; each model found is blocked by a clause before the
// search resumes.
std::vector<Assignment> sat_enumerate(const Cnf& cnf, const Deadline& deadline = Deadline());

}  // namespace setcard::sat
