#pragma once

#include <cstdlib>
#include <random>
#include <vector>

#include "setcard/sat_enum.hpp"

namespace testing_support {

// Truth-table enumeration, excluding the all-false row, in ascending binary
// order with variable 1 most significant.
inline std::vector<setcard::sat::Assignment> truth_table(const setcard::sat::Cnf& cnf) {
  std::vector<setcard::sat::Assignment> out;
  int n = cnf.num_vars;
  for (unsigned long bits = 1; bits < (1UL << n); ++bits) {
    setcard::sat::Assignment a(n);
    for (int v = 1; v <= n; ++v) a[v - 1] = (bits >> (n - v)) & 1UL;
    bool ok = true;
    for (const auto& c : cnf.clauses) {
      bool sat = false;
      for (int lit : c) {
        if (a[std::abs(lit) - 1] == (lit > 0)) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(a);
  }
  return out;
}

inline setcard::sat::Cnf random_cnf(std::mt19937& rng) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  setcard::sat::Cnf cnf;
  cnf.num_vars = uni(1, 12);
  int m = uni(0, 3 * cnf.num_vars);
  for (int i = 0; i < m; ++i) {
    setcard::sat::Clause c;
    int len = uni(1, 3);
    for (int k = 0; k < len; ++k) {
      int v = uni(1, cnf.num_vars);
      c.push_back(uni(0, 1) ? v : -v);
    }
    cnf.clauses.push_back(c);
  }
  return cnf;
}

}  // namespace testing_support
