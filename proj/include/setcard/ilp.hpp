#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "setcard/deadline.hpp"
#include "setcard/term.hpp"

namespace setcard::ilp {

using VarMap = std::map<std::string, Rational>;

enum class Rel { Eq, Le, Lt };

/// lhs rel rhs, lhs a rational linear form (no constant term).
struct LinConstraint {
  VarMap lhs;
  Rel rel = Rel::Le;
  Rational rhs = 0;

  // Convenience: a - b rel 0 from two integer linear forms.
  static LinConstraint from_forms(const LinForm& a, Rel rel, const LinForm& b);
};

bool operator==(const LinConstraint& a, const LinConstraint& b);
std::string to_string(const LinConstraint& c);

struct LinProblem {
  std::vector<LinConstraint> constraints;
  // Integer-constrained variables. bb_inf treats every variable as integral.
  std::set<std::string> integers;
  VarMap objective;
  // Variables bounded below by 0. The bound costs no row: such a variable
  // takes one tableau column instead of a free pair.
  std::set<std::string> nonneg;

  std::set<std::string> variables() const;
};

/// Infeasibility certificate over the problem's rows: multipliers with
/// lambda >= 0 on inequality rows and sum lambda_i * lhs_i == 0, such that
/// either sum lambda_i * rhs_i < 0, or the sum is 0 and some strict row has
/// positive weight. Variables in `nonneg` may keep a positive coefficient in
/// the combination.
struct Certificate {
  std::vector<Rational> lambda;
};

bool check_certificate(const std::vector<LinConstraint>& rows, const Certificate& cert,
                       const std::set<std::string>& nonneg = {});
bool satisfies(const std::vector<LinConstraint>& rows, const VarMap& point);

struct LpResult {
  enum class Status { Feasible, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  VarMap point;           // Feasible: satisfies every row exactly
  Rational value = 0;     // objective value at point
  std::optional<Certificate> certificate;  // Infeasible
};

// Exact rational feasibility; strict rows are honoured over the rationals.
LpResult lp_feasible(const LinProblem& p, const Deadline& deadline = Deadline());
// Rational minimisation of p.objective. Strict rows are not allowed.
LpResult lp_minimize(const LinProblem& p, const Deadline& deadline = Deadline());

struct IlpResult {
  enum class Status { Infeasible, Optimal, Unbounded };
  Status status = Status::Infeasible;
  Rational value = 0;
  std::map<std::string, Integer> vertex;
};

// Over all-integer variables: rows are scaled to integer coefficients,
// divided by their gcd and tightened (a < b becomes a <= b - 1). Returns
// nullopt when tightening alone proves infeasibility.
std::optional<std::vector<LinConstraint>> tighten_integer_rows(
    const std::vector<LinConstraint>& rows);

// Branch and bound minimisation of p.objective over integer points.
IlpResult bb_inf(const LinProblem& p, const Deadline& deadline = Deadline());

}  // namespace setcard::ilp
