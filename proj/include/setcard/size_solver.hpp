#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "setcard/deadline.hpp"
#include "setcard/formula.hpp"
#include "setcard/ilp.hpp"
#include "setcard/sat_enum.hpp"

namespace setcard {

/// Cardinality problem over set variables: unions c = a ∪ b, disjoint pairs,
/// size pairs |x| = m and linear integer constraints.
struct ZaProblem {
  std::vector<std::array<std::string, 3>> unions;
  std::vector<std::array<std::string, 2>> disjoints;
  // inters(a,b,c) triples; also present in lowered form in unions/disjoints.
  std::vector<std::array<std::string, 3>> intersections;
  std::vector<std::pair<std::string, LinForm>> sizes;
  std::vector<ilp::LinConstraint> int_constraints;
  // Each form must be non-zero.
  std::vector<LinForm> int_neqs;

  bool has_sizes() const { return !sizes.empty(); }
};

// Maps irreducible union/disj/size/inters atoms and integer constraints.
// Anything else is dropped (it does not affect cardinalities). Throws
// InternalError when a set argument is not a variable.
ZaProblem translate(const std::vector<Constraint>& phi1);

// Lowers an integer atom (=, neq, =<, <, >, >=) to a linear row; for neq the
// returned form goes to int_neqs instead. Returns false for non-integer atoms.
bool translate_int(const Constraint& c, ZaProblem& z);

// Adds sizes for every member of a union or intersection triple that touches
// a sized variable, the bounds |c| <= |a| + |b| (union) and |c| <= |a|,
// |c| <= |b| (intersection), and equalities between several sizes of one
// variable, up to a fixpoint.
ZaProblem infer_size(const ZaProblem& z);

// Rational feasibility of the integer constraints of z.
bool int_lp_feasible(const ZaProblem& z, const Deadline& deadline = Deadline());

using BoolAssignment = std::map<std::string, bool>;

// CNF over `vars` (variable i+1 is vars[i]): per union (¬C∨A∨B)(¬A∨C)(¬B∨C),
// per disjoint pair (¬A∨¬B).
sat::Cnf encode_boolean(const ZaProblem& z, const std::vector<std::string>& vars);

struct Arrangement {
  std::vector<BoolAssignment> regions;
  std::vector<std::string> region_vars;
};

// 0 < v_pi for each region, and m = sum of v_pi over regions containing x
// for each size pair (x, m).
std::vector<ilp::LinConstraint> build_res_z(const Arrangement& arr, const ZaProblem& z);

struct SizeOptions {
  bool infer = true;
  Deadline deadline;
};

struct SizeResult {
  enum class Status { Sat, Unsat };
  Status status = Status::Unsat;
  // Integer variables of the problem (region variables excluded).
  std::map<std::string, Integer> vertex;
  Arrangement arrangement;
  // How the verdict was reached, for diagnostics and tests.
  bool refuted_by_inference = false;
  std::size_t arrangements_tried = 0;
};

SizeResult solve_za(const ZaProblem& z, const SizeOptions& opts = SizeOptions());
SizeResult solve_size(const std::vector<Constraint>& phi1, const SizeOptions& opts = SizeOptions());

// bb_inf with lazy case splits for the non-zero forms.
ilp::IlpResult bb_inf_with_neqs(ilp::LinProblem p, const std::vector<LinForm>& neqs,
                                const Deadline& deadline);

}  // namespace setcard
