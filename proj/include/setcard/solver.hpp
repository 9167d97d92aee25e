#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "setcard/deadline.hpp"
#include "setcard/formula.hpp"

namespace setcard {

/// Mutable state of one search branch. Copied wholesale at choice points.
struct GoalState {
  std::deque<Formula> pending;
  // Disjunctions and branching constraints wait here until `pending` is
  // empty, so that every deterministic step is taken before a choice point.
  std::deque<Formula> deferred;
  // Irreducible constraints in insertion order; `store_index` mirrors it for
  // duplicate detection.
  std::vector<Constraint> store;
  std::set<Constraint> store_index;
  Substitution bindings;
  long fresh = 0;
  // size(X,c) with constant c > 0 expands into c distinct fresh elements.
  bool const3 = false;
  bool int_changed = false;
  std::optional<std::map<std::string, Integer>> vertex;

  Term fresh_var(Sort s);
  // Adds c unless an identical constraint is already stored.
  void add_store(const Constraint& c);
  // Binds var to value and re-queues stored constraints that mention var.
  // Returns false on a sort clash.
  bool bind(const Term& var, const Term& value);
};

/// Outcome of one rewrite step on a single constraint.
struct Rewrite {
  enum class Kind { Irreducible, Alternatives, Bind };
  Kind kind = Kind::Irreducible;
  // Alternatives: empty means failure; one means a deterministic step.
  std::vector<Formula> alternatives;
  std::optional<Term> var;
  std::optional<Term> value;

  static Rewrite irreducible() { return Rewrite{}; }
  static Rewrite fail() { return Rewrite{Kind::Alternatives, {}, {}, {}}; }
  static Rewrite to(Formula f) { return Rewrite{Kind::Alternatives, {std::move(f)}, {}, {}}; }
  static Rewrite choice(std::vector<Formula> alts) {
    return Rewrite{Kind::Alternatives, std::move(alts), {}, {}};
  }
  static Rewrite bind(Term v, Term t) { return Rewrite{Kind::Bind, {}, std::move(v), std::move(t)}; }
};

// Applies the first matching rule for c (already fully substituted). Fresh
// variables come from st.
Rewrite rewrite_constraint(const Constraint& c, GoalState& st);

// Defining formula of subset, diff, nun and ndisj. Throws InternalError for
// any other predicate.
Formula expand_derived(const Constraint& c, GoalState& st);

// Conjoins 0 =< m next to every size(A,m), once per conjunction.
Formula gen_size_leq(const Formula& f);

// True when no rule applies to c and, for a set-variable disequation, its
// variable is not an argument of un, size or inters in `store`.
bool is_irreducible(const Constraint& c, const std::vector<Constraint>& store);

struct SolveOptions {
  // 0 disables the timeout.
  long timeout_ms = 0;
  bool fix_size = false;
  // 0 = first answer only, N > 0 = up to N answers, -1 = all answers.
  int max_solutions = 0;
  bool infer_size = true;
  // Rational feasibility check of the integer store at every fixpoint.
  bool lp_pruning = true;
};

struct Answer {
  // User variables only, in name order. Fresh variables are renumbered
  // _N1, _N2, ... by first appearance.
  std::vector<std::pair<std::string, Term>> bindings;
  std::vector<Constraint> residual;
  std::optional<std::map<std::string, Integer>> vertex;
};

bool operator==(const Answer& a, const Answer& b);
std::string to_string(const Answer& a);

struct SolveResult {
  enum class Verdict { Sat, Unsat, Timeout };
  Verdict verdict = Verdict::Unsat;
  std::vector<Answer> answers;
  double millis = 0;
};

const char* verdict_name(SolveResult::Verdict v);

SolveResult sat_card(const Formula& f, const SolveOptions& opts = SolveOptions());
// sat_card with minimal-solution mode switched on.
SolveResult fix_size(const Formula& f, SolveOptions opts = SolveOptions());

// Reserved prefixes for solver-generated names.
bool is_fresh_name(const std::string& name);

}  // namespace setcard
