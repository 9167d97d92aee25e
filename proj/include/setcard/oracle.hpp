#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "setcard/error.hpp"
#include "setcard/formula.hpp"
#include "setcard/solver.hpp"

namespace setcard {

/// Ground value: an integer, an ur-element (functor applied to values) or a
/// finite set kept as a sorted, duplicate-free element list.
struct Value {
  enum class Kind { Int, Ur, Set };
  Kind kind = Kind::Set;
  Integer num = 0;
  std::string name;
  std::vector<Value> items;  // ur arguments or set elements

  static Value integer(Integer v);
  static Value ur(std::string functor, std::vector<Value> args = {});
  static Value set(std::vector<Value> elems);

  bool is_set() const { return kind == Kind::Set; }
  bool contains(const Value& x) const;
};

int compare(const Value& a, const Value& b);
inline bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
inline bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
inline bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

std::string to_string(const Value& v);
Term to_term(const Value& v);

using Valuation = std::map<std::string, Value>;

// Empty optional when the term mentions an unassigned variable or is
// ill-sorted under the valuation (e.g. a set tail bound to an integer).
std::optional<Value> eval_term(const Term& t, const Valuation& val);

// Truth value of a constraint or formula; nullopt when some variable it
// needs is unassigned. Ill-sorted atoms are false.
std::optional<bool> eval_partial(const Constraint& c, const Valuation& val);
std::optional<bool> eval_partial(const Formula& f, const Valuation& val);

// Throws Error if a variable is unassigned.
bool eval_ground(const Constraint& c, const Valuation& val);
bool eval_ground(const Formula& f, const Valuation& val);

/// Finite search space. Integer variables range over [int_lo, int_hi]; set
/// variables over sets of at most max_width elements drawn from the ur
/// universe, the integers in [elem_lo, elem_hi], the ground elements written
/// in the formula and, when max_nest >= 1, the empty set and the singletons
/// of ur-constants.
struct Scope {
  std::vector<std::string> ur_universe{"a", "b", "c"};
  long int_lo = -4;
  long int_hi = 4;
  long elem_lo = 0;
  long elem_hi = 2;
  int max_nest = 1;
  int max_width = 3;
  // Maximum number of search nodes before ScopeTooLarge.
  std::uint64_t budget = 2'000'000;
};

class ScopeTooLarge : public Error {
 public:
  using Error::Error;
};

struct OracleResult {
  bool sat = false;
  Valuation witness;  // assigns every variable of the formula
  std::uint64_t nodes = 0;
};

// Exhaustive search for a model within scope. Every reported witness has
// been re-checked with eval_ground. Throws ScopeTooLarge past the budget.
OracleResult oracle_sat(const Formula& f, const Scope& scope = Scope());

// Calls `on_model` for each model found (variables determined by an
// equation are not enumerated independently); stops when it returns false.
// Returns the number of search nodes.
std::uint64_t oracle_models(const Formula& f, const Scope& scope,
                            const std::function<bool(const Valuation&)>& on_model);

// The answer as a formula: X = t for each binding, conjoined with the
// residual constraints.
Formula answer_formula(const Answer& a);

// A ground valuation of every variable of `original` satisfying the answer,
// found with oracle_sat; variables the answer leaves unconstrained get the
// empty set, 0 or the first ur-constant. Empty optional when the scope holds
// no such valuation.
std::optional<Valuation> ground_answer(const Answer& a, const Formula& original,
                                       const Scope& scope = Scope());

}  // namespace setcard
