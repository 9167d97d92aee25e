#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace setcard {

using Integer = mpz_class;
using Rational = mpq_class;

// Any is the sort of element variables whose sort is not fixed by the
// formula; such a variable may be bound to a term of any sort.
enum class Sort { Set, Int, Ur, Any };

const char* sort_name(Sort s);

// True when a term of sort `actual` may stand where `expected` is required.
inline bool sort_fits(Sort actual, Sort expected) {
  return actual == expected || actual == Sort::Any || expected == Sort::Any;
}

/// Immutable, structurally shared term tree. Every term knows its sort; the
/// factories reject ill-sorted construction with SortError.
class Term {
 public:
  enum class Kind {
    Var,
    EmptySet,
    SetCons,
    IntConst,
    IntNeg,
    IntAdd,
    IntSub,
    IntScale,
    UrAtom
  };

  static Term var(std::string name, Sort sort);
  static Term empty_set();
  static Term set_cons(Term elem, Term rest);
  // {e1,...,en / tail}
  static Term set_of(const std::vector<Term>& elems, Term tail);
  static Term set_of(const std::vector<Term>& elems);
  static Term int_const(Integer value);
  static Term int_const(long value) { return int_const(Integer(value)); }
  static Term int_neg(Term t);
  static Term int_add(Term l, Term r);
  static Term int_sub(Term l, Term r);
  static Term int_scale(Integer coeff, Term var);
  static Term ur_atom(std::string functor, std::vector<Term> args = {});

  Kind kind() const;
  Sort sort() const;
  // Variable name or ur functor.
  const std::string& name() const;
  // IntConst value or IntScale coefficient.
  const Integer& value() const;
  const std::vector<Term>& args() const;
  const Term& elem() const { return args()[0]; }
  const Term& rest() const { return args()[1]; }

  bool is_var() const { return kind() == Kind::Var; }
  bool is_var(Sort s) const { return is_var() && sort() == s; }
  bool is_empty_set() const { return kind() == Kind::EmptySet; }
  bool is_set_cons() const { return kind() == Kind::SetCons; }
  bool is_int_const() const { return kind() == Kind::IntConst; }
  bool is_ground() const;
  std::size_t hash() const;

  bool same_node(const Term& o) const { return node_ == o.node_; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Total structural order, used for canonical forms.
int compare(const Term& a, const Term& b);
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

Sort sort_of(const Term& t);

bool occurs(const std::string& var, const Term& t);
void collect_vars(const Term& t, std::map<std::string, Sort>& out);

// Last rest of a SetCons spine (EmptySet, a variable, or the term itself).
const Term& set_tail(const Term& t);
// Elements along a SetCons spine, outermost first.
std::vector<Term> set_elements(const Term& t);
// Drops syntactically repeated elements from every set spine in t, keeping
// the first occurrence. The denoted value is unchanged.
Term dedup_elements(const Term& t);

// Rebuilds t with each variable v replaced by *f(v) when f returns non-null.
using VarMapper = std::function<const Term*(const Term& var)>;
Term map_vars(const Term& t, const VarMapper& f);
Term replace(const Term& t, const std::string& var, const Term& value);

/// Linear integer form: constant + sum coeff * var. Zero coefficients are
/// never stored, so structural equality is arithmetic identity.
struct LinForm {
  Integer constant = 0;
  std::map<std::string, Integer> coeffs;

  bool is_constant() const { return coeffs.empty(); }
  void add_term(const std::string& var, const Integer& c);
  LinForm& operator+=(const LinForm& o);
  LinForm& operator-=(const LinForm& o);
  LinForm& operator*=(const Integer& k);
  LinForm operator-() const;
  friend LinForm operator+(LinForm a, const LinForm& b) { return a += b; }
  friend LinForm operator-(LinForm a, const LinForm& b) { return a -= b; }
  friend bool operator==(const LinForm& a, const LinForm& b) {
    return a.constant == b.constant && a.coeffs == b.coeffs;
  }
};

LinForm normalize_int(const Term& t);
// Canonical integer term for a linear form (variables in name order,
// constant last).
Term to_term(const LinForm& f);
// Product of two integer terms; at least one side must be constant.
Term int_mul(const Term& l, const Term& r);

}  // namespace setcard
