#pragma once

#include <map>
#include <string>
#include <vector>

#include "setcard/term.hpp"

namespace setcard {

enum class Pred {
  Eq,
  Neq,
  In,
  Nin,
  Un,
  Disj,
  Size,
  Leq,
  Lt,
  Gt,
  Geq,
  Inters,
  Subset,
  Diff,
  Nun,
  Ndisj
};

const char* pred_name(Pred p);
int pred_arity(Pred p);

/// Atomic constraint. Built through make(), which enforces the sort table:
/// set arguments of un/disj/inters/... must be sets, size takes a set and an
/// integer, comparisons take integers, = and neq need compatible sorts.
struct Constraint {
  Pred pred;
  std::vector<Term> args;

  static Constraint make(Pred p, std::vector<Term> args);

  static Constraint eq(Term l, Term r) { return make(Pred::Eq, {std::move(l), std::move(r)}); }
  static Constraint neq(Term l, Term r) { return make(Pred::Neq, {std::move(l), std::move(r)}); }
  static Constraint in(Term x, Term s) { return make(Pred::In, {std::move(x), std::move(s)}); }
  static Constraint nin(Term x, Term s) { return make(Pred::Nin, {std::move(x), std::move(s)}); }
  static Constraint un(Term a, Term b, Term c) {
    return make(Pred::Un, {std::move(a), std::move(b), std::move(c)});
  }
  static Constraint disj(Term a, Term b) { return make(Pred::Disj, {std::move(a), std::move(b)}); }
  static Constraint size(Term s, Term n) { return make(Pred::Size, {std::move(s), std::move(n)}); }
  static Constraint leq(Term l, Term r) { return make(Pred::Leq, {std::move(l), std::move(r)}); }

  const Term& arg(std::size_t i) const { return args[i]; }

  // Eq/Neq over integers, or one of the comparisons.
  bool is_int() const;
  bool is_derived() const;
};

int compare(const Constraint& a, const Constraint& b);
inline bool operator==(const Constraint& a, const Constraint& b) { return compare(a, b) == 0; }
inline bool operator!=(const Constraint& a, const Constraint& b) { return compare(a, b) != 0; }
inline bool operator<(const Constraint& a, const Constraint& b) { return compare(a, b) < 0; }

Constraint map_vars(const Constraint& c, const VarMapper& f);
void collect_vars(const Constraint& c, std::map<std::string, Sort>& out);
bool occurs(const std::string& var, const Constraint& c);

/// Quantifier-free formula. And/Or constructors flatten nested nodes of the
/// same connective and absorb true/false, so an And or Or node always has at
/// least two children.
class Formula {
 public:
  enum class Kind { True, False, Atom, And, Or };

  static Formula truth();
  static Formula falsity();
  static Formula atom(Constraint c);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);

  Kind kind() const { return kind_; }
  bool is_true() const { return kind_ == Kind::True; }
  bool is_false() const { return kind_ == Kind::False; }
  const Constraint& constraint() const { return atoms_.front(); }
  const std::vector<Formula>& children() const { return children_; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  Kind kind_ = Kind::True;
  std::vector<Constraint> atoms_;
  std::vector<Formula> children_;
};

Formula map_vars(const Formula& f, const VarMapper& m);
void collect_vars(const Formula& f, std::map<std::string, Sort>& out);
// Atoms in left-to-right order.
void collect_atoms(const Formula& f, std::vector<Constraint>& out);

/// Idempotent variable bindings. bind() composes the new binding into the
/// existing ones so no bound variable ever occurs on a right-hand side.
class Substitution {
 public:
  // Throws SortError if the sorts are incompatible. The caller is
  // responsible for the occurs check.
  void bind(const Term& var, const Term& value);
  const Term* lookup(const std::string& var) const;
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<std::string, Term>& bindings() const { return map_; }

  Term apply(const Term& t) const;
  Constraint apply(const Constraint& c) const;
  Formula apply(const Formula& f) const;

 private:
  std::map<std::string, Term> map_;
};

inline Term apply_subst(const Substitution& s, const Term& t) { return s.apply(t); }
inline Constraint apply_subst(const Substitution& s, const Constraint& c) { return s.apply(c); }
inline Formula apply_subst(const Substitution& s, const Formula& f) { return s.apply(f); }

}  // namespace setcard
