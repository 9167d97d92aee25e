#pragma once

#include <random>
#include <string>
#include <vector>

#include "setcard/formula.hpp"

namespace setcard::testing {

// Random well-sorted conjunctions over at most 4 set variables (A..D) and 3
// integer variables (M, N, K), with 1 to 6 atoms drawn from
// =, neq, in, nin, un, disj, inters, subset, size and =<. With
// `element_vars`, set elements may also be the untyped variables X and Y.
class FormulaGen {
 public:
  explicit FormulaGen(unsigned seed, bool element_vars = false) : rng_(seed), element_vars_(element_vars) {}

  Formula next() {
    int n_atoms = pick(6) + 1;
    std::vector<Formula> parts;
    for (int i = 0; i < n_atoms; ++i) parts.push_back(Formula::atom(atom()));
    return Formula::conj(std::move(parts));
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Term set_var() { return Term::var(std::string(1, "ABCD"[pick(4)]), Sort::Set); }
  Term int_var() { return Term::var(std::string(1, "MNK"[pick(3)]), Sort::Int); }

  Term elem() {
    if (element_vars_ && pick(3) == 0) return Term::var(std::string(1, "XY"[pick(2)]), Sort::Any);
    switch (pick(3)) {
      case 0:
        return Term::ur_atom(std::string(1, "ab"[pick(2)]));
      case 1:
        return Term::int_const(pick(2));
      default:
        return Term::set_of({Term::ur_atom("a")});
    }
  }

  Term set_term() {
    switch (pick(6)) {
      case 0:
        return Term::empty_set();
      case 1:
        return Term::set_of({elem()}, pick(2) ? set_var() : Term::empty_set());
      default:
        return set_var();
    }
  }

  Term int_term() {
    switch (pick(4)) {
      case 0:
        return Term::int_const(pick(4));
      case 1:
        return Term::int_add(int_var(), Term::int_const(pick(3)));
      default:
        return int_var();
    }
  }

  Constraint atom() {
    switch (pick(10)) {
      case 0:
        return Constraint::eq(set_var(), set_term());
      case 1:
        return Constraint::neq(set_var(), set_term());
      case 2:
        return Constraint::in(elem(), set_var());
      case 3:
        return Constraint::nin(elem(), set_var());
      case 4:
        return Constraint::un(set_term(), set_term(), set_var());
      case 5:
        return Constraint::disj(set_var(), set_term());
      case 6:
        return Constraint::make(Pred::Inters, {set_var(), set_var(), set_var()});
      case 7:
        return Constraint::make(Pred::Subset, {set_var(), set_term()});
      case 8:
        return Constraint::size(set_var(), pick(2) ? int_var() : Term::int_const(pick(3)));
      default:
        return Constraint::leq(int_term(), int_term());
    }
  }

  std::mt19937 rng_;
  bool element_vars_;
};

}  // namespace setcard::testing
