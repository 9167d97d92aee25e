#pragma once

#include <string>
#include <vector>

#include "setcard/oracle.hpp"
#include "setcard/printer.hpp"
#include "setcard/solver.hpp"

namespace setcard::testing {

struct LemmaReport {
  long instances = 0;
  std::vector<std::string> mismatches;
};

inline Scope lemma_scope() {
  Scope s;
  s.ur_universe = {"a", "b", "c", "d"};
  s.elem_lo = 1;
  s.elem_hi = 0;  // no integer elements
  s.max_nest = 0;
  s.max_width = 4;
  s.int_lo = 0;
  s.int_hi = 5;
  return s;
}

// Every subset of {a,b,c,d} with at most `max_size` elements.
inline std::vector<std::vector<Term>> small_sets(int max_size) {
  const char* names[] = {"a", "b", "c", "d"};
  std::vector<std::vector<Term>> out;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<Term> s;
    for (int i = 0; i < 4; ++i) {
      if (mask & (1 << i)) s.push_back(Term::ur_atom(names[i]));
    }
    if (static_cast<int>(s.size()) <= max_size) out.push_back(s);
  }
  return out;
}

inline Formula expansion(const Constraint& c, bool const3) {
  GoalState st;
  st.const3 = const3;
  Rewrite r = rewrite_constraint(c, st);
  if (r.kind != Rewrite::Kind::Alternatives) return Formula::atom(c);
  return Formula::disj(r.alternatives);
}

inline void compare_with_expansion(const Constraint& c, bool const3, LemmaReport& rep) {
  Scope scope = lemma_scope();
  bool direct = oracle_sat(Formula::atom(c), scope).sat;
  bool expanded = oracle_sat(expansion(c, const3), scope).sat;
  ++rep.instances;
  if (direct != expanded) rep.mismatches.push_back(to_string(c));
}

// size({x / A}, m) against its size:ext expansion, for every ground x and A
// over a 4-element universe with |A| <= 3 and m in 0..5.
inline LemmaReport size_ext_lemma() {
  LemmaReport rep;
  for (const auto& a : small_sets(3)) {
    for (const auto& x : small_sets(1)) {
      if (x.empty()) continue;
      for (long m = 0; m <= 5; ++m) {
        Constraint c = Constraint::size(Term::set_cons(x.front(), Term::set_of(a)), Term::int_const(m));
        compare_with_expansion(c, false, rep);
      }
    }
  }
  return rep;
}

// size(S, c) with S a variable against its size:const3 expansion, checked
// under each ground value of S with |S| <= 3 and c in 1..3.
inline LemmaReport size_const3_lemma() {
  LemmaReport rep;
  Term s = Term::var("S", Sort::Set);
  for (long c = 1; c <= 3; ++c) {
    Constraint atom = Constraint::size(s, Term::int_const(c));
    Formula exp = expansion(atom, true);
    for (const auto& a : small_sets(3)) {
      Formula pin = Formula::atom(Constraint::eq(s, Term::set_of(a)));
      Scope scope = lemma_scope();
      bool direct = oracle_sat(Formula::conj({pin, Formula::atom(atom)}), scope).sat;
      bool expanded = oracle_sat(Formula::conj({pin, exp}), scope).sat;
      ++rep.instances;
      if (direct != expanded) rep.mismatches.push_back(to_string(atom) + " with S = " + to_string(Term::set_of(a)));
    }
  }
  return rep;
}

}  // namespace setcard::testing
