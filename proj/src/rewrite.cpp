#include <algorithm>

#include "setcard/error.hpp"
#include "setcard/solver.hpp"

namespace setcard {

namespace {

Formula A(Constraint c) { return Formula::atom(std::move(c)); }
Formula all(std::vector<Formula> parts) { return Formula::conj(std::move(parts)); }
Formula any(std::vector<Formula> parts) { return Formula::disj(std::move(parts)); }

// Elements of a hybrid set may have different sorts; terms of incompatible
// sorts are never equal.
Formula eq(const Term& a, const Term& b) {
  if (!sort_fits(a.sort(), b.sort())) return Formula::falsity();
  return A(Constraint::eq(a, b));
}
Formula neq(const Term& a, const Term& b) {
  if (!sort_fits(a.sort(), b.sort())) return Formula::truth();
  return A(Constraint::neq(a, b));
}
Formula in(const Term& a, const Term& b) { return A(Constraint::in(a, b)); }
Formula nin(const Term& a, const Term& b) { return A(Constraint::nin(a, b)); }
Formula un(const Term& a, const Term& b, const Term& c) { return A(Constraint::un(a, b, c)); }
Formula disj(const Term& a, const Term& b) { return A(Constraint::disj(a, b)); }
Formula size(const Term& a, const Term& m) { return A(Constraint::size(a, m)); }
Formula leq(const Term& a, const Term& b) { return A(Constraint::leq(a, b)); }

const Formula kTrue = Formula::truth();

bool is_int(const Term& t) { return sort_of(t) == Sort::Int; }

bool fresh(const Term& v) { return v.is_var() && is_fresh_name(v.name()); }

// Which of two distinct variables to bind in X = Y: an Any variable first,
// then a solver-generated one, else the left one.
bool bind_left(const Term& x, const Term& y) {
  if (x.sort() == Sort::Any) return true;
  if (y.sort() == Sort::Any) return false;
  if (fresh(x)) return true;
  if (fresh(y)) return false;
  return true;
}

Rewrite bind_pair(const Term& x, const Term& y) {
  return bind_left(x, y) ? Rewrite::bind(x, y) : Rewrite::bind(y, x);
}

// {t0..tm | X} = {t'0..t'n | X}
Rewrite same_tail(const Term& l, const Term& r, GoalState& st) {
  std::vector<Term> le = set_elements(l);
  std::vector<Term> re = set_elements(r);
  const Term& x = set_tail(l);
  const Term& t0 = le.front();
  std::vector<Term> lrest(le.begin() + 1, le.end());
  std::vector<Formula> alts;
  for (std::size_t j = 0; j < re.size(); ++j) {
    std::vector<Term> without = re;
    without.erase(without.begin() + static_cast<long>(j));
    alts.push_back(all({eq(t0, re[j]), eq(Term::set_of(lrest, x), Term::set_of(without, x))}));
    alts.push_back(all({eq(t0, re[j]), eq(l, Term::set_of(without, x))}));
    alts.push_back(all({eq(t0, re[j]), eq(Term::set_of(lrest, x), r)}));
  }
  Term n = st.fresh_var(Sort::Set);
  alts.push_back(all({eq(x, Term::set_cons(t0, n)), eq(Term::set_of(lrest, n), Term::set_of(re, n))}));
  return Rewrite::choice(std::move(alts));
}

Rewrite rewrite_int_eq(const Term& l, const Term& r) {
  LinForm d = normalize_int(l) - normalize_int(r);
  if (d.is_constant()) return d.constant == 0 ? Rewrite::to(kTrue) : Rewrite::fail();
  if (d.coeffs.size() == 1) {
    const auto& [name, a] = *d.coeffs.begin();
    Integer minus_c = -d.constant;
    if (minus_c % a != 0) return Rewrite::fail();
    return Rewrite::bind(Term::var(name, Sort::Int), Term::int_const(Integer(minus_c / a)));
  }
  if (d.coeffs.size() == 2 && d.constant == 0) {
    auto it = d.coeffs.begin();
    const auto& [xn, xa] = *it++;
    const auto& [yn, ya] = *it;
    if (xa + ya == 0 && (xa == 1 || xa == -1)) {
      return bind_pair(Term::var(xn, Sort::Int), Term::var(yn, Sort::Int));
    }
  }
  return Rewrite::irreducible();
}

Rewrite rewrite_eq(Term l, Term r, GoalState& st) {
  if (l == r) return Rewrite::to(kTrue);
  if (is_int(l) && is_int(r)) return rewrite_int_eq(l, r);
  if (r.is_var() && !l.is_var()) std::swap(l, r);
  if (l.is_var()) {
    if (r.is_var()) {
      if (!sort_fits(l.sort(), r.sort())) return Rewrite::fail();
      return bind_pair(l, r);
    }
    if (r.is_set_cons() && set_tail(r) == l) {
      std::vector<Term> elems = set_elements(r);
      for (const auto& e : elems) {
        if (occurs(l.name(), e)) return Rewrite::fail();
      }
      return Rewrite::bind(l, Term::set_of(elems, st.fresh_var(Sort::Set)));
    }
    if (occurs(l.name(), r)) return Rewrite::fail();
    if (!sort_fits(l.sort(), sort_of(r))) return Rewrite::fail();
    return Rewrite::bind(l, r);
  }
  if (!sort_fits(sort_of(l), sort_of(r))) return Rewrite::fail();
  if (l.kind() == Term::Kind::UrAtom && r.kind() == Term::Kind::UrAtom) {
    if (l.name() != r.name() || l.args().size() != r.args().size()) return Rewrite::fail();
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < l.args().size(); ++i) parts.push_back(eq(l.args()[i], r.args()[i]));
    return Rewrite::to(all(std::move(parts)));
  }
  if (l.is_empty_set() || r.is_empty_set()) return Rewrite::fail();
  if (!l.is_set_cons() || !r.is_set_cons()) return Rewrite::fail();
  const Term& lt = set_tail(l);
  if (lt.is_var() && lt == set_tail(r)) return same_tail(l, r, st);
  const Term& x = l.elem();
  const Term& a = l.rest();
  const Term& y = r.elem();
  const Term& b = r.rest();
  // With identical heads the fourth alternative only yields A = B again.
  if (x == y) {
    return Rewrite::choice({eq(a, b), eq(l, b), eq(a, r)});
  }
  Term n = st.fresh_var(Sort::Set);
  return Rewrite::choice({
      all({eq(x, y), eq(a, b)}),
      all({eq(x, y), eq(l, b)}),
      all({eq(x, y), eq(a, r)}),
      all({eq(a, Term::set_cons(y, n)), eq(Term::set_cons(x, n), b)}),
  });
}

Rewrite rewrite_neq(Term l, Term r, GoalState& st) {
  if (l == r) return Rewrite::fail();
  if (!sort_fits(sort_of(l), sort_of(r))) return Rewrite::to(kTrue);
  if (is_int(l) && is_int(r)) {
    LinForm d = normalize_int(l) - normalize_int(r);
    if (d.is_constant()) return d.constant != 0 ? Rewrite::to(kTrue) : Rewrite::fail();
    return Rewrite::irreducible();
  }
  if (r.is_var() && !l.is_var()) std::swap(l, r);
  if (l.is_var()) {
    if (r.is_var() || l.sort() == Sort::Any) return Rewrite::irreducible();
    if (r.is_set_cons() && set_tail(r) == l) {
      std::vector<Formula> alts;
      for (const auto& e : set_elements(r)) alts.push_back(nin(e, l));
      return Rewrite::to(any(std::move(alts)));
    }
    if (occurs(l.name(), r)) return Rewrite::to(kTrue);
    return Rewrite::irreducible();
  }
  if (l.kind() == Term::Kind::UrAtom && r.kind() == Term::Kind::UrAtom) {
    if (l.name() != r.name() || l.args().size() != r.args().size()) return Rewrite::to(kTrue);
    std::vector<Formula> alts;
    for (std::size_t i = 0; i < l.args().size(); ++i) alts.push_back(neq(l.args()[i], r.args()[i]));
    return Rewrite::to(any(std::move(alts)));
  }
  if (l.is_empty_set() || r.is_empty_set()) return Rewrite::to(kTrue);
  if (!l.is_set_cons() || !r.is_set_cons()) return Rewrite::to(kTrue);
  Term z = st.fresh_var(Sort::Any);
  return Rewrite::choice({all({in(z, l), nin(z, r)}), all({in(z, r), nin(z, l)})});
}

Rewrite rewrite_in(const Term& t, const Term& s, GoalState& st) {
  if (s.is_empty_set()) return Rewrite::fail();
  if (s.is_set_cons()) return Rewrite::choice({eq(t, s.elem()), in(t, s.rest())});
  if (s.is_var()) return Rewrite::to(eq(s, Term::set_cons(t, st.fresh_var(Sort::Set))));
  return Rewrite::fail();
}

Rewrite rewrite_nin(const Term& t, const Term& s) {
  if (s.is_empty_set()) return Rewrite::to(kTrue);
  if (s.is_set_cons()) return Rewrite::to(all({neq(t, s.elem()), nin(t, s.rest())}));
  if (s.is_var()) {
    if (occurs(s.name(), t)) return Rewrite::to(kTrue);
    return Rewrite::irreducible();
  }
  return Rewrite::to(kTrue);
}

// un(A,B,C) with C = {t / s3}: t goes to A, to B, or to both.
Rewrite un_third_cons(const Term& a, const Term& b, const Term& c, GoalState& st) {
  const Term& t = c.elem();
  Term n = st.fresh_var(Sort::Set);
  Term n1 = st.fresh_var(Sort::Set);
  Term n2 = st.fresh_var(Sort::Set);
  Formula head = all({eq(c, Term::set_cons(t, n)), nin(t, n)});
  return Rewrite::choice({
      all({head, eq(a, Term::set_cons(t, n1)), nin(t, n1), nin(t, b), un(n1, b, n)}),
      all({head, eq(b, Term::set_cons(t, n2)), nin(t, n2), nin(t, a), un(a, n2, n)}),
      all({head, eq(a, Term::set_cons(t, n1)), nin(t, n1), eq(b, Term::set_cons(t, n2)), nin(t, n2),
           un(n1, n2, n)}),
  });
}

// un(S,O,C) with S = {x / _} and C a variable; `left` says whether S is the
// first argument.
Rewrite un_cons_arg(const Term& s, const Term& o, const Term& c, bool left, GoalState& st) {
  const Term& x = s.elem();
  Term n = st.fresh_var(Sort::Set);
  Term n1 = st.fresh_var(Sort::Set);
  Term n2 = st.fresh_var(Sort::Set);
  Formula head = all({eq(s, Term::set_cons(x, n1)), nin(x, n1), eq(c, Term::set_cons(x, n))});
  Formula only = left ? un(n1, o, n) : un(o, n1, n);
  Formula both = left ? un(n1, n2, n) : un(n2, n1, n);
  return Rewrite::choice({
      all({head, nin(x, o), only}),
      all({head, eq(o, Term::set_cons(x, n2)), nin(x, n2), both}),
  });
}

Rewrite rewrite_un(const Term& a, const Term& b, const Term& c, GoalState& st) {
  Term empty = Term::empty_set();
  if (c.is_empty_set()) return Rewrite::to(all({eq(a, empty), eq(b, empty)}));
  if (a == b) return Rewrite::to(eq(c, a));
  if (a.is_empty_set()) return Rewrite::to(eq(b, c));
  if (b.is_empty_set()) return Rewrite::to(eq(a, c));
  if (c.is_set_cons()) return un_third_cons(a, b, c, st);
  if (a.is_set_cons()) return un_cons_arg(a, b, c, true, st);
  if (b.is_set_cons()) return un_cons_arg(b, a, c, false, st);
  return Rewrite::irreducible();
}

Rewrite rewrite_disj(const Term& a, const Term& b) {
  if (a.is_empty_set() || b.is_empty_set()) return Rewrite::to(kTrue);
  if (a == b) return Rewrite::to(eq(a, Term::empty_set()));
  if (a.is_set_cons()) return Rewrite::to(all({nin(a.elem(), b), disj(a.rest(), b)}));
  if (b.is_set_cons()) return Rewrite::to(all({nin(b.elem(), a), disj(a, b.rest())}));
  return Rewrite::irreducible();
}

Rewrite rewrite_size(const Term& a, const Term& m, GoalState& st) {
  Term zero = Term::int_const(0);
  if (a.is_empty_set()) return Rewrite::to(eq(m, zero));
  if (m.is_int_const() && m.value() == 0) return Rewrite::to(eq(a, Term::empty_set()));
  if (!m.is_var() && !m.is_int_const()) {
    Term n = st.fresh_var(Sort::Int);
    return Rewrite::to(all({size(a, n), eq(n, m), leq(zero, n)}));
  }
  if (a.is_set_cons()) {
    const Term& x = a.elem();
    const Term& b = a.rest();
    Term n = st.fresh_var(Sort::Int);
    Term rest = st.fresh_var(Sort::Set);
    return Rewrite::choice({
        all({nin(x, b), eq(m, Term::int_add(Term::int_const(1), n)), size(b, n), leq(zero, n)}),
        all({eq(b, Term::set_cons(x, rest)), nin(x, rest), size(b, m)}),
    });
  }
  if (st.const3 && a.is_var() && m.is_int_const() && m.value() > 0) {
    std::vector<Term> elems;
    for (Integer k = 0; k < m.value(); ++k) elems.push_back(st.fresh_var(Sort::Any));
    std::vector<Formula> parts{eq(a, Term::set_of(elems))};
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = i + 1; j < elems.size(); ++j) parts.push_back(neq(elems[i], elems[j]));
    }
    return Rewrite::to(all(std::move(parts)));
  }
  return Rewrite::irreducible();
}

Rewrite rewrite_inters(const Term& a, const Term& b, const Term& c, GoalState& st) {
  if (a == b) return Rewrite::to(eq(c, a));
  if (a.is_var() && b.is_var() && c.is_var()) return Rewrite::irreducible();
  Term n1 = st.fresh_var(Sort::Set);
  Term n2 = st.fresh_var(Sort::Set);
  return Rewrite::to(all({un(c, n1, a), un(c, n2, b), disj(n1, n2)}));
}

Rewrite rewrite_compare(const Constraint& c) {
  LinForm d = normalize_int(c.arg(0)) - normalize_int(c.arg(1));
  if (!d.is_constant()) return Rewrite::irreducible();
  const Integer& v = d.constant;
  bool holds = false;
  switch (c.pred) {
    case Pred::Leq:
      holds = v <= 0;
      break;
    case Pred::Lt:
      holds = v < 0;
      break;
    case Pred::Gt:
      holds = v > 0;
      break;
    default:
      holds = v >= 0;
      break;
  }
  return holds ? Rewrite::to(kTrue) : Rewrite::fail();
}

}  // namespace

Formula expand_derived(const Constraint& c, GoalState& st) {
  switch (c.pred) {
    case Pred::Subset:
      return un(c.arg(0), c.arg(1), c.arg(1));
    case Pred::Diff: {
      Term d = st.fresh_var(Sort::Set);
      return all({un(c.arg(2), d, c.arg(0)), disj(c.arg(2), c.arg(1)), un(d, c.arg(1), c.arg(1))});
    }
    case Pred::Nun: {
      const Term& a = c.arg(0);
      const Term& b = c.arg(1);
      const Term& r = c.arg(2);
      Term n = st.fresh_var(Sort::Any);
      return any({all({in(n, r), nin(n, a), nin(n, b)}), all({in(n, a), nin(n, r)}),
                  all({in(n, b), nin(n, r)})});
    }
    case Pred::Ndisj: {
      Term n = st.fresh_var(Sort::Any);
      return all({in(n, c.arg(0)), in(n, c.arg(1))});
    }
    default:
      throw InternalError(std::string("not a derived constraint: ") + pred_name(c.pred));
  }
}

Rewrite rewrite_constraint(const Constraint& c, GoalState& st) {
  switch (c.pred) {
    case Pred::Eq:
      return rewrite_eq(c.arg(0), c.arg(1), st);
    case Pred::Neq:
      return rewrite_neq(c.arg(0), c.arg(1), st);
    case Pred::In:
      return rewrite_in(c.arg(0), c.arg(1), st);
    case Pred::Nin:
      return rewrite_nin(c.arg(0), c.arg(1));
    case Pred::Un:
      return rewrite_un(c.arg(0), c.arg(1), c.arg(2), st);
    case Pred::Disj:
      return rewrite_disj(c.arg(0), c.arg(1));
    case Pred::Size:
      return rewrite_size(c.arg(0), c.arg(1), st);
    case Pred::Leq:
    case Pred::Lt:
    case Pred::Gt:
    case Pred::Geq:
      return rewrite_compare(c);
    case Pred::Inters:
      return rewrite_inters(c.arg(0), c.arg(1), c.arg(2), st);
    case Pred::Subset:
    case Pred::Diff:
    case Pred::Nun:
    case Pred::Ndisj:
      return Rewrite::to(expand_derived(c, st));
  }
  throw InternalError("unknown predicate");
}

namespace {

void size_leq_into(const Formula& f, std::vector<Formula>& out, std::vector<Term>& added) {
  if (f.kind() == Formula::Kind::And) {
    for (const auto& ch : f.children()) size_leq_into(ch, out, added);
    return;
  }
  if (f.kind() != Formula::Kind::Atom) {
    out.push_back(gen_size_leq(f));
    return;
  }
  out.push_back(f);
  if (f.constraint().pred == Pred::Size) {
    const Term& m = f.constraint().arg(1);
    if (std::find(added.begin(), added.end(), m) == added.end()) {
      added.push_back(m);
      out.push_back(leq(Term::int_const(0), m));
    }
  }
}

}  // namespace

Formula gen_size_leq(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      if (f.constraint().pred != Pred::Size) return f;
      return all({f, leq(Term::int_const(0), f.constraint().arg(1))});
    case Formula::Kind::And: {
      std::vector<Formula> out;
      std::vector<Term> added;
      size_leq_into(f, out, added);
      return all(std::move(out));
    }
    case Formula::Kind::Or: {
      std::vector<Formula> out;
      for (const auto& ch : f.children()) out.push_back(gen_size_leq(ch));
      return any(std::move(out));
    }
    default:
      return f;
  }
}

bool is_irreducible(const Constraint& c, const std::vector<Constraint>& store) {
  auto var_args = [&](std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!c.arg(i).is_var()) return false;
    }
    return true;
  };
  switch (c.pred) {
    case Pred::Eq:
    case Pred::Leq:
    case Pred::Lt:
    case Pred::Gt:
    case Pred::Geq: {
      if (!c.is_int()) return false;
      LinForm d = normalize_int(c.arg(0)) - normalize_int(c.arg(1));
      if (d.is_constant()) return false;
      if (c.pred != Pred::Eq) return true;
      // Single-variable and x = y equations are solved by binding.
      if (d.coeffs.size() == 1) return false;
      if (d.coeffs.size() == 2 && d.constant == 0) {
        auto it = d.coeffs.begin();
        const Integer& xa = it->second;
        const Integer& ya = (++it)->second;
        if (xa + ya == 0 && (xa == 1 || xa == -1)) return false;
      }
      return true;
    }
    case Pred::Neq: {
      if (c.is_int()) return !(normalize_int(c.arg(0)) - normalize_int(c.arg(1))).is_constant();
      const Term* v = c.arg(0).is_var() ? &c.arg(0) : (c.arg(1).is_var() ? &c.arg(1) : nullptr);
      if (!v) return false;
      const Term& other = v == &c.arg(0) ? c.arg(1) : c.arg(0);
      if (c.arg(0) == c.arg(1)) return false;
      if (!other.is_var()) {
        if (v->sort() == Sort::Any) return true;
        if (occurs(v->name(), other)) return false;
      }
      for (const Term* side : {&c.arg(0), &c.arg(1)}) {
        if (!side->is_var(Sort::Set)) continue;
        for (const auto& s : store) {
          if (s.pred != Pred::Un && s.pred != Pred::Size && s.pred != Pred::Inters) continue;
          for (const auto& a : s.args) {
            if (a == *side) return false;
          }
        }
      }
      return true;
    }
    case Pred::Nin:
      return c.arg(1).is_var() && !occurs(c.arg(1).name(), c.arg(0));
    case Pred::Un:
      return var_args(3) && c.arg(0) != c.arg(1);
    case Pred::Disj:
      return var_args(2) && c.arg(0) != c.arg(1);
    case Pred::Inters:
      return var_args(3) && c.arg(0) != c.arg(1);
    case Pred::Size:
      return c.arg(0).is_var() &&
             (c.arg(1).is_var() || (c.arg(1).is_int_const() && c.arg(1).value() != 0));
    default:
      return false;
  }
}

}  // namespace setcard
