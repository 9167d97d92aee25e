#include "setcard/term.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "setcard/error.hpp"

namespace setcard {

const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Set:
      return "Set";
    case Sort::Int:
      return "Int";
    case Sort::Ur:
      return "Ur";
    case Sort::Any:
      return "Any";
  }
  return "?";
}

struct Term::Node {
  Kind kind;
  Sort sort;
  std::string name;
  Integer value;
  std::vector<Term> args;
  bool ground;
  std::size_t hash;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}


}  // namespace

Term::Kind Term::kind() const { return node_->kind; }
Sort Term::sort() const { return node_->sort; }
const std::string& Term::name() const { return node_->name; }
const Integer& Term::value() const { return node_->value; }
const std::vector<Term>& Term::args() const { return node_->args; }
bool Term::is_ground() const { return node_->ground; }
std::size_t Term::hash() const { return node_->hash; }

Term Term::var(std::string name, Sort sort) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->sort = sort;
  n->name = std::move(name);
  n->ground = false;
  n->hash = mix(std::hash<std::string>{}(n->name), 1);
  return Term(std::move(n));
}

Term Term::empty_set() {
  static const Term kEmpty = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::EmptySet;
    n->sort = Sort::Set;
    n->ground = true;
    n->hash = 2;
    return Term(std::move(n));
  }();
  return kEmpty;
}

Term Term::set_cons(Term elem, Term rest) {
  if (!sort_fits(rest.sort(), Sort::Set)) {
    throw SortError("set part of {_ / _} must be a set term");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::SetCons;
  n->sort = Sort::Set;
  n->ground = elem.is_ground() && rest.is_ground();
  n->hash = mix(mix(3, elem.hash()), rest.hash());
  n->args = {std::move(elem), std::move(rest)};
  return Term(std::move(n));
}

Term Term::set_of(const std::vector<Term>& elems, Term tail) {
  Term t = std::move(tail);
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
    t = set_cons(*it, t);
  }
  return t;
}

Term Term::set_of(const std::vector<Term>& elems) {
  return set_of(elems, empty_set());
}

Term Term::int_const(Integer value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::IntConst;
  n->sort = Sort::Int;
  n->ground = true;
  n->hash = mix(4, std::hash<std::string>{}(value.get_str()));
  n->value = std::move(value);
  return Term(std::move(n));
}

namespace {

void require_int(const Term& t, const char* what) {
  if (t.sort() != Sort::Int) {
    throw SortError(std::string("argument of ") + what + " must be an integer term");
  }
}

}  // namespace

Term Term::int_neg(Term t) {
  require_int(t, "unary -");
  auto n = std::make_shared<Node>();
  n->kind = Kind::IntNeg;
  n->sort = Sort::Int;
  n->ground = t.is_ground();
  n->hash = mix(5, t.hash());
  n->args = {std::move(t)};
  return Term(std::move(n));
}

Term Term::int_add(Term l, Term r) {
  require_int(l, "+");
  require_int(r, "+");
  auto n = std::make_shared<Node>();
  n->kind = Kind::IntAdd;
  n->sort = Sort::Int;
  n->ground = l.is_ground() && r.is_ground();
  n->hash = mix(mix(6, l.hash()), r.hash());
  n->args = {std::move(l), std::move(r)};
  return Term(std::move(n));
}

Term Term::int_sub(Term l, Term r) {
  require_int(l, "-");
  require_int(r, "-");
  auto n = std::make_shared<Node>();
  n->kind = Kind::IntSub;
  n->sort = Sort::Int;
  n->ground = l.is_ground() && r.is_ground();
  n->hash = mix(mix(7, l.hash()), r.hash());
  n->args = {std::move(l), std::move(r)};
  return Term(std::move(n));
}

Term Term::int_scale(Integer coeff, Term var) {
  if (!var.is_var(Sort::Int)) {
    throw SortError("c * x requires x to be an integer variable");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::IntScale;
  n->sort = Sort::Int;
  n->ground = false;
  n->hash = mix(mix(8, std::hash<std::string>{}(coeff.get_str())), var.hash());
  n->value = std::move(coeff);
  n->args = {std::move(var)};
  return Term(std::move(n));
}

Term Term::ur_atom(std::string functor, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::UrAtom;
  n->sort = Sort::Ur;
  n->ground = true;
  std::size_t h = mix(9, std::hash<std::string>{}(functor));
  for (const auto& a : args) {
    n->ground = n->ground && a.is_ground();
    h = mix(h, a.hash());
  }
  n->hash = h;
  n->name = std::move(functor);
  n->args = std::move(args);
  return Term(std::move(n));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  return compare(a, b) == 0;
}

int compare(const Term& a, const Term& b) {
  if (a.same_node(b)) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Term::Kind::Var:
      // Variable names are global, so the sort is not part of identity.
      if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
      return 0;
    case Term::Kind::IntConst:
      return cmp(a.value(), b.value()) < 0 ? -1 : (a.value() == b.value() ? 0 : 1);
    case Term::Kind::IntScale:
      if (a.value() != b.value()) return a.value() < b.value() ? -1 : 1;
      break;
    case Term::Kind::UrAtom:
      if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
      if (a.args().size() != b.args().size()) {
        return a.args().size() < b.args().size() ? -1 : 1;
      }
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    int c = compare(a.args()[i], b.args()[i]);
    if (c != 0) return c;
  }
  return 0;
}

Sort sort_of(const Term& t) { return t.sort(); }

bool occurs(const std::string& var, const Term& t) {
  if (t.is_ground()) return false;
  if (t.is_var()) return t.name() == var;
  for (const auto& a : t.args()) {
    if (occurs(var, a)) return true;
  }
  return false;
}

void collect_vars(const Term& t, std::map<std::string, Sort>& out) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    out.emplace(t.name(), t.sort());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

const Term& set_tail(const Term& t) {
  const Term* cur = &t;
  while (cur->is_set_cons()) cur = &cur->rest();
  return *cur;
}

Term dedup_elements(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::SetCons: {
      bool changed = false;
      std::vector<Term> kept;
      for (const Term& e : set_elements(t)) {
        Term d = dedup_elements(e);
        if (!d.same_node(e)) changed = true;
        if (std::find(kept.begin(), kept.end(), d) != kept.end()) {
          changed = true;
          continue;
        }
        kept.push_back(std::move(d));
      }
      return changed ? Term::set_of(kept, set_tail(t)) : t;
    }
    case Term::Kind::UrAtom: {
      bool changed = false;
      std::vector<Term> args;
      for (const Term& a : t.args()) {
        args.push_back(dedup_elements(a));
        if (!args.back().same_node(a)) changed = true;
      }
      return changed ? Term::ur_atom(t.name(), std::move(args)) : t;
    }
    default:
      return t;
  }
}

std::vector<Term> set_elements(const Term& t) {
  std::vector<Term> out;
  const Term* cur = &t;
  while (cur->is_set_cons()) {
    out.push_back(cur->elem());
    cur = &cur->rest();
  }
  return out;
}

Term map_vars(const Term& t, const VarMapper& f) {
  if (t.is_ground()) return t;
  switch (t.kind()) {
    case Term::Kind::Var: {
      const Term* v = f(t);
      return v ? *v : t;
    }
    case Term::Kind::SetCons: {
      Term e = map_vars(t.elem(), f);
      Term r = map_vars(t.rest(), f);
      if (e.same_node(t.elem()) && r.same_node(t.rest())) return t;
      return Term::set_cons(std::move(e), std::move(r));
    }
    case Term::Kind::IntNeg: {
      Term a = map_vars(t.args()[0], f);
      if (a.same_node(t.args()[0])) return t;
      return Term::int_neg(std::move(a));
    }
    case Term::Kind::IntAdd:
    case Term::Kind::IntSub: {
      Term l = map_vars(t.args()[0], f);
      Term r = map_vars(t.args()[1], f);
      if (l.same_node(t.args()[0]) && r.same_node(t.args()[1])) return t;
      return t.kind() == Term::Kind::IntAdd ? Term::int_add(std::move(l), std::move(r))
                                            : Term::int_sub(std::move(l), std::move(r));
    }
    case Term::Kind::IntScale: {
      const Term* v = f(t.args()[0]);
      if (!v) return t;
      if (v->is_var()) return Term::int_scale(t.value(), *v);
      return int_mul(Term::int_const(t.value()), *v);
    }
    case Term::Kind::UrAtom: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(map_vars(a, f));
        changed = changed || !args.back().same_node(a);
      }
      if (!changed) return t;
      return Term::ur_atom(t.name(), std::move(args));
    }
    default:
      return t;
  }
}

Term replace(const Term& t, const std::string& var, const Term& value) {
  return map_vars(t, [&](const Term& v) -> const Term* {
    return v.name() == var ? &value : nullptr;
  });
}

void LinForm::add_term(const std::string& var, const Integer& c) {
  if (c == 0) return;
  auto [it, inserted] = coeffs.emplace(var, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) coeffs.erase(it);
  }
}

LinForm& LinForm::operator+=(const LinForm& o) {
  constant += o.constant;
  for (const auto& [v, c] : o.coeffs) add_term(v, c);
  return *this;
}

LinForm& LinForm::operator-=(const LinForm& o) {
  constant -= o.constant;
  for (const auto& [v, c] : o.coeffs) add_term(v, -c);
  return *this;
}

LinForm& LinForm::operator*=(const Integer& k) {
  if (k == 0) {
    constant = 0;
    coeffs.clear();
    return *this;
  }
  constant *= k;
  for (auto& [v, c] : coeffs) c *= k;
  return *this;
}

LinForm LinForm::operator-() const {
  LinForm r = *this;
  r *= Integer(-1);
  return r;
}

LinForm normalize_int(const Term& t) {
  LinForm f;
  switch (t.kind()) {
    case Term::Kind::Var:
      if (!sort_fits(t.sort(), Sort::Int)) {
        throw SortError("variable " + t.name() + " is not an integer");
      }
      f.add_term(t.name(), 1);
      return f;
    case Term::Kind::IntConst:
      f.constant = t.value();
      return f;
    case Term::Kind::IntNeg:
      return -normalize_int(t.args()[0]);
    case Term::Kind::IntAdd:
      return normalize_int(t.args()[0]) + normalize_int(t.args()[1]);
    case Term::Kind::IntSub:
      return normalize_int(t.args()[0]) - normalize_int(t.args()[1]);
    case Term::Kind::IntScale:
      f.add_term(t.args()[0].name(), t.value());
      return f;
    default:
      throw SortError("not an integer term");
  }
}

Term to_term(const LinForm& f) {
  std::vector<Term> parts;
  bool first = true;
  Term acc = Term::int_const(0);
  for (const auto& [v, c] : f.coeffs) {
    Term var = Term::var(v, Sort::Int);
    Integer mag = abs(c);
    Term piece = mag == 1 ? var : Term::int_scale(mag, var);
    if (first) {
      acc = c < 0 ? Term::int_neg(piece) : piece;
      first = false;
    } else {
      acc = c < 0 ? Term::int_sub(acc, piece) : Term::int_add(acc, piece);
    }
  }
  if (first) return Term::int_const(f.constant);
  if (f.constant > 0) return Term::int_add(acc, Term::int_const(f.constant));
  if (f.constant < 0) return Term::int_sub(acc, Term::int_const(Integer(-f.constant)));
  return acc;
}

Term int_mul(const Term& l, const Term& r) {
  LinForm a = normalize_int(l);
  LinForm b = normalize_int(r);
  if (!a.is_constant() && !b.is_constant()) {
    throw NonLinearError("product of two non-constant integer terms");
  }
  if (a.is_constant()) {
    b *= a.constant;
    if (r.is_var() && b.coeffs.size() == 1) {
      return Term::int_scale(a.constant, r);
    }
    return to_term(b);
  }
  a *= b.constant;
  if (l.is_var() && a.coeffs.size() == 1) {
    return Term::int_scale(b.constant, l);
  }
  return to_term(a);
}

}  // namespace setcard
