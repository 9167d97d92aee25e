#include "setcard/formula.hpp"

#include <utility>

#include "setcard/error.hpp"

namespace setcard {

const char* pred_name(Pred p) {
  switch (p) {
    case Pred::Eq:
      return "=";
    case Pred::Neq:
      return "neq";
    case Pred::In:
      return "in";
    case Pred::Nin:
      return "nin";
    case Pred::Un:
      return "un";
    case Pred::Disj:
      return "disj";
    case Pred::Size:
      return "size";
    case Pred::Leq:
      return "=<";
    case Pred::Lt:
      return "<";
    case Pred::Gt:
      return ">";
    case Pred::Geq:
      return ">=";
    case Pred::Inters:
      return "inters";
    case Pred::Subset:
      return "subset";
    case Pred::Diff:
      return "diff";
    case Pred::Nun:
      return "nun";
    case Pred::Ndisj:
      return "ndisj";
  }
  return "?";
}

int pred_arity(Pred p) {
  switch (p) {
    case Pred::Un:
    case Pred::Inters:
    case Pred::Diff:
    case Pred::Nun:
      return 3;
    default:
      return 2;
  }
}

namespace {

void expect_sort(const Term& t, Sort s, Pred p) {
  if (!sort_fits(t.sort(), s)) {
    throw SortError(std::string("argument of ") + pred_name(p) + " must be of sort " +
                    sort_name(s) + ", got " + sort_name(t.sort()));
  }
}

}  // namespace

Constraint Constraint::make(Pred p, std::vector<Term> args) {
  if (static_cast<int>(args.size()) != pred_arity(p)) {
    throw SortError(std::string("wrong number of arguments for ") + pred_name(p));
  }
  switch (p) {
    case Pred::Eq:
    case Pred::Neq:
      if (!sort_fits(args[0].sort(), args[1].sort())) {
        throw SortError(std::string("sides of ") + pred_name(p) + " have sorts " +
                        sort_name(args[0].sort()) + " and " + sort_name(args[1].sort()));
      }
      break;
    case Pred::In:
    case Pred::Nin:
      expect_sort(args[1], Sort::Set, p);
      break;
    case Pred::Size:
      expect_sort(args[0], Sort::Set, p);
      expect_sort(args[1], Sort::Int, p);
      break;
    case Pred::Leq:
    case Pred::Lt:
    case Pred::Gt:
    case Pred::Geq:
      expect_sort(args[0], Sort::Int, p);
      expect_sort(args[1], Sort::Int, p);
      break;
    default:
      for (const auto& a : args) expect_sort(a, Sort::Set, p);
      break;
  }
  return Constraint{p, std::move(args)};
}

bool Constraint::is_int() const {
  switch (pred) {
    case Pred::Leq:
    case Pred::Lt:
    case Pred::Gt:
    case Pred::Geq:
      return true;
    case Pred::Eq:
    case Pred::Neq:
      return args[0].sort() == Sort::Int || args[1].sort() == Sort::Int;
    default:
      return false;
  }
}

bool Constraint::is_derived() const {
  switch (pred) {
    case Pred::Inters:
    case Pred::Subset:
    case Pred::Diff:
    case Pred::Nun:
    case Pred::Ndisj:
      return true;
    default:
      return false;
  }
}

int compare(const Constraint& a, const Constraint& b) {
  if (a.pred != b.pred) return a.pred < b.pred ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    int c = compare(a.args[i], b.args[i]);
    if (c != 0) return c;
  }
  return 0;
}

Constraint map_vars(const Constraint& c, const VarMapper& f) {
  std::vector<Term> args;
  args.reserve(c.args.size());
  bool changed = false;
  for (const auto& a : c.args) {
    args.push_back(map_vars(a, f));
    changed = changed || !args.back().same_node(a);
  }
  if (!changed) return c;
  return Constraint::make(c.pred, std::move(args));
}

void collect_vars(const Constraint& c, std::map<std::string, Sort>& out) {
  for (const auto& a : c.args) collect_vars(a, out);
}

bool occurs(const std::string& var, const Constraint& c) {
  for (const auto& a : c.args) {
    if (occurs(var, a)) return true;
  }
  return false;
}

Formula Formula::truth() { return Formula(); }

Formula Formula::falsity() {
  Formula f;
  f.kind_ = Kind::False;
  return f;
}

Formula Formula::atom(Constraint c) {
  Formula f;
  f.kind_ = Kind::Atom;
  f.atoms_.push_back(std::move(c));
  return f;
}

Formula Formula::conj(std::vector<Formula> parts) {
  Formula f;
  f.kind_ = Kind::And;
  for (auto& p : parts) {
    switch (p.kind_) {
      case Kind::True:
        break;
      case Kind::False:
        return falsity();
      case Kind::And:
        for (auto& c : p.children_) f.children_.push_back(std::move(c));
        break;
      default:
        f.children_.push_back(std::move(p));
    }
  }
  if (f.children_.empty()) return truth();
  if (f.children_.size() == 1) return std::move(f.children_.front());
  return f;
}

Formula Formula::disj(std::vector<Formula> parts) {
  Formula f;
  f.kind_ = Kind::Or;
  for (auto& p : parts) {
    switch (p.kind_) {
      case Kind::False:
        break;
      case Kind::True:
        return truth();
      case Kind::Or:
        for (auto& c : p.children_) f.children_.push_back(std::move(c));
        break;
      default:
        f.children_.push_back(std::move(p));
    }
  }
  if (f.children_.empty()) return falsity();
  if (f.children_.size() == 1) return std::move(f.children_.front());
  return f;
}

bool operator==(const Formula& a, const Formula& b) {
  return a.kind_ == b.kind_ && a.atoms_ == b.atoms_ && a.children_ == b.children_;
}

Formula map_vars(const Formula& f, const VarMapper& m) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      // An element variable of sort Any may be replaced by a term of any
      // sort; = and neq across sorts are then decided outright.
      const Constraint& c = f.constraint();
      if (c.pred == Pred::Eq || c.pred == Pred::Neq) {
        Term l = map_vars(c.arg(0), m);
        Term r = map_vars(c.arg(1), m);
        if (!sort_fits(l.sort(), r.sort())) {
          return c.pred == Pred::Eq ? Formula::falsity() : Formula::truth();
        }
      }
      return Formula::atom(map_vars(c, m));
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const auto& c : f.children()) parts.push_back(map_vars(c, m));
      return f.kind() == Formula::Kind::And ? Formula::conj(std::move(parts))
                                            : Formula::disj(std::move(parts));
    }
    default:
      return f;
  }
}

void collect_vars(const Formula& f, std::map<std::string, Sort>& out) {
  if (f.kind() == Formula::Kind::Atom) {
    collect_vars(f.constraint(), out);
    return;
  }
  for (const auto& c : f.children()) collect_vars(c, out);
}

void collect_atoms(const Formula& f, std::vector<Constraint>& out) {
  if (f.kind() == Formula::Kind::Atom) {
    out.push_back(f.constraint());
    return;
  }
  for (const auto& c : f.children()) collect_atoms(c, out);
}

void Substitution::bind(const Term& var, const Term& value) {
  if (!var.is_var()) throw InternalError("binding a non-variable");
  if (!sort_fits(value.sort(), var.sort())) {
    throw SortError("cannot bind " + var.name() + " of sort " + sort_name(var.sort()) +
                    " to a term of sort " + sort_name(value.sort()));
  }
  Term v = apply(value);
  for (auto& [name, rhs] : map_) rhs = replace(rhs, var.name(), v);
  map_.insert_or_assign(var.name(), std::move(v));
}

const Term* Substitution::lookup(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (map_.empty()) return t;
  return map_vars(t, [this](const Term& v) { return lookup(v.name()); });
}

Constraint Substitution::apply(const Constraint& c) const {
  if (map_.empty()) return c;
  return map_vars(c, [this](const Term& v) { return lookup(v.name()); });
}

Formula Substitution::apply(const Formula& f) const {
  if (map_.empty()) return f;
  return map_vars(f, [this](const Term& v) { return lookup(v.name()); });
}

}  // namespace setcard
