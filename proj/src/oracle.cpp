#include "setcard/oracle.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "setcard/printer.hpp"

namespace setcard {

Value Value::integer(Integer v) {
  Value out;
  out.kind = Kind::Int;
  out.num = std::move(v);
  return out;
}

Value Value::ur(std::string functor, std::vector<Value> args) {
  Value out;
  out.kind = Kind::Ur;
  out.name = std::move(functor);
  out.items = std::move(args);
  return out;
}

Value Value::set(std::vector<Value> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  Value out;
  out.kind = Kind::Set;
  out.items = std::move(elems);
  return out;
}

bool Value::contains(const Value& x) const {
  return is_set() && std::binary_search(items.begin(), items.end(), x);
}

int compare(const Value& a, const Value& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case Value::Kind::Int:
      return cmp(a.num, b.num) < 0 ? -1 : (cmp(a.num, b.num) > 0 ? 1 : 0);
    case Value::Kind::Ur:
      if (a.name != b.name) return a.name < b.name ? -1 : 1;
      break;
    case Value::Kind::Set:
      break;
  }
  if (a.items.size() != b.items.size()) return a.items.size() < b.items.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (int c = compare(a.items[i], b.items[i])) return c;
  }
  return 0;
}

std::string to_string(const Value& v) {
  return to_string(to_term(v));
}

Term to_term(const Value& v) {
  std::vector<Term> parts;
  for (const auto& x : v.items) parts.push_back(to_term(x));
  switch (v.kind) {
    case Value::Kind::Int:
      return Term::int_const(v.num);
    case Value::Kind::Ur:
      return Term::ur_atom(v.name, std::move(parts));
    case Value::Kind::Set:
      break;
  }
  return Term::set_of(parts);
}

namespace {

std::optional<Integer> eval_int(const Term& t, const Valuation& val) {
  switch (t.kind()) {
    case Term::Kind::IntConst:
      return t.value();
    case Term::Kind::Var: {
      auto it = val.find(t.name());
      if (it == val.end() || it->second.kind != Value::Kind::Int) return std::nullopt;
      return it->second.num;
    }
    case Term::Kind::IntNeg: {
      auto a = eval_int(t.args()[0], val);
      if (!a) return std::nullopt;
      return Integer(-*a);
    }
    case Term::Kind::IntAdd:
    case Term::Kind::IntSub: {
      auto a = eval_int(t.args()[0], val);
      auto b = eval_int(t.args()[1], val);
      if (!a || !b) return std::nullopt;
      if (t.kind() == Term::Kind::IntAdd) return Integer(*a + *b);
      return Integer(*a - *b);
    }
    case Term::Kind::IntScale: {
      auto a = eval_int(t.args()[0], val);
      if (!a) return std::nullopt;
      return Integer(t.value() * *a);
    }
    default:
      return std::nullopt;
  }
}

Value set_union(const Value& a, const Value& b) {
  std::vector<Value> out;
  std::set_union(a.items.begin(), a.items.end(), b.items.begin(), b.items.end(), std::back_inserter(out));
  Value v;
  v.items = std::move(out);
  return v;
}

Value set_inters(const Value& a, const Value& b) {
  std::vector<Value> out;
  std::set_intersection(a.items.begin(), a.items.end(), b.items.begin(), b.items.end(),
                        std::back_inserter(out));
  Value v;
  v.items = std::move(out);
  return v;
}

Value set_diff(const Value& a, const Value& b) {
  std::vector<Value> out;
  std::set_difference(a.items.begin(), a.items.end(), b.items.begin(), b.items.end(), std::back_inserter(out));
  Value v;
  v.items = std::move(out);
  return v;
}

bool all_sets(const std::vector<Value>& vs) {
  return std::all_of(vs.begin(), vs.end(), [](const Value& v) { return v.is_set(); });
}

}  // namespace

std::optional<Value> eval_term(const Term& t, const Valuation& val) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = val.find(t.name());
      if (it == val.end()) return std::nullopt;
      return it->second;
    }
    case Term::Kind::EmptySet:
      return Value::set({});
    case Term::Kind::SetCons: {
      auto rest = eval_term(t.rest(), val);
      auto elem = eval_term(t.elem(), val);
      if (!rest || !elem || !rest->is_set()) return std::nullopt;
      if (rest->contains(*elem)) return rest;
      std::vector<Value> items = rest->items;
      items.push_back(*elem);
      return Value::set(std::move(items));
    }
    case Term::Kind::UrAtom: {
      std::vector<Value> args;
      for (const auto& a : t.args()) {
        auto v = eval_term(a, val);
        if (!v) return std::nullopt;
        args.push_back(std::move(*v));
      }
      return Value::ur(t.name(), std::move(args));
    }
    default: {
      auto n = eval_int(t, val);
      if (!n) return std::nullopt;
      return Value::integer(*n);
    }
  }
}

std::optional<bool> eval_partial(const Constraint& c, const Valuation& val) {
  std::vector<Value> a;
  for (const auto& t : c.args) {
    auto v = eval_term(t, val);
    if (!v) {
      // Distinguish an unassigned variable from an ill-sorted term.
      std::map<std::string, Sort> vars;
      collect_vars(t, vars);
      for (const auto& [name, s] : vars) {
        if (!val.count(name)) return std::nullopt;
      }
      return false;
    }
    a.push_back(std::move(*v));
  }
  auto ints = [&]() {
    return std::all_of(a.begin(), a.end(), [](const Value& v) { return v.kind == Value::Kind::Int; });
  };
  switch (c.pred) {
    case Pred::Eq:
      return a[0] == a[1];
    case Pred::Neq:
      return a[0] != a[1];
    case Pred::In:
      return a[1].contains(a[0]);
    case Pred::Nin:
      return a[1].is_set() && !a[1].contains(a[0]);
    case Pred::Un:
      return all_sets(a) && set_union(a[0], a[1]) == a[2];
    case Pred::Nun:
      return all_sets(a) && set_union(a[0], a[1]) != a[2];
    case Pred::Disj:
      return all_sets(a) && set_inters(a[0], a[1]).items.empty();
    case Pred::Ndisj:
      return all_sets(a) && !set_inters(a[0], a[1]).items.empty();
    case Pred::Inters:
      return all_sets(a) && set_inters(a[0], a[1]) == a[2];
    case Pred::Subset:
      return all_sets(a) && set_diff(a[0], a[1]).items.empty();
    case Pred::Diff:
      return all_sets(a) && set_diff(a[0], a[1]) == a[2];
    case Pred::Size:
      return a[0].is_set() && a[1].kind == Value::Kind::Int && a[1].num == Integer(a[0].items.size());
    case Pred::Leq:
      return ints() && a[0].num <= a[1].num;
    case Pred::Lt:
      return ints() && a[0].num < a[1].num;
    case Pred::Gt:
      return ints() && a[0].num > a[1].num;
    case Pred::Geq:
      return ints() && a[0].num >= a[1].num;
  }
  return false;
}

std::optional<bool> eval_partial(const Formula& f, const Valuation& val) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Atom:
      return eval_partial(f.constraint(), val);
    case Formula::Kind::And: {
      bool unknown = false;
      for (const auto& c : f.children()) {
        auto v = eval_partial(c, val);
        if (!v) {
          unknown = true;
        } else if (!*v) {
          return false;
        }
      }
      if (unknown) return std::nullopt;
      return true;
    }
    case Formula::Kind::Or: {
      bool unknown = false;
      for (const auto& c : f.children()) {
        auto v = eval_partial(c, val);
        if (!v) {
          unknown = true;
        } else if (*v) {
          return true;
        }
      }
      if (unknown) return std::nullopt;
      return false;
    }
  }
  return false;
}

bool eval_ground(const Constraint& c, const Valuation& val) {
  auto v = eval_partial(c, val);
  if (!v) throw Error("unassigned variable in " + to_string(c));
  return *v;
}

bool eval_ground(const Formula& f, const Valuation& val) {
  auto v = eval_partial(f, val);
  if (!v) throw Error("unassigned variable in " + to_string(f));
  return *v;
}

namespace {

bool value_fits(const Value& v, Sort s) {
  switch (s) {
    case Sort::Set:
      return v.kind == Value::Kind::Set;
    case Sort::Int:
      return v.kind == Value::Kind::Int;
    case Sort::Ur:
      return v.kind == Value::Kind::Ur;
    case Sort::Any:
      return true;
  }
  return false;
}

void collect_ground_elems(const Term& t, std::vector<Value>& out) {
  if (t.is_set_cons()) {
    if (t.elem().is_ground()) {
      if (auto v = eval_term(t.elem(), {})) out.push_back(*v);
    }
    collect_ground_elems(t.elem(), out);
    collect_ground_elems(t.rest(), out);
  } else if (t.kind() == Term::Kind::UrAtom) {
    for (const auto& a : t.args()) collect_ground_elems(a, out);
  }
}

class ModelSearch {
 public:
  ModelSearch(const Formula& f, const Scope& scope, const std::function<bool(const Valuation&)>& cb)
      : f_(f), scope_(scope), cb_(cb) {
    if (f.kind() == Formula::Kind::And) {
      for (const auto& c : f.children()) {
        if (c.kind() == Formula::Kind::Atom) top_.push_back(c.constraint());
      }
    } else if (f.kind() == Formula::Kind::Atom) {
      top_.push_back(f.constraint());
    }
    // Variables a top-level atom can define are enumerated last, so that
    // they are usually forced instead.
    std::set<std::string> definable;
    for (const auto& c : top_) {
      if (c.pred == Pred::Eq && !c.is_int()) {
        for (int side = 0; side < 2; ++side) {
          const Term& x = c.arg(side);
          const Term& t = c.arg(1 - side);
          if (x.is_var() && !t.is_var() && !occurs(x.name(), t)) definable.insert(x.name());
        }
      } else if ((c.pred == Pred::Un || c.pred == Pred::Inters || c.pred == Pred::Diff) && c.arg(2).is_var()) {
        const std::string& x = c.arg(2).name();
        if (!occurs(x, c.arg(0)) && !occurs(x, c.arg(1))) definable.insert(x);
      }
    }
    std::map<std::string, Sort> vars;
    collect_vars(f, vars);
    std::vector<Constraint> atoms;
    collect_atoms(f, atoms);
    std::vector<std::set<std::string>> atom_vars;
    for (const auto& c : atoms) {
      std::map<std::string, Sort> vs;
      collect_vars(c, vs);
      std::set<std::string> names;
      for (const auto& [n, s] : vs) names.insert(n);
      atom_vars.push_back(std::move(names));
    }
    // Greedy fail-first order: next is the variable that completes the most
    // atoms, set variables before elements before integers.
    std::set<std::string> chosen;
    while (chosen.size() < vars.size()) {
      std::tuple<bool, long, int, std::string> best{true, 0, 9, ""};
      bool have = false;
      for (const auto& [n, s] : vars) {
        if (chosen.count(n)) continue;
        long completed = 0;
        for (const auto& names : atom_vars) {
          if (!names.count(n)) continue;
          bool rest_known = std::all_of(names.begin(), names.end(),
                                        [&](const std::string& m) { return m == n || chosen.count(m); });
          if (rest_known) ++completed;
        }
        int sort_rank = s == Sort::Set ? 0 : (s == Sort::Int ? 2 : 1);
        std::tuple<bool, long, int, std::string> key{definable.count(n) > 0, -completed, sort_rank, n};
        if (!have || key < best) {
          best = key;
          have = true;
        }
      }
      const std::string& pick = std::get<3>(best);
      chosen.insert(pick);
      order_.emplace_back(pick, vars.at(pick));
    }
    build_domains();
  }

  std::uint64_t run() {
    search();
    return nodes_;
  }

 private:
  void build_domains() {
    for (const auto& u : scope_.ur_universe) ur_dom_.push_back(Value::ur(u));
    for (long i = scope_.int_lo; i <= scope_.int_hi; ++i) int_dom_.push_back(Value::integer(i));

    std::vector<Value> pool = ur_dom_;
    for (long i = scope_.elem_lo; i <= scope_.elem_hi; ++i) pool.push_back(Value::integer(i));
    if (scope_.max_nest >= 1) {
      pool.push_back(Value::set({}));
      for (const auto& u : ur_dom_) pool.push_back(Value::set({u}));
    }
    std::vector<Constraint> atoms;
    collect_atoms(f_, atoms);
    for (const auto& c : atoms) {
      for (const auto& t : c.args) collect_ground_elems(t, pool);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    elem_dom_ = pool;

    // Subsets of the pool by increasing width.
    std::vector<Value> chosen;
    for (int w = 0; w <= scope_.max_width; ++w) subsets(pool, 0, w, chosen);
  }

  void subsets(const std::vector<Value>& pool, std::size_t from, int left, std::vector<Value>& chosen) {
    if (left == 0) {
      set_dom_.push_back(Value::set(chosen));
      return;
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      chosen.push_back(pool[i]);
      subsets(pool, i + 1, left - 1, chosen);
      chosen.pop_back();
    }
  }

  const std::vector<Value>& domain(Sort s) const {
    switch (s) {
      case Sort::Set:
        return set_dom_;
      case Sort::Int:
        return int_dom_;
      case Sort::Ur:
        return ur_dom_;
      case Sort::Any:
        break;
    }
    return elem_dom_;
  }

  Sort sort_of_var(const std::string& name) const {
    for (const auto& [n, s] : order_) {
      if (n == name) return s;
    }
    return Sort::Any;
  }

  // A variable whose value a top-level atom fixes once its other arguments
  // are known. `failed` is set when such an atom can hold for no value.
  std::optional<std::pair<std::string, Value>> forced(bool& failed) const {
    auto unassigned_var = [&](const Term& t) { return t.is_var() && !val_.count(t.name()); };
    for (const auto& c : top_) {
      switch (c.pred) {
        case Pred::Eq: {
          if (c.is_int()) {
            LinForm d = normalize_int(c.arg(0)) - normalize_int(c.arg(1));
            Integer rest = d.constant;
            std::string free;
            Integer coeff = 0;
            int n_free = 0;
            for (const auto& [v, k] : d.coeffs) {
              auto it = val_.find(v);
              if (it == val_.end()) {
                ++n_free;
                free = v;
                coeff = k;
              } else {
                rest += k * it->second.num;
              }
            }
            if (n_free != 1) break;
            Integer q = -rest / coeff;
            if (q * coeff != -rest) {
              failed = true;
              return std::nullopt;
            }
            return std::make_pair(free, Value::integer(q));
          }
          for (int side = 0; side < 2; ++side) {
            const Term& x = c.arg(side);
            if (!unassigned_var(x)) continue;
            if (auto v = eval_term(c.arg(1 - side), val_)) return std::make_pair(x.name(), *v);
          }
          break;
        }
        case Pred::Un:
        case Pred::Inters:
        case Pred::Diff: {
          if (!unassigned_var(c.arg(2))) break;
          auto a = eval_term(c.arg(0), val_);
          auto b = eval_term(c.arg(1), val_);
          if (!a || !b) break;
          if (!a->is_set() || !b->is_set()) {
            failed = true;
            return std::nullopt;
          }
          Value r = c.pred == Pred::Un ? set_union(*a, *b)
                                       : (c.pred == Pred::Inters ? set_inters(*a, *b) : set_diff(*a, *b));
          return std::make_pair(c.arg(2).name(), r);
        }
        case Pred::Size: {
          if (!unassigned_var(c.arg(1))) break;
          auto a = eval_term(c.arg(0), val_);
          if (!a) break;
          if (!a->is_set()) {
            failed = true;
            return std::nullopt;
          }
          return std::make_pair(c.arg(1).name(), Value::integer(static_cast<long>(a->items.size())));
        }
        default:
          break;
      }
    }
    return std::nullopt;
  }

  // Returns false once the callback asks to stop.
  bool search() {
    if (++nodes_ > scope_.budget) throw ScopeTooLarge("oracle search budget exhausted");
    auto truth = eval_partial(f_, val_);
    if (truth && !*truth) return true;
    if (val_.size() == order_.size()) {
      if (truth && *truth) return cb_(val_);
      return true;
    }
    bool failed = false;
    if (auto step = forced(failed)) {
      if (!value_fits(step->second, sort_of_var(step->first))) return true;
      val_.emplace(step->first, step->second);
      bool go_on = search();
      val_.erase(step->first);
      return go_on;
    }
    if (failed) return true;
    for (const auto& [name, s] : order_) {
      if (val_.count(name)) continue;
      for (const auto& v : domain(s)) {
        val_.emplace(name, v);
        bool go_on = search();
        val_.erase(name);
        if (!go_on) return false;
      }
      return true;
    }
    return true;
  }

  const Formula& f_;
  const Scope& scope_;
  const std::function<bool(const Valuation&)>& cb_;
  std::vector<std::pair<std::string, Sort>> order_;
  std::vector<Constraint> top_;
  std::vector<Value> set_dom_, int_dom_, ur_dom_, elem_dom_;
  Valuation val_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::uint64_t oracle_models(const Formula& f, const Scope& scope,
                            const std::function<bool(const Valuation&)>& on_model) {
  ModelSearch search(f, scope, on_model);
  return search.run();
}

namespace {

// Conjuncts grouped into classes that share no variable.
std::vector<Formula> components(const Formula& f) {
  if (f.kind() != Formula::Kind::And) return {f};
  const auto& parts = f.children();
  std::vector<std::size_t> parent(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::map<std::string, Sort> vars;
    collect_vars(parts[i], vars);
    for (const auto& [n, s] : vars) {
      auto [it, fresh] = owner.emplace(n, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  }
  std::map<std::size_t, std::vector<Formula>> groups;
  for (std::size_t i = 0; i < parts.size(); ++i) groups[find(i)].push_back(parts[i]);
  std::vector<Formula> out;
  for (auto& [root, g] : groups) out.push_back(Formula::conj(std::move(g)));
  return out;
}

}  // namespace

OracleResult oracle_sat(const Formula& f, const Scope& scope) {
  OracleResult out;
  out.sat = true;
  for (const auto& part : components(f)) {
    bool found = false;
    out.nodes += oracle_models(part, scope, [&](const Valuation& v) {
      for (const auto& [n, x] : v) out.witness[n] = x;
      found = true;
      return false;
    });
    if (!found) {
      out.sat = false;
      out.witness.clear();
      return out;
    }
  }
  if (!eval_ground(f, out.witness)) throw InternalError("oracle witness fails ground evaluation");
  return out;
}

Formula answer_formula(const Answer& a) {
  std::vector<Formula> parts;
  for (const auto& [name, t] : a.bindings) {
    parts.push_back(Formula::atom(Constraint::eq(Term::var(name, t.sort()), t)));
  }
  for (const auto& c : a.residual) parts.push_back(Formula::atom(c));
  return Formula::conj(std::move(parts));
}

std::optional<Valuation> ground_answer(const Answer& a, const Formula& original, const Scope& scope) {
  Formula af = answer_formula(a);
  OracleResult r = oracle_sat(af, scope);
  if (!r.sat) return std::nullopt;
  std::map<std::string, Sort> vars;
  collect_vars(original, vars);
  Valuation out;
  for (const auto& [name, s] : vars) {
    auto it = r.witness.find(name);
    if (it != r.witness.end()) {
      out.emplace(name, it->second);
    } else if (s == Sort::Int) {
      out.emplace(name, Value::integer(0));
    } else if (s == Sort::Set || scope.ur_universe.empty()) {
      out.emplace(name, Value::set({}));
    } else {
      out.emplace(name, Value::ur(scope.ur_universe.front()));
    }
  }
  return out;
}

}  // namespace setcard
