#include "setcard/size_solver.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "setcard/error.hpp"

namespace setcard {

namespace {

const std::string& set_var(const Term& t) {
  if (!t.is_var()) throw InternalError("non-variable set term reached the size solver");
  return t.name();
}

ilp::LinConstraint row_from(const LinForm& f, ilp::Rel rel) {
  // f rel 0
  return ilp::LinConstraint::from_forms(f, rel, LinForm{});
}

LinForm var_form(const std::string& v) {
  LinForm f;
  f.add_term(v, 1);
  return f;
}

Integer eval_form(const LinForm& f, const std::map<std::string, Integer>& point) {
  Integer v = f.constant;
  for (const auto& [name, c] : f.coeffs) {
    auto it = point.find(name);
    if (it != point.end()) v += c * it->second;
  }
  return v;
}

bool internal_name(const std::string& n) { return !n.empty() && n[0] == '$'; }

class UnionFind {
 public:
  const std::string& find(const std::string& x) {
    auto it = parent_.find(x);
    if (it == parent_.end()) {
      it = parent_.emplace(x, x).first;
    }
    if (it->second == x) return it->first;
    std::string root = find(it->second);
    it->second = root;
    return parent_.find(root)->first;
  }
  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a);
    std::string rb = find(b);
    if (ra != rb) parent_[rb] = ra;
  }
  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : parent_) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, std::string> parent_;
};

}  // namespace

bool translate_int(const Constraint& c, ZaProblem& z) {
  if (!c.is_int()) return false;
  LinForm l = normalize_int(c.arg(0));
  LinForm r = normalize_int(c.arg(1));
  using ilp::Rel;
  switch (c.pred) {
    case Pred::Eq:
      z.int_constraints.push_back(ilp::LinConstraint::from_forms(l, Rel::Eq, r));
      break;
    case Pred::Neq:
      z.int_neqs.push_back(l - r);
      break;
    case Pred::Leq:
      z.int_constraints.push_back(ilp::LinConstraint::from_forms(l, Rel::Le, r));
      break;
    case Pred::Lt:
      z.int_constraints.push_back(ilp::LinConstraint::from_forms(l, Rel::Lt, r));
      break;
    case Pred::Gt:
      z.int_constraints.push_back(ilp::LinConstraint::from_forms(r, Rel::Lt, l));
      break;
    case Pred::Geq:
      z.int_constraints.push_back(ilp::LinConstraint::from_forms(r, Rel::Le, l));
      break;
    default:
      return false;
  }
  return true;
}

ZaProblem translate(const std::vector<Constraint>& phi1) {
  ZaProblem z;
  int lowered = 0;
  for (const auto& c : phi1) {
    if (translate_int(c, z)) continue;
    switch (c.pred) {
      case Pred::Un:
        z.unions.push_back({set_var(c.arg(0)), set_var(c.arg(1)), set_var(c.arg(2))});
        break;
      case Pred::Disj:
        z.disjoints.push_back({set_var(c.arg(0)), set_var(c.arg(1))});
        break;
      case Pred::Size:
        z.sizes.emplace_back(set_var(c.arg(0)), normalize_int(c.arg(1)));
        break;
      case Pred::Inters: {
        const std::string& a = set_var(c.arg(0));
        const std::string& b = set_var(c.arg(1));
        const std::string& r = set_var(c.arg(2));
        z.intersections.push_back({a, b, r});
        ++lowered;
        std::string n1 = "$i" + std::to_string(lowered) + "a";
        std::string n2 = "$i" + std::to_string(lowered) + "b";
        z.unions.push_back({r, n1, a});
        z.unions.push_back({r, n2, b});
        z.disjoints.push_back({n1, n2});
        break;
      }
      default:
        break;
    }
  }
  return z;
}

ZaProblem infer_size(const ZaProblem& z) {
  ZaProblem out = z;
  std::map<std::string, std::vector<LinForm>> sizes;
  for (const auto& [x, m] : z.sizes) sizes[x].push_back(m);
  if (sizes.empty()) return out;
  int fresh = 0;
  auto ensure = [&](const std::string& x) {
    if (sizes.count(x)) return false;
    LinForm m = var_form("$m" + std::to_string(++fresh));
    sizes[x].push_back(m);
    out.sizes.emplace_back(x, m);
    out.int_constraints.push_back(row_from(-m, ilp::Rel::Le));
    return true;
  };
  std::vector<std::array<std::string, 3>> triples = z.unions;
  triples.insert(triples.end(), z.intersections.begin(), z.intersections.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : triples) {
      if (!sizes.count(t[0]) && !sizes.count(t[1]) && !sizes.count(t[2])) continue;
      for (const auto& x : t) changed = ensure(x) || changed;
    }
  }
  auto m = [&](const std::string& x) { return sizes.at(x).front(); };
  for (const auto& u : z.unions) {
    if (!sizes.count(u[2])) continue;
    out.int_constraints.push_back(row_from(m(u[2]) - m(u[0]) - m(u[1]), ilp::Rel::Le));
  }
  for (const auto& i : z.intersections) {
    if (!sizes.count(i[2])) continue;
    out.int_constraints.push_back(row_from(m(i[2]) - m(i[0]), ilp::Rel::Le));
    out.int_constraints.push_back(row_from(m(i[2]) - m(i[1]), ilp::Rel::Le));
  }
  for (const auto& [x, forms] : sizes) {
    for (std::size_t k = 1; k < forms.size(); ++k) {
      out.int_constraints.push_back(row_from(forms[k] - forms[0], ilp::Rel::Eq));
    }
  }
  return out;
}

bool int_lp_feasible(const ZaProblem& z, const Deadline& deadline) {
  ilp::LinProblem p;
  p.constraints = z.int_constraints;
  return ilp::lp_feasible(p, deadline).status == ilp::LpResult::Status::Feasible;
}

sat::Cnf encode_boolean(const ZaProblem& z, const std::vector<std::string>& vars) {
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < vars.size(); ++i) idx[vars[i]] = static_cast<int>(i) + 1;
  auto known = [&](const std::string& v) { return idx.count(v) > 0; };
  sat::Cnf cnf;
  cnf.num_vars = static_cast<int>(vars.size());
  for (const auto& u : z.unions) {
    if (!known(u[0]) || !known(u[1]) || !known(u[2])) continue;
    int a = idx[u[0]], b = idx[u[1]], c = idx[u[2]];
    cnf.clauses.push_back({-c, a, b});
    cnf.clauses.push_back({-a, c});
    cnf.clauses.push_back({-b, c});
  }
  for (const auto& d : z.disjoints) {
    if (!known(d[0]) || !known(d[1])) continue;
    cnf.clauses.push_back({-idx[d[0]], -idx[d[1]]});
  }
  return cnf;
}

namespace {

// m = sum of v_pi over the regions containing x, per size pair (x, m).
std::vector<ilp::LinConstraint> size_rows(const Arrangement& arr, const ZaProblem& z) {
  std::vector<ilp::LinConstraint> rows;
  for (const auto& [x, m] : z.sizes) {
    LinForm sum;
    for (std::size_t k = 0; k < arr.regions.size(); ++k) {
      auto it = arr.regions[k].find(x);
      if (it != arr.regions[k].end() && it->second) sum.add_term(arr.region_vars[k], 1);
    }
    rows.push_back(ilp::LinConstraint::from_forms(m, ilp::Rel::Eq, sum));
  }
  return rows;
}

ilp::LinConstraint lower_bound(const std::string& v, long k) {
  return ilp::LinConstraint{{{v, Rational(-1)}}, ilp::Rel::Le, Rational(-k)};
}

}  // namespace

std::vector<ilp::LinConstraint> build_res_z(const Arrangement& arr, const ZaProblem& z) {
  std::vector<ilp::LinConstraint> rows;
  // 0 < v, tightened over the integers.
  for (const auto& v : arr.region_vars) rows.push_back(lower_bound(v, 1));
  for (auto& row : size_rows(arr, z)) rows.push_back(std::move(row));
  return rows;
}

ilp::IlpResult bb_inf_with_neqs(ilp::LinProblem p, const std::vector<LinForm>& neqs,
                                const Deadline& deadline) {
  for (const auto& d : neqs) {
    for (const auto& [v, c] : d.coeffs) p.integers.insert(v);
  }
  ilp::IlpResult r = ilp::bb_inf(p, deadline);
  if (r.status != ilp::IlpResult::Status::Optimal) return r;
  for (const auto& d : neqs) {
    if (eval_form(d, r.vertex) != 0) continue;
    ilp::LinProblem lo = p;
    lo.constraints.push_back(row_from(d + LinForm{1, {}}, ilp::Rel::Le));  // d <= -1
    ilp::LinProblem hi = std::move(p);
    hi.constraints.push_back(row_from(LinForm{1, {}} - d, ilp::Rel::Le));  // d >= 1
    ilp::IlpResult a = bb_inf_with_neqs(std::move(lo), neqs, deadline);
    ilp::IlpResult b = bb_inf_with_neqs(std::move(hi), neqs, deadline);
    using S = ilp::IlpResult::Status;
    if (a.status == S::Unbounded || b.status == S::Unbounded) {
      return a.status == S::Unbounded ? a : b;
    }
    if (a.status != S::Optimal) return b;
    if (b.status != S::Optimal) return a;
    return b.value < a.value ? b : a;
  }
  return r;
}

namespace {

// Sum of the distinct size terms; the quantity minimised per arrangement.
ilp::VarMap size_objective(const ZaProblem& z) {
  std::vector<LinForm> seen;
  LinForm total;
  for (const auto& [x, m] : z.sizes) {
    if (std::find(seen.begin(), seen.end(), m) != seen.end()) continue;
    seen.push_back(m);
    total += m;
  }
  ilp::VarMap obj;
  for (const auto& [v, c] : total.coeffs) obj[v] = Rational(c);
  return obj;
}

std::map<std::string, Integer> visible(const std::map<std::string, Integer>& vertex) {
  std::map<std::string, Integer> out;
  for (const auto& [k, v] : vertex) {
    if (!internal_name(k)) out.emplace(k, v);
  }
  return out;
}

ilp::LinProblem base_problem(const ZaProblem& z) {
  ilp::LinProblem p;
  p.constraints = z.int_constraints;
  for (const auto& c : z.int_constraints) {
    for (const auto& [v, k] : c.lhs) p.integers.insert(v);
  }
  for (const auto& [x, m] : z.sizes) {
    for (const auto& [v, k] : m.coeffs) p.integers.insert(v);
  }
  return p;
}

}  // namespace

SizeResult solve_za(const ZaProblem& z, const SizeOptions& opts) {
  const Deadline& deadline = opts.deadline;
  SizeResult out;
  deadline.check();

  if (!z.has_sizes()) {
    ilp::IlpResult r = bb_inf_with_neqs(base_problem(z), z.int_neqs, deadline);
    if (r.status == ilp::IlpResult::Status::Infeasible) return out;
    out.status = SizeResult::Status::Sat;
    out.vertex = visible(r.vertex);
    return out;
  }

  if (opts.infer) {
    ZaProblem inferred = infer_size(z);
    if (!int_lp_feasible(inferred, deadline)) {
      out.refuted_by_inference = true;
      return out;
    }
  }

  // Only components that contain a sized variable carry cardinality
  // information; the others can always be satisfied with empty sets.
  UnionFind uf;
  for (const auto& u : z.unions) {
    uf.unite(u[0], u[1]);
    uf.unite(u[0], u[2]);
  }
  for (const auto& d : z.disjoints) uf.unite(d[0], d[1]);
  std::set<std::string> sized_roots;
  for (const auto& [x, m] : z.sizes) sized_roots.insert(uf.find(x));
  std::map<std::string, std::vector<std::string>> components;
  for (const auto& v : uf.keys()) {
    std::string root = uf.find(v);
    if (sized_roots.count(root)) components[root].push_back(v);
  }

  // Regions spanning two independent components split into one region per
  // component without changing any cardinality, so S is built per component.
  std::vector<BoolAssignment> s;
  for (auto& [root, vars] : components) {
    std::sort(vars.begin(), vars.end());
    sat::Cnf cnf = encode_boolean(z, vars);
    for (const auto& model : sat::sat_enumerate(cnf, deadline)) {
      BoolAssignment pi;
      for (std::size_t i = 0; i < vars.size(); ++i) pi[vars[i]] = model[i];
      s.push_back(std::move(pi));
    }
  }

  ilp::LinProblem base = base_problem(z);
  ilp::VarMap objective = size_objective(z);

  // Relaxation over all of S with v_pi >= 0: every arrangement is an instance
  // of it, so infeasibility here settles the question at once.
  {
    Arrangement all;
    all.regions = s;
    for (std::size_t k = 0; k < s.size(); ++k) all.region_vars.push_back("$v" + std::to_string(k));
    ilp::LinProblem relaxed = base;
    for (auto& row : size_rows(all, z)) relaxed.constraints.push_back(std::move(row));
    relaxed.nonneg.insert(all.region_vars.begin(), all.region_vars.end());
    ++out.arrangements_tried;
    if (bb_inf_with_neqs(relaxed, z.int_neqs, deadline).status ==
        ilp::IlpResult::Status::Infeasible) {
      return out;
    }
  }

  // Variables whose size is positive in every solution of the integer
  // constraints must be covered by some chosen region.
  std::vector<std::string> required;
  {
    auto tightened = ilp::tighten_integer_rows(base.constraints);
    if (!tightened) return out;
    std::set<std::string> done;
    for (const auto& [x, m] : z.sizes) {
      if (!done.insert(x).second) continue;
      ilp::LinProblem p;
      p.constraints = *tightened;
      p.objective.clear();
      for (const auto& [v, c] : m.coeffs) p.objective[v] = Rational(c);
      ilp::LpResult r = ilp::lp_minimize(p, deadline);
      if (r.status == ilp::LpResult::Status::Feasible && r.value + Rational(m.constant) > 0) {
        required.push_back(x);
      }
    }
  }
  auto covers = [&](std::size_t k, const std::string& x) {
    auto it = s[k].find(x);
    return it != s[k].end() && it->second;
  };

  std::vector<std::size_t> chosen;
  std::function<bool(std::size_t, std::size_t)> pick = [&](std::size_t start,
                                                           std::size_t left) -> bool {
    if (left == 0) {
      for (const auto& x : required) {
        bool hit = std::any_of(chosen.begin(), chosen.end(),
                               [&](std::size_t k) { return covers(k, x); });
        if (!hit) return false;
      }
      deadline.check();
      Arrangement arr;
      for (std::size_t k : chosen) {
        arr.regions.push_back(s[k]);
        arr.region_vars.push_back("$v" + std::to_string(k));
      }
      ilp::LinProblem p = base;
      for (auto& row : build_res_z(arr, z)) p.constraints.push_back(std::move(row));
      for (const auto& v : arr.region_vars) p.integers.insert(v);
      p.objective = objective;
      ++out.arrangements_tried;
      ilp::IlpResult r = bb_inf_with_neqs(std::move(p), z.int_neqs, deadline);
      if (r.status != ilp::IlpResult::Status::Optimal) return false;
      out.status = SizeResult::Status::Sat;
      out.vertex = visible(r.vertex);
      out.arrangement = std::move(arr);
      return true;
    }
    for (std::size_t k = start; k + left <= s.size(); ++k) {
      // Prune when some required variable can no longer be covered.
      bool reachable = true;
      for (const auto& x : required) {
        bool hit = std::any_of(chosen.begin(), chosen.end(),
                               [&](std::size_t c) { return covers(c, x); });
        if (hit) continue;
        bool later = false;
        for (std::size_t j = k; j < s.size() && !later; ++j) later = covers(j, x);
        if (!later) {
          reachable = false;
          break;
        }
      }
      if (!reachable) return false;
      chosen.push_back(k);
      bool ok = pick(k + 1, left - 1);
      chosen.pop_back();
      if (ok) return true;
    }
    return false;
  };
  for (std::size_t size = 0; size <= s.size(); ++size) {
    if (pick(0, size)) return out;
  }
  return out;
}

SizeResult solve_size(const std::vector<Constraint>& phi1, const SizeOptions& opts) {
  return solve_za(translate(phi1), opts);
}

}  // namespace setcard
