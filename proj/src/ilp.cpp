#include "setcard/ilp.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "setcard/error.hpp"

namespace setcard::ilp {

namespace {

// Dense two-phase tableau simplex over exact rationals with Bland's rule.
// Columns are [structural (n) | artificial (m) | rhs]. Artificial columns are
// kept for the whole run so the simplex multipliers can be read off their
// reduced costs.
class Tableau {
 public:
  enum class Status { Optimal, Infeasible, Unbounded };

  Tableau(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
          std::size_t n, const Deadline& deadline)
      : m_(a.size()), n_(n), deadline_(deadline) {
    t_.assign(m_, std::vector<Rational>(n_ + m_ + 1));
    sign_.assign(m_, 1);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      sign_[i] = b[i] < 0 ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = sign_[i] < 0 ? Rational(-a[i][j]) : a[i][j];
      t_[i][n_ + i] = 1;
      t_[i][rhs()] = sign_[i] < 0 ? Rational(-b[i]) : b[i];
      basis_[i] = n_ + i;
    }
  }

  // Finds a feasible basis. On Infeasible, *mu holds multipliers proving it.
  Status phase1(std::vector<Rational>* mu) {
    obj_.assign(n_ + m_ + 1, 0);
    for (std::size_t j = n_; j < n_ + m_; ++j) obj_[j] = 1;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t k = 0; k <= rhs(); ++k) {
        if (t_[i][k] != 0) obj_[k] -= t_[i][k];
      }
    }
    run();
    if (-obj_[rhs()] > 0) {
      if (mu) multipliers(Rational(1), *mu);
      return Status::Infeasible;
    }
    // Drive zero-level artificials out of the basis where possible; rows
    // where that fails are redundant and stay inert.
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (t_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
    return Status::Optimal;
  }

  Status phase2(const std::vector<Rational>& cost, std::vector<Rational>* mu) {
    obj_.assign(n_ + m_ + 1, 0);
    for (std::size_t j = 0; j < n_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) continue;
      const Rational& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t k = 0; k <= rhs(); ++k) {
        if (t_[i][k] != 0) obj_[k] -= cb * t_[i][k];
      }
    }
    if (!run()) return Status::Unbounded;
    if (mu) multipliers(Rational(0), *mu);
    return Status::Optimal;
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> z(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) z[basis_[i]] = t_[i][rhs()];
    }
    return z;
  }

  Rational value() const { return -obj_[rhs()]; }

 private:
  std::size_t rhs() const { return n_ + m_; }

  void multipliers(const Rational& art_cost, std::vector<Rational>& mu) const {
    mu.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      Rational pi = art_cost - obj_[n_ + i];
      mu[i] = sign_[i] < 0 ? Rational(-pi) : pi;
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    std::vector<Rational>& pr = t_[r];
    Rational p = pr[c];
    std::vector<std::size_t> nz;
    for (std::size_t k = 0; k <= rhs(); ++k) {
      if (pr[k] != 0) {
        pr[k] /= p;
        nz.push_back(k);
      }
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (row[c] == 0) return;
      Rational f = row[c];
      for (std::size_t k : nz) row[k] -= f * pr[k];
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(t_[i]);
    }
    eliminate(obj_);
    basis_[r] = c;
  }

  // Returns false when the objective is unbounded below.
  bool run() {
    for (;;) {
      deadline_.check();
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (obj_[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == n_) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = t_[i][rhs()] / t_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  std::size_t m_, n_;
  const Deadline& deadline_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> obj_;
  std::vector<std::size_t> basis_;
  std::vector<int> sign_;
};

struct Solved {
  Tableau::Status status = Tableau::Status::Infeasible;
  VarMap point;
  Rational value = 0;
  std::vector<Rational> mu;
};

// Solves min objective over rows (Lt read as Le). Variables outside `nonneg`
// are free and split into a pair of columns. Multipliers are reported in the
// orientation of the given rows.
Solved solve_rows(const std::vector<LinConstraint>& rows, const std::vector<std::string>& names,
                  const std::set<std::string>& nonneg, const VarMap& objective,
                  const Deadline& deadline) {
  // Column of each variable; free variables also own the next column.
  std::map<std::string, std::size_t> index;
  std::vector<bool> free(names.size());
  std::size_t cols = 0;
  for (std::size_t k = 0; k < names.size(); ++k) {
    index[names[k]] = cols;
    free[k] = !nonneg.count(names[k]);
    cols += free[k] ? 2 : 1;
  }
  auto set_coeff = [&](std::vector<Rational>& row, const std::string& v, const Rational& c) {
    std::size_t col = index.at(v);
    row[col] = c;
    if (!nonneg.count(v)) row[col + 1] = -c;
  };
  std::size_t slacks = 0;
  for (const auto& r : rows) {
    if (r.rel != Rel::Eq) ++slacks;
  }
  std::size_t n = cols + slacks;
  std::vector<std::vector<Rational>> a(rows.size(), std::vector<Rational>(n));
  std::vector<Rational> b(rows.size());
  std::size_t s = cols;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [v, c] : rows[i].lhs) set_coeff(a[i], v, c);
    if (rows[i].rel != Rel::Eq) a[i][s++] = 1;
    b[i] = rows[i].rhs;
  }
  Tableau tab(a, b, n, deadline);
  Solved out;
  if (tab.phase1(&out.mu) == Tableau::Status::Infeasible) {
    out.status = Tableau::Status::Infeasible;
    for (auto& x : out.mu) x = -x;
    return out;
  }
  std::vector<Rational> cost(n);
  for (const auto& [v, c] : objective) set_coeff(cost, v, c);
  out.status = tab.phase2(cost, &out.mu);
  for (auto& x : out.mu) x = -x;
  if (out.status == Tableau::Status::Unbounded) return out;
  std::vector<Rational> z = tab.solution();
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::size_t col = index.at(names[k]);
    out.point[names[k]] = free[k] ? Rational(z[col] - z[col + 1]) : z[col];
  }
  out.value = tab.value();
  return out;
}

std::vector<std::string> names_of(const LinProblem& p) {
  std::set<std::string> vs = p.variables();
  return {vs.begin(), vs.end()};
}

Rational eval(const VarMap& lhs, const VarMap& point) {
  Rational v = 0;
  for (const auto& [name, c] : lhs) {
    auto it = point.find(name);
    if (it != point.end()) v += c * it->second;
  }
  return v;
}

Integer floor_q(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_q(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

const char* rel_str(Rel r) {
  switch (r) {
    case Rel::Eq:
      return "=";
    case Rel::Le:
      return "<=";
    case Rel::Lt:
      return "<";
  }
  return "?";
}

}  // namespace

LinConstraint LinConstraint::from_forms(const LinForm& a, Rel rel, const LinForm& b) {
  LinForm d = a - b;
  LinConstraint c;
  for (const auto& [v, k] : d.coeffs) c.lhs[v] = Rational(k);
  c.rel = rel;
  c.rhs = Rational(-d.constant);
  return c;
}

bool operator==(const LinConstraint& a, const LinConstraint& b) {
  return a.rel == b.rel && a.rhs == b.rhs && a.lhs == b.lhs;
}

std::string to_string(const LinConstraint& c) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, k] : c.lhs) {
    if (!first) os << " + ";
    first = false;
    os << k.get_str() << "*" << v;
  }
  if (first) os << "0";
  os << " " << rel_str(c.rel) << " " << c.rhs.get_str();
  return os.str();
}

std::set<std::string> LinProblem::variables() const {
  std::set<std::string> vs = integers;
  vs.insert(nonneg.begin(), nonneg.end());
  for (const auto& c : constraints) {
    for (const auto& [v, k] : c.lhs) vs.insert(v);
  }
  for (const auto& [v, k] : objective) vs.insert(v);
  return vs;
}

bool satisfies(const std::vector<LinConstraint>& rows, const VarMap& point) {
  for (const auto& r : rows) {
    Rational v = eval(r.lhs, point);
    bool ok = r.rel == Rel::Eq ? v == r.rhs : (r.rel == Rel::Le ? v <= r.rhs : v < r.rhs);
    if (!ok) return false;
  }
  return true;
}

bool check_certificate(const std::vector<LinConstraint>& rows, const Certificate& cert,
                       const std::set<std::string>& nonneg) {
  if (cert.lambda.size() != rows.size()) return false;
  VarMap combo;
  Rational rhs = 0;
  Rational strict_weight = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rational& l = cert.lambda[i];
    if (rows[i].rel != Rel::Eq && l < 0) return false;
    if (l == 0) continue;
    for (const auto& [v, c] : rows[i].lhs) combo[v] += l * c;
    rhs += l * rows[i].rhs;
    if (rows[i].rel == Rel::Lt) strict_weight += l;
  }
  for (const auto& [v, c] : combo) {
    if (c < 0 || (c > 0 && !nonneg.count(v))) return false;
  }
  return rhs < 0 || (rhs == 0 && strict_weight > 0);
}

LpResult lp_minimize(const LinProblem& p, const Deadline& deadline) {
  for (const auto& r : p.constraints) {
    if (r.rel == Rel::Lt) throw InternalError("lp_minimize: strict row");
  }
  Solved s = solve_rows(p.constraints, names_of(p), p.nonneg, p.objective, deadline);
  LpResult out;
  switch (s.status) {
    case Tableau::Status::Infeasible:
      out.status = LpResult::Status::Infeasible;
      out.certificate = Certificate{std::move(s.mu)};
      break;
    case Tableau::Status::Unbounded:
      out.status = LpResult::Status::Unbounded;
      break;
    case Tableau::Status::Optimal:
      out.status = LpResult::Status::Feasible;
      out.point = std::move(s.point);
      out.value = s.value;
      break;
  }
  return out;
}

LpResult lp_feasible(const LinProblem& p, const Deadline& deadline) {
  std::vector<std::string> names = names_of(p);
  Solved relaxed = solve_rows(p.constraints, names, p.nonneg, {}, deadline);
  LpResult out;
  if (relaxed.status == Tableau::Status::Infeasible) {
    out.status = LpResult::Status::Infeasible;
    out.certificate = Certificate{std::move(relaxed.mu)};
    return out;
  }
  bool strict = std::any_of(p.constraints.begin(), p.constraints.end(),
                            [](const LinConstraint& r) { return r.rel == Rel::Lt; });
  if (!strict) {
    out.status = LpResult::Status::Feasible;
    out.point = std::move(relaxed.point);
    return out;
  }
  // Maximise a slack t shared by all strict rows: lhs + t <= rhs, 0 <= t <= 1.
  // The strict system is feasible iff the optimum is positive.
  const std::string t = "\x01t";
  std::vector<LinConstraint> rows = p.constraints;
  for (auto& r : rows) {
    if (r.rel == Rel::Lt) {
      r.lhs[t] = 1;
      r.rel = Rel::Le;
    }
  }
  rows.push_back(LinConstraint{{{t, 1}}, Rel::Le, 1});
  rows.push_back(LinConstraint{{{t, -1}}, Rel::Le, 0});
  names.push_back(t);
  std::sort(names.begin(), names.end());
  Solved s = solve_rows(rows, names, p.nonneg, {{t, -1}}, deadline);
  if (s.status != Tableau::Status::Optimal) throw InternalError("lp_feasible: bounded LP failed");
  if (s.point.at(t) > 0) {
    out.status = LpResult::Status::Feasible;
    s.point.erase(t);
    out.point = std::move(s.point);
    return out;
  }
  out.status = LpResult::Status::Infeasible;
  s.mu.resize(p.constraints.size());
  out.certificate = Certificate{std::move(s.mu)};
  return out;
}

std::optional<std::vector<LinConstraint>> tighten_integer_rows(
    const std::vector<LinConstraint>& rows) {
  std::vector<LinConstraint> out;
  for (const auto& r : rows) {
    LinConstraint c;
    c.rel = r.rel == Rel::Eq ? Rel::Eq : Rel::Le;
    Integer den = 1;
    for (const auto& [v, k] : r.lhs) {
      if (k != 0) den = lcm(den, Integer(k.get_den()));
    }
    Integer g = 0;
    for (const auto& [v, k] : r.lhs) {
      if (k == 0) continue;
      Integer ik = Integer(k * den);
      g = gcd(g, ik);
      c.lhs[v] = Rational(ik);
    }
    if (c.lhs.empty()) {
      bool ok = r.rel == Rel::Eq ? r.rhs == 0 : (r.rel == Rel::Le ? 0 <= r.rhs : 0 < r.rhs);
      if (!ok) return std::nullopt;
      continue;
    }
    Rational b = r.rhs * den / g;
    for (auto& [v, k] : c.lhs) k /= g;
    switch (r.rel) {
      case Rel::Eq:
        if (b.get_den() != 1) return std::nullopt;
        c.rhs = b;
        break;
      case Rel::Le:
        c.rhs = Rational(floor_q(b));
        break;
      case Rel::Lt:
        c.rhs = Rational(ceil_q(b) - 1);
        break;
    }
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  return out;
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(std::vector<std::string> names, std::set<std::string> nonneg, VarMap objective,
                 const Deadline& deadline)
      : names_(std::move(names)),
        nonneg_(std::move(nonneg)),
        objective_(std::move(objective)),
        deadline_(deadline) {
    integral_objective_ = std::all_of(objective_.begin(), objective_.end(),
                                      [](const auto& kv) { return kv.second.get_den() == 1; });
  }

  void search(std::vector<LinConstraint>& rows) {
    deadline_.check();
    Solved s = solve_rows(rows, names_, nonneg_, objective_, deadline_);
    if (s.status == Tableau::Status::Infeasible) return;
    if (s.status == Tableau::Status::Unbounded) {
      unbounded_ = true;
      return;
    }
    if (found_) {
      Rational bound = integral_objective_ ? Rational(ceil_q(s.value)) : s.value;
      if (bound >= best_) return;
    }
    const std::string* branch = nullptr;
    Rational best_dist = 1;
    Rational half(1, 2);
    for (const auto& name : names_) {
      const Rational& v = s.point.at(name);
      if (v.get_den() == 1) continue;
      Rational frac = v - Rational(floor_q(v));
      Rational dist = abs(frac - half);
      if (branch == nullptr || dist < best_dist) {
        branch = &name;
        best_dist = dist;
      }
    }
    if (branch == nullptr) {
      found_ = true;
      best_ = s.value;
      vertex_.clear();
      for (const auto& name : names_) vertex_[name] = Integer(s.point.at(name));
      return;
    }
    Rational v = s.point.at(*branch);
    rows.push_back(LinConstraint{{{*branch, 1}}, Rel::Le, Rational(floor_q(v))});
    search(rows);
    rows.back() = LinConstraint{{{*branch, -1}}, Rel::Le, Rational(-ceil_q(v))};
    search(rows);
    rows.pop_back();
  }

  bool found() const { return found_; }
  bool unbounded() const { return unbounded_; }
  const Rational& best() const { return best_; }
  const std::map<std::string, Integer>& vertex() const { return vertex_; }

 private:
  std::vector<std::string> names_;
  std::set<std::string> nonneg_;
  VarMap objective_;
  const Deadline& deadline_;
  bool integral_objective_ = true;
  bool found_ = false;
  bool unbounded_ = false;
  Rational best_;
  std::map<std::string, Integer> vertex_;
};

}  // namespace

IlpResult bb_inf(const LinProblem& p, const Deadline& deadline) {
  IlpResult out;
  auto rows = tighten_integer_rows(p.constraints);
  if (!rows) return out;
  std::vector<std::string> names = names_of(p);
  BranchAndBound bb(names, p.nonneg, p.objective, deadline);
  bb.search(*rows);
  if (bb.unbounded()) {
    // The relaxation is unbounded; the ILP is unbounded iff it is feasible.
    BranchAndBound feas(names, p.nonneg, {}, deadline);
    feas.search(*rows);
    if (feas.found()) out.status = IlpResult::Status::Unbounded;
    return out;
  }
  if (!bb.found()) return out;
  out.status = IlpResult::Status::Optimal;
  out.value = bb.best();
  out.vertex = bb.vertex();
  return out;
}

}  // namespace setcard::ilp
