#include "setcard/solver.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <sstream>

#include "setcard/error.hpp"
#include "setcard/printer.hpp"
#include "setcard/size_solver.hpp"

namespace setcard {

bool is_fresh_name(const std::string& name) {
  if (name.size() < 3 || name[0] != '_' || (name[1] != 'N' && name[1] != 'L')) return false;
  return std::isdigit(static_cast<unsigned char>(name[2])) != 0;
}

const char* verdict_name(SolveResult::Verdict v) {
  switch (v) {
    case SolveResult::Verdict::Sat:
      return "sat";
    case SolveResult::Verdict::Unsat:
      return "unsat";
    case SolveResult::Verdict::Timeout:
      return "timeout";
  }
  return "?";
}

Term GoalState::fresh_var(Sort s) { return Term::var("_N" + std::to_string(++fresh), s); }

void GoalState::add_store(const Constraint& c) {
  if (!store_index.insert(c).second) return;
  store.push_back(c);
  if (c.is_int()) int_changed = true;
}

bool GoalState::bind(const Term& var, const Term& value) {
  try {
    bindings.bind(var, value);
  } catch (const SortError&) {
    return false;
  }
  const std::string& name = var.name();
  // Requeued constraints go to the front so that a contradiction with the new
  // binding is found before any further branching.
  std::vector<Constraint> kept, woken;
  for (auto& c : store) {
    if (occurs(name, c)) {
      store_index.erase(c);
      woken.push_back(std::move(c));
    } else {
      kept.push_back(std::move(c));
    }
  }
  store = std::move(kept);
  for (auto it = woken.rbegin(); it != woken.rend(); ++it) pending.push_front(Formula::atom(*it));
  return true;
}

namespace {

bool answer_fields_equal(const Answer& a, const Answer& b) {
  if (a.bindings.size() != b.bindings.size() || a.residual != b.residual) return false;
  for (std::size_t i = 0; i < a.bindings.size(); ++i) {
    if (a.bindings[i].first != b.bindings[i].first || a.bindings[i].second != b.bindings[i].second) {
      return false;
    }
  }
  return true;
}

std::string masked(const Constraint& c) {
  return to_string(map_vars(c, [](const Term& v) -> const Term* {
    static thread_local Term slot = Term::empty_set();
    if (!is_fresh_name(v.name())) return nullptr;
    slot = Term::var("_", v.sort());
    return &slot;
  }));
}

Constraint orient(const Constraint& c) {
  if (c.pred != Pred::Neq) return c;
  std::string a = to_string(c.arg(0));
  std::string b = to_string(c.arg(1));
  Constraint flipped = Constraint::make(Pred::Neq, {c.arg(1), c.arg(0)});
  std::string ma = masked(c);
  std::string mb = masked(flipped);
  if (mb < ma || (mb == ma && b < a)) return flipped;
  return c;
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& names) {
  return map_vars(t, [&](const Term& v) -> const Term* {
    static thread_local Term slot = Term::empty_set();
    auto it = names.find(v.name());
    if (it == names.end()) return nullptr;
    slot = Term::var(it->second, v.sort());
    return &slot;
  });
}

Constraint rename_constraint(const Constraint& c, const std::map<std::string, std::string>& names) {
  std::vector<Term> args;
  for (const auto& a : c.args) args.push_back(rename_term(a, names));
  return Constraint::make(c.pred, std::move(args));
}

// Canonical answer: user variable aliases point at the smallest name, the
// residual is oriented, sorted and deduplicated, and fresh variables are
// renumbered by first appearance.
Answer make_answer(const GoalState& st, const std::vector<std::string>& user_vars) {
  std::vector<std::pair<std::string, Term>> binds;
  for (const auto& name : user_vars) {
    if (const Term* t = st.bindings.lookup(name)) binds.emplace_back(name, dedup_elements(*t));
  }
  std::vector<Constraint> residual = st.store;

  // Aliased user variables: X -> Y with Y unbound.
  std::map<std::string, std::vector<std::string>> classes;
  for (const auto& [name, t] : binds) {
    if (t.is_var() && !is_fresh_name(t.name())) classes[t.name()].push_back(name);
  }
  std::map<std::string, std::string> to_rep;
  for (const auto& [target, members] : classes) {
    std::string rep = std::min(target, *std::min_element(members.begin(), members.end()));
    if (rep != target) to_rep[target] = rep;
  }
  if (!to_rep.empty()) {
    std::vector<std::pair<std::string, Term>> out;
    for (const auto& [name, t] : binds) {
      Term v = rename_term(t, to_rep);
      if (v.is_var() && v.name() == name) continue;  // the new representative
      out.emplace_back(name, v);
    }
    for (const auto& [target, rep] : to_rep) {
      Sort s = Sort::Any;
      for (const auto& [name, t] : binds) {
        if (t.is_var() && t.name() == target) s = t.sort();
      }
      out.emplace_back(target, Term::var(rep, s));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    binds = std::move(out);
    for (auto& c : residual) c = rename_constraint(c, to_rep);
  }

  std::vector<std::pair<std::string, Constraint>> keyed;
  for (const auto& c : residual) {
    Constraint o = orient(c);
    keyed.emplace_back(masked(o) + "\x1f" + to_string(o), o);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());

  std::map<std::string, std::string> renumber;
  VarMapper visit = [&](const Term& v) -> const Term* {
    if (is_fresh_name(v.name()) && !renumber.count(v.name())) {
      renumber[v.name()] = "_N" + std::to_string(renumber.size() + 1);
    }
    return nullptr;
  };
  for (const auto& [name, t] : binds) map_vars(t, visit);
  for (const auto& [key, c] : keyed) map_vars(c, visit);

  Answer a;
  for (const auto& [name, t] : binds) a.bindings.emplace_back(name, rename_term(t, renumber));
  for (const auto& [key, c] : keyed) a.residual.push_back(rename_constraint(c, renumber));
  if (st.vertex) {
    std::map<std::string, Integer> v;
    std::set<std::string> users(user_vars.begin(), user_vars.end());
    for (const auto& [name, val] : *st.vertex) {
      auto it = renumber.find(name);
      if (it != renumber.end()) {
        v[it->second] = val;
      } else if (users.count(name)) {
        v[name] = val;
      }
    }
    a.vertex = std::move(v);
  }
  return a;
}

std::string answer_key(const Answer& a) {
  Answer copy = a;
  copy.vertex.reset();
  return to_string(copy);
}

struct Frame {
  GoalState state;
  std::vector<Formula> alternatives;
  std::size_t next = 1;
};

class Search {
 public:
  Search(const SolveOptions& opts, Deadline deadline, std::vector<std::string> user_vars)
      : opts_(opts), deadline_(deadline), user_vars_(std::move(user_vars)) {}

  // Returns true when the search space was exhausted.
  bool run(GoalState st, std::vector<Answer>& answers) {
    std::size_t limit = opts_.max_solutions < 0 ? SIZE_MAX
                        : opts_.max_solutions == 0
                            ? 1
                            : static_cast<std::size_t>(opts_.max_solutions);
    for (;;) {
      if (drive(st)) {
        Answer a = make_answer(st, user_vars_);
        if (seen_.insert(answer_key(a)).second) {
          answers.push_back(std::move(a));
          if (answers.size() >= limit) return stack_.empty();
        }
      }
      if (!backtrack(st)) return true;
    }
  }

 private:
  void branch(GoalState& st, std::vector<Formula> alts) {
    Formula first = alts.front();
    stack_.push_back(Frame{st, std::move(alts), 1});
    st.pending.push_front(std::move(first));
  }

  bool backtrack(GoalState& st) {
    while (!stack_.empty()) {
      Frame& top = stack_.back();
      if (top.next < top.alternatives.size()) {
        Formula alt = top.alternatives[top.next++];
        if (top.next == top.alternatives.size()) {
          st = std::move(top.state);
          stack_.pop_back();
        } else {
          st = top.state;
        }
        st.pending.push_front(std::move(alt));
        return true;
      }
      stack_.pop_back();
    }
    return false;
  }

  // Runs st to a leaf. True when the leaf is an answer; false on failure.
  // Choice points are pushed on the way.
  bool drive(GoalState& st) {
    for (;;) {
      while (!st.pending.empty() || !st.deferred.empty()) {
        deadline_.check();
        bool deferred = st.pending.empty();
        std::deque<Formula>& queue = deferred ? st.deferred : st.pending;
        Formula f = queue.front();
        queue.pop_front();
        try {
          f = st.bindings.apply(f);
        } catch (const SortError&) {
          return false;
        }
        switch (f.kind()) {
          case Formula::Kind::True:
            break;
          case Formula::Kind::False:
            return false;
          case Formula::Kind::And: {
            const auto& ch = f.children();
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) st.pending.push_front(*it);
            break;
          }
          case Formula::Kind::Or:
            if (!deferred) {
              st.deferred.push_back(f);
            } else {
              branch(st, f.children());
            }
            break;
          case Formula::Kind::Atom: {
            std::vector<Term> args;
            for (const auto& a : f.constraint().args) args.push_back(dedup_elements(a));
            const Constraint c = Constraint::make(f.constraint().pred, std::move(args));
            const long fresh_before = st.fresh;
            Rewrite r = rewrite_constraint(c, st);
            switch (r.kind) {
              case Rewrite::Kind::Irreducible:
                st.add_store(c);
                break;
              case Rewrite::Kind::Bind:
                if (!st.bind(*r.var, *r.value)) return false;
                break;
              case Rewrite::Kind::Alternatives:
                if (r.alternatives.empty()) return false;
                if (r.alternatives.size() == 1) {
                  st.pending.push_front(std::move(r.alternatives.front()));
                } else if (!deferred) {
                  st.fresh = fresh_before;
                  st.deferred.push_back(Formula::atom(c));
                } else {
                  branch(st, std::move(r.alternatives));
                }
                break;
            }
            break;
          }
        }
      }

      if (opts_.lp_pruning && st.int_changed) {
        st.int_changed = false;
        ZaProblem z;
        for (const auto& c : st.store) translate_int(c, z);
        if (!int_lp_feasible(z, deadline_)) return false;
      }
      if (remove_neq(st)) continue;

      std::vector<Constraint> phi1;
      for (const auto& c : st.store) {
        if (c.is_int() || c.pred == Pred::Un || c.pred == Pred::Disj || c.pred == Pred::Size ||
            c.pred == Pred::Inters) {
          phi1.push_back(c);
        }
      }
      ZaProblem z = translate(phi1);
      SizeOptions so;
      so.infer = opts_.infer_size;
      so.deadline = deadline_;
      SizeResult res = solve_za(z, so);
      if (res.status == SizeResult::Status::Unsat) return false;
      if (z.has_sizes()) st.vertex = res.vertex;
      if (opts_.fix_size && pin_sizes(st, res)) continue;
      return true;
    }
  }

  // Replaces a disequation on a set variable that takes part in un, size or
  // inters by explicit witnesses. Returns true when a branch was opened.
  bool remove_neq(GoalState& st) {
    std::set<std::string> triggers;
    for (const auto& c : st.store) {
      if (c.pred != Pred::Un && c.pred != Pred::Size && c.pred != Pred::Inters) continue;
      for (const auto& a : c.args) {
        if (a.is_var(Sort::Set)) triggers.insert(a.name());
      }
    }
    if (triggers.empty()) return false;
    for (std::size_t i = 0; i < st.store.size(); ++i) {
      const Constraint& c = st.store[i];
      if (c.pred != Pred::Neq) continue;
      const Term* a = nullptr;
      const Term* t = nullptr;
      if (c.arg(0).is_var(Sort::Set) && triggers.count(c.arg(0).name())) {
        a = &c.arg(0);
        t = &c.arg(1);
      } else if (c.arg(1).is_var(Sort::Set) && triggers.count(c.arg(1).name())) {
        a = &c.arg(1);
        t = &c.arg(0);
      } else {
        continue;
      }
      Term av = *a;
      Term tv = *t;
      st.store_index.erase(c);
      st.store.erase(st.store.begin() + static_cast<long>(i));
      Term n = st.fresh_var(Sort::Any);
      std::vector<Formula> alts{
          Formula::conj({Formula::atom(Constraint::in(n, av)), Formula::atom(Constraint::nin(n, tv))}),
          Formula::conj({Formula::atom(Constraint::in(n, tv)), Formula::atom(Constraint::nin(n, av))}),
      };
      // With a set-sorted t the case A = {} and t /= {} is already covered
      // by the second alternative.
      if (sort_of(tv) != Sort::Set) {
        alts.push_back(Formula::conj({Formula::atom(Constraint::eq(av, Term::empty_set())),
                                      Formula::atom(Constraint::neq(tv, Term::empty_set()))}));
      }
      branch(st, std::move(alts));
      return true;
    }
    return false;
  }

  // Minimal-solution mode: fixes every variable size argument to its vertex
  // value and switches on the expansion of constant sizes. Returns true when
  // this queued new work.
  bool pin_sizes(GoalState& st, const SizeResult& res) {
    bool queued = false;
    std::set<std::string> pinned;
    for (const auto& c : st.store) {
      if (c.pred != Pred::Size || !c.arg(1).is_var()) continue;
      const std::string& m = c.arg(1).name();
      auto it = res.vertex.find(m);
      if (it == res.vertex.end() || !pinned.insert(m).second) continue;
      st.pending.push_back(Formula::atom(Constraint::eq(c.arg(1), Term::int_const(it->second))));
      queued = true;
    }
    if (!st.const3) {
      st.const3 = true;
      std::vector<Constraint> kept;
      for (auto& c : st.store) {
        if (c.pred == Pred::Size) {
          st.store_index.erase(c);
          st.pending.push_back(Formula::atom(c));
          queued = true;
        } else {
          kept.push_back(std::move(c));
        }
      }
      st.store = std::move(kept);
    }
    return queued;
  }

  const SolveOptions& opts_;
  Deadline deadline_;
  std::vector<std::string> user_vars_;
  std::vector<Frame> stack_;
  std::set<std::string> seen_;
};

}  // namespace

bool operator==(const Answer& a, const Answer& b) {
  return answer_fields_equal(a, b) && a.vertex == b.vertex;
}

std::string to_string(const Answer& a) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, t] : a.bindings) {
    if (!first) out << ",\n";
    out << name << " = " << to_string(t);
    first = false;
  }
  if (!a.residual.empty()) {
    if (!first) out << "\n";
    out << "Constraint: ";
    for (std::size_t i = 0; i < a.residual.size(); ++i) {
      if (i) out << ", ";
      out << to_string(a.residual[i]);
    }
    first = false;
  }
  if (first) out << "true";
  return out.str();
}

SolveResult sat_card(const Formula& f, const SolveOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  Deadline deadline = opts.timeout_ms > 0 ? Deadline::after_ms(opts.timeout_ms) : Deadline();

  std::map<std::string, Sort> vars;
  collect_vars(f, vars);
  std::vector<std::string> user_vars;
  GoalState st;
  for (const auto& [name, sort] : vars) {
    if (!is_fresh_name(name)) {
      user_vars.push_back(name);
    } else if (name[1] == 'N') {
      st.fresh = std::max(st.fresh, std::stol(name.substr(2)));
    }
  }
  st.pending.push_back(gen_size_leq(f));

  SolveResult result;
  Search search(opts, deadline, user_vars);
  try {
    search.run(std::move(st), result.answers);
    result.verdict = result.answers.empty() ? SolveResult::Verdict::Unsat : SolveResult::Verdict::Sat;
  } catch (const TimeoutError&) {
    result.verdict = result.answers.empty() ? SolveResult::Verdict::Timeout : SolveResult::Verdict::Sat;
  }
  result.millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SolveResult fix_size(const Formula& f, SolveOptions opts) {
  opts.fix_size = true;
  return sat_card(f, opts);
}

}  // namespace setcard
