#include "setcard/sat_enum.hpp"

#include <algorithm>
#include <cstdlib>

namespace setcard::sat {

namespace {

class Enumerator {
 public:
  Enumerator(const Cnf& cnf, const Deadline& deadline)
      : n_(cnf.num_vars), clauses_(cnf.clauses), value_(n_ + 1, 0), deadline_(deadline) {
    // Exclude the all-false assignment up front.
    Clause some_true;
    for (int v = 1; v <= n_; ++v) some_true.push_back(v);
    clauses_.push_back(some_true);
  }

  void run() { search(); }
  std::vector<Assignment>& models() { return models_; }

 private:
  int lit_value(int lit) const {
    int v = value_[std::abs(lit)];
    return lit > 0 ? v : -v;
  }

  void assign(int lit) {
    value_[std::abs(lit)] = lit > 0 ? 1 : -1;
    trail_.push_back(std::abs(lit));
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = 0;
      trail_.pop_back();
    }
  }

  // Returns false on conflict.
  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : clauses_) {
        int unassigned = 0;
        int last = 0;
        bool sat = false;
        for (int lit : c) {
          int v = lit_value(lit);
          if (v > 0) {
            sat = true;
            break;
          }
          if (v == 0) {
            ++unassigned;
            last = lit;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          assign(last);
          changed = true;
        }
      }
    }
    return true;
  }

  void search() {
    deadline_.check();
    std::size_t mark = trail_.size();
    if (!propagate()) {
      undo_to(mark);
      return;
    }
    int pick = 0;
    for (int v = 1; v <= n_; ++v) {
      if (value_[v] == 0) {
        pick = v;
        break;
      }
    }
    if (pick == 0) {
      Assignment a(n_);
      Clause block;
      for (int v = 1; v <= n_; ++v) {
        a[v - 1] = value_[v] > 0;
        block.push_back(value_[v] > 0 ? -v : v);
      }
      models_.push_back(std::move(a));
      clauses_.push_back(std::move(block));
      undo_to(mark);
      return;
    }
    for (int lit : {pick, -pick}) {
      std::size_t inner = trail_.size();
      assign(lit);
      search();
      undo_to(inner);
    }
    undo_to(mark);
  }

  int n_;
  std::vector<Clause> clauses_;
  std::vector<int> value_;
  std::vector<int> trail_;
  std::vector<Assignment> models_;
  const Deadline& deadline_;
};

}  // namespace

std::vector<Assignment> sat_enumerate(const Cnf& cnf, const Deadline& deadline) {
  if (cnf.num_vars == 0) return {};
  Enumerator e(cnf, deadline);
  e.run();
  auto& models = e.models();
  std::sort(models.begin(), models.end(), [](const Assignment& a, const Assignment& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return std::move(models);
}

}  // namespace setcard::sat
