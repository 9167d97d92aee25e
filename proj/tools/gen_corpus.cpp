// gen_corpus OUT_DIR
//
// Writes the bundled benchmark corpus: one .slog file per formula, grouped in
// the collections tests, properties, cvc4, kuncak, reachability and examples.
// Each file starts with "% expect: sat|unsat" and a "% verdict:" line naming
// how the verdict was obtained:
//   construction  known from the shape of the formula, and confirmed by the
//                 bounded model search whenever that search fits its budget;
//   oracle        bounded model search (a model, or none within scope).
// The solver itself is never consulted. Exits 1 if the model search
// contradicts a verdict known by construction.

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "../tests/formula_gen.hpp"
#include "setcard/oracle.hpp"
#include "setcard/parser.hpp"
#include "setcard/printer.hpp"

namespace fs = std::filesystem;
using namespace setcard;

namespace {

struct Item {
  std::string collection;
  std::string name;
  std::string text;
  std::string expected;  // empty: decided by the oracle
  Scope scope;
  bool oracle_check = true;
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string num(int i) { return std::to_string(i); }

// un(A1,A2,U2) & un(U2,A3,U3) & ... & un(U(n-1),An,Un)
std::vector<std::string> union_chain(int n) {
  std::vector<std::string> atoms{"un(A1,A2,U2)"};
  for (int i = 3; i <= n; ++i) atoms.push_back("un(U" + num(i - 1) + ",A" + num(i) + ",U" + num(i) + ")");
  return atoms;
}

std::string size_sum(int n, std::vector<std::string>& atoms) {
  std::vector<std::string> terms;
  for (int i = 1; i <= n; ++i) {
    atoms.push_back("size(A" + num(i) + ",N" + num(i) + ")");
    terms.push_back("N" + num(i));
  }
  return join(terms, " + ");
}

std::string formula(const std::vector<std::string>& atoms) { return join(atoms, " & ") + " ."; }

void tests_collection(std::vector<Item>& out) {
  // Random formulas of the same shape as the agreement property, with
  // verdicts from the model search.
  int kept = 0;
  for (unsigned seed = 5000; kept < 60; ++seed) {
    testing::FormulaGen gen(seed);
    Item it{"tests", "random_" + num(static_cast<int>(seed)), to_string(gen.next()) + " .", "", Scope()};
    out.push_back(it);
    ++kept;
  }
}

void properties_collection(std::vector<Item>& out) {
  // Each law is stated negated (unsat); its mutant drops or flips the part
  // that makes it a law and is decided by the model search.
  const std::vector<std::pair<std::string, std::string>> laws = {
      {"un(A,B,C) & un(B,A,D) & C neq D", "un(A,B,C) & un(B,D,A) & C neq D"},
      {"un(A,B,C) & X in C & X nin A & X nin B", "un(A,B,C) & X in A & X nin B"},
      {"inters(A,B,C) & X in C & X nin A", "inters(A,B,C) & X in A & X nin C"},
      {"subset(A,B) & subset(B,C) & X in A & X nin C", "subset(A,B) & subset(C,B) & X in A & X nin C"},
      {"un(A,B,C) & size(A,N) & size(C,M) & M < N", "un(A,B,C) & size(A,N) & size(C,M) & M > N"},
      {"inters(A,B,C) & size(C,N) & size(A,M) & N > M", "inters(A,B,C) & size(C,N) & size(A,M) & N < M"},
      {"disj(A,B) & X in A & X in B", "disj(A,B) & X in A & X nin B"},
      {"un(A,B,C) & disj(A,B) & size(A,N1) & size(B,N2) & size(C,N3) & N3 < N1 + N2",
       "un(A,B,C) & size(A,N1) & size(B,N2) & size(C,N3) & N3 < N1 + N2"},
      {"subset(A,B) & subset(B,A) & A neq B", "subset(A,B) & A neq B"},
      {"un(A,A,B) & A neq B", "un(A,C,B) & A neq B"},
      {"inters(A,A,B) & A neq B", "inters(A,C,B) & A neq B"},
      {"un(A,{},B) & A neq B", "un(A,{a},B) & A neq B"},
      {"size(A,N) & N < 0", "size(A,N) & N < 1"},
      {"size({X/A},N) & N = 0", "size({X/A},N) & N = 1"},
      {"un(A,B,C) & inters(A,B,D) & size(A,N1) & size(B,N2) & size(C,N3) & size(D,N4) & N3 + N4 < N1 + N2",
       "un(A,B,C) & inters(A,B,D) & size(A,N1) & size(B,N2) & size(C,N3) & size(D,N4) & N3 < N1 + N2"},
      {"size(A,N) & size(A,M) & N neq M", "size(A,N) & size(B,M) & N neq M"},
      {"subset(A,B) & size(A,N) & size(B,M) & N > M", "subset(A,B) & size(A,N) & size(B,M) & N < M"},
      {"X in A & size(A,0)", "X in A & size(A,1)"},
      {"un(A,B,C) & C = {} & A neq {}", "un(A,B,C) & B = {} & A neq {}"},
      {"disj(A,B) & inters(A,B,C) & C neq {}", "disj(A,C) & inters(A,B,C) & B neq {}"},
      {"diff(A,B,C) & X in C & X in B", "diff(A,B,C) & X in A & X in B"},
      {"diff(A,B,C) & un(C,B,D) & X in A & X nin D", "diff(A,B,C) & un(C,B,D) & X in D & X nin A"},
      {"un(A,B,C) & un(C,D,E) & un(B,D,F) & un(A,F,G) & E neq G",
       "un(A,B,C) & un(C,D,E) & un(B,D,F) & un(A,D,G) & E neq G"},
      {"{X,Y} = {a} & X neq Y", "{X,Y} = {a,b} & X neq Y"},
      {"size(A,N) & size(B,M) & un(A,B,C) & size(C,K) & K < N", "size(A,N) & size(B,M) & un(A,B,C) & size(C,K) & K < N + M"},
  };
  for (std::size_t i = 0; i < laws.size(); ++i) {
    out.push_back({"properties", "law_" + num(static_cast<int>(i)), laws[i].first + " .", "unsat", Scope()});
    out.push_back({"properties", "mutant_" + num(static_cast<int>(i)), laws[i].second + " .", "", Scope()});
  }
}

void cvc4_collection(std::vector<Item>& out) {
  for (int n = 2; n <= 21; ++n) {
    auto atoms = union_chain(n);
    atoms.push_back("X in U" + num(n));
    out.push_back({"cvc4", "member_" + num(n), formula(atoms), "sat", Scope(), n <= 3});
  }
  for (int n = 2; n <= 16; ++n) {
    auto atoms = union_chain(n);
    atoms.push_back("X in U" + num(n));
    for (int i = 1; i <= n; ++i) atoms.push_back("X nin A" + num(i));
    out.push_back({"cvc4", "nonmember_" + num(n), formula(atoms), "unsat", Scope(), n <= 3});
  }
  for (int n = 2; n <= 16; ++n) {
    // n singletons cover at most n elements.
    auto atoms = union_chain(n);
    for (int i = 1; i <= n; ++i) atoms.push_back("size(A" + num(i) + ",1)");
    atoms.push_back("size(U" + num(n) + ",K)");
    atoms.push_back("K > " + num(n));
    out.push_back({"cvc4", "singletons_" + num(n), formula(atoms), "unsat", Scope(), false});
  }
}

void kuncak_collection(std::vector<Item>& out) {
  for (int n = 2; n <= 20; ++n) {
    auto atoms = union_chain(n);
    std::string sum = size_sum(n, atoms);
    atoms.push_back("size(U" + num(n) + ",M)");
    atoms.push_back(sum + " < M");
    out.push_back({"kuncak", "union_sum_lt_" + num(n), formula(atoms), "unsat", Scope(), false});
  }
  for (int n = 2; n <= 12; ++n) {
    // Satisfied by empty sets.
    auto atoms = union_chain(n);
    std::string sum = size_sum(n, atoms);
    atoms.push_back("size(U" + num(n) + ",M)");
    atoms.push_back("M =< " + sum);
    out.push_back({"kuncak", "union_sum_leq_" + num(n), formula(atoms), "sat", Scope(), false});
  }
  for (int n = 2; n <= 6; ++n) {
    // A partition: pairwise disjoint parts whose union has one element more
    // than the parts together (unsat) or exactly as many (sat).
    for (int extra = 0; extra <= 1; ++extra) {
      auto atoms = union_chain(n);
      for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) atoms.push_back("disj(A" + num(i) + ",A" + num(j) + ")");
      }
      std::string sum = size_sum(n, atoms);
      atoms.push_back("size(U" + num(n) + ",M)");
      atoms.push_back("M = " + sum + (extra ? " + 1" : ""));
      out.push_back({"kuncak", "partition_" + num(n) + (extra ? "_plus_one" : "_exact"), formula(atoms),
                     extra ? "unsat" : "sat", Scope(), n <= 2});
    }
  }
  // Inclusion-exclusion on constants: |A u B| = |A| + |B| - |A n B|.
  const std::vector<std::array<int, 3>> sizes = {{1, 1, 0}, {1, 1, 1}, {2, 1, 1}, {2, 2, 1}, {2, 2, 0},
                                                 {3, 1, 0}, {3, 2, 2}, {2, 3, 1}, {3, 3, 2}, {1, 2, 0}};
  for (const auto& [a, b, c] : sizes) {
    for (int off = 0; off <= 1; ++off) {
      std::vector<std::string> atoms = {"size(A," + num(a) + ")", "size(B," + num(b) + ")", "inters(A,B,C)",
                                        "size(C," + num(c) + ")", "un(A,B,D)",
                                        "size(D," + num(a + b - c + off) + ")"};
      Scope s;
      s.ur_universe = {"a", "b", "c", "d", "e", "f"};
      s.elem_lo = 1;
      s.elem_hi = 0;
      s.max_nest = 0;
      s.max_width = 6;
      s.int_lo = 0;
      s.int_hi = 6;
      out.push_back({"kuncak", "incl_excl_" + num(a) + num(b) + num(c) + (off ? "_off" : ""), formula(atoms),
                     off ? "unsat" : "sat", s, a + b <= 4});
    }
  }
}

void reachability_collection(std::vector<Item>& out) {
  // Walks of exactly L edges in small random graphs. Edges are pairs [u,v];
  // the verdict comes from counting walks.
  std::mt19937 rng(7);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  for (int k = 0; k < 50; ++k) {
    int nodes = 4 + pick(3);
    int n_edges = nodes + pick(3);
    std::set<std::pair<int, int>> edges;
    while (static_cast<int>(edges.size()) < n_edges) {
      int u = pick(nodes), v = pick(nodes);
      if (u != v) edges.insert({u, v});
    }
    int from = pick(nodes), to = pick(nodes), len = 1 + pick(3);
    // reach[v]: some walk of the current length from `from` ends at v.
    std::vector<bool> reach(nodes, false);
    reach[from] = true;
    for (int step = 0; step < len; ++step) {
      std::vector<bool> next(nodes, false);
      for (const auto& [u, v] : edges) {
        if (reach[u]) next[v] = true;
      }
      reach = next;
    }
    auto node = [](int i) { return "n" + num(i); };
    std::vector<std::string> edge_text;
    for (const auto& [u, v] : edges) edge_text.push_back("[" + node(u) + "," + node(v) + "]");
    std::vector<std::string> atoms = {"E = {" + join(edge_text, ",") + "}"};
    std::string prev = node(from);
    for (int step = 1; step <= len; ++step) {
      std::string cur = step == len ? node(to) : "X" + num(step);
      atoms.push_back("[" + prev + "," + cur + "] in E");
      prev = cur;
    }
    Scope s;
    s.ur_universe.clear();
    for (int i = 0; i < nodes; ++i) s.ur_universe.push_back(node(i));
    out.push_back({"reachability", "walk_" + num(k), formula(atoms), reach[to] ? "sat" : "unsat", s});
  }
}

const char* const kCache =
    "cache(Cont,N,Cache) :-\n"
    "  0 < N & size(Cont,S) &\n"
    "  (S =< N & Cache = Cont\n"
    "   or\n"
    "   S > N & un(Rest,Cache,Cont) & disj(Rest,Cache) & size(Cache,N)).\n";

void examples_collection(std::vector<Item>& out) {
  auto add = [&](const std::string& name, const std::string& text, const std::string& expected, bool check) {
    out.push_back({"examples", name, text, expected, Scope(), check});
  };
  add("union_sizes_gt", "un(A,B,C) & size(A,M1) & size(B,M2) & size(C,M3) & M3 > M1 + M2 .", "unsat", true);
  add("union_sizes_leq", "un(A,B,C) & size(A,M1) & size(B,M2) & size(C,M3) & M3 =< M1 + M2 .", "sat", true);
  add("integer_gap", "X > Y & X < Y + 1 .", "unsat", true);
  add("union_functional", "un(A,B,C) & un(A,B,D) & C neq D .", "unsat", true);
  add("nested_singletons", "size({{X},{Y}},N) .", "sat", true);
  add("subset_equal_sizes", "subset(A,B) & size(A,N) & size(B,N) & A neq B .", "unsat", true);
  add("insert_vc",
      "sl_insert(Content,Size,E,Content_,Size_) :-\n"
      "  un(Content,E,Content_) & Size_ is Size + 1.\n"
      "size(E,1) & inters(E,Content,M1) & size(M1,0) &\n"
      "size(Content,Size) &\n"
      "sl_insert(Content,Size,E,Content_,Size_) &\n"
      "(Size_ =< 0 or size(Content_,M2) & M2 neq Size_).\n",
      "unsat", true);
  add("cache_query", std::string(kCache) + "cache({1,b,[2,q]},2,Cache).\n", "sat", true);
  add("cache_property", std::string(kCache) + "cache(Cont,N,Cache) & size(Cont,M) & N < M & Cache = {}.\n", "unsat",
      true);
  add("minimal_subset", "size(A,M) & 1 =< M & subset(B,A) & size(B,N) & 5 =< N .", "sat", false);
  add("union_nonempty", "un(A,B,C) & N + K > 5 & size(C,N) & B neq {} .", "sat", true);
  add("empty_membership", "1 in {} .", "unsat", true);
  add("reflexive", "X = X .", "sat", true);
  add("absorption", "{1} = {1,1} .", "sat", true);
  auto chain = union_chain(20);
  std::string sum = size_sum(20, chain);
  chain.push_back("size(U20,M)");
  chain.push_back(sum + " < M");
  add("union_20", formula(chain), "unsat", false);
  auto member = union_chain(21);
  member.push_back("X in U21");
  add("member_21", formula(member), "sat", false);
}

// "sat"/"unsat" from the model search, or "" when it exceeds its budget.
std::string oracle_verdict(const Formula& f, const Scope& s) {
  try {
    return oracle_sat(f, s).sat ? "sat" : "unsat";
  } catch (const ScopeTooLarge&) {
    return "";
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_corpus OUT_DIR\n";
    return 2;
  }
  std::vector<Item> items;
  tests_collection(items);
  properties_collection(items);
  cvc4_collection(items);
  kuncak_collection(items);
  reachability_collection(items);
  examples_collection(items);

  int failures = 0;
  for (auto& it : items) {
    Formula f = parse_formula(it.text);
    std::string how = "construction";
    if (it.expected.empty()) {
      it.expected = oracle_verdict(f, it.scope);
      how = "oracle";
      if (it.expected.empty()) {
        std::cerr << "no verdict for " << it.collection << "/" << it.name << "\n";
        ++failures;
        continue;
      }
    } else if (it.oracle_check) {
      std::string o = oracle_verdict(f, it.scope);
      if (!o.empty() && o != it.expected) {
        std::cerr << "model search contradicts " << it.collection << "/" << it.name << ": " << o << "\n";
        ++failures;
        continue;
      }
    }
    fs::path p = fs::path(argv[1]) / it.collection / (it.name + ".slog");
    fs::create_directories(p.parent_path());
    std::ofstream(p) << "% expect: " << it.expected << "\n% verdict: " << how << "\n" << it.text
                     << (it.text.back() == '\n' ? "" : "\n");
  }
  std::cout << items.size() - failures << " files written\n";
  return failures ? 1 : 0;
}
