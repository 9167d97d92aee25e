#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "setcard/solver.hpp"

namespace setcard {

/// Printable form of a SolveResult, with every term already rendered.
struct AnswerReport {
  std::vector<std::pair<std::string, std::string>> bindings;
  std::vector<std::string> residual;
  std::optional<std::map<std::string, std::string>> vertex;

  friend bool operator==(const AnswerReport&, const AnswerReport&) = default;
};

struct SolveReport {
  std::string verdict;  // sat, unsat or timeout
  std::vector<AnswerReport> answers;
  double millis = 0;

  friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

SolveReport make_report(const SolveResult& r);
std::string to_json(const SolveReport& r, int indent = -1);
// Throws Error on malformed input.
SolveReport solve_report_from_json(const std::string& text);

struct BenchEntry {
  std::string path;
  std::string collection;
  std::string expected;  // sat, unsat or empty when the file has no annotation
  std::string verdict;   // sat, unsat, timeout or error
  std::string error;
  double millis = 0;

  bool mismatch() const;
  friend bool operator==(const BenchEntry&, const BenchEntry&) = default;
};

struct CollectionStats {
  long sat = 0;
  long unsat = 0;
  long unsolved = 0;  // timeouts
  long errors = 0;
  long mismatches = 0;
  double millis = 0;

  long total() const { return sat + unsat + unsolved + errors; }
  friend bool operator==(const CollectionStats&, const CollectionStats&) = default;
};

struct BenchReport {
  std::vector<BenchEntry> entries;
  std::map<std::string, CollectionStats> collections;

  CollectionStats totals() const;
  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

std::string to_json(const BenchReport& r, int indent = -1);
BenchReport bench_report_from_json(const std::string& text);

struct BenchOptions {
  long timeout_ms = 2000;  // 0 disables the timeout
  bool infer_size = true;
};

// Expected verdict from a "% expect: sat" or "% expect: unsat" line, or an
// empty string.
std::string expected_verdict(const std::string& text);

// Solves one script and records the outcome.
BenchEntry run_bench_file(const std::string& path, const std::string& collection, const BenchOptions& opts);

// Every .slog file below `dir`, in path order. The collection of a file is
// the first directory below `dir` on its path ("." for files directly in
// `dir`).
BenchReport run_bench(const std::string& dir, const BenchOptions& opts);

}  // namespace setcard
