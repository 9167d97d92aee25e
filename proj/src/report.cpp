#include "setcard/report.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "setcard/error.hpp"
#include "setcard/parser.hpp"
#include "setcard/printer.hpp"

namespace setcard {

using nlohmann::json;

SolveReport make_report(const SolveResult& r) {
  SolveReport out;
  out.verdict = verdict_name(r.verdict);
  out.millis = r.millis;
  for (const auto& a : r.answers) {
    AnswerReport ar;
    for (const auto& [name, t] : a.bindings) ar.bindings.emplace_back(name, to_string(t));
    for (const auto& c : a.residual) ar.residual.push_back(to_string(c));
    if (a.vertex) {
      std::map<std::string, std::string> v;
      for (const auto& [name, val] : *a.vertex) v[name] = val.get_str();
      ar.vertex = std::move(v);
    }
    out.answers.push_back(std::move(ar));
  }
  return out;
}

namespace {

json answer_json(const AnswerReport& a) {
  // Bindings keep their order, so they are a list of pairs.
  json bindings = json::array();
  for (const auto& [name, value] : a.bindings) bindings.push_back({{"var", name}, {"value", value}});
  json j = {{"bindings", bindings}, {"residual", a.residual}};
  if (a.vertex) j["vertex"] = *a.vertex;
  return j;
}

AnswerReport answer_from(const json& j) {
  AnswerReport a;
  for (const auto& b : j.at("bindings")) {
    a.bindings.emplace_back(b.at("var").get<std::string>(), b.at("value").get<std::string>());
  }
  a.residual = j.at("residual").get<std::vector<std::string>>();
  if (j.contains("vertex")) a.vertex = j.at("vertex").get<std::map<std::string, std::string>>();
  return a;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

}  // namespace

std::string to_json(const SolveReport& r, int indent) {
  json answers = json::array();
  for (const auto& a : r.answers) answers.push_back(answer_json(a));
  json j = {{"verdict", r.verdict}, {"answers", answers}, {"millis", r.millis}};
  return j.dump(indent);
}

SolveReport solve_report_from_json(const std::string& text) {
  json j = parse_json(text);
  try {
    SolveReport r;
    r.verdict = j.at("verdict").get<std::string>();
    r.millis = j.at("millis").get<double>();
    for (const auto& a : j.at("answers")) r.answers.push_back(answer_from(a));
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

bool BenchEntry::mismatch() const {
  return !expected.empty() && (verdict == "sat" || verdict == "unsat") && verdict != expected;
}

CollectionStats BenchReport::totals() const {
  CollectionStats t;
  for (const auto& [name, c] : collections) {
    t.sat += c.sat;
    t.unsat += c.unsat;
    t.unsolved += c.unsolved;
    t.errors += c.errors;
    t.mismatches += c.mismatches;
    t.millis += c.millis;
  }
  return t;
}

std::string to_json(const BenchReport& r, int indent) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"path", e.path},
                       {"collection", e.collection},
                       {"expected", e.expected},
                       {"verdict", e.verdict},
                       {"error", e.error},
                       {"millis", e.millis}});
  }
  json collections = json::object();
  for (const auto& [name, c] : r.collections) {
    collections[name] = {{"sat", c.sat},           {"unsat", c.unsat},
                         {"unsolved", c.unsolved}, {"errors", c.errors},
                         {"mismatches", c.mismatches}, {"millis", c.millis}};
  }
  return json{{"entries", entries}, {"collections", collections}}.dump(indent);
}

BenchReport bench_report_from_json(const std::string& text) {
  json j = parse_json(text);
  try {
    BenchReport r;
    for (const auto& e : j.at("entries")) {
      BenchEntry b;
      b.path = e.at("path").get<std::string>();
      b.collection = e.at("collection").get<std::string>();
      b.expected = e.at("expected").get<std::string>();
      b.verdict = e.at("verdict").get<std::string>();
      b.error = e.at("error").get<std::string>();
      b.millis = e.at("millis").get<double>();
      r.entries.push_back(std::move(b));
    }
    for (const auto& [name, c] : j.at("collections").items()) {
      CollectionStats s;
      s.sat = c.at("sat").get<long>();
      s.unsat = c.at("unsat").get<long>();
      s.unsolved = c.at("unsolved").get<long>();
      s.errors = c.at("errors").get<long>();
      s.mismatches = c.at("mismatches").get<long>();
      s.millis = c.at("millis").get<double>();
      r.collections[name] = s;
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

std::string expected_verdict(const std::string& text) {
  static const std::regex re(R"(%\s*expect:\s*(sat|unsat)\b)");
  std::smatch m;
  if (std::regex_search(text, m, re)) return m[1].str();
  return "";
}

BenchEntry run_bench_file(const std::string& path, const std::string& collection, const BenchOptions& opts) {
  BenchEntry e;
  e.path = path;
  e.collection = collection;
  std::ifstream in(path);
  if (!in) {
    e.verdict = "error";
    e.error = "cannot read " + path;
    return e;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  e.expected = expected_verdict(text);
  auto start = std::chrono::steady_clock::now();
  try {
    SolveOptions so;
    so.timeout_ms = opts.timeout_ms;
    so.infer_size = opts.infer_size;
    SolveResult r = sat_card(parse_formula(text), so);
    e.verdict = verdict_name(r.verdict);
  } catch (const Error& err) {
    e.verdict = "error";
    e.error = err.what();
  }
  e.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return e;
}

BenchReport run_bench(const std::string& dir, const BenchOptions& opts) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& de : fs::recursive_directory_iterator(dir)) {
    if (de.is_regular_file() && de.path().extension() == ".slog") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  BenchReport report;
  for (const auto& p : files) {
    fs::path rel = fs::relative(p, dir);
    std::string collection = std::distance(rel.begin(), rel.end()) > 1 ? rel.begin()->string() : ".";
    BenchEntry e = run_bench_file(p.string(), collection, opts);
    CollectionStats& s = report.collections[collection];
    if (e.verdict == "sat") {
      ++s.sat;
    } else if (e.verdict == "unsat") {
      ++s.unsat;
    } else if (e.verdict == "timeout") {
      ++s.unsolved;
    } else {
      ++s.errors;
    }
    if (e.mismatch()) ++s.mismatches;
    s.millis += e.millis;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace setcard
