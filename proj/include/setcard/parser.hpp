#pragma once

#include <memory>
#include <string>
#include <vector>

#include "setcard/formula.hpp"

namespace setcard {

/// Untyped syntax tree. Sorts are assigned only after macro expansion, when
/// every variable occurrence of the goal is known.
struct SyntaxTerm {
  enum class Kind { Var, Empty, Cons, Int, Neg, Add, Sub, Mul, Ur };
  Kind kind = Kind::Var;
  std::string name;  // variable name or functor
  Integer value = 0;
  std::vector<SyntaxTerm> args;  // Cons: elem, rest
  int line = 0;
  int column = 0;
};

struct SyntaxFormula {
  enum class Kind { True, False, Atom, Call, And, Or };
  Kind kind = Kind::True;
  std::string name;  // predicate or macro name
  std::vector<SyntaxTerm> args;
  std::vector<SyntaxFormula> children;
  int line = 0;
  int column = 0;
};

struct MacroDef {
  std::string name;
  std::vector<std::string> params;
  SyntaxFormula body;
};

struct SourceScript {
  std::vector<MacroDef> macros;
  SyntaxFormula goal;
};

// Throws ParseError with the 1-based line and column of the offending token.
SourceScript parse(const std::string& text);

// Inlines every macro call (locals renamed _L<k>_<Name> per call site),
// infers sorts and builds the goal formula. Throws UnknownMacro,
// ArityMismatch, SortError or NonLinearError.
Formula expand_macros(const SourceScript& s);

// parse followed by expand_macros.
Formula parse_formula(const std::string& text);

// A single term, sorts inferred from the term alone.
Term parse_term(const std::string& text);

}  // namespace setcard
