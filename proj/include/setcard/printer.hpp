#pragma once

#include <ostream>
#include <string>

#include "setcard/formula.hpp"

namespace setcard {

// Concrete syntax accepted back by the parser: {a,b / R}, un(A,B,C),
// X neq Y, K =< 3, N is M - 1, ...
std::string to_string(const Term& t);
std::string to_string(const Constraint& c);
std::string to_string(const Formula& f);

inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }
inline std::ostream& operator<<(std::ostream& os, const Constraint& c) {
  return os << to_string(c);
}
inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }

}  // namespace setcard
