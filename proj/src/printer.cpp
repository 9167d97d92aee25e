#include "setcard/printer.hpp"

namespace setcard {

namespace {

bool is_sum(const Term& t) {
  return t.kind() == Term::Kind::IntAdd || t.kind() == Term::Kind::IntSub;
}

void print(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      out += t.name();
      return;
    case Term::Kind::EmptySet:
      out += "{}";
      return;
    case Term::Kind::SetCons: {
      out += '{';
      const Term* cur = &t;
      bool first = true;
      while (cur->is_set_cons()) {
        if (!first) out += ',';
        first = false;
        print(cur->elem(), out);
        cur = &cur->rest();
      }
      if (!cur->is_empty_set()) {
        out += '/';
        print(*cur, out);
      }
      out += '}';
      return;
    }
    case Term::Kind::IntConst:
      out += t.value().get_str();
      return;
    case Term::Kind::IntNeg: {
      const Term& a = t.args()[0];
      out += '-';
      if (a.is_var()) {
        print(a, out);
      } else {
        out += '(';
        print(a, out);
        out += ')';
      }
      return;
    }
    case Term::Kind::IntAdd:
    case Term::Kind::IntSub: {
      print(t.args()[0], out);
      out += t.kind() == Term::Kind::IntAdd ? " + " : " - ";
      const Term& r = t.args()[1];
      bool paren = is_sum(r) || r.kind() == Term::Kind::IntNeg ||
                   (r.is_int_const() && r.value() < 0);
      if (paren) out += '(';
      print(r, out);
      if (paren) out += ')';
      return;
    }
    case Term::Kind::IntScale:
      out += t.value().get_str();
      out += '*';
      print(t.args()[0], out);
      return;
    case Term::Kind::UrAtom:
      if (t.name() == "list") {
        out += '[';
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          if (i) out += ',';
          print(t.args()[i], out);
        }
        out += ']';
        return;
      }
      out += t.name();
      if (!t.args().empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          if (i) out += ',';
          print(t.args()[i], out);
        }
        out += ')';
      }
      return;
  }
}

bool infix(Pred p) {
  switch (p) {
    case Pred::Eq:
    case Pred::Neq:
    case Pred::In:
    case Pred::Nin:
    case Pred::Leq:
    case Pred::Lt:
    case Pred::Gt:
    case Pred::Geq:
      return true;
    default:
      return false;
  }
}

void print(const Formula& f, std::string& out, bool in_conj) {
  switch (f.kind()) {
    case Formula::Kind::True:
      out += "true";
      return;
    case Formula::Kind::False:
      out += "false";
      return;
    case Formula::Kind::Atom:
      out += to_string(f.constraint());
      return;
    case Formula::Kind::And:
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += " & ";
        print(f.children()[i], out, true);
      }
      return;
    case Formula::Kind::Or:
      if (in_conj) out += '(';
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += " or ";
        print(f.children()[i], out, false);
      }
      if (in_conj) out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print(t, out);
  return out;
}

std::string to_string(const Constraint& c) {
  std::string out;
  if (infix(c.pred)) {
    print(c.args[0], out);
    const char* op = pred_name(c.pred);
    // Integer definitions read better in the `N is E` form.
    if (c.pred == Pred::Eq && c.is_int() && c.args[0].is_var() && is_sum(c.args[1])) {
      op = "is";
    }
    out += ' ';
    out += op;
    out += ' ';
    print(c.args[1], out);
    return out;
  }
  out += pred_name(c.pred);
  out += '(';
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (i) out += ',';
    print(c.args[i], out);
  }
  out += ')';
  return out;
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out, false);
  return out;
}

}  // namespace setcard
