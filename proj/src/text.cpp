#include "afc/text.hpp"

#include <cctype>

namespace afc {

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Term parse_all() {
    Term t = term();
    ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return t;
  }

  Functor parse_functor_all() {
    Functor f = functor();
    ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
  }

  char peek() {
    ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool at_word(std::string_view w) {
    ws();
    return s_.substr(pos_, w.size()) == w;
  }

  std::string ident() {
    ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(s_.substr(start, pos_ - start));
  }

  int integer() {
    ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }

  // Keyword followed directly by digits (cr2, Delta1).
  bool keyword_with_number(std::string_view kw) {
    ws();
    if (s_.substr(pos_, kw.size()) != kw) return false;
    std::size_t after = pos_ + kw.size();
    return after < s_.size() && std::isdigit(static_cast<unsigned char>(s_[after])) != 0;
  }

  static FunctorAtom atom_named(const std::string& n) {
    if (n == "Id") return FunctorAtom::identity();
    return FunctorAtom::abstract(n);
  }

  // After '(' : does a composite functor "(F.G...)" start here?
  bool composite_ahead() {
    std::size_t save = pos_;
    bool yes = false;
    if (peek() == '(') {
      ++pos_;
      if (std::isupper(static_cast<unsigned char>(peek())) != 0) {
        ident();
        yes = peek() == '.';
      }
    }
    pos_ = save;
    return yes;
  }

  Functor functor() {
    if (peek() == '(') {
      ++pos_;
      Functor f(atom_named(uppercase_name()));
      int parts = 1;
      while (peek() == '.') {
        ++pos_;
        f = Functor::compose(f, Functor(atom_named(uppercase_name())));
        ++parts;
      }
      if (parts < 2) fail("composite functor needs at least two factors");
      expect(')');
      return f;
    }
    return Functor(atom_named(uppercase_name()));
  }

  std::string uppercase_name() {
    if (std::isupper(static_cast<unsigned char>(peek())) == 0) fail("expected functor name");
    return ident();
  }

  std::vector<Term> term_list() {
    std::vector<Term> out{term()};
    while (peek() == ',') {
      ++pos_;
      out.push_back(term());
    }
    return out;
  }

  Term term() {
    std::vector<Term> parts{summand()};
    while (peek() == '+') {
      ++pos_;
      parts.push_back(summand());
    }
    return parts.size() == 1 ? parts.front() : sum(std::move(parts));
  }

  Term application() {
    if (keyword_with_number("cr")) {
      pos_ += 2;
      int n = integer();
      Functor f = functor();
      expect('(');
      auto args = term_list();
      expect(')');
      return cross(n, f, std::move(args));
    }
    bool composite = composite_ahead();
    if (!composite && std::isupper(static_cast<unsigned char>(peek())) == 0) fail("expected functor application");
    std::size_t start = pos_;
    Functor f = functor();
    if (peek() == '(') {
      ++pos_;
      auto args = term_list();
      expect(')');
      return app(f, std::move(args));
    }
    const std::string& n = f.is_atom() ? f.atom().name : std::string();
    if (f.is_atom() && n.size() > 1 && n.back() == '0' && !f.atom().is_identity()) {
      return app(FunctorAtom::at_zero(n.substr(0, n.size() - 1)), {});
    }
    pos_ = start;
    fail("functor without arguments");
  }

  Term summand() {
    char c = peek();
    if (c == '\0') fail("unexpected end of input");
    if (c == '(') {
      if (composite_ahead()) return application();
      ++pos_;
      Term t = term();
      expect(')');
      return t;
    }
    if (c == '0' && (pos_ + 1 >= s_.size() || !is_ident_char(s_[pos_ + 1]))) {
      ++pos_;
      return zero();
    }
    if (at_word("D1") && (pos_ + 2 >= s_.size() || !is_ident_char(s_[pos_ + 2]))) {
      if (pos_ + 2 < s_.size() && s_[pos_ + 2] == '[') {
        pos_ += 3;
        std::string v = ident();
        expect(']');
        return lin(std::move(v), summand());
      }
      std::vector<int> slots;
      while (at_word("D1") && (pos_ + 2 >= s_.size() || !is_ident_char(s_[pos_ + 2])) &&
             !(pos_ + 2 < s_.size() && s_[pos_ + 2] == '[')) {
        pos_ += 2;
        int slot = 1;
        if (pos_ < s_.size() && s_[pos_] == '^') {
          ++pos_;
          slot = integer();
        }
        slots.push_back(slot);
      }
      std::size_t at = pos_;
      Term target = application();
      if (target.kids().empty()) {
        pos_ = at;
        fail("slot linearization of a constant");
      }
      std::vector<int> marks = target.marks();
      for (int s : slots) {
        if (s < 1 || s > static_cast<int>(marks.size())) {
          pos_ = at;
          fail("linearization slot " + std::to_string(s) + " out of range");
        }
        ++marks[static_cast<std::size_t>(s - 1)];
      }
      return with_kids(target, target.kids(), std::move(marks));
    }
    if (keyword_with_number("Delta")) {
      pos_ += 5;
      int order = integer();
      Functor f = functor();
      expect('(');
      auto items = term_list();
      std::vector<Term> dirs;
      Term base = items.back();
      if (peek() == ';') {
        ++pos_;
        dirs = std::move(items);
        base = term();
      } else if (items.size() != 1) {
        fail("expected ';' before the basepoint");
      }
      expect(')');
      return delta(order, f, std::move(dirs), std::move(base));
    }
    if (at_word("Nabla") && (pos_ + 5 >= s_.size() || !is_ident_char(s_[pos_ + 5]))) {
      pos_ += 5;
      Functor f = functor();
      expect('(');
      Term dir = term();
      expect(';');
      Term base = term();
      expect(')');
      return nabla(f, std::move(dir), std::move(base));
    }
    if (keyword_with_number("cr") || std::isupper(static_cast<unsigned char>(c)) != 0) return application();
    if (std::islower(static_cast<unsigned char>(c)) != 0) return var(ident());
    fail(std::string("unexpected character '") + c + "'");
  }
};

// ------------------------------------------------------------------ text

void emit_text(const Term& t, bool tight, std::string& out);

void emit_list(const std::vector<Term>& ts, std::size_t from, std::size_t to, std::string& out) {
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) out += ", ";
    emit_text(ts[i], false, out);
  }
}

void emit_marks_text(const Term& t, std::string& out) {
  const bool unary = t.kids().size() == 1;
  for (std::size_t i = 0; i < t.marks().size(); ++i) {
    for (int m = 0; m < t.marks()[i]; ++m) out += unary ? "D1 " : "D1^" + std::to_string(i + 1) + " ";
  }
}

void emit_text(const Term& t, bool tight, std::string& out) {
  switch (t.kind()) {
    case Kind::Var: out += t.name(); return;
    case Kind::Zero: out += "0"; return;
    case Kind::Sum:
      if (tight) out += "(";
      for (std::size_t i = 0; i < t.kids().size(); ++i) {
        if (i > 0) out += " + ";
        emit_text(t.kid(i), true, out);
      }
      if (tight) out += ")";
      return;
    case Kind::Apply:
      emit_marks_text(t, out);
      if (t.head().is_atom() && t.head().atom().is_constant()) {
        out += t.head().atom().name + "0";
        return;
      }
      out += to_text(t.head()) + "(";
      emit_list(t.kids(), 0, t.kids().size(), out);
      out += ")";
      return;
    case Kind::Cross:
      emit_marks_text(t, out);
      out += "cr" + std::to_string(t.order()) + " " + to_text(t.head()) + "(";
      emit_list(t.kids(), 0, t.kids().size(), out);
      out += ")";
      return;
    case Kind::Lin:
      out += "D1[" + t.name() + "] ";
      emit_text(t.body(), true, out);
      return;
    case Kind::Nabla:
      out += "Nabla " + to_text(t.head()) + "(";
      emit_text(t.kid(0), false, out);
      out += "; ";
      emit_text(t.kid(1), false, out);
      out += ")";
      return;
    case Kind::Delta: {
      out += "Delta" + std::to_string(t.order()) + " " + to_text(t.head()) + "(";
      const std::size_t nd = t.kids().size() - 1;
      if (nd > 0) {
        emit_list(t.kids(), 0, nd, out);
        out += "; ";
      }
      emit_text(t.kids().back(), false, out);
      out += ")";
      return;
    }
  }
}

// ------------------------------------------------------------------ latex

std::string latex_var(const std::string& n) {
  if (n.size() > 3 && n.ends_with("bar")) return "\\bar{" + latex_var(n.substr(0, n.size() - 3)) + "}";
  if (n.size() == 1) return n;
  return "\\mathit{" + n + "}";
}

std::string latex_atom(const FunctorAtom& a) {
  if (a.is_identity()) return "\\mathrm{Id}";
  return a.name;
}

void emit_latex(const Term& t, bool tight, std::string& out);

void emit_latex_list(const std::vector<Term>& ts, std::size_t from, std::size_t to, std::string& out) {
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) out += ",";
    emit_latex(ts[i], false, out);
  }
}

void emit_marks_latex(const Term& t, std::string& out) {
  const bool unary = t.kids().size() == 1;
  for (std::size_t i = 0; i < t.marks().size(); ++i) {
    for (int m = 0; m < t.marks()[i]; ++m) out += unary ? "D_1 " : "D_1^{" + std::to_string(i + 1) + "}";
  }
}

void emit_latex(const Term& t, bool tight, std::string& out) {
  switch (t.kind()) {
    case Kind::Var: out += latex_var(t.name()); return;
    case Kind::Zero: out += "0"; return;
    case Kind::Sum:
      if (tight) out += "\\left(";
      for (std::size_t i = 0; i < t.kids().size(); ++i) {
        if (i > 0) out += " \\oplus ";
        emit_latex(t.kid(i), true, out);
      }
      if (tight) out += "\\right)";
      return;
    case Kind::Apply:
      emit_marks_latex(t, out);
      if (t.head().is_atom() && t.head().atom().is_constant()) {
        out += latex_atom(t.head().atom()) + "(0)";
        return;
      }
      out += to_latex(t.head()) + "(";
      emit_latex_list(t.kids(), 0, t.kids().size(), out);
      out += ")";
      return;
    case Kind::Cross:
      emit_marks_latex(t, out);
      out += "\\mathrm{cr}_{" + std::to_string(t.order()) + "}" + to_latex(t.head()) + "(";
      emit_latex_list(t.kids(), 0, t.kids().size(), out);
      out += ")";
      return;
    case Kind::Lin:
      out += "D_1^{" + latex_var(t.name()) + "}";
      emit_latex(t.body(), true, out);
      return;
    case Kind::Nabla:
      out += "\\nabla " + to_latex(t.head()) + "(";
      emit_latex(t.kid(0), false, out);
      out += ";";
      emit_latex(t.kid(1), false, out);
      out += ")";
      return;
    case Kind::Delta: {
      out += "\\Delta_{" + std::to_string(t.order()) + "}" + to_latex(t.head()) + "(";
      const std::size_t nd = t.kids().size() - 1;
      if (nd > 0) {
        emit_latex_list(t.kids(), 0, nd, out);
        out += ";";
      }
      emit_latex(t.kids().back(), false, out);
      out += ")";
      return;
    }
  }
}

std::string role_name(AtomRole r) {
  switch (r) {
    case AtomRole::Abstract: return "abstract";
    case AtomRole::Identity: return "identity";
    case AtomRole::ConstantAtZero: return "constant-at-zero";
  }
  return "abstract";
}

AtomRole role_from(const std::string& s) {
  if (s == "abstract") return AtomRole::Abstract;
  if (s == "identity") return AtomRole::Identity;
  if (s == "constant-at-zero") return AtomRole::ConstantAtZero;
  throw StructuralError("unknown atom role '" + s + "'");
}

std::vector<Term> terms_from(const nlohmann::json& arr) {
  std::vector<Term> out;
  for (const auto& e : arr) out.push_back(term_from_json(e));
  return out;
}

nlohmann::json terms_to(const std::vector<Term>& ts, std::size_t from, std::size_t to) {
  auto arr = nlohmann::json::array();
  for (std::size_t i = from; i < to; ++i) arr.push_back(to_json(ts[i]));
  return arr;
}

}  // namespace

Term parse_term(std::string_view text) { return Parser(text).parse_all(); }

Functor parse_functor(std::string_view text) { return Parser(text).parse_functor_all(); }

std::string to_text(const Term& t) {
  std::string out;
  emit_text(t, false, out);
  return out;
}

std::string to_text(const Functor& f) {
  if (f.is_atom()) return f.atom().name;
  std::string out = "(";
  bool first = true;
  for (const auto& a : f.chain()) {
    if (!first) out += ".";
    out += a.name;
    first = false;
  }
  return out + ")";
}

std::string to_latex(const Term& t) {
  std::string out;
  emit_latex(t, false, out);
  return out;
}

std::string to_latex(const Functor& f) {
  if (f.is_atom()) return latex_atom(f.atom());
  std::string out = "(";
  bool first = true;
  for (const auto& a : f.chain()) {
    if (!first) out += "\\circ ";
    out += latex_atom(a);
    first = false;
  }
  return out + ")";
}

nlohmann::json to_json(const Functor& f) {
  if (f.is_atom()) {
    const auto& a = f.atom();
    return {{"atom", {{"name", a.name}, {"arity", a.arity}, {"reduced", a.reduced}, {"role", role_name(a.role)}}}};
  }
  return {{"compose", {to_json(f.outer()), to_json(f.inner())}}};
}

Functor functor_from_json(const nlohmann::json& j) {
  if (j.contains("atom")) {
    const auto& a = j.at("atom");
    FunctorAtom atom{a.at("name").get<std::string>(), a.at("arity").get<int>(), a.at("reduced").get<bool>(),
                     role_from(a.at("role").get<std::string>())};
    if (atom.role == AtomRole::Identity && (atom.arity != 1 || !atom.reduced)) {
      throw StructuralError("identity atom must be unary and reduced");
    }
    if (atom.role == AtomRole::ConstantAtZero && atom.arity != 0) {
      throw StructuralError("constant-at-zero atom must have arity 0");
    }
    if (atom.role == AtomRole::Abstract && atom.arity != 1) throw StructuralError("abstract atoms are unary");
    return Functor(atom);
  }
  const auto& c = j.at("compose");
  if (!c.is_array() || c.size() != 2) throw StructuralError("compose needs exactly two functors");
  return Functor::compose(functor_from_json(c[0]), functor_from_json(c[1]));
}

nlohmann::json to_json(const Term& t) {
  nlohmann::json j;
  j["kind"] = std::string(kind_name(t.kind()));
  switch (t.kind()) {
    case Kind::Var: j["name"] = t.name(); break;
    case Kind::Zero: break;
    case Kind::Sum: j["summands"] = terms_to(t.kids(), 0, t.kids().size()); break;
    case Kind::Cross: j["n"] = t.order(); [[fallthrough]];
    case Kind::Apply:
      j["functor"] = to_json(t.head());
      j["args"] = terms_to(t.kids(), 0, t.kids().size());
      j["marks"] = t.marks();
      break;
    case Kind::Lin:
      j["var"] = t.name();
      j["body"] = to_json(t.body());
      break;
    case Kind::Nabla:
      j["functor"] = to_json(t.head());
      j["direction"] = to_json(t.kid(0));
      j["basepoint"] = to_json(t.kid(1));
      break;
    case Kind::Delta:
      j["order"] = t.order();
      j["functor"] = to_json(t.head());
      j["directions"] = terms_to(t.kids(), 0, t.kids().size() - 1);
      j["basepoint"] = to_json(t.kids().back());
      break;
  }
  return j;
}

Term term_from_json(const nlohmann::json& j) {
  try {
    const std::string k = j.at("kind").get<std::string>();
    if (k == "var") return var(j.at("name").get<std::string>());
    if (k == "zero") return zero();
    if (k == "sum") return sum(terms_from(j.at("summands")));
    if (k == "apply" || k == "cross") {
      Functor f = functor_from_json(j.at("functor"));
      auto args = terms_from(j.at("args"));
      std::vector<int> marks = j.value("marks", std::vector<int>{});
      if (k == "apply") return app(f, std::move(args), std::move(marks));
      return cross(j.at("n").get<int>(), f, std::move(args), std::move(marks));
    }
    if (k == "lin") return lin(j.at("var").get<std::string>(), term_from_json(j.at("body")));
    if (k == "nabla") {
      return nabla(functor_from_json(j.at("functor")), term_from_json(j.at("direction")),
                   term_from_json(j.at("basepoint")));
    }
    if (k == "delta") {
      return delta(j.at("order").get<int>(), functor_from_json(j.at("functor")), terms_from(j.at("directions")),
                   term_from_json(j.at("basepoint")));
    }
    throw StructuralError("unknown term kind '" + k + "'");
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("malformed term document: ") + e.what());
  }
}

}  // namespace afc
