#include "riskplan/poly_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

namespace riskplan {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

static void append_monomial(std::ostream& os, const Monomial& m) {
  bool first = true;
  for (const auto& f : m.factors()) {
    if (!first) os << "*";
    os << f.var.name();
    if (f.exp > 1) os << "^" << f.exp;
    first = false;
  }
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  // Descending graded-lex: iterate the ordered term map in reverse.
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    double mag = std::abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (m.is_one()) {
      os << format_double(mag);
    } else {
      if (mag != 1.0) os << format_double(mag) << "*";
      append_monomial(os, m);
    }
    first = false;
  }
  return os.str();
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const Universe& u) : text_(text), u_(u) {}

  Polynomial parse() {
    Polynomial p = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return p;
  }

 private:
  Polynomial parse_expr() {
    Polynomial acc = parse_term();
    for (;;) {
      skip_ws();
      if (peek() == '+') {
        ++pos_;
        acc = acc + parse_term();
      } else if (peek() == '-') {
        ++pos_;
        acc = acc - parse_term();
      } else {
        return acc;
      }
    }
  }

  Polynomial parse_term() {
    Polynomial acc = parse_unary();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        acc = acc * parse_unary();
      } else {
        return acc;
      }
    }
  }

  Polynomial parse_unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -parse_unary();
    }
    if (peek() == '+') {
      ++pos_;
      return parse_unary();
    }
    return parse_primary();
  }

  Polynomial parse_primary() {
    skip_ws();
    char c = peek();
    Polynomial base;
    if (c == '(') {
      ++pos_;
      base = parse_expr();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      base = parse_number();
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      base = parse_variable();
    } else {
      throw ParseError("expected number, variable, or '('", pos_);
    }
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      int e = parse_exponent();
      base = base.pow(e);
    }
    return base;
  }

  Polynomial parse_number() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    const std::string tok = text_.substr(start, pos_ - start);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ParseError("bad number '" + tok + "'", start);
    return Polynomial::constant(v, u_);
  }

  Polynomial parse_variable() {
    size_t start = pos_;
    char c = text_[pos_++];
    if (c == 't' &&
        (pos_ >= text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_])))) {
      if (!u_.has_time) throw UndeclaredVariable("variable t not declared in this scenario");
      return Polynomial::variable(VarId::time(), u_);
    }
    if (c != 'x' && c != 'w') throw ParseError("unknown variable (expected x<k>, w<k>, or t)", start);
    size_t dstart = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == dstart) throw ParseError("variable index expected", start);
    int idx = std::atoi(text_.substr(dstart, pos_ - dstart).c_str());
    if (idx < 1) throw ParseError("variable indices are 1-based", start);
    VarId v = (c == 'x') ? VarId::state(idx - 1) : VarId::uncertain(idx - 1);
    if (!u_.contains(v))
      throw UndeclaredVariable("variable " + v.name() + " not declared in this scenario");
    return Polynomial::variable(v, u_);
  }

  int parse_exponent() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError("integer exponent expected after '^'", start);
    return std::atoi(text_.substr(start, pos_ - start).c_str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  const std::string& text_;
  const Universe& u_;
  size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const Universe& u) {
  return Parser(text, u).parse();
}

nlohmann::json poly_to_json(const Polynomial& p) {
  nlohmann::json j;
  j["universe"] = {{"nx", p.universe().n_state},
                   {"nw", p.universe().n_uncertain},
                   {"time", p.universe().has_time}};
  nlohmann::json terms = nlohmann::json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    nlohmann::json exps = nlohmann::json::object();
    for (const auto& f : it->first.factors()) exps[f.var.name()] = f.exp;
    terms.push_back({{"coeff", it->second}, {"exps", exps}});
  }
  j["terms"] = std::move(terms);
  return j;
}

Polynomial poly_from_json(const nlohmann::json& j) {
  Universe u{j.at("universe").at("nx").get<int>(), j.at("universe").at("nw").get<int>(),
             j.at("universe").at("time").get<bool>()};
  Polynomial p;
  p.set_universe(u);
  for (const auto& t : j.at("terms")) {
    std::vector<Monomial::Factor> fs;
    for (auto it = t.at("exps").begin(); it != t.at("exps").end(); ++it) {
      const std::string name = it.key();
      VarId v;
      if (name == "t") {
        v = VarId::time();
      } else if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'w')) {
        int idx = std::atoi(name.c_str() + 1);
        v = (name[0] == 'x') ? VarId::state(idx - 1) : VarId::uncertain(idx - 1);
      } else {
        throw ParseError("bad variable name '" + name + "' in polynomial JSON", 0);
      }
      if (!u.contains(v)) throw UndeclaredVariable("variable " + name + " outside universe");
      fs.push_back({v, it.value().get<int>()});
    }
    p.add_term(Monomial(std::move(fs)), t.at("coeff").get<double>());
  }
  p.normalize();
  return p;
}

}  // namespace riskplan
