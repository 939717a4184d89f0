#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include "cones/ppcf.hpp"

namespace cones::ppcf {

// ---- types ----------------------------------------------------------

TypePtr Type::real() {
  static TypePtr t = [] {
    auto p = std::make_shared<Type>();
    p->k = K::real;
    return p;
  }();
  return t;
}

TypePtr Type::unit() {
  static TypePtr t = [] {
    auto p = std::make_shared<Type>();
    p->k = K::unit;
    return p;
  }();
  return t;
}

TypePtr Type::arrow(TypePtr from, TypePtr to) {
  auto p = std::make_shared<Type>();
  p->k = K::arrow;
  p->from = std::move(from);
  p->to = std::move(to);
  return p;
}

std::string Type::show() const {
  switch (k) {
    case K::real:
      return "real";
    case K::unit:
      return "unit";
    case K::arrow: {
      std::string lhs = from->show();
      if (from->is_arrow()) lhs = "(" + lhs + ")";
      return lhs + " => " + to->show();
    }
  }
  return "?";
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a->k != b->k) return false;
  if (a->k != Type::K::arrow) return true;
  return type_equal(a->from, b->from) && type_equal(a->to, b->to);
}

std::string unop_name(Unop u) {
  switch (u) {
    case Unop::log: return "log";
    case Unop::sqrt: return "sqrt";
    case Unop::cos: return "cos";
    case Unop::exp: return "exp";
    case Unop::neg: return "neg";
  }
  return "?";
}

std::string binop_name(Binop b) {
  return b == Binop::plus ? "plus" : "mult";
}

// ---- term constructors ----------------------------------------------

namespace {
std::shared_ptr<Term> blank(Term::K k) {
  auto t = std::make_shared<Term>();
  t->k = k;
  return t;
}
}  // namespace

TermPtr mk_var(std::string name) {
  auto t = blank(Term::K::var);
  t->name = std::move(name);
  return t;
}
TermPtr mk_lam(std::string name, TypePtr type, TermPtr body) {
  auto t = blank(Term::K::lam);
  t->name = std::move(name);
  t->type = std::move(type);
  t->t1 = std::move(body);
  return t;
}
TermPtr mk_app(TermPtr fun, TermPtr arg) {
  auto t = blank(Term::K::app);
  t->t1 = std::move(fun);
  t->t2 = std::move(arg);
  return t;
}
TermPtr mk_let(std::string name, TermPtr bound, TermPtr body) {
  auto t = blank(Term::K::letSample);
  t->name = std::move(name);
  t->t1 = std::move(bound);
  t->t2 = std::move(body);
  return t;
}
TermPtr mk_fix(TermPtr body) {
  auto t = blank(Term::K::fix);
  t->t1 = std::move(body);
  return t;
}
TermPtr mk_num(double v) {
  auto t = blank(Term::K::num);
  t->value = v;
  return t;
}
TermPtr mk_unif() { return blank(Term::K::unif); }
TermPtr mk_choice(double p, TermPtr a, TermPtr b) {
  if (!(p >= 0.0 && p <= 1.0))
    throw structural_error("choice probability outside [0,1]");
  auto t = blank(Term::K::choice);
  t->value = p;
  t->t1 = std::move(a);
  t->t2 = std::move(b);
  return t;
}
TermPtr mk_unop(Unop u, TermPtr a) {
  auto t = blank(Term::K::unop);
  t->uop = u;
  t->t1 = std::move(a);
  return t;
}
TermPtr mk_binop(Binop b, TermPtr a, TermPtr c) {
  auto t = blank(Term::K::binop);
  t->bop = b;
  t->t1 = std::move(a);
  t->t2 = std::move(c);
  return t;
}

// ---- lexer ----------------------------------------------------------

parse_error::parse_error(int line, int col, const std::string& what)
    : structural_error(std::to_string(line) + ":" + std::to_string(col) +
                       ": " + what),
      line_(line),
      col_(col) {}

namespace {

struct Token {
  enum class K { ident, keyword, number, punct, eof };
  K k = K::eof;
  std::string text;
  double number = 0.0;
  int line = 1, col = 1;
};

const std::set<std::string> kKeywords = {
    "lam", "let",  "in",  "fix", "choice", "unif", "log",
    "sqrt", "cos", "exp", "neg", "plus",   "mult", "real",
    "unit"};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      step();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) {
      tok_.k = Token::K::eof;
      tok_.text = "<eof>";
      return;
    }
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
              s_[pos_] == '_')) {
        id += s_[pos_];
        step();
      }
      tok_.k = kKeywords.count(id) ? Token::K::keyword : Token::K::ident;
      tok_.text = std::move(id);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
        c == '+') {
      if ((c == '-' || c == '+') && !starts_number(pos_ + 1))
        throw parse_error(line_, col_, "stray sign character");
      if (c == '.' && !std::isdigit(peek_char(pos_ + 1)))
        ;  // fall through to punctuation '.'
      else
        return lex_number();
    }
    if (c == '=' && peek_char(pos_ + 1) == '>') {
      tok_.k = Token::K::punct;
      tok_.text = "=>";
      step();
      step();
      return;
    }
    if (std::string("():.,=").find(c) != std::string::npos) {
      tok_.k = Token::K::punct;
      tok_.text = std::string(1, c);
      step();
      return;
    }
    throw parse_error(line_, col_, std::string("unexpected character '") + c +
                                       "'");
  }

  bool starts_number(std::size_t p) const {
    if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p])))
      return true;
    return p + 1 < s_.size() && s_[p] == '.' &&
           std::isdigit(static_cast<unsigned char>(s_[p + 1]));
  }

  char peek_char(std::size_t p) const { return p < s_.size() ? s_[p] : '\0'; }

  void lex_number() {
    std::string num;
    auto eat = [&] {
      num += s_[pos_];
      step();
    };
    if (s_[pos_] == '-' || s_[pos_] == '+') eat();
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      eat();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      eat();
      while (pos_ < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_])))
        eat();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      eat();
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) eat();
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        throw parse_error(tok_.line, tok_.col, "malformed exponent");
      while (pos_ < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_])))
        eat();
    }
    tok_.k = Token::K::number;
    tok_.text = num;
    tok_.number = std::strtod(num.c_str(), nullptr);
  }

  void step() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// ---- parser ---------------------------------------------------------

class Parser {
 public:
  explicit Parser(const std::string& text) : lx_(text) {}

  TermPtr parse_program() {
    TermPtr t = parse_term();
    expect_eof();
    return t;
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& msg) {
    throw parse_error(at.line, at.col, msg + " (found '" + at.text + "')");
  }

  Token expect_punct(const std::string& p) {
    Token t = lx_.take();
    if (t.k != Token::K::punct || t.text != p)
      fail(t, "expected '" + p + "'");
    return t;
  }

  Token expect_keyword(const std::string& kw) {
    Token t = lx_.take();
    if (t.k != Token::K::keyword || t.text != kw)
      fail(t, "expected '" + kw + "'");
    return t;
  }

  std::string expect_ident() {
    Token t = lx_.take();
    if (t.k != Token::K::ident) fail(t, "expected identifier");
    return t.text;
  }

  void expect_eof() {
    const Token& t = lx_.peek();
    if (t.k != Token::K::eof) fail(t, "expected end of input");
  }

  bool at_keyword(const std::string& kw) const {
    return lx_.peek().k == Token::K::keyword && lx_.peek().text == kw;
  }

  bool at_punct(const std::string& p) const {
    return lx_.peek().k == Token::K::punct && lx_.peek().text == p;
  }

  static void stamp(const TermPtr& t, const Token& tok) {
    // Position bookkeeping: terms are built immutable, so poke through.
    auto* m = const_cast<Term*>(t.get());
    m->line = tok.line;
    m->col = tok.col;
  }

  TypePtr parse_type() {
    TypePtr lhs = parse_type_atom();
    if (at_punct("=>")) {
      lx_.take();
      return Type::arrow(std::move(lhs), parse_type());
    }
    return lhs;
  }

  TypePtr parse_type_atom() {
    Token t = lx_.take();
    if (t.k == Token::K::keyword && t.text == "real") return Type::real();
    if (t.k == Token::K::keyword && t.text == "unit") return Type::unit();
    if (t.k == Token::K::punct && t.text == "(") {
      TypePtr inner = parse_type();
      expect_punct(")");
      return inner;
    }
    fail(t, "expected a type");
  }

  TermPtr parse_term() {
    const Token& t = lx_.peek();
    if (at_keyword("lam")) {
      Token kw = lx_.take();
      std::string name = expect_ident();
      expect_punct(":");
      TypePtr type = parse_type();
      expect_punct(".");
      TermPtr body = parse_term();
      TermPtr out = mk_lam(std::move(name), std::move(type), std::move(body));
      stamp(out, kw);
      return out;
    }
    if (at_keyword("let")) {
      Token kw = lx_.take();
      std::string name = expect_ident();
      expect_punct("=");
      TermPtr bound = parse_term();
      expect_keyword("in");
      TermPtr body = parse_term();
      TermPtr out = mk_let(std::move(name), std::move(bound), std::move(body));
      stamp(out, kw);
      return out;
    }
    if (at_keyword("fix")) {
      Token kw = lx_.take();
      TermPtr out = mk_fix(parse_term());
      stamp(out, kw);
      return out;
    }
    if (at_keyword("choice")) {
      Token kw = lx_.take();
      Token p = lx_.take();
      if (p.k != Token::K::number)
        fail(p, "expected a probability literal after 'choice'");
      if (!(p.number >= 0.0 && p.number <= 1.0))
        fail(p, "choice probability outside [0,1]");
      // Both branches parse at atom level; parenthesize anything larger.
      TermPtr a = parse_atom();
      TermPtr b = parse_atom();
      TermPtr out = mk_choice(p.number, std::move(a), std::move(b));
      stamp(out, kw);
      return out;
    }
    (void)t;
    return parse_app();
  }

  TermPtr parse_app() {
    TermPtr head = parse_atom();
    while (starts_atom()) {
      Token pos = lx_.peek();
      TermPtr arg = parse_atom();
      head = mk_app(std::move(head), std::move(arg));
      stamp(head, pos);
    }
    return head;
  }

  bool starts_atom() const {
    const Token& t = lx_.peek();
    switch (t.k) {
      case Token::K::ident:
      case Token::K::number:
        return true;
      case Token::K::punct:
        return t.text == "(";
      case Token::K::keyword:
        return t.text == "unif" || t.text == "log" || t.text == "sqrt" ||
               t.text == "cos" || t.text == "exp" || t.text == "neg" ||
               t.text == "plus" || t.text == "mult";
      default:
        return false;
    }
  }

  TermPtr parse_atom() {
    Token t = lx_.take();
    if (t.k == Token::K::ident) {
      TermPtr out = mk_var(t.text);
      stamp(out, t);
      return out;
    }
    if (t.k == Token::K::number) {
      TermPtr out = mk_num(t.number);
      stamp(out, t);
      return out;
    }
    if (t.k == Token::K::punct && t.text == "(") {
      TermPtr inner = parse_term();
      expect_punct(")");
      return inner;
    }
    if (t.k == Token::K::keyword) {
      if (t.text == "unif") {
        TermPtr out = mk_unif();
        stamp(out, t);
        return out;
      }
      if (t.text == "log" || t.text == "sqrt" || t.text == "cos" ||
          t.text == "exp" || t.text == "neg") {
        Unop u = t.text == "log"    ? Unop::log
                 : t.text == "sqrt" ? Unop::sqrt
                 : t.text == "cos"  ? Unop::cos
                 : t.text == "exp"  ? Unop::exp
                                    : Unop::neg;
        expect_punct("(");
        TermPtr a = parse_term();
        expect_punct(")");
        TermPtr out = mk_unop(u, std::move(a));
        stamp(out, t);
        return out;
      }
      if (t.text == "plus" || t.text == "mult") {
        Binop b = t.text == "plus" ? Binop::plus : Binop::mult;
        expect_punct("(");
        TermPtr x = parse_term();
        expect_punct(",");
        TermPtr y = parse_term();
        expect_punct(")");
        TermPtr out = mk_binop(b, std::move(x), std::move(y));
        stamp(out, t);
        return out;
      }
    }
    fail(t, "expected a term");
  }

  Lexer lx_;
};

// ---- printer --------------------------------------------------------

std::string show_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool atom_shaped(const TermPtr& t) {
  switch (t->k) {
    case Term::K::var:
    case Term::K::num:
    case Term::K::unif:
    case Term::K::unop:
    case Term::K::binop:
      return true;
    default:
      return false;
  }
}

std::string render(const TermPtr& t);

std::string render_atom(const TermPtr& t) {
  if (atom_shaped(t)) return render(t);
  return "(" + render(t) + ")";
}

std::string render(const TermPtr& t) {
  switch (t->k) {
    case Term::K::var:
      return t->name;
    case Term::K::lam:
      return "lam " + t->name + ": " + t->type->show() + ". " + render(t->t1);
    case Term::K::app: {
      std::string head = t->t1->k == Term::K::app ? render(t->t1)
                                                  : render_atom(t->t1);
      return head + " " + render_atom(t->t2);
    }
    case Term::K::letSample:
      return "let " + t->name + " = " + render(t->t1) + " in " +
             render(t->t2);
    case Term::K::fix:
      return "fix " + render(t->t1);
    case Term::K::num:
      return show_number(t->value);
    case Term::K::unif:
      return "unif";
    case Term::K::choice:
      return "choice " + show_number(t->value) + " " + render_atom(t->t1) +
             " " + render_atom(t->t2);
    case Term::K::unop:
      return unop_name(t->uop) + "(" + render(t->t1) + ")";
    case Term::K::binop:
      return binop_name(t->bop) + "(" + render(t->t1) + ", " + render(t->t2) +
             ")";
  }
  return "?";
}

}  // namespace

TermPtr parse(const std::string& text) { return Parser(text).parse_program(); }

std::string print_term(const TermPtr& t) { return render(t); }

std::string print_type(const TypePtr& t) { return t->show(); }

}  // namespace cones::ppcf
