#include "nsub/expr.hpp"

#include <cctype>

namespace nsub {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::invalid_argument("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line(line),
      column(column),
      message(msg) {}

std::unique_ptr<ExprNode> ExprNode::clone() const {
  auto n = std::make_unique<ExprNode>();
  n->kind = kind;
  n->signs = signs;
  n->value = value;
  for (const auto& c : children) n->children.push_back(c->clone());
  return n;
}

bool operator==(const ExprNode& l, const ExprNode& r) {
  if (l.kind != r.kind || l.signs != r.signs || l.value != r.value || l.children.size() != r.children.size())
    return false;
  for (std::size_t i = 0; i < l.children.size(); ++i)
    if (!(*l.children[i] == *r.children[i])) return false;
  return true;
}

namespace {

constexpr long kMaxSumPower = 256;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  std::unique_ptr<ExprNode> parse() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    auto e = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }

  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  std::unique_ptr<ExprNode> expr() {
    auto sum = std::make_unique<ExprNode>();
    sum->kind = ExprNode::Kind::Sum;
    int sign = 1;
    if (peek('-') || peek('+')) {
      sign = s_[pos_] == '-' ? -1 : 1;
      ++pos_;
    }
    sum->children.push_back(term());
    sum->signs.push_back(sign);
    while (peek('+') || peek('-')) {
      sign = s_[pos_] == '-' ? -1 : 1;
      ++pos_;
      sum->children.push_back(term());
      sum->signs.push_back(sign);
    }
    if (sum->children.size() == 1 && sum->signs[0] == 1) return std::move(sum->children[0]);
    return sum;
  }

  std::unique_ptr<ExprNode> term() {
    auto f = factor();
    if (!peek('*')) return f;
    auto prod = std::make_unique<ExprNode>();
    prod->kind = ExprNode::Kind::Product;
    prod->children.push_back(std::move(f));
    while (peek('*')) {
      ++pos_;
      prod->children.push_back(factor());
    }
    return prod;
  }

  std::unique_ptr<ExprNode> factor() {
    auto b = base();
    if (!peek('^')) return b;
    ++pos_;
    skip();
    std::size_t at = pos_;
    Rational e;
    if (peek('(')) {
      ++pos_;
      e = signed_rational();
      if (!peek(')')) fail("expected ')' after exponent");
      ++pos_;
    } else {
      e = rational();
    }
    auto pw = std::make_unique<ExprNode>();
    pw->kind = ExprNode::Kind::Power;
    pw->value = e;
    pw->children.push_back(std::move(b));
    check_power(*pw, at);
    return pw;
  }

  void check_power(const ExprNode& pw, std::size_t at) const {
    const Rational& e = pw.value;
    const ExprNode& b = *pw.children[0];
    if (b.kind == ExprNode::Kind::X) {
      if (sign(e) < 0) fail_at("negative x-power", at);
    } else if (b.kind == ExprNode::Kind::Y) {
      if (sign(e) < 0) fail_at("negative y-power", at);
      if (!is_integer(e)) fail_at("fractional y-power", at);
    } else {
      if (sign(e) < 0) fail_at("negative power", at);
      if (!is_integer(e)) fail_at("fractional power of a compound or constant base", at);
      if (e > kMaxSumPower) fail_at("power exceeds " + std::to_string(kMaxSumPower), at);
    }
  }

  Rational signed_rational() {
    skip();
    int sg = 1;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      sg = s_[pos_] == '-' ? -1 : 1;
      ++pos_;
    }
    return sg * rational();
  }

  Integer integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return Integer(s_.substr(start, pos_ - start));
  }

  Rational rational() {
    std::size_t at = pos_;
    Integer n = integer();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a denominator");
      Integer d = integer();
      if (d == 0) fail_at("zero denominator", at);
      Rational q(n, d);
      q.canonicalize();
      return q;
    }
    return Rational(n);
  }

  std::unique_ptr<ExprNode> base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    auto n = std::make_unique<ExprNode>();
    if (c == 'x' || c == 'y') {
      ++pos_;
      n->kind = c == 'x' ? ExprNode::Kind::X : ExprNode::Kind::Y;
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      n->kind = ExprNode::Kind::Number;
      n->value = rational();
      return n;
    }
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return e;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::string rational_text(const Rational& q) {
  std::string s = to_string(q);
  return is_integer(q) ? s : "(" + s + ")";
}

}  // namespace

std::string print_ast(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::X: return "x";
    case ExprNode::Kind::Y: return "y";
    case ExprNode::Kind::Number: return to_string(n.value);
    case ExprNode::Kind::Sum: {
      std::string out;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i == 0)
          out += n.signs[i] < 0 ? "-" : "";
        else
          out += n.signs[i] < 0 ? " - " : " + ";
        const ExprNode& c = *n.children[i];
        out += c.kind == ExprNode::Kind::Sum ? "(" + print_ast(c) + ")" : print_ast(c);
      }
      return out;
    }
    case ExprNode::Kind::Product: {
      std::string out;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += "*";
        const ExprNode& c = *n.children[i];
        bool wrap = c.kind == ExprNode::Kind::Sum || c.kind == ExprNode::Kind::Product;
        out += wrap ? "(" + print_ast(c) + ")" : print_ast(c);
      }
      return out;
    }
    case ExprNode::Kind::Power: {
      const ExprNode& b = *n.children[0];
      bool wrap = b.kind != ExprNode::Kind::X && b.kind != ExprNode::Kind::Y &&
                  !(b.kind == ExprNode::Kind::Number && is_integer(b.value));
      std::string bs = wrap ? "(" + print_ast(b) + ")" : print_ast(b);
      return bs + "^" + rational_text(n.value);
    }
  }
  return "";
}

PuiseuxPoly expand(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::X: return PuiseuxPoly::var_x();
    case ExprNode::Kind::Y: return PuiseuxPoly::var_y();
    case ExprNode::Kind::Number: return PuiseuxPoly::constant(n.value);
    case ExprNode::Kind::Sum: {
      PuiseuxPoly out;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        PuiseuxPoly c = expand(*n.children[i]);
        if (n.signs[i] < 0)
          out -= c;
        else
          out += c;
      }
      return out;
    }
    case ExprNode::Kind::Product: {
      PuiseuxPoly out = PuiseuxPoly::constant(Rational(1));
      for (const auto& c : n.children) out = out * expand(*c);
      return out;
    }
    case ExprNode::Kind::Power: {
      const ExprNode& b = *n.children[0];
      if (b.kind == ExprNode::Kind::X) return PuiseuxPoly::x_power(n.value);
      if (!is_integer(n.value) || sign(n.value) < 0) throw ParseError("invalid power", 1, 1);
      return poly_pow(expand(b), n.value.get_num().get_si());
    }
  }
  return {};
}

PhaseExpr parse_expression(const std::string& text) {
  PhaseExpr out;
  out.source = text;
  out.ast = Parser(text).parse();
  out.poly = expand(*out.ast);
  return out;
}

}  // namespace nsub
