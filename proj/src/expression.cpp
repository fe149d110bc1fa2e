#include "stabcheck/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace stabcheck {

namespace {

using Kind = Expression::Kind;
using VarKind = Expression::VarKind;
using NodePtr = Expression::NodePtr;

NodePtr make_node(Expression::Node node) {
  return std::make_shared<const Expression::Node>(std::move(node));
}

NodePtr binary(Kind kind, NodePtr a, NodePtr b) {
  Expression::Node node;
  node.kind = kind;
  node.a = std::move(a);
  node.b = std::move(b);
  return make_node(std::move(node));
}

}  // namespace

Expression Expression::number(double v) {
  Node node;
  node.kind = Kind::Number;
  node.number = v;
  return Expression(make_node(std::move(node)));
}

Expression Expression::variable(VarKind kind, int index) {
  Node node;
  node.kind = Kind::Variable;
  node.var_kind = kind;
  node.var_index = index;
  return Expression(make_node(std::move(node)));
}

Expression Expression::unary(Kind func, const Expression& arg) {
  Node node;
  node.kind = func;
  node.a = arg.root_;
  return Expression(make_node(std::move(node)));
}

Expression Expression::pow(int exponent) const {
  Node node;
  node.kind = Kind::Pow;
  node.exponent = exponent;
  node.a = root_;
  return Expression(make_node(std::move(node)));
}

Expression operator+(const Expression& a, const Expression& b) {
  return Expression(binary(Kind::Add, a.root_, b.root_));
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression(binary(Kind::Sub, a.root_, b.root_));
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression(binary(Kind::Mul, a.root_, b.root_));
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression(binary(Kind::Div, a.root_, b.root_));
}
Expression operator-(const Expression& a) {
  Expression::Node node;
  node.kind = Kind::Negate;
  node.a = a.root_;
  return Expression(make_node(std::move(node)));
}

namespace {

void walk_indices(const NodePtr& node, int& max_state, int& max_input,
                  bool& time) {
  if (!node) return;
  if (node->kind == Kind::Variable) {
    switch (node->var_kind) {
      case VarKind::State:
        max_state = std::max(max_state, node->var_index);
        break;
      case VarKind::Input:
        max_input = std::max(max_input, node->var_index);
        break;
      case VarKind::Time:
        time = true;
        break;
    }
  }
  walk_indices(node->a, max_state, max_input, time);
  walk_indices(node->b, max_state, max_input, time);
}

}  // namespace

int Expression::max_state_index() const {
  int s = 0, i = 0;
  bool t = false;
  walk_indices(root_, s, i, t);
  return s;
}

int Expression::max_input_index() const {
  int s = 0, i = 0;
  bool t = false;
  walk_indices(root_, s, i, t);
  return i;
}

bool Expression::uses_time() const {
  int s = 0, i = 0;
  bool t = false;
  walk_indices(root_, s, i, t);
  return t;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(const std::string& text, int n, int m, bool allow_time)
      : text_(text), n_(n), m_(m), allow_time_(allow_time) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) {
      throw ParseError("unexpected trailing input", pos_);
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      const char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        NodePtr rhs = parse_term();
        lhs = binary(c == '+' ? Kind::Add : Kind::Sub, std::move(lhs), std::move(rhs));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (true) {
      const char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        NodePtr rhs = parse_factor();
        lhs = binary(c == '*' ? Kind::Mul : Kind::Div, std::move(lhs), std::move(rhs));
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_atom();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const int e = parse_uint("exponent");
      Expression::Node node;
      node.kind = Kind::Pow;
      node.exponent = e;
      node.a = std::move(base);
      return make_node(std::move(node));
    }
    return base;
  }

  NodePtr parse_atom() {
    const char c = peek();
    const std::size_t start = pos_;
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return e;
    }
    if (c == '-') {
      // `^` binds tighter than unary minus: the operand of `-` is a full
      // factor, so -x1^2 parses as -(x1^2).
      ++pos_;
      NodePtr operand = parse_factor();
      Expression::Node node;
      node.kind = Kind::Negate;
      node.a = std::move(operand);
      return make_node(std::move(node));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number(start);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      return parse_ident(start);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number(std::size_t start) {
    std::size_t end = pos_;
    bool seen_dot = false;
    while (end < text_.size()) {
      const char c = text_[end];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++end;
      } else if (c == '.' && !seen_dot) {
        seen_dot = true;
        ++end;
      } else {
        break;
      }
    }
    const std::string lit = text_.substr(start, end - start);
    if (lit.empty() || lit == ".") throw ParseError("malformed number", start);
    pos_ = end;
    Expression::Node node;
    node.kind = Kind::Number;
    node.number = std::strtod(lit.c_str(), nullptr);
    return make_node(std::move(node));
  }

  NodePtr parse_ident(std::size_t start) {
    std::size_t end = pos_;
    while (end < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[end]))) {
      ++end;
    }
    const std::string name = text_.substr(start, end - start);
    pos_ = end;
    if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt" ||
        name == "abs") {
      if (peek() != '(') throw ParseError("expected '(' after " + name, pos_);
      ++pos_;
      NodePtr arg = parse_expr();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      Kind kind = Kind::Sin;
      if (name == "cos") kind = Kind::Cos;
      if (name == "exp") kind = Kind::Exp;
      if (name == "sqrt") kind = Kind::Sqrt;
      if (name == "abs") kind = Kind::Abs;
      Expression::Node node;
      node.kind = kind;
      node.a = std::move(arg);
      return make_node(std::move(node));
    }
    if (name == "x" || name == "u") {
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        throw ParseError("expected index after '" + name + "'", pos_);
      }
      const int idx = parse_uint("variable index");
      const bool is_state = (name == "x");
      const int limit = is_state ? n_ : m_;
      if (idx < 1 || idx > limit) {
        throw ValidationError("variable index out of range: " + name +
                              std::to_string(idx) + " (declared n=" +
                              std::to_string(n_) + ", m=" + std::to_string(m_) +
                              ")");
      }
      Expression::Node node;
      node.kind = Kind::Variable;
      node.var_kind = is_state ? VarKind::State : VarKind::Input;
      node.var_index = idx;
      return make_node(std::move(node));
    }
    if (name == "t" && allow_time_) {
      Expression::Node node;
      node.kind = Kind::Variable;
      node.var_kind = VarKind::Time;
      return make_node(std::move(node));
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  int parse_uint(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1000000) throw ParseError(std::string(what) + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError(std::string("expected ") + what, start);
    return static_cast<int>(v);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int n_;
  int m_;
  bool allow_time_;
};

}  // namespace

Expression parse(const std::string& text, int n, int m, bool allow_time) {
  if (n < 0 || m < 0) throw ValidationError("dimensions must be non-negative");
  Parser p(text, n, m, allow_time);
  return Expression(p.run());
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// Shortest decimal literal (grammar allows no exponent notation) that parses
// back to exactly `v`.
std::string format_number(double v) {
  char buf[400];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string s(buf);
  if (s.find('e') == std::string::npos && s.find('E') == std::string::npos) {
    return s;
  }
  for (int dec = 0; dec <= 340; ++dec) {
    std::snprintf(buf, sizeof(buf), "%.*f", dec, v);
    if (std::strtod(buf, nullptr) == v) {
      s.assign(buf);
      // trim trailing zeros (keep at least one digit after the dot)
      const std::size_t dot = s.find('.');
      if (dot != std::string::npos) {
        std::size_t last = s.find_last_not_of('0');
        if (last == dot) last += 1;
        s.erase(last + 1);
        if (std::strtod(s.c_str(), nullptr) != v) s.assign(buf);
      }
      return s;
    }
  }
  return s;  // unreachable for finite v
}

// Precedence levels: Add/Sub 1, Mul/Div 2, Negate 3, Pow 4, atoms 5.
int precedence(const NodePtr& node) {
  switch (node->kind) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Negate:
      return 3;
    case Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

void print_node(const NodePtr& node, int context, std::string& out) {
  const int prec = precedence(node);
  const bool parens = prec < context;
  if (parens) out += '(';
  switch (node->kind) {
    case Kind::Number:
      if (node->number < 0.0 || std::signbit(node->number)) {
        out += '-';
        out += format_number(-node->number);
      } else {
        out += format_number(node->number);
      }
      break;
    case Kind::Variable:
      switch (node->var_kind) {
        case VarKind::State:
          out += 'x';
          out += std::to_string(node->var_index);
          break;
        case VarKind::Input:
          out += 'u';
          out += std::to_string(node->var_index);
          break;
        case VarKind::Time:
          out += 't';
          break;
      }
      break;
    case Kind::Add:
      print_node(node->a, 1, out);
      out += " + ";
      print_node(node->b, 2, out);
      break;
    case Kind::Sub:
      print_node(node->a, 1, out);
      out += " - ";
      print_node(node->b, 2, out);
      break;
    case Kind::Mul:
      print_node(node->a, 2, out);
      out += '*';
      print_node(node->b, 3, out);
      break;
    case Kind::Div:
      print_node(node->a, 2, out);
      out += '/';
      print_node(node->b, 3, out);
      break;
    case Kind::Negate:
      out += '-';
      print_node(node->a, 4, out);
      break;
    case Kind::Pow:
      print_node(node->a, 5, out);
      out += '^';
      out += std::to_string(node->exponent);
      break;
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
    case Kind::Sqrt:
    case Kind::Abs: {
      const char* name = node->kind == Kind::Sin    ? "sin"
                         : node->kind == Kind::Cos  ? "cos"
                         : node->kind == Kind::Exp  ? "exp"
                         : node->kind == Kind::Sqrt ? "sqrt"
                                                    : "abs";
      out += name;
      out += '(';
      print_node(node->a, 0, out);
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expression& e) {
  if (!e.valid()) return "";
  std::string out;
  print_node(e.root(), 0, out);
  return out;
}

namespace {

bool nodes_equal(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Number:
      return a->number == b->number;
    case Kind::Variable:
      return a->var_kind == b->var_kind && a->var_index == b->var_index;
    case Kind::Pow:
      return a->exponent == b->exponent && nodes_equal(a->a, b->a);
    default:
      return nodes_equal(a->a, b->a) && nodes_equal(a->b, b->b);
  }
}

}  // namespace

bool structurally_equal(const Expression& a, const Expression& b) {
  return nodes_equal(a.root(), b.root());
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

double finite_or_throw(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value in evaluation");
  return v;
}

double eval_node(const NodePtr& node, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& u, double t) {
  switch (node->kind) {
    case Kind::Number:
      return node->number;
    case Kind::Variable:
      switch (node->var_kind) {
        case VarKind::State:
          if (node->var_index > x.size()) {
            throw ValidationError("state vector too short for expression");
          }
          return x[node->var_index - 1];
        case VarKind::Input:
          if (node->var_index > u.size()) {
            throw ValidationError("input vector too short for expression");
          }
          return u[node->var_index - 1];
        case VarKind::Time:
          return t;
      }
      return 0.0;
    case Kind::Add:
      return finite_or_throw(eval_node(node->a, x, u, t) + eval_node(node->b, x, u, t));
    case Kind::Sub:
      return finite_or_throw(eval_node(node->a, x, u, t) - eval_node(node->b, x, u, t));
    case Kind::Mul:
      return finite_or_throw(eval_node(node->a, x, u, t) * eval_node(node->b, x, u, t));
    case Kind::Div: {
      const double num = eval_node(node->a, x, u, t);
      const double den = eval_node(node->b, x, u, t);
      if (den == 0.0) throw DomainError("division by zero");
      return finite_or_throw(num / den);
    }
    case Kind::Pow: {
      const double base = eval_node(node->a, x, u, t);
      double acc = 1.0;
      for (int i = 0; i < node->exponent; ++i) acc *= base;
      return finite_or_throw(acc);
    }
    case Kind::Negate:
      return -eval_node(node->a, x, u, t);
    case Kind::Sin:
      return std::sin(eval_node(node->a, x, u, t));
    case Kind::Cos:
      return std::cos(eval_node(node->a, x, u, t));
    case Kind::Exp:
      return finite_or_throw(std::exp(eval_node(node->a, x, u, t)));
    case Kind::Sqrt: {
      const double arg = eval_node(node->a, x, u, t);
      if (arg < 0.0) throw DomainError("sqrt of a negative value");
      return std::sqrt(arg);
    }
    case Kind::Abs:
      return std::abs(eval_node(node->a, x, u, t));
  }
  throw DomainError("corrupt expression node");
}

Interval eval_node_interval(const NodePtr& node, std::span<const Interval> box,
                            int n, int m) {
  switch (node->kind) {
    case Kind::Number:
      return Interval{node->number, node->number};
    case Kind::Variable:
      switch (node->var_kind) {
        case VarKind::State:
          if (node->var_index > n) {
            throw ValidationError("state index exceeds box dimension");
          }
          return box[node->var_index - 1];
        case VarKind::Input:
          if (node->var_index > m) {
            throw ValidationError("input index exceeds box dimension");
          }
          return box[n + node->var_index - 1];
        case VarKind::Time:
          throw DomainError("loop parameter t has no interval extension");
      }
      return Interval{};
    case Kind::Add:
      return eval_node_interval(node->a, box, n, m) +
             eval_node_interval(node->b, box, n, m);
    case Kind::Sub:
      return eval_node_interval(node->a, box, n, m) -
             eval_node_interval(node->b, box, n, m);
    case Kind::Mul:
      return eval_node_interval(node->a, box, n, m) *
             eval_node_interval(node->b, box, n, m);
    case Kind::Div:
      return eval_node_interval(node->a, box, n, m) /
             eval_node_interval(node->b, box, n, m);
    case Kind::Pow:
      return pow_int(eval_node_interval(node->a, box, n, m), node->exponent);
    case Kind::Negate:
      return -eval_node_interval(node->a, box, n, m);
    case Kind::Sin:
      return sin_i(eval_node_interval(node->a, box, n, m));
    case Kind::Cos:
      return cos_i(eval_node_interval(node->a, box, n, m));
    case Kind::Exp:
      return exp_i(eval_node_interval(node->a, box, n, m));
    case Kind::Sqrt:
      return sqrt_i(eval_node_interval(node->a, box, n, m));
    case Kind::Abs:
      return abs_i(eval_node_interval(node->a, box, n, m));
  }
  throw DomainError("corrupt expression node");
}

}  // namespace

double eval_point(const Expression& e, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& u, double t) {
  if (!e.valid()) throw ValidationError("empty expression");
  return eval_node(e.root(), x, u, t);
}

Interval eval_interval(const Expression& e, std::span<const Interval> box, int n,
                       int m) {
  if (!e.valid()) throw ValidationError("empty expression");
  if (static_cast<int>(box.size()) < n + m) {
    throw ValidationError("box dimension too small");
  }
  return eval_node_interval(e.root(), box, n, m);
}

}  // namespace stabcheck
