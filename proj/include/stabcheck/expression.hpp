#ifndef STABCHECK_EXPRESSION_HPP
#define STABCHECK_EXPRESSION_HPP

#include <Eigen/Core>
#include <memory>
#include <span>
#include <string>

#include "stabcheck/interval.hpp"

namespace stabcheck {

/// Immutable expression tree over the state variables x1..xn, the input
/// variables u1..um and (for probe parametrizations) the loop parameter t.
///
/// Grammar (infix, standard precedence, `^` binds tighter than unary minus):
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' uint)?
///   atom   := number | ident | '(' expr ')' | '-' atom | func '(' expr ')'
///   ident  := ('x'|'u') uint | 't'
///   func   := sin | cos | exp | sqrt | abs
///
/// Expressions are values sharing immutable nodes; evaluation is reentrant
/// and safe to call from many threads concurrently.
class Expression {
 public:
  enum class Kind {
    Number,
    Variable,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Negate,
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs
  };
  enum class VarKind { State, Input, Time };

  struct Node {
    Kind kind;
    double number = 0.0;
    VarKind var_kind = VarKind::State;
    int var_index = 0;  // 1-based for State/Input, unused for Time
    int exponent = 0;   // Pow only
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
  };
  using NodePtr = std::shared_ptr<const Node>;

  Expression() = default;

  static Expression number(double v);
  static Expression variable(VarKind kind, int index = 0);
  static Expression unary(Kind func, const Expression& arg);
  Expression pow(int exponent) const;

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);

  bool valid() const { return root_ != nullptr; }
  const NodePtr& root() const { return root_; }

  /// Largest state / input index referenced (0 when none).
  int max_state_index() const;
  int max_input_index() const;
  bool uses_time() const;

 private:
  explicit Expression(NodePtr root) : root_(std::move(root)) {}
  friend Expression parse(const std::string& text, int n, int m, bool allow_time);
  NodePtr root_;
};

/// Parses `text` against declared dimensions; identifiers outside x1..xn,
/// u1..um (plus `t` when `allow_time`) are rejected. Throws ParseError with
/// the 0-based offset of the offending token, or ValidationError for an
/// index out of range.
Expression parse(const std::string& text, int n, int m, bool allow_time = false);

/// Pretty-prints with minimal parentheses; parse(to_string(e)) is
/// structurally equal to e.
std::string to_string(const Expression& e);

bool structurally_equal(const Expression& a, const Expression& b);

/// Plain floating evaluation. Throws DomainError on division by zero, sqrt
/// of a negative, or a non-finite result.
double eval_point(const Expression& e, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& u, double t = 0.0);

/// Sound interval enclosure of {e(p) : p in box}; `box` is laid out as
/// [x1..xn, u1..um]. Throws DomainError if the box provably intersects a
/// singularity of e.
Interval eval_interval(const Expression& e, std::span<const Interval> box, int n,
                       int m);

}  // namespace stabcheck

#endif  // STABCHECK_EXPRESSION_HPP
