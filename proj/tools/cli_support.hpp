#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace design_forge::cli {

/// Bad command-line input (exit 64).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic expression in the variable n: + - * / ^, unary minus,
/// parentheses, decimal literals. ^ is right-associative.
class NRule {
 public:
  explicit NRule(std::string expr);
  double evaluate(double n) const;
  /// Evaluates and rounds; throws UsageError unless the result is a positive integer.
  std::size_t count(int n) const;
  const std::string& text() const { return text_; }

 private:
  struct Node {
    char op;  // 'n' variable, 'c' constant, '~' negation, or a binary operator
    double value = 0.0;
    int lhs = -1;
    int rhs = -1;
  };
  std::string text_;
  std::vector<Node> nodes_;
  int root_ = -1;
  friend class NRuleParser;
};

/// "a..b", "a,b,c", or a single integer. Throws UsageError when empty or malformed.
std::vector<int> parse_int_range(const std::string& text);

}  // namespace design_forge::cli
