#include "cli_support.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace design_forge::cli {

class NRuleParser {
 public:
  NRuleParser(const std::string& s, NRule& rule) : s_(s), rule_(rule) {}

  int parse() {
    const int root = sum();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw UsageError("N rule '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int add(NRule::Node node) {
    rule_.nodes_.push_back(node);
    return static_cast<int>(rule_.nodes_.size()) - 1;
  }

  int sum() {
    int lhs = product();
    for (;;) {
      if (accept('+'))
        lhs = add({'+', 0.0, lhs, product()});
      else if (accept('-'))
        lhs = add({'-', 0.0, lhs, product()});
      else
        return lhs;
    }
  }

  int product() {
    int lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = add({'*', 0.0, lhs, unary()});
      else if (accept('/'))
        lhs = add({'/', 0.0, lhs, unary()});
      else
        return lhs;
    }
  }

  int unary() {
    if (accept('-')) return add({'~', 0.0, unary(), -1});
    if (accept('+')) return unary();
    return power();
  }

  int power() {
    const int base = atom();
    if (accept('^')) return add({'^', 0.0, base, unary()});
    return base;
  }

  int atom() {
    skip_space();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      const int inner = sum();
      if (!accept(')')) fail("missing ')'");
      return inner;
    }
    if (s_[pos_] == 'n') {
      ++pos_;
      return add({'n'});
    }
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number, 'n' or '('");
    pos_ += static_cast<std::size_t>(end - begin);
    return add({'c', v});
  }

  const std::string& s_;
  NRule& rule_;
  std::size_t pos_ = 0;
};

NRule::NRule(std::string expr) : text_(std::move(expr)) {
  NRuleParser parser(text_, *this);
  root_ = parser.parse();
}

double NRule::evaluate(double n) const {
  auto eval = [&](auto&& self, int i) -> double {
    const Node& nd = nodes_[static_cast<std::size_t>(i)];
    switch (nd.op) {
      case 'n':
        return n;
      case 'c':
        return nd.value;
      case '~':
        return -self(self, nd.lhs);
      case '+':
        return self(self, nd.lhs) + self(self, nd.rhs);
      case '-':
        return self(self, nd.lhs) - self(self, nd.rhs);
      case '*':
        return self(self, nd.lhs) * self(self, nd.rhs);
      case '/':
        return self(self, nd.lhs) / self(self, nd.rhs);
      default:
        return std::pow(self(self, nd.lhs), self(self, nd.rhs));
    }
  };
  return eval(eval, root_);
}

std::size_t NRule::count(int n) const {
  const double v = evaluate(n);
  const double r = std::round(v);
  if (!std::isfinite(v) || std::abs(v - r) > 1e-9 || r < 1.0 || r > 1e9)
    throw UsageError("N rule '" + text_ + "' gives " + std::to_string(v) + " at n=" + std::to_string(n) +
                     ", not a positive integer");
  return static_cast<std::size_t>(r);
}

namespace {

int parse_int(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad integer range '" + whole + "'");
  }
  if (used != s.size()) throw UsageError("bad integer range '" + whole + "'");
  return v;
}

}  // namespace

std::vector<int> parse_int_range(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) throw UsageError("empty range");
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = parse_int(text.substr(0, dots), text);
    const int hi = parse_int(text.substr(dots + 2), text);
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  } else {
    std::size_t start = 0;
    for (;;) {
      const auto comma = text.find(',', start);
      out.push_back(parse_int(text.substr(start, comma - start), text));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (out.empty()) throw UsageError("empty range '" + text + "'");
  return out;
}

}  // namespace design_forge::cli
