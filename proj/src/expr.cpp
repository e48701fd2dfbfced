#include "slgeo/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <vector>

namespace slgeo {

namespace {

struct Node {
  enum Kind { kConst, kVarX, kVarY, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSin, kCos, kExp };
  Kind kind;
  double value = 0;
  int lhs = -1, rhs = -1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  int parse() {
    const int root = expression();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return root;
  }

  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  int expression() {
    int lhs = term();
    for (;;) {
      skip_space();
      if (accept('+'))
        lhs = binary(Node::kAdd, lhs, term());
      else if (accept('-'))
        lhs = binary(Node::kSub, lhs, term());
      else
        return lhs;
    }
  }

  int term() {
    int lhs = factor();
    for (;;) {
      skip_space();
      if (accept('*'))
        lhs = binary(Node::kMul, lhs, factor());
      else if (accept('/'))
        lhs = binary(Node::kDiv, lhs, factor());
      else
        return lhs;
    }
  }

  int factor() {
    const int base = unary();
    skip_space();
    if (accept('^')) return binary(Node::kPow, base, factor());
    return base;
  }

  int unary() {
    skip_space();
    if (accept('-')) return unary_node(Node::kNeg, unary());
    accept('+');
    return primary();
  }

  int primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      double v = 0;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        throw ParseError("malformed number", pos_);
      }
      pos_ += used;
      return constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "x") return leaf(Node::kVarX);
      if (name == "y") return leaf(Node::kVarY);
      if (name == "pi") return constant(3.14159265358979323846);
      Node::Kind kind;
      if (name == "sin")
        kind = Node::kSin;
      else if (name == "cos")
        kind = Node::kCos;
      else if (name == "exp")
        kind = Node::kExp;
      else
        throw ParseError("unknown identifier '" + name + "'", start);
      skip_space();
      if (!accept('(')) throw ParseError("expected '(' after " + name, pos_);
      const int arg = expression();
      skip_space();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return unary_node(kind, arg);
    }
    if (accept('(')) {
      const int inner = expression();
      skip_space();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int constant(double v) {
    nodes_.push_back({Node::kConst, v, -1, -1});
    return static_cast<int>(nodes_.size()) - 1;
  }
  int leaf(Node::Kind kind) {
    nodes_.push_back({kind, 0, -1, -1});
    return static_cast<int>(nodes_.size()) - 1;
  }
  int unary_node(Node::Kind kind, int arg) {
    nodes_.push_back({kind, 0, arg, -1});
    return static_cast<int>(nodes_.size()) - 1;
  }
  int binary(Node::Kind kind, int lhs, int rhs) {
    nodes_.push_back({kind, 0, lhs, rhs});
    return static_cast<int>(nodes_.size()) - 1;
  }

  const std::string& text_;
  size_t pos_ = 0;
  std::vector<Node> nodes_;
};

double eval(const std::vector<Node>& nodes, int id, double x, double y) {
  const Node& n = nodes[id];
  switch (n.kind) {
    case Node::kConst: return n.value;
    case Node::kVarX: return x;
    case Node::kVarY: return y;
    case Node::kAdd: return eval(nodes, n.lhs, x, y) + eval(nodes, n.rhs, x, y);
    case Node::kSub: return eval(nodes, n.lhs, x, y) - eval(nodes, n.rhs, x, y);
    case Node::kMul: return eval(nodes, n.lhs, x, y) * eval(nodes, n.rhs, x, y);
    case Node::kDiv: return eval(nodes, n.lhs, x, y) / eval(nodes, n.rhs, x, y);
    case Node::kPow: return std::pow(eval(nodes, n.lhs, x, y), eval(nodes, n.rhs, x, y));
    case Node::kNeg: return -eval(nodes, n.lhs, x, y);
    case Node::kSin: return std::sin(eval(nodes, n.lhs, x, y));
    case Node::kCos: return std::cos(eval(nodes, n.lhs, x, y));
    case Node::kExp: return std::exp(eval(nodes, n.lhs, x, y));
  }
  return 0;
}

}  // namespace

std::function<double(double, double)> parse_expression(const std::string& text) {
  Parser parser(text);
  const int root = parser.parse();
  auto nodes = std::make_shared<std::vector<Node>>(parser.nodes());
  return [nodes, root](double x, double y) { return eval(*nodes, root, x, y); };
}

}  // namespace slgeo
