#pragma once

// Boolean expression frontend for entering small circuits directly, e.g.
// "AB+BC(B+C)" or "(CB+A!C)A+DA".
//
// Grammar (EBNF in docs/formats.md):
//   expr   := term ('+' term)*
//   term   := factor (['*'] factor)*        juxtaposition = AND
//   factor := '!' factor | '(' expr ')' | VAR
//   VAR    := single letter
//
// Lowering rules: AND/OR chains decompose into left-associative 2-input
// gates; '!' applied to a primary-input variable becomes a complemented
// fan-in literal on the consuming gate (no NOT gate, no extra net); '!' on a
// parenthesized subexpression instantiates a NOT gate. Inputs are declared in
// first-occurrence order.

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "netlist.hpp"

namespace raregate {

namespace detail {

struct ExprNode {
  enum Kind { Var, Not, And, Or } kind;
  char var = 0;
  std::vector<std::unique_ptr<ExprNode>> kids;
};

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  std::unique_ptr<ExprNode> parse() {
    auto e = parse_or();
    skip_ws();
    if (pos_ < s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression col " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek_factor_start() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '!' || c == '(' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  std::unique_ptr<ExprNode> parse_or() {
    auto node = std::make_unique<ExprNode>();
    node->kind = ExprNode::Or;
    node->kids.push_back(parse_and());
    skip_ws();
    while (pos_ < s_.size() && s_[pos_] == '+') {
      ++pos_;
      node->kids.push_back(parse_and());
      skip_ws();
    }
    if (node->kids.size() == 1) return std::move(node->kids[0]);
    return node;
  }

  std::unique_ptr<ExprNode> parse_and() {
    auto node = std::make_unique<ExprNode>();
    node->kind = ExprNode::And;
    node->kids.push_back(parse_factor());
    while (true) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        node->kids.push_back(parse_factor());
        continue;
      }
      if (peek_factor_start()) {
        node->kids.push_back(parse_factor());
        continue;
      }
      break;
    }
    if (node->kids.size() == 1) return std::move(node->kids[0]);
    return node;
  }

  std::unique_ptr<ExprNode> parse_factor() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected a variable, '!' or '('");
    char c = s_[pos_];
    if (c == '!') {
      ++pos_;
      auto inner = parse_factor();
      if (inner->kind == ExprNode::Not)  // fold !!x
        return std::move(inner->kids[0]);
      auto node = std::make_unique<ExprNode>();
      node->kind = ExprNode::Not;
      node->kids.push_back(std::move(inner));
      return node;
    }
    if (c == '(') {
      ++pos_;
      auto inner = parse_or();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      ++pos_;
      auto node = std::make_unique<ExprNode>();
      node->kind = ExprNode::Var;
      node->var = c;
      return node;
    }
    fail("expected a variable, '!' or '('");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// A lowered operand: a net plus a complement flag, so input literals can be
// consumed directly by the parent gate through its negation mask.
struct Operand {
  NetId net;
  bool neg;
};

class ExprLowerer {
 public:
  ExprLowerer(NetlistBuilder& b, const std::string& out_name)
      : b_(b), out_name_(out_name) {}

  // The root gate is created last and carries the requested output name.
  // Intermediate gates get counter names derived from it ("X_1", "X_2", ...),
  // which are always longer than the output name and never single letters, so
  // they cannot collide with it or with input variables.
  void lower_root(const ExprNode& root) {
    NetId out;
    switch (root.kind) {
      case ExprNode::Var: {
        NetId in = input_for(root.var);
        if (std::string(1, root.var) == out_name_) {
          out = in;  // wire-through, no gate
        } else {
          out = b_.add_gate(GateKind::Buf, std::vector<NetId>{in}, 0, out_name_);
        }
        break;
      }
      case ExprNode::Not: {
        Operand inner = lower(*root.kids[0]);
        out = b_.add_gate(GateKind::Not, std::vector<NetId>{inner.net},
                          inner.neg ? 1u : 0u, out_name_);
        break;
      }
      case ExprNode::And:
      case ExprNode::Or:
        out = lower_chain(root, true);
        break;
      default:
        throw InternalError("unhandled expression node");
    }
    b_.mark_output(out);
  }

 private:
  NetId input_for(char v) {
    std::string name(1, v);
    if (b_.has(name)) return b_.declare(name);
    return b_.add_input(name);
  }

  // Left-associative 2-input decomposition of an n-ary AND/OR chain. When
  // `is_root`, the final gate takes the output name.
  NetId lower_chain(const ExprNode& n, bool is_root) {
    GateKind kind = n.kind == ExprNode::And ? GateKind::And : GateKind::Or;
    Operand acc = lower(*n.kids[0]);
    NetId id = null_net;
    for (std::size_t i = 1; i < n.kids.size(); ++i) {
      Operand rhs = lower(*n.kids[i]);
      std::uint32_t mask = (acc.neg ? 1u : 0u) | (rhs.neg ? 2u : 0u);
      bool last = i + 1 == n.kids.size();
      id = b_.add_gate(kind, std::vector<NetId>{acc.net, rhs.net}, mask,
                       last && is_root ? out_name_ : next_name());
      acc = {id, false};
    }
    return id;
  }

  Operand lower(const ExprNode& n) {
    switch (n.kind) {
      case ExprNode::Var:
        return {input_for(n.var), false};
      case ExprNode::Not: {
        const ExprNode& k = *n.kids[0];
        if (k.kind == ExprNode::Var) return {input_for(k.var), true};
        Operand inner = lower(k);
        NetId id = b_.add_gate(GateKind::Not, std::vector<NetId>{inner.net},
                               inner.neg ? 1u : 0u, next_name());
        return {id, false};
      }
      case ExprNode::And:
      case ExprNode::Or:
        return {lower_chain(n, false), false};
    }
    throw InternalError("unhandled expression node");
  }

  std::string next_name() {
    return out_name_ + "_" + std::to_string(++counter_);
  }

  NetlistBuilder& b_;
  std::string out_name_;
  int counter_ = 0;
};

}  // namespace detail

inline Netlist parse_expr(const std::string& name, std::string_view expr) {
  if (expr.empty()) throw ParseError("empty expression");
  detail::ExprParser parser(expr);
  auto root = parser.parse();
  NetlistBuilder b(name);
  detail::ExprLowerer lower(b, name);
  lower.lower_root(*root);
  return b.build();
}

}  // namespace raregate
