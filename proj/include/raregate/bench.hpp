#pragma once

// ISCAS-85 style BENCH reader and writer.
//
// Accepted lines: `INPUT(x)`, `OUTPUT(x)`, `y = KIND(a, b, ...)`, comments
// starting with `#`, and blank lines. Keywords and gate kinds are matched
// case-insensitively. One extension over classic BENCH: a fan-in argument may
// carry a `!` prefix marking a complemented literal (`Z = AND(A, !B)`), which
// maps onto the Gate negation mask. write_bench emits the same dialect, so
// any valid Netlist round-trips; files that never use `!` are plain ISCAS-85.
// Grammar in docs/formats.md.

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "netlist.hpp"

namespace raregate {

namespace detail {

inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '$' || c == '[' || c == ']';
}

struct BenchCursor {
  std::string_view line;
  std::size_t pos = 0;
  int lineno = 0;

  void skip_ws() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(lineno) + ", col " +
                     std::to_string(pos + 1) + ": " + what);
  }

  bool eat(char c) {
    skip_ws();
    if (pos < line.size() && line[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string name() {
    skip_ws();
    std::size_t start = pos;
    while (pos < line.size() && is_name_char(line[pos])) ++pos;
    if (pos == start) fail("expected a net name");
    return std::string(line.substr(start, pos - start));
  }

  bool at_end() {
    skip_ws();
    return pos >= line.size();
  }
};

inline bool keyword_is(std::string_view word, std::string_view upper) {
  if (word.size() != upper.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(word[i])) != upper[i]) return false;
  return true;
}

}  // namespace detail

inline Netlist parse_bench(std::string_view text, const std::string& name = "bench") {
  NetlistBuilder b(name);
  std::vector<std::pair<std::string, int>> output_names;  // name, line

  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(
        start, nl == std::string_view::npos ? text.size() - start : nl - start);
    ++lineno;
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    detail::BenchCursor c{line, 0, lineno};
    c.skip_ws();
    if (c.at_end() || line[c.pos] == '#') continue;

    std::string first = c.name();
    if (c.eat('(')) {
      // INPUT(x) or OUTPUT(x)
      std::string net = c.name();
      c.expect(')');
      if (!c.at_end() && line[c.pos] != '#') c.fail("trailing text after ')'");
      if (detail::keyword_is(first, "INPUT")) {
        try {
          b.add_input(net);
        } catch (const ValidationError& e) {
          throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
      } else if (detail::keyword_is(first, "OUTPUT")) {
        output_names.emplace_back(net, lineno);
      } else {
        c.fail("unknown directive '" + first + "'");
      }
      continue;
    }

    // Gate definition: out = KIND(arg, ...)
    c.expect('=');
    c.skip_ws();
    std::string kind_word = c.name();
    auto kind = gate_kind_from(kind_word);
    if (!kind)
      throw ParseError("line " + std::to_string(lineno) + ": unsupported gate kind '" +
                       kind_word + "'");
    c.expect('(');
    std::vector<NetId> fanin;
    std::uint32_t neg = 0;
    while (true) {
      bool compl_ = c.eat('!');
      std::string arg = c.name();
      if (compl_) neg |= 1u << fanin.size();
      fanin.push_back(b.declare(arg));
      if (c.eat(',')) continue;
      c.expect(')');
      break;
    }
    if (!c.at_end() && line[c.pos] != '#') c.fail("trailing text after ')'");
    try {
      b.add_gate(*kind, std::move(fanin), neg, first);
    } catch (const ValidationError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }

  for (auto& [net, ln] : output_names) {
    if (!b.has(net))
      throw ParseError("line " + std::to_string(ln) + ": output of undefined net '" +
                       net + "'");
    try {
      b.mark_output(b.declare(net));
    } catch (const ValidationError& e) {
      throw ParseError("line " + std::to_string(ln) + ": " + e.what());
    }
  }
  return b.build();
}

// Emits inputs, outputs, then gates in topological order. Stable: the same
// netlist always yields byte-identical text.
inline std::string write_bench(const Netlist& n) {
  std::string out;
  for (NetId i : n.inputs()) out += "INPUT(" + n.net_name(i) + ")\n";
  for (NetId o : n.outputs()) out += "OUTPUT(" + n.net_name(o) + ")\n";
  for (NetId id : n.topo_order()) {
    const Gate& g = n.gate_of(id);
    out += n.net_name(id);
    out += " = ";
    out += to_string(g.kind);
    out += "(";
    for (std::size_t j = 0; j < g.fanin.size(); ++j) {
      if (j) out += ", ";
      if ((g.neg_mask >> j) & 1u) out += "!";
      out += n.net_name(g.fanin[j]);
    }
    out += ")\n";
  }
  return out;
}

}  // namespace raregate
