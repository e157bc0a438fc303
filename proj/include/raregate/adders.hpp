#pragma once

// Structural generators for four textbook adder architectures. All produce
// the same interface (inputs A0..Aw-1, B0..Bw-1, CIN; outputs S0..Sw-1, COUT)
// and identical arithmetic, but very different internal signal statistics,
// which is what the rareness study compares across designs.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "core.hpp"
#include "netlist.hpp"

namespace raregate {

enum class AdderArch { RippleCarry, CarryLookahead, CarrySkip, KoggeStone };

inline const char* to_string(AdderArch a) {
  switch (a) {
    case AdderArch::RippleCarry: return "ripple-carry";
    case AdderArch::CarryLookahead: return "carry-lookahead";
    case AdderArch::CarrySkip: return "carry-skip";
    case AdderArch::KoggeStone: return "kogge-stone";
  }
  return "?";
}

namespace detail {

struct AdderIo {
  std::vector<NetId> a, b, s;
  NetId cin = null_net;
};

inline AdderIo adder_ports(NetlistBuilder& nb, int width) {
  AdderIo io;
  for (int i = 0; i < width; ++i) io.a.push_back(nb.add_input("A" + std::to_string(i)));
  for (int i = 0; i < width; ++i) io.b.push_back(nb.add_input("B" + std::to_string(i)));
  io.cin = nb.add_input("CIN");
  return io;
}

inline void adder_outputs(NetlistBuilder& nb, const std::vector<NetId>& s, NetId cout) {
  for (NetId x : s) nb.mark_output(x);
  nb.mark_output(cout);
}

// Left-associative AND chain over the given nets.
inline NetId and_chain(NetlistBuilder& nb, const std::vector<NetId>& nets,
                       const std::string& prefix, int& counter) {
  NetId acc = nets[0];
  for (std::size_t i = 1; i < nets.size(); ++i)
    acc = nb.add_gate(GateKind::And, {acc, nets[i]},
                      prefix + std::to_string(++counter));
  return acc;
}

inline NetId or_chain(NetlistBuilder& nb, const std::vector<NetId>& nets,
                      const std::string& prefix, int& counter,
                      const std::string& final_name) {
  NetId acc = nets[0];
  for (std::size_t i = 1; i < nets.size(); ++i) {
    bool last = i + 1 == nets.size();
    acc = nb.add_gate(GateKind::Or, {acc, nets[i]},
                      last ? final_name : prefix + std::to_string(++counter));
  }
  return acc;
}

inline Netlist gen_ripple(int width) {
  NetlistBuilder nb("rca" + std::to_string(width));
  AdderIo io = adder_ports(nb, width);
  NetId carry = io.cin;
  for (int i = 0; i < width; ++i) {
    std::string is = std::to_string(i);
    NetId p = nb.add_gate(GateKind::Xor, {io.a[i], io.b[i]}, "P" + is);
    io.s.push_back(nb.add_gate(GateKind::Xor, {p, carry}, "S" + is));
    NetId g = nb.add_gate(GateKind::And, {io.a[i], io.b[i]}, "G" + is);
    NetId t = nb.add_gate(GateKind::And, {p, carry}, "T" + is);
    carry = nb.add_gate(GateKind::Or, {g, t},
                        i + 1 == width ? "COUT" : "C" + std::to_string(i + 1));
  }
  adder_outputs(nb, io.s, carry);
  return nb.build();
}

// 4-bit lookahead blocks. Every carry inside a block is expanded directly in
// terms of the block carry-in: c_j = g_{j-1} + p_{j-1}g_{j-2} + ... +
// p_{j-1}..p_0*cin. No product sharing; the point is the architecture's
// signal profile, not minimal area.
inline Netlist gen_lookahead(int width) {
  NetlistBuilder nb("cla" + std::to_string(width));
  AdderIo io = adder_ports(nb, width);
  std::vector<NetId> p(width), g(width);
  for (int i = 0; i < width; ++i) {
    std::string is = std::to_string(i);
    p[i] = nb.add_gate(GateKind::Xor, {io.a[i], io.b[i]}, "P" + is);
    g[i] = nb.add_gate(GateKind::And, {io.a[i], io.b[i]}, "G" + is);
  }
  int tmp = 0;
  NetId block_cin = io.cin;
  std::vector<NetId> carry_into(width);  // carry arriving at each bit
  NetId cout = null_net;
  for (int lo = 0; lo < width; lo += 4) {
    int len = std::min(4, width - lo);
    carry_into[lo] = block_cin;
    for (int j = 1; j <= len; ++j) {
      std::vector<NetId> terms;
      for (int t = j - 1; t >= 0; --t) {
        std::vector<NetId> prod;
        for (int k = j - 1; k > t; --k) prod.push_back(p[lo + k]);
        prod.push_back(g[lo + t]);
        terms.push_back(and_chain(nb, prod, "CT", tmp));
      }
      std::vector<NetId> cin_prod;
      for (int k = j - 1; k >= 0; --k) cin_prod.push_back(p[lo + k]);
      cin_prod.push_back(block_cin);
      terms.push_back(and_chain(nb, cin_prod, "CT", tmp));
      bool is_cout = lo + j == width;
      NetId c = or_chain(nb, terms, "CO", tmp,
                         is_cout ? "COUT" : "C" + std::to_string(lo + j));
      if (is_cout)
        cout = c;
      else
        carry_into[lo + j] = c;
      if (j == len) block_cin = c;
    }
  }
  for (int i = 0; i < width; ++i)
    io.s.push_back(
        nb.add_gate(GateKind::Xor, {p[i], carry_into[i]}, "S" + std::to_string(i)));
  adder_outputs(nb, io.s, cout);
  return nb.build();
}

// Ripple blocks of 4 with a skip path: block carry-out =
// ripple-out OR (block-propagate AND block carry-in).
inline Netlist gen_skip(int width) {
  NetlistBuilder nb("csa" + std::to_string(width));
  AdderIo io = adder_ports(nb, width);
  int tmp = 0;
  NetId block_cin = io.cin;
  NetId cout = null_net;
  for (int lo = 0; lo < width; lo += 4) {
    int len = std::min(4, width - lo);
    NetId carry = block_cin;
    std::vector<NetId> props;
    for (int i = lo; i < lo + len; ++i) {
      std::string is = std::to_string(i);
      NetId p = nb.add_gate(GateKind::Xor, {io.a[i], io.b[i]}, "P" + is);
      props.push_back(p);
      io.s.push_back(nb.add_gate(GateKind::Xor, {p, carry}, "S" + is));
      NetId g = nb.add_gate(GateKind::And, {io.a[i], io.b[i]}, "G" + is);
      NetId t = nb.add_gate(GateKind::And, {p, carry}, "T" + is);
      bool last_bit = i + 1 == lo + len;
      carry = nb.add_gate(GateKind::Or, {g, t},
                          last_bit ? "RCO" + std::to_string(lo / 4)
                                   : "C" + std::to_string(i + 1));
    }
    NetId bp = and_chain(nb, props, "BP", tmp);
    NetId sk = nb.add_gate(GateKind::And, {bp, block_cin},
                           "SK" + std::to_string(lo / 4));
    bool is_last = lo + len == width;
    block_cin = nb.add_gate(GateKind::Or, {carry, sk},
                            is_last ? "COUT" : "C" + std::to_string(lo + len));
    if (is_last) cout = block_cin;
  }
  adder_outputs(nb, io.s, cout);
  return nb.build();
}

// Parallel-prefix carries: (G,P) pairs combined at distances 1,2,4,... so
// prefix generate/propagate over bits [0..k] is available in log depth.
inline Netlist gen_kogge_stone(int width) {
  NetlistBuilder nb("ksa" + std::to_string(width));
  AdderIo io = adder_ports(nb, width);
  std::vector<NetId> p(width), g(width);
  for (int i = 0; i < width; ++i) {
    std::string is = std::to_string(i);
    p[i] = nb.add_gate(GateKind::Xor, {io.a[i], io.b[i]}, "P" + is);
    g[i] = nb.add_gate(GateKind::And, {io.a[i], io.b[i]}, "G" + is);
  }
  std::vector<NetId> pre_g = g, pre_p = p;
  int tmp = 0;
  for (int d = 1, level = 1; d < width; d *= 2, ++level) {
    std::vector<NetId> ng = pre_g, np = pre_p;
    for (int k = width - 1; k >= d; --k) {
      std::string tag = std::to_string(level) + "_" + std::to_string(k);
      NetId t = nb.add_gate(GateKind::And, {pre_p[k], pre_g[k - d]},
                            "KT" + std::to_string(++tmp));
      ng[k] = nb.add_gate(GateKind::Or, {pre_g[k], t}, "KG" + tag);
      np[k] = nb.add_gate(GateKind::And, {pre_p[k], pre_p[k - d]}, "KP" + tag);
    }
    pre_g = ng;
    pre_p = np;
  }
  // pre_g[k]/pre_p[k] now span bits [0..k]; carry into bit k+1 follows.
  std::vector<NetId> carry_into(width);
  carry_into[0] = io.cin;
  NetId cout = null_net;
  for (int k = 0; k < width; ++k) {
    NetId t = nb.add_gate(GateKind::And, {pre_p[k], io.cin},
                          "KC" + std::to_string(k));
    NetId c = nb.add_gate(GateKind::Or, {pre_g[k], t},
                          k + 1 == width ? "COUT" : "C" + std::to_string(k + 1));
    if (k + 1 == width)
      cout = c;
    else
      carry_into[k + 1] = c;
  }
  for (int i = 0; i < width; ++i)
    io.s.push_back(
        nb.add_gate(GateKind::Xor, {p[i], carry_into[i]}, "S" + std::to_string(i)));
  adder_outputs(nb, io.s, cout);
  return nb.build();
}

}  // namespace detail

inline Netlist gen_adder(AdderArch arch, int width) {
  if (width < 1) throw ValidationError("adder width must be at least 1");
  switch (arch) {
    case AdderArch::RippleCarry: return detail::gen_ripple(width);
    case AdderArch::CarryLookahead: return detail::gen_lookahead(width);
    case AdderArch::CarrySkip: return detail::gen_skip(width);
    case AdderArch::KoggeStone: return detail::gen_kogge_stone(width);
  }
  throw InternalError("unknown adder architecture");
}

}  // namespace raregate
