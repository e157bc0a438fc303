#pragma once

// Bit-parallel logic simulation: 64 test vectors per pass, one bit lane each.
//
// Random vectors are generated in blocks of 64. Block b draws from its own
// generator, seeded_stream(seed, b), producing one 64-bit word per primary
// input in declaration order; lane L of block b is test vector number
// 64*b + L, and input i of that vector is bit L of word i. Because blocks are
// independent, per-net one-counts do not depend on how blocks are divided
// among worker threads, only on (seed, n).

#include <bit>
#include <cstdint>
#include <thread>
#include <vector>

#include "core.hpp"
#include "netlist.hpp"
#include "rng.hpp"

namespace raregate {

// One word per primary input for the 64 random vectors of block `block`.
inline std::vector<std::uint64_t> random_block_words(std::size_t num_inputs,
                                                     std::uint64_t seed,
                                                     std::uint64_t block) {
  Xoshiro256ss rng = seeded_stream(seed, block);
  std::vector<std::uint64_t> words(num_inputs);
  for (auto& w : words) w = rng.next();
  return words;
}

// One word per primary input for exhaustive enumeration: lane L of block b is
// the assignment with index 64*b + L, input i carrying bit i of the index
// (input 0 = least significant). Only the mapping matters; callers see plain
// per-net counts.
inline std::vector<std::uint64_t> enum_block_words(std::size_t num_inputs,
                                                   std::uint64_t block) {
  // Bit patterns for inputs 0..5 within one 64-lane block are fixed;
  // inputs >= 6 are constant across the block.
  static constexpr std::uint64_t lane_pattern[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  std::vector<std::uint64_t> words(num_inputs);
  for (std::size_t i = 0; i < num_inputs; ++i) {
    if (i < 6)
      words[i] = lane_pattern[i];
    else
      words[i] = (block >> (i - 6)) & 1u ? ~0ull : 0ull;
  }
  return words;
}

// Evaluate all nets on 64 vectors at once. `input_words` is one word per
// primary input; the result has one word per net, indexed by NetId.
inline std::vector<std::uint64_t> simulate_words(
    const Netlist& n, const std::vector<std::uint64_t>& input_words) {
  if (input_words.size() != n.num_inputs())
    throw ValidationError("input word count does not match primary inputs");
  std::vector<std::uint64_t> val(n.num_nets(), 0);
  for (std::size_t i = 0; i < input_words.size(); ++i)
    val[n.inputs()[i]] = input_words[i];
  std::uint64_t in[max_arity];
  for (NetId id : n.topo_order()) {
    const Gate& g = n.gate_of(id);
    for (std::size_t j = 0; j < g.fanin.size(); ++j) {
      std::uint64_t w = val[g.fanin[j]];
      in[j] = (g.neg_mask >> j) & 1u ? ~w : w;
    }
    val[id] = gate_value_words(g.kind, in, g.fanin.size());
  }
  return val;
}

// The first n seeded random test vectors, as plain vectors. Identical bits to
// what count_ones_random sees; MERO's pool and the simulation report must be
// drawn from the same stream.
inline std::vector<TestVector> random_vectors(std::size_t num_inputs, std::size_t n,
                                              std::uint64_t seed) {
  std::vector<TestVector> out;
  out.reserve(n);
  for (std::uint64_t b = 0; b * 64 < n; ++b) {
    auto words = random_block_words(num_inputs, seed, b);
    std::size_t lanes = std::min<std::size_t>(64, n - b * 64);
    for (std::size_t lane = 0; lane < lanes; ++lane) {
      TestVector v(num_inputs);
      for (std::size_t i = 0; i < num_inputs; ++i)
        v[i] = (words[i] >> lane) & 1u;
      out.push_back(std::move(v));
    }
  }
  return out;
}

namespace detail {

template <typename BlockWords>
std::vector<std::uint64_t> count_ones_blocks(const Netlist& n, std::uint64_t n_vectors,
                                             BlockWords block_words, int threads) {
  std::uint64_t blocks = (n_vectors + 63) / 64;
  std::vector<std::uint64_t> ones(n.num_nets(), 0);
  auto run_range = [&](std::uint64_t lo, std::uint64_t hi,
                       std::vector<std::uint64_t>& acc) {
    for (std::uint64_t b = lo; b < hi; ++b) {
      auto words = block_words(b);
      auto val = simulate_words(n, words);
      std::uint64_t mask = ~0ull;
      if ((b + 1) * 64 > n_vectors) {
        std::uint64_t lanes = n_vectors - b * 64;
        mask = lanes == 64 ? ~0ull : ((1ull << lanes) - 1);
      }
      for (std::size_t net = 0; net < val.size(); ++net)
        acc[net] += static_cast<std::uint64_t>(std::popcount(val[net] & mask));
    }
  };
  if (threads <= 1 || blocks < 2) {
    run_range(0, blocks, ones);
    return ones;
  }
  std::uint64_t workers = std::min<std::uint64_t>(threads, blocks);
  std::vector<std::vector<std::uint64_t>> partial(
      workers, std::vector<std::uint64_t>(n.num_nets(), 0));
  std::vector<std::thread> pool;
  std::uint64_t chunk = (blocks + workers - 1) / workers;
  for (std::uint64_t w = 0; w < workers; ++w) {
    std::uint64_t lo = w * chunk, hi = std::min(blocks, lo + chunk);
    pool.emplace_back([&, lo, hi, w] { run_range(lo, hi, partial[w]); });
  }
  for (auto& t : pool) t.join();
  // Integer sums: the reduction order cannot change the result.
  for (auto& p : partial)
    for (std::size_t net = 0; net < ones.size(); ++net) ones[net] += p[net];
  return ones;
}

}  // namespace detail

// Per-net count of ones over the first n seeded random vectors.
inline std::vector<std::uint64_t> count_ones_random(const Netlist& n,
                                                    std::uint64_t n_vectors,
                                                    std::uint64_t seed,
                                                    int threads = 1) {
  return detail::count_ones_blocks(
      n, n_vectors,
      [&](std::uint64_t b) { return random_block_words(n.num_inputs(), seed, b); },
      threads);
}

// Per-net count of ones over all 2^k input assignments.
inline std::vector<std::uint64_t> count_ones_exhaustive(const Netlist& n,
                                                        int threads = 1) {
  std::size_t k = n.num_inputs();
  if (k > 24)
    throw CapacityError("exhaustive enumeration limited to 24 inputs, netlist has " +
                        std::to_string(k));
  std::uint64_t total = 1ull << k;
  return detail::count_ones_blocks(
      n, total, [&](std::uint64_t b) { return enum_block_words(k, b); }, threads);
}

}  // namespace raregate
