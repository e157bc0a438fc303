#pragma once

// Shared primitive types and the error taxonomy used across the toolkit.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace raregate {

using NetId = std::uint32_t;
inline constexpr NetId null_net = static_cast<NetId>(-1);

// One bit per primary input, in input declaration order.
using TestVector = std::vector<std::uint8_t>;

// Malformed input text (BENCH, expression, JSON, test-set files).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a structural or semantic rule.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Request exceeds an enumeration or size bound (e.g. exact probabilities on
// too many inputs, optimization cone too wide).
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken internal invariant. Any sighting is a bug in this library.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr char version[] = "1.0.0";

// Seed used by every seeded operation when the caller does not pick one.
// Fixed (never time-based) so bare invocations are reproducible.
inline constexpr std::uint64_t default_seed = 0xA5EEDull;

}  // namespace raregate
