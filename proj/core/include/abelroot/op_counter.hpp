#pragma once

#include <cstdint>

namespace abelroot {

// Group-operation tally for one caller. Passed explicitly by pointer; a null
// pointer means "don't count". Not thread-safe: one counter per call chain.
//
// Charging convention:
//   add            1 addition
//   doubling       1 doubling (add(x, x) inside scalar_mul)
//   negate         1 negation
//   order          one exponentiation, charged as ceil(log2(exponent of G))
//                  group operations, because the closed-form gcd/lcm
//                  evaluation stands in for a generic-group exponentiation
// Coefficient bookkeeping (valuations, divisibility, index sets) is free.
struct OpCounter {
  std::uint64_t additions = 0;
  std::uint64_t doublings = 0;
  std::uint64_t negations = 0;
  std::uint64_t order_charges = 0;

  std::uint64_t total() const { return additions + doublings + negations + order_charges; }

  void reset() { *this = OpCounter{}; }

  OpCounter& operator+=(const OpCounter& other) {
    additions += other.additions;
    doublings += other.doublings;
    negations += other.negations;
    order_charges += other.order_charges;
    return *this;
  }
};

}  // namespace abelroot
