#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace abelroot {

using Integer = mpz_class;

Integer pow(const Integer& base, unsigned long exponent);

// Largest r with p^r | n. Undefined for n == 0 (throws InvalidArgument).
unsigned long padic_valuation(const Integer& n, const Integer& p);

// Inverse of a modulo m, in [0, m). Throws PreconditionViolation when
// gcd(a, m) != 1.
Integer mod_inverse(const Integer& a, const Integer& m);

// Canonical representative of a modulo m, in [0, m).
Integer mod(const Integer& a, const Integer& m);

std::size_t bit_length(const Integer& n);

// Deterministic Miller-Rabin with the first thirteen prime bases, which is
// proven correct below primality_limit(). Throws InvalidArgument at or above it.
bool is_prime(const Integer& n);

// 3317044064679887385961981 ~ 3.3e24.
const Integer& primality_limit();

// Decimal parse; throws InvalidArgument on anything that is not an optional
// sign followed by digits.
Integer parse_integer(std::string_view text);

inline std::string to_string(const Integer& n) { return n.get_str(); }

}  // namespace abelroot
