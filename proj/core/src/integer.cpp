#include "abelroot/integer.hpp"

#include <array>
#include <cctype>

#include "abelroot/errors.hpp"

namespace abelroot {

Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

unsigned long padic_valuation(const Integer& n, const Integer& p) {
  if (n == 0) throw InvalidArgument("padic_valuation: zero has infinite valuation");
  if (p < 2) throw InvalidArgument("padic_valuation: base must be >= 2");
  if (p == 2) return mpz_scan1(n.get_mpz_t(), 0);
  Integer rest = n;
  unsigned long v = 0;
  while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

Integer mod(const Integer& a, const Integer& m) {
  Integer out;
  mpz_mod(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return out;
}

Integer mod_inverse(const Integer& a, const Integer& m) {
  if (m == 1) return 0;
  Integer out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw PreconditionViolation("mod_inverse: " + a.get_str() + " is not a unit modulo " +
                                m.get_str());
  }
  return out;
}

std::size_t bit_length(const Integer& n) {
  if (n == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

const Integer& primality_limit() {
  static const Integer limit("3317044064679887385961981");
  return limit;
}

namespace {

constexpr std::array<unsigned long, 13> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

bool strong_probable_prime(const Integer& n, const Integer& d, unsigned long s, unsigned long a) {
  const Integer n_minus_1 = n - 1;
  Integer x;
  const Integer base = a;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (n >= primality_limit()) {
    throw InvalidArgument("is_prime: " + n.get_str() +
                          " exceeds the deterministic Miller-Rabin range");
  }
  for (unsigned long w : kWitnesses) {
    if (n == w) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), w)) return false;
  }
  Integer d = n - 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (unsigned long w : kWitnesses) {
    if (!strong_probable_prime(n, d, s, w)) return false;
  }
  return true;
}

Integer parse_integer(std::string_view text) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty()) throw InvalidArgument("not an integer: \"" + std::string(text) + "\"");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw InvalidArgument("not an integer: \"" + std::string(text) + "\"");
    }
  }
  std::string normalized(text);
  if (normalized.front() == '+') normalized.erase(0, 1);
  return Integer(normalized, 10);
}

}  // namespace abelroot
