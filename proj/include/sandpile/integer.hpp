#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace sandpile {

/// Arbitrary-precision signed integer used for every count, chip pile and
/// matrix entry in the library.
using Integer = mpz_class;

inline std::string to_decimal(const Integer& x) { return x.get_str(10); }

/// Parses an optionally signed decimal string; throws std::invalid_argument.
Integer parse_integer(std::string_view text);

inline Integer ipow(const Integer& base, std::uint64_t exponent) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

inline Integer iabs(const Integer& x) { return abs(x); }

/// Deterministic primality test by trial division (desk-scale primes only).
bool is_prime(std::uint64_t p);

}  // namespace sandpile
