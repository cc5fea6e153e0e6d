#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmk {

using Rational = mpq_class;
using Integer = mpz_class;

// Thrown when an argument violates a documented precondition.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a constructor fails its own postcondition check.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

// Accepts "p/q", "-7", "0.125", "3e-2". Throws DomainError otherwise.
Rational parse_rational(const std::string& text);

// "p/q" or "p" for integers, always reduced.
std::string to_string(const Rational& q);

// p/q in lowest terms; mpq_class(p, q) alone does not reduce.
Rational frac(long p, long q);

Rational pow2(long e);  // 2^e, e may be negative
Integer binomial(long n, long k);
Rational abs(const Rational& q);

inline int sign(const Rational& q) { return sgn(q); }

}  // namespace mmk
