#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace circlerm {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;

// Canonical text form: "n" for integers, "n/d" otherwise (lowest terms, d > 0).
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

// Accepts "n" or "n/d" with an optional leading '-'. Throws InputError.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

// Nearest double (get_d() truncates toward zero).
double to_double(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

// True when q * n is an integer.
bool is_multiple_of_unit(const Rational& q, const Integer& n);

Integer lcm(const Integer& a, const Integer& b);

// Lexicographic comparison of rational vectors.
bool lex_less(const RationalVector& a, const RationalVector& b);

// Rank of a dense rational matrix given as rows (Gaussian elimination).
std::size_t rank(std::vector<RationalVector> rows);

// Solves the square system A x = b; returns false when A is singular.
bool solve_square(std::vector<RationalVector> a, RationalVector b,
                  RationalVector& x);

Rational determinant(std::vector<RationalVector> a);

} // namespace circlerm
