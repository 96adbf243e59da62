#pragma once

#include <gmpxx.h>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adnb {

// Exact scalars. mpq_class keeps values canonical (lowest terms, positive
// denominator) as long as every value is built through the helpers below or
// through arithmetic, which GMP canonicalizes on its own.
using Rational = mpq_class;
using Integer = mpz_class;

// Raised for malformed or out-of-domain user input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text: bad JSON or a number that does not parse.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

// Raised when an internal safety bound trips. Always a defect in the solver,
// never a property of the input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Accepts "k", "-k", "n/d" with d != 0.
Rational parse_rational(std::string_view text);

// "k" for integers, "n/d" otherwise.
std::string to_string(const Rational& value);

Rational make_rational(const Integer& num, const Integer& den);

Integer lcm_of_denominators(std::span<const Rational> values);

inline bool is_integer(const Rational& value) {
  return value.get_den() == 1;
}

// Bit-length based log2 rounded up; used only for safety caps.
std::size_t ceil_log2(const Integer& value);
std::size_t ceil_log2(const Rational& value);

}  // namespace adnb
