#pragma once

#include <random>
#include <string>

#include <doctest.h>

#include "hvlab/scalar.hpp"

namespace doctest {
template <>
struct StringMaker<hvlab::Scalar> {
  static String convert(const hvlab::Scalar& s) { return hvlab::format_scalar(s).c_str(); }
};
}  // namespace doctest

namespace test {

inline hvlab::Scalar s(const char* text) { return hvlab::parse_scalar(text); }

inline hvlab::Rational random_rational(std::mt19937_64& rng, long range = 20) {
  std::uniform_int_distribution<long> num(-range, range), den(1, range);
  hvlab::Rational r{mpz_class(num(rng)), mpz_class(den(rng))};
  r.canonicalize();
  return r;
}

inline hvlab::Scalar random_scalar(std::mt19937_64& rng, long range = 20) {
  return hvlab::Scalar(random_rational(rng, range), random_rational(rng, range));
}

template <typename F>
bool throws_code(F&& f, hvlab::ErrorCode code) {
  try {
    f();
  } catch (const hvlab::Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace test
