#include <cmath>
#include <sstream>

#include "support.hpp"

using hvlab::ErrorCode;
using hvlab::Rational;
using hvlab::Scalar;
using test::s;

TEST_SUITE("scalar") {

TEST_CASE("parse examples") {
  CHECK(s("1/4-1/8*sqrt2") == Scalar(Rational(1, 4), Rational(-1, 8)));
  CHECK(s("0") == Scalar(0));
  CHECK(s("2/4") == Scalar(Rational(1, 2)));
  CHECK(s("2/4").rational_part().get_den() == 2);
  CHECK(s("-3") == Scalar(-3));
  CHECK(s("1*sqrt2") == Scalar::sqrt2());
  CHECK(s("-1/2*sqrt2") == Scalar(0, Rational(-1, 2)));
  CHECK(s("+2*sqrt2") == Scalar(0, 2));
  CHECK(s("-1--1*sqrt2") == Scalar(-1, 1));
  CHECK(s("1+-1*sqrt2") == Scalar(1, -1));
  CHECK(s("0/5") == Scalar(0));
  CHECK(s("-0") == Scalar(0));
}

TEST_CASE("parse rejects") {
  for (const char* bad : {"", " 1", "1 ", "1/", "/2", "1/2/3", "sqrt2", "*sqrt2", "1*sqrt", "1+2", "1+*sqrt2",
                          "1*sqrt2+1", "--1", "1.5", "1e3", "abc", "1/2*sqrt2*sqrt2", "+1", "1-2*sqrt2x",
                          "1-", "1+sqrt2", "0x10", "1/-2"}) {
    CAPTURE(bad);
    CHECK(test::throws_code([&] { hvlab::parse_scalar(bad); }, ErrorCode::MalformedScalar));
  }
  CHECK(test::throws_code([] { hvlab::parse_scalar("1/0"); }, ErrorCode::ZeroDenominator));
  CHECK(test::throws_code([] { hvlab::parse_scalar("1+1/0*sqrt2"); }, ErrorCode::ZeroDenominator));
}

TEST_CASE("format examples") {
  CHECK(hvlab::format_scalar(Scalar(Rational(1, 4), Rational(-1, 8))) == "1/4-1/8*sqrt2");
  CHECK(hvlab::format_scalar(Scalar(0, 1)) == "1*sqrt2");
  CHECK(hvlab::format_scalar(Scalar(0, 0)) == "0");
  CHECK(hvlab::format_scalar(Scalar(2, -1)) == "2-1*sqrt2");
  CHECK(hvlab::format_scalar(Scalar(Rational(-3, 2))) == "-3/2");
  CHECK(hvlab::format_scalar(Scalar(0, Rational(-1, 2))) == "-1/2*sqrt2");
  std::ostringstream os;
  os << Scalar(1, 1);
  CHECK(os.str() == "1+1*sqrt2");
}

TEST_CASE("field examples") {
  CHECK(s("1/4-1/8*sqrt2") + s("1/4+1/8*sqrt2") == Scalar(Rational(1, 2)));
  CHECK(s("1+1*sqrt2") * s("1-1*sqrt2") == Scalar(-1));
  CHECK(Scalar(1) / s("1+1*sqrt2") == s("-1+1*sqrt2"));
  CHECK(s("1+1*sqrt2") * s("-1+1*sqrt2") == Scalar(1));
  CHECK(Scalar::fraction(6, -4) == Scalar(Rational(-3, 2)));
  CHECK(test::throws_code([] { Scalar(1) / Scalar(0); }, ErrorCode::DivisionByZero));
  CHECK(test::throws_code([] { Scalar(0).inverse(); }, ErrorCode::DivisionByZero));
  CHECK(test::throws_code([] { Scalar::fraction(1, 0); }, ErrorCode::ZeroDenominator));
}

TEST_CASE("sign examples") {
  CHECK(hvlab::sign(s("3/2-1*sqrt2")) == 1);
  CHECK(hvlab::sign(Scalar(0)) == 0);
  CHECK(hvlab::sign(s("1-1*sqrt2")) == -1);
  CHECK(hvlab::sign(s("-3/2+1*sqrt2")) == -1);
  CHECK(hvlab::sign(s("-1+1*sqrt2")) == 1);
  CHECK(s("2") < s("2*sqrt2"));
  CHECK(s("2*sqrt2") < s("4"));
  CHECK(hvlab::abs(s("1-1*sqrt2")) == s("-1+1*sqrt2"));
}

TEST_CASE("to_double examples") {
  CHECK(hvlab::to_double(s("1/4-1/8*sqrt2")) == doctest::Approx(0.0732233).epsilon(1e-6));
  CHECK(hvlab::to_double(s("2*sqrt2")) == doctest::Approx(2.8284271).epsilon(1e-7));
  CHECK(hvlab::to_double(Scalar(0)) == 0.0);
}

// Independent sign: evaluate a + b sqrt2 with 4096-bit floats.
int float_sign(const Scalar& x) {
  const mp_bitcnt_t bits = 4096;
  mpf_class root(2, bits);
  root = sqrt(root);
  mpf_class a(x.rational_part(), bits), b(x.sqrt2_part(), bits);
  mpf_class v(0, bits);
  v = a + b * root;
  return sgn(v);
}

TEST_CASE("sign agrees with high precision floats") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Scalar x = test::random_scalar(rng, 1000);
    CAPTURE(x);
    CHECK(hvlab::sign(x) == float_sign(x));
  }
  // Pell convergents p/q of sqrt2 make p - q sqrt2 tiny with alternating sign.
  mpz_class p = 1, q = 1;
  for (int i = 0; i < 60; ++i) {
    const Scalar x(Rational(p), Rational(-q));
    CAPTURE(x);
    CHECK(hvlab::sign(x) == float_sign(x));
    CHECK(hvlab::sign(x) != 0);
    const mpz_class np = p + 2 * q, nq = p + q;
    p = np;
    q = nq;
  }
}

TEST_CASE("round trip") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Scalar x = test::random_scalar(rng, 50);
    CHECK(hvlab::parse_scalar(hvlab::format_scalar(x)) == x);
  }
  for (const char* t : {"7/14-6/3*sqrt2", "-0/3+4/2*sqrt2", "3/9*sqrt2", "-12/8"}) {
    const Scalar x = hvlab::parse_scalar(t);
    CHECK(hvlab::parse_scalar(hvlab::format_scalar(x)) == x);
    CHECK(hvlab::format_scalar(hvlab::parse_scalar(hvlab::format_scalar(x))) == hvlab::format_scalar(x));
  }
}

TEST_CASE("field axioms on random samples") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    const Scalar x = test::random_scalar(rng), y = test::random_scalar(rng), z = test::random_scalar(rng);
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x + y == y + x);
    CHECK(x * y == y * x);
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x - x == Scalar(0));
    if (!x.is_zero()) {
      CHECK(x * (Scalar(1) / x) == Scalar(1));
      CHECK((y / x) * x == y);
    }
  }
}

TEST_CASE("order compatibility") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const Scalar x = test::random_scalar(rng), y = test::random_scalar(rng);
    CHECK(hvlab::sign(x * y) == hvlab::sign(x) * hvlab::sign(y));
    if (hvlab::sign(x) == hvlab::sign(y)) CHECK(hvlab::sign(x + y) == hvlab::sign(x));
    const bool equal = x.rational_part() == y.rational_part() && x.sqrt2_part() == y.sqrt2_part();
    CHECK((hvlab::sign(x - y) == 0) == equal);
    CHECK((x < y) == (hvlab::sign(y - x) > 0));
    CHECK(hvlab::compare(x, y) == -hvlab::compare(y, x));
  }
}

TEST_CASE("large numerators stay exact") {
  Scalar x = s("1+1*sqrt2");
  for (int i = 0; i < 200; ++i) x *= s("1+1*sqrt2");
  Scalar y = x;
  for (int i = 0; i < 201; ++i) y /= s("1+1*sqrt2");
  CHECK(y == Scalar(1));
  CHECK(x.rational_part().get_num() > mpz_class("1000000000000000000000000000000"));
}

}  // TEST_SUITE
