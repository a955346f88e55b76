#pragma once

// Exact arithmetic in the ordered field Q(sqrt 2).
//
// A Scalar is the real number a + b*sqrt(2) with rational a and b. Because
// sqrt(2) is irrational the pair (a, b) is unique, so equality is component
// equality and the ordering can be decided exactly from a^2 versus 2 b^2.

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include <Eigen/Core>

#include "hvlab/error.hpp"

namespace hvlab {

/// Arbitrary precision rational, always in lowest terms with a positive
/// denominator (zero is 0/1).
using Rational = mpq_class;

int sign(const Rational& r);

Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

class Scalar {
 public:
  Scalar() = default;
  Scalar(int value) : a_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& rational) : a_(rational) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational rational_part, Rational sqrt2_part)
      : a_(std::move(rational_part)), b_(std::move(sqrt2_part)) {}

  /// p/q as a Scalar; throws ZeroDenominator when q == 0.
  static Scalar fraction(long p, long q);
  static Scalar sqrt2() { return Scalar(Rational(0), Rational(1)); }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

  Scalar conjugate() const { return Scalar(a_, -b_); }
  /// a^2 - 2 b^2; zero only for the zero Scalar.
  Rational norm() const { return a_ * a_ - 2 * b_ * b_; }
  Scalar inverse() const;

  Scalar operator-() const { return Scalar(-a_, -b_); }
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }

  friend bool operator==(const Scalar& x, const Scalar& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend std::strong_ordering operator<=>(const Scalar& x, const Scalar& y);

 private:
  Rational a_{0};
  Rational b_{0};
};

/// Exact sign of a + b*sqrt(2): -1, 0 or +1.
int sign(const Scalar& s);
/// sign(x - y).
int compare(const Scalar& x, const Scalar& y);

Scalar abs(const Scalar& s);

/// Parses `rational | rational SIGN rational*sqrt2 | [SIGN] rational*sqrt2`
/// where `rational ::= ['-'] digits ['/' digits]`. No whitespace.
Scalar parse_scalar(std::string_view text);
/// Canonical text; parse_scalar(format_scalar(s)) == s.
std::string format_scalar(const Scalar& s);

/// Display-only approximation.
double to_double(const Scalar& s);

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace hvlab

namespace Eigen {

template <>
struct NumTraits<hvlab::Scalar> : GenericNumTraits<hvlab::Scalar> {
  using Real = hvlab::Scalar;
  using NonInteger = hvlab::Scalar;
  using Literal = hvlab::Scalar;
  using Nested = hvlab::Scalar;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 16,
    MulCost = 32,
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Literal = mpq_class;
  using Nested = mpq_class;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 8,
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace hvlab {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using ScalarMatrix = Matrix<Scalar>;
using ScalarVector = Vector<Scalar>;

}  // namespace hvlab
