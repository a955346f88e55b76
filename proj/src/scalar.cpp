#include "hvlab/scalar.hpp"

#include <cmath>
#include <ostream>

namespace hvlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedScalar: return "MalformedScalar";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::InvalidLabels: return "InvalidLabels";
    case ErrorCode::UnknownSetting: return "UnknownSetting";
    case ErrorCode::InvalidBehavior: return "InvalidBehavior";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::WeightSumMismatch: return "WeightSumMismatch";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::BadPartition: return "BadPartition";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NotLocal: return "NotLocal";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LpFailure: return "LpFailure";
    case ErrorCode::SignallingInput: return "SignallingInput";
    case ErrorCode::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

int sign(const Rational& r) { return sgn(r); }

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

[[noreturn]] void malformed(std::string_view text) {
  throw Error(ErrorCode::MalformedScalar, "cannot parse '" + std::string(text) + "'");
}

// rational ::= ['-'] digits ['/' digits]
Rational parse_rational_or_throw(std::string_view text, std::string_view whole) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  std::string_view num = body;
  std::string_view den = "1";
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  if (!is_digits(num) || !is_digits(den)) malformed(whole);
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw Error(ErrorCode::ZeroDenominator, "in '" + std::string(whole) + "'");
  Rational r(n, d);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) { return parse_rational_or_throw(text, text); }

std::string format_rational(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Scalar Scalar::fraction(long p, long q) {
  if (q == 0) throw Error(ErrorCode::ZeroDenominator, "fraction with zero denominator");
  Rational r{mpz_class(p), mpz_class(q)};
  r.canonicalize();
  return Scalar(r);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  Rational n = norm();
  return Scalar(a_ / n, -b_ / n);
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  a_ += rhs.a_;
  b_ += rhs.b_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  a_ -= rhs.a_;
  b_ -= rhs.b_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  if (sgn(b_) == 0 && sgn(rhs.b_) == 0) {
    a_ *= rhs.a_;
    return *this;
  }
  Rational a = a_ * rhs.a_ + 2 * b_ * rhs.b_;
  Rational b = a_ * rhs.b_ + b_ * rhs.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (rhs.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  if (sgn(rhs.b_) == 0) {
    a_ /= rhs.a_;
    b_ /= rhs.a_;
    return *this;
  }
  return *this *= rhs.inverse();
}

int sign(const Scalar& s) {
  const int sa = sgn(s.rational_part());
  const int sb = sgn(s.sqrt2_part());
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: |a| vs |b| sqrt 2
  const Rational& a = s.rational_part();
  const Rational& b = s.sqrt2_part();
  const int c = cmp(Rational(a * a), Rational(2 * b * b));
  return c > 0 ? sa : sb;
}

int compare(const Scalar& x, const Scalar& y) { return sign(x - y); }

std::strong_ordering operator<=>(const Scalar& x, const Scalar& y) {
  const int c = compare(x, y);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Scalar abs(const Scalar& s) { return sign(s) < 0 ? -s : s; }

Scalar parse_scalar(std::string_view text) {
  constexpr std::string_view kRoot = "*sqrt2";
  if (text.size() < kRoot.size() || text.substr(text.size() - kRoot.size()) != kRoot) {
    return Scalar(parse_rational_or_throw(text, text));
  }
  std::string_view head = text.substr(0, text.size() - kRoot.size());
  if (head.empty()) malformed(text);

  // The separating SIGN is the first '+' or '-' that follows a digit; a '-'
  // right after it belongs to the coefficient's own rational.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = 1; i < head.size(); ++i) {
    const char c = head[i];
    if ((c == '+' || c == '-') && head[i - 1] >= '0' && head[i - 1] <= '9') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) {
    // [SIGN] rational '*' 'sqrt2'
    std::string_view coeff = head;
    bool negate = false;
    if (coeff.front() == '+') {
      coeff.remove_prefix(1);
    } else if (coeff.size() >= 2 && coeff[0] == '-' && coeff[1] == '-') {
      // SIGN '-' followed by a rational with its own '-'
      negate = true;
      coeff.remove_prefix(1);
    }
    Rational b = parse_rational_or_throw(coeff, text);
    return Scalar(Rational(0), negate ? Rational(-b) : b);
  }
  Rational a = parse_rational_or_throw(head.substr(0, split), text);
  const char op = head[split];
  Rational b = parse_rational_or_throw(head.substr(split + 1), text);
  return Scalar(a, op == '-' ? Rational(-b) : b);
}

std::string format_scalar(const Scalar& s) {
  const Rational& a = s.rational_part();
  const Rational& b = s.sqrt2_part();
  if (sgn(b) == 0) return format_rational(a);
  if (sgn(a) == 0) return format_rational(b) + "*sqrt2";
  std::string out = format_rational(a);
  out += sgn(b) > 0 ? '+' : '-';
  out += format_rational(Rational(::abs(b)));
  out += "*sqrt2";
  return out;
}

double to_double(const Scalar& s) {
  return s.rational_part().get_d() + s.sqrt2_part().get_d() * std::sqrt(2.0);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << format_scalar(s); }

}  // namespace hvlab
