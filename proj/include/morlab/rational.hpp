#pragma once

// Exact rationals with a distinguished +infinity (for q = inf, r = inf).
// 1/inf = 0; arithmetic that would need inf - inf or 0 * inf is rejected.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <limits>
#include <ostream>
#include <string>

#include "morlab/errors.hpp"

namespace morlab {

class Rational {
 public:
  using Value = boost::multiprecision::cpp_rational;

  Rational() = default;
  Rational(long long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long long num, long long den) {
    require(den != 0, "rational with zero denominator");
    value_ = Value(num, den);
  }
  explicit Rational(const Value& v) : value_(v) {}

  static Rational infinity() {
    Rational r;
    r.infinite_ = true;
    return r;
  }

  /// Parses "a", "a/b" or "inf".
  static Rational parse(const std::string& s) {
    if (s == "inf" || s == "infinity") return infinity();
    try {
      const auto slash = s.find('/');
      if (slash == std::string::npos) return Rational(Value(boost::multiprecision::cpp_int(s)));
      boost::multiprecision::cpp_int num(s.substr(0, slash));
      boost::multiprecision::cpp_int den(s.substr(slash + 1));
      require(den != 0, "rational with zero denominator");
      return Rational(Value(num, den));
    } catch (const std::runtime_error&) {
      throw InvalidArgument("not a rational number: '" + s + "'");
    }
  }

  bool is_infinite() const { return infinite_; }
  const Value& value() const {
    require(!infinite_, "infinite rational has no finite value");
    return value_;
  }

  double to_double() const {
    if (infinite_) return std::numeric_limits<double>::infinity();
    return value_.convert_to<double>();
  }

  std::string str() const {
    if (infinite_) return "inf";
    return boost::multiprecision::numerator(value_).str() + "/" +
           boost::multiprecision::denominator(value_).str();
  }

  /// 1/x with 1/inf = 0 and 1/0 = inf.
  Rational reciprocal() const {
    if (infinite_) return Rational(0);
    if (value_ == 0) return infinity();
    return Rational(Value(1) / value_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Rational(a.value_ + b.value_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    require(!b.infinite_, "subtraction of an infinite rational");
    if (a.infinite_) return infinity();
    return Rational(a.value_ - b.value_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.infinite_ || b.infinite_) {
      const Rational& fin = a.infinite_ ? b : a;
      require(fin.infinite_ || fin.value_ > 0, "infinity times a non-positive rational");
      return infinity();
    }
    return Rational(a.value_ * b.value_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.reciprocal(); }
  Rational operator-() const {
    require(!infinite_, "negation of infinity");
    return Rational(-value_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.infinite_ || b.infinite_) {
      if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
      return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  Value value_{0};
  bool infinite_ = false;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace morlab
