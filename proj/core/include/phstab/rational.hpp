#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace phstab::strings {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational, always normalised: den > 0 and gcd(|num|, den) = 1.
/// Doubles never enter the arithmetic; classification that is discontinuous
/// in the value (parities, dependences) stays exact.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(BigInt num, BigInt den);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const;
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

 private:
  BigInt num_{0};
  BigInt den_{1};
  void normalise();
};

/// Minimal positive modular inverse of a modulo m (gcd(a, m) must be 1).
BigInt mod_inverse(const BigInt& a, const BigInt& m);

}  // namespace phstab::strings
