#include "phstab/rational.hpp"

#include <stdexcept>

namespace phstab::strings {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
  normalise();
}

void Rational::normalise() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  const BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(num_), den_);
  num_ /= g;
  den_ /= g;
}

double Rational::to_double() const {
  return num_.convert_to<double>() / den_.convert_to<double>();
}

std::string Rational::str() const {
  return den_ == 1 ? num_.str() : num_.str() + "/" + den_.str();
}

Rational operator+(const Rational& a, const Rational& b) {
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}
Rational operator-(const Rational& a, const Rational& b) {
  return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}
Rational operator*(const Rational& a, const Rational& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  if (m <= 0) throw std::invalid_argument("mod_inverse: modulus must be positive");
  BigInt old_r = a % m, r = m;
  if (old_r < 0) old_r += m;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    const BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::invalid_argument("mod_inverse: arguments are not coprime");
  BigInt inv = old_s % m;
  if (inv < 0) inv += m;
  return inv;
}

}  // namespace phstab::strings
