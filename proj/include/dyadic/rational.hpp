#ifndef DYADIC_RATIONAL_HPP
#define DYADIC_RATIONAL_HPP

#include <cstdint>
#include <iosfwd>

#include "dyadic/errors.hpp"

namespace dyadic {

/// Exact rational number
///
/// All cube geometry lives on rationals whose denominators divide 3*2^j,
/// so a normalized int64/int64 pair with 128-bit intermediates is enough.
/// Operations that would leave the representable range throw OverflowError
/// instead of silently wrapping.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t value) : num_(value), den_(1) {} // implicit: integers promote
    Rational(std::int64_t num, std::int64_t den);

    /// 2^k for any |k| <= 62, as an exact rational.
    static Rational pow2(int k);
    /// Exact conversion of a finite double (every finite double is rational).
    static Rational from_double(double x);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    /// Largest integer <= the value.
    std::int64_t floor() const;

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const;
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

private:
    static Rational make(__int128 num, __int128 den);

    std::int64_t num_;
    std::int64_t den_; // > 0, gcd(|num|, den) == 1
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace dyadic

#endif
