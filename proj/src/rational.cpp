#include "dyadic/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace dyadic {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

} // namespace

Rational Rational::make(__int128 num, __int128 den) {
    if (den == 0) throw InputError("rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num > kMax || num < -static_cast<__int128>(kMax) || den > kMax)
        throw OverflowError("rational: value outside 64-bit range");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
    *this = make(num, den);
}

Rational Rational::pow2(int k) {
    if (k < -62 || k > 62) throw OverflowError("rational: 2^k outside 64-bit range");
    if (k >= 0) return Rational(std::int64_t{1} << k);
    Rational r;
    r.num_ = 1;
    r.den_ = std::int64_t{1} << (-k);
    return r;
}

Rational Rational::from_double(double x) {
    if (!std::isfinite(x)) throw InputError("rational: non-finite double");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(x, &exp); // x = m * 2^exp, |m| in [1/2, 1)
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    exp -= 53;
    // strip trailing zero bits so pow2 stays in range for ordinary values
    while (mant != 0 && (mant & 1) == 0) {
        mant >>= 1;
        ++exp;
    }
    return Rational(mant) * pow2(exp);
}

std::int64_t Rational::floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational Rational::operator+(const Rational& o) const {
    return make(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
    return *this + (-o);
}

Rational Rational::operator*(const Rational& o) const {
    return make(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw InputError("rational: division by zero");
    return make(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

bool Rational::operator<(const Rational& o) const {
    return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    os << r.num();
    if (r.den() != 1) os << '/' << r.den();
    return os;
}

} // namespace dyadic
