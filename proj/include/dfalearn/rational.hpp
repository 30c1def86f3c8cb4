#ifndef DFALEARN_RATIONAL_HPP
#define DFALEARN_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "dfalearn/errors.hpp"

namespace dfalearn {

// Exact rational arithmetic on 64-bit numerator/denominator. All model
// coefficients, bounds and objective values go through this type so that
// constraint checking never depends on floating point rounding. The
// magnitudes in this project are tiny (sample sizes, small penalty
// weights), but intermediates are still widened to 128 bits and checked
// so silent wraparound is impossible.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long value) : num_(value), den_(1) {} // NOLINT: implicit by design
    Rational(long long num, long long den);

    // Parses decimal notation: "3", "-0.25", "1e-3" is NOT accepted.
    // Used for command line weights so "0.1" means exactly 1/10.
    static Rational from_decimal(std::string_view text);

    long long numerator() const { return num_; }
    long long denominator() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    // Requires is_integer().
    long long as_integer() const;
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    // "3", "-1/3". Exact, round-trips through from_decimal only when the
    // denominator is a power of 2 and 5.
    std::string to_string() const;

    // Exact finite decimal expansion for LP files ("0.25", "-3"). Throws
    // ModelError when the denominator has prime factors other than 2 or 5,
    // since such a coefficient cannot be written exactly in decimal.
    std::string lp_text() const;

private:
    long long num_;
    long long den_; // > 0, gcd(|num|, den) == 1

    void normalize();
};

} // namespace dfalearn

#endif
