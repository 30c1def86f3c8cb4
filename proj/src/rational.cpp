#include "dfalearn/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>

namespace dfalearn {

namespace {

using i128 = __int128;

long long narrow(i128 v) {
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min()) {
        throw ModelError("rational arithmetic overflow");
    }
    return static_cast<long long>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
    if (den_ == 0) {
        throw ModelError("rational with zero denominator");
    }
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = narrow(-static_cast<i128>(num_));
        den_ = narrow(-static_cast<i128>(den_));
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    num_ /= g;
    den_ /= g;
}

Rational Rational::from_decimal(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    i128 num = 0;
    i128 den = 1;
    bool any_digit = false;
    bool seen_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_dot) throw InputError("bad decimal literal: " + std::string(text));
            seen_dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw InputError("bad decimal literal: " + std::string(text));
        }
        any_digit = true;
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
        if (den > std::numeric_limits<long long>::max() || num > std::numeric_limits<long long>::max()) {
            throw InputError("decimal literal out of range: " + std::string(text));
        }
    }
    if (!any_digit) throw InputError("bad decimal literal: " + std::string(text));
    if (negative) num = -num;
    return Rational(narrow(num), narrow(den));
}

long long Rational::as_integer() const {
    if (!is_integer()) throw ModelError("rational " + to_string() + " is not an integer");
    return num_;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<i128>(num_));
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    i128 n = static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_;
    i128 d = static_cast<i128>(den_) * o.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n);
    den_ = narrow(d);
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    i128 n = static_cast<i128>(num_) * o.num_;
    i128 d = static_cast<i128>(den_) * o.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n);
    den_ = narrow(d);
    normalize();
    return *this;
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::lp_text() const {
    if (den_ == 1) return std::to_string(num_);
    // Expand to an exact finite decimal when the denominator divides a
    // power of ten.
    long long d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) {
        throw ModelError("coefficient " + to_string() + " has no exact decimal form");
    }
    int digits = twos > fives ? twos : fives;
    i128 scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    i128 scaled = static_cast<i128>(num_) * (scale / den_);
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string body = std::to_string(static_cast<long long>(scaled / scale));
    std::string frac = std::to_string(static_cast<long long>(scaled % scale));
    frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    std::string out = neg ? "-" : "";
    out += body;
    if (!frac.empty()) {
        out += ".";
        out += frac;
    }
    return out;
}

} // namespace dfalearn
