#pragma once

#include <string>

#include "mmk/rational.hpp"

namespace mmk {

// Exact element a + b*sqrt(d) of the field Q(sqrt d), d > 0 rational.
// A value with b == 0 mixes freely with any radicand; mixing two different
// radicands with nonzero b throws.
class Surd {
public:
    Surd() = default;
    Surd(const Rational& a) : a_(a) {}  // NOLINT: implicit on purpose
    Surd(long a) : a_(a) {}             // NOLINT
    Surd(const Rational& a, const Rational& b, const Rational& d);

    static Surd sqrt_of(const Rational& d) { return Surd(0, 1, d); }

    const Rational& rational_part() const { return a_; }
    const Rational& surd_part() const { return b_; }
    const Rational& radicand() const { return d_; }
    bool is_rational() const { return b_ == 0; }

    int sign() const;
    double to_double() const;
    std::string str() const;

    Surd operator-() const { return Surd(-a_, -b_, d_); }
    Surd& operator+=(const Surd& o);
    Surd& operator-=(const Surd& o) { return *this += -o; }
    Surd& operator*=(const Surd& o);
    Surd& operator/=(const Surd& o);

    friend Surd operator+(Surd x, const Surd& y) { return x += y; }
    friend Surd operator-(Surd x, const Surd& y) { return x -= y; }
    friend Surd operator*(Surd x, const Surd& y) { return x *= y; }
    friend Surd operator/(Surd x, const Surd& y) { return x /= y; }
    friend bool operator==(const Surd& x, const Surd& y) { return (x - y).sign() == 0; }
    friend bool operator<(const Surd& x, const Surd& y) { return (x - y).sign() < 0; }
    friend bool operator>(const Surd& x, const Surd& y) { return y < x; }
    friend bool operator<=(const Surd& x, const Surd& y) { return !(y < x); }
    friend bool operator>=(const Surd& x, const Surd& y) { return !(x < y); }

private:
    const Rational& merge(const Surd& o) const;

    Rational a_ = 0, b_ = 0, d_ = 0;
};

}  // namespace mmk
