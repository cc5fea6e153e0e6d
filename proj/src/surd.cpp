#include "mmk/surd.hpp"

#include <cmath>

namespace mmk {

Surd::Surd(const Rational& a, const Rational& b, const Rational& d) : a_(a), b_(b), d_(d) {
    if (b_ != 0 && d_ <= 0) throw DomainError("radicand must be positive");
    if (b_ == 0) d_ = 0;
}

const Rational& Surd::merge(const Surd& o) const {
    if (b_ == 0) return o.d_;
    if (o.b_ == 0 || o.d_ == d_) return d_;
    throw DomainError("mixed radicands");
}

Surd& Surd::operator+=(const Surd& o) {
    Rational d = merge(o);
    a_ += o.a_;
    b_ += o.b_;
    d_ = b_ == 0 ? Rational(0) : d;
    return *this;
}

Surd& Surd::operator*=(const Surd& o) {
    Rational d = merge(o);
    Rational a = a_ * o.a_ + b_ * o.b_ * d;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    d_ = b_ == 0 ? Rational(0) : d;
    return *this;
}

Surd& Surd::operator/=(const Surd& o) {
    Rational d = merge(o);
    Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * d;
    if (norm == 0) throw DomainError("division by zero surd");
    Surd conj(o.a_ / norm, -o.b_ / norm, d);
    return *this *= conj;
}

int Surd::sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // opposite signs: compare a^2 with b^2 d
    int c = cmp(Rational(a_ * a_), Rational(b_ * b_ * d_));
    return c > 0 ? sa : (c < 0 ? sb : 0);
}

double Surd::to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(d_.get_d()); }

std::string Surd::str() const {
    if (b_ == 0) return to_string(a_);
    return to_string(a_) + (b_ < 0 ? "-" : "+") + to_string(abs(b_)) + "*sqrt(" + to_string(d_) + ")";
}

}  // namespace mmk
