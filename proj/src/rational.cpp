#include "mmk/rational.hpp"

#include <cctype>

namespace mmk {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t i = from; i < to; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Rational parse_decimal(const std::string& s) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
        neg = s[pos] == '-';
        ++pos;
    }
    std::size_t epos = s.find_first_of("eE", pos);
    std::string mant = s.substr(pos, epos == std::string::npos ? std::string::npos : epos - pos);
    long exp10 = 0;
    if (epos != std::string::npos) {
        std::string e = s.substr(epos + 1);
        std::size_t k = (!e.empty() && (e[0] == '-' || e[0] == '+')) ? 1 : 0;
        if (!all_digits(e, k, e.size())) throw DomainError("bad rational: " + s);
        exp10 = std::stol(e);
    }
    std::size_t dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        exp10 -= static_cast<long>(mant.size() - dot - 1);
    }
    if (!all_digits(digits, 0, digits.size())) throw DomainError("bad rational: " + s);
    Rational q{Integer(digits, 10)};
    Integer ten = 10;
    Integer scale;
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 < 0)
        q /= Rational(scale);
    else
        q *= Rational(scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw DomainError("empty rational");
    std::size_t slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s);
    std::size_t k = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (!all_digits(s, k, slash) || !all_digits(s, slash + 1, s.size()))
        throw DomainError("bad rational: " + text);
    Integer den(s.substr(slash + 1), 10);
    if (den == 0) throw DomainError("zero denominator: " + text);
    Rational q(Integer(s.substr(k, slash - k), 10), den);
    q.canonicalize();
    return s[0] == '-' ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational frac(long p, long q) {
    if (q == 0) throw DomainError("zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

Rational pow2(long e) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

Integer binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace mmk
