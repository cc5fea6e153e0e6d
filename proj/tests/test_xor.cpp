#include "doctest.h"

#include <random>
#include <sstream>

#include "mmk/transport.hpp"
#include "mmk/xor_model.hpp"

using namespace mmk;

namespace {

Dyadic D(long a, int p) { return Dyadic(Integer(a), p); }

Dyadic random_dyadic(std::mt19937_64& rng, int p) {
    std::uniform_int_distribution<long> d(0, 1L << p);
    return D(d(rng), p);
}

// Direct double loop over cells at common precision.
Rational brute_integral(const Dyadic& x, const Dyadic& y) {
    const int p = std::max(x.p, y.p);
    long A = x.at_precision(p).a.get_si(), B = y.at_precision(p).a.get_si();
    Rational s = 0;
    for (long a = 0; a < A; ++a)
        for (long b = 0; b < B; ++b) s += Rational(a ^ b) + frac(1, 2);
    return s / Rational(Integer(1) << (3 * p));
}

// Lower Riemann sum of t xor s over [0,X]x[0,Y] on a 2^-q grid, t and s at cell corners.
double riemann(double X, double Y, int q) {
    const long N = 1L << q;
    const long A = static_cast<long>(X * N), B = static_cast<long>(Y * N);
    double s = 0;
    for (long a = 0; a < A; ++a)
        for (long b = 0; b < B; ++b) s += static_cast<double>(a ^ b);
    return s / static_cast<double>(N) / static_cast<double>(N) / static_cast<double>(N);
}

}  // namespace

TEST_CASE("dyadic basics") {
    CHECK(D(3, 3).value() == frac(3, 8));
    CHECK(D(2, 2).value() == frac(1, 2));
    CHECK(Dyadic::parse("3/8").p == 3);
    CHECK(Dyadic::parse("1").is_one());
    CHECK(Dyadic::parse("0").a == 0);
    CHECK_THROWS_AS(Dyadic::parse("1/3"), DomainError);
    CHECK_THROWS_AS(Dyadic::parse("3/2"), DomainError);
    CHECK_THROWS_AS(D(5, 2), DomainError);
    CHECK(D(5, 3).digit(1) == 1);
    CHECK(D(5, 3).digit(2) == 0);
    CHECK(D(5, 3).digit(3) == 1);
    CHECK(D(5, 3).digit(7) == 0);
    CHECK(D(1, 0).digit(9) == 1);
    CHECK(D(2, 2).at_precision(4).a == 8);
}

TEST_CASE("xor of dyadics") {
    CHECK(xor_dyadic(D(1, 1), D(1, 1)).value() == 0);
    CHECK(xor_dyadic(D(1, 0), D(1, 2)).value() == frac(3, 4));
    CHECK(xor_dyadic(D(3, 3), D(5, 3)).value() == frac(3, 4));
    CHECK(xor_dyadic(D(1, 0), D(1, 0)).value() == 0);
    CHECK(xor_dyadic(D(1, 1), D(1, 2)).value() == frac(3, 4));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        auto y = random_dyadic(rng, 6);
        CHECK(xor_dyadic(D(1, 0), y).value() == 1 - y.value());
        CHECK(xor_dyadic(y, y).value() == 0);
        auto x = random_dyadic(rng, 5);
        CHECK(xor_dyadic(x, y).value() == xor_dyadic(y, x).value());
    }
}

TEST_CASE("xor integral") {
    CHECK(xor_integral(D(1, 0), D(1, 0)) == frac(1, 2));
    CHECK(xor_integral(D(1, 1), D(1, 1)) == frac(1, 16));
    CHECK(xor_integral(D(3, 4), D(0, 0)) == 0);
    CHECK(riemann(1, 1, 12) == doctest::Approx(0.5).epsilon(1e-3));
    std::mt19937_64 rng(2);
    for (int i = 0; i < 150; ++i) {
        auto x = random_dyadic(rng, 1 + i % 6), y = random_dyadic(rng, 1 + i % 5);
        CHECK(xor_integral(x, y) == brute_integral(x, y));
        CHECK(xor_integral(x, y) == xor_integral(y, x));
    }
    for (int i = 0; i < 10; ++i) {
        auto x = random_dyadic(rng, 4), y = random_dyadic(rng, 4);
        CHECK(riemann(x.value().get_d(), y.value().get_d(), 10) ==
              doctest::Approx(xor_integral(x, y).get_d()).epsilon(3e-3));
    }
}

TEST_CASE("dual potential values") {
    CHECK(dual_f(D(1, 0), D(1, 0)) == frac(1, 4));
    CHECK(dual_f(D(1, 1), D(1, 1)) == frac(1, 32));
    CHECK(dual_f(D(1, 0), D(0, 0)) == frac(-1, 8));
    CHECK(F_xor(D(1, 0), D(1, 0), D(0, 0)) == 0);
    CHECK(F_xor(D(1, 0), D(1, 0), D(1, 0)) == frac(3, 4));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        auto x = random_dyadic(rng, 7);
        CHECK(dual_f(x, D(0, 0)) == -xor_integral(x, x) / 4);
        CHECK(F_xor(x, x, D(0, 0)) == 0);
    }
}

TEST_CASE("equality on the fractal and global feasibility") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 1000; ++i) {
        auto x = random_dyadic(rng, 8), y = random_dyadic(rng, 8);
        auto z = xor_dyadic(x, y);
        CHECK(F_xor(x, y, z) == x.value() * y.value() * z.value());
    }
    for (int i = 0; i < 1000; ++i) {
        auto x = random_dyadic(rng, 8), y = random_dyadic(rng, 8), z = random_dyadic(rng, 8);
        CHECK(F_xor(x, y, z) <= x.value() * y.value() * z.value());
    }
}

TEST_CASE("cube estimate near the fractal") {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 6; ++n) {
        const Rational bound = Rational(13) / Rational(Integer(1) << (3 * n));
        std::uniform_int_distribution<int> cell(0, (1 << n) - 1);
        for (int rep = 0; rep < 20; ++rep) {
            int a1 = cell(rng), a2 = cell(rng), a3 = a1 ^ a2;
            for (int e = 0; e < 8; ++e) {
                auto x = D(a1 + (e & 1), n), y = D(a2 + (e >> 1 & 1), n), z = D(a3 + (e >> 2 & 1), n);
                CHECK(abs(F_xor(x, y, z) - x.value() * y.value() * z.value()) <= bound);
            }
            // an interior dyadic point of the same cube
            auto x = D(4 * a1 + 1, n + 2), y = D(4 * a2 + 3, n + 2), z = D(4 * a3 + 2, n + 2);
            CHECK(abs(F_xor(x, y, z) - x.value() * y.value() * z.value()) <= bound);
        }
    }
}

TEST_CASE("rectangle increment and integral identity") {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 200; ++rep) {
        int n = 1 + rep % 5;
        std::uniform_int_distribution<int> cell(0, (1 << n) - 1), sub(0, 4);
        int a = cell(rng), b = cell(rng);
        int s0 = sub(rng), s1 = sub(rng), t0 = sub(rng), t1 = sub(rng);
        if (s0 > s1) std::swap(s0, s1);
        if (t0 > t1) std::swap(t0, t1);
        auto x0 = D(4 * a + s0, n + 2), x1 = D(4 * a + s1, n + 2), y0 = D(4 * b + t0, n + 2), y1 = D(4 * b + t1, n + 2);
        Rational d2 = dual_f(x1, y1) - dual_f(x0, y1) - dual_f(x1, y0) + dual_f(x0, y0);
        Rational ii = xor_integral(x1, y1) - xor_integral(x0, y1) - xor_integral(x1, y0) + xor_integral(x0, y0);
        CHECK(abs(d2 - ii) <= Rational(54) / Rational(Integer(1) << (3 * n)));
        auto zero = D(0, 0);
        CHECK(dual_f(x1, y1) - dual_f(x1, zero) - dual_f(zero, y1) + dual_f(zero, zero) == xor_integral(x1, y1));
    }
}

TEST_CASE("Sierpinski membership") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        auto x = random_dyadic(rng, 6), y = random_dyadic(rng, 6);
        for (int depth : {1, 3, 6, 10}) CHECK(sierpinski_member(x, y, xor_dyadic(x, y), depth));
    }
    CHECK_FALSE(sierpinski_member(D(1, 0), D(1, 0), D(1, 0), 1));
    CHECK(sierpinski_member(D(1, 1), D(1, 1), D(0, 0), 5));
    // 1/2 = 0.0111... pairs with 1/4 + 1/4 only through the trailing-ones form
    CHECK(sierpinski_member(D(1, 1), D(1, 2), D(1, 2), 4));
    CHECK(sierpinski_member(D(0, 0), D(0, 0), D(0, 0), 0));
    // 1/4 = 0.00111... survives two levels, not three
    CHECK(sierpinski_member(D(1, 2), D(0, 0), D(0, 0), 2));
    CHECK_FALSE(sierpinski_member(D(1, 2), D(0, 0), D(0, 0), 3));
    CHECK_FALSE(sierpinski_member(D(3, 3), D(0, 0), D(0, 0), 2));
}

TEST_CASE("xor coupling") {
    auto c1 = xor_coupling(1);
    CHECK(c1.at({0, 0, 0}) == frac(1, 4));
    CHECK(c1.at({0, 1, 1}) == frac(1, 4));
    CHECK(c1.at({1, 0, 1}) == frac(1, 4));
    CHECK(c1.at({1, 1, 0}) == frac(1, 4));
    CHECK(c1.mass() == 1);
    for (int n = 0; n <= 4; ++n) {
        auto mu = xor_coupling(n);
        const int N = 1 << n;
        CHECK(project(mu, {1, 3}) == DiscreteMeasure::uniform({1, 3}, {N, N}));
    }
    auto inst = xor_instance(2);
    auto mu = xor_coupling(2);
    Rational v = 0;
    for (std::size_t i = 0; i < mu.cell_count(); ++i) v += mu[i] * inst.cost.values[i];
    CHECK(v == frac(9, 4));
}

TEST_CASE("LP optimum equals the xor coupling cost for small resolutions") {
    for (int n = 1; n <= 3; ++n) {
        auto inst = xor_instance(n);
        auto mu = xor_coupling(n);
        Rational v = 0;
        for (std::size_t i = 0; i < mu.cell_count(); ++i) v += mu[i] * inst.cost.values[i];
        auto r = verify_gap(inst.family, inst.cost);
        CHECK(r.primal_value == v);
        CHECK(complementary_slackness(mu, r.dual, inst.cost).empty());
    }
}

TEST_CASE("slice images") {
    auto img = sierpinski_slice_pgm(2, D(0, 0));
    CHECK(img == "P2\n4 4\n255\n255 255 255 0\n255 255 0 255\n255 0 255 255\n0 255 255 255\n");
    auto half = sierpinski_slice_pgm(3, D(1, 1));
    int black = 0;
    std::istringstream is(half);
    std::string magic;
    int w, h, mx, px;
    is >> magic >> w >> h >> mx;
    while (is >> px) black += px == 0;
    CHECK(black == 16);
    CHECK_THROWS_AS(sierpinski_slice_pgm(13, D(0, 0)), DomainError);
}
