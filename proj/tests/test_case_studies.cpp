#include "doctest.h"

#include <map>
#include <random>

#include "mmk/case_studies.hpp"
#include "mmk/transport.hpp"
#include "oracles.hpp"

using namespace mmk;

namespace {

// pairwise sums by direct loops over the full grid
bool pair_projections_uniform(const DiscreteMeasure& mu) {
    const auto& s = mu.sizes();
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            std::vector<Rational> acc(static_cast<std::size_t>(s[a] * s[b]), Rational(0));
            for (std::size_t c = 0; c < mu.cell_count(); ++c) {
                auto x = mu.unravel(c);
                acc[static_cast<std::size_t>(x[a] * s[b] + x[b])] += mu[c];
            }
            const Rational u = frac(1, static_cast<long>(s[a]) * s[b]);
            for (const auto& v : acc)
                if (v != u) return false;
        }
    return true;
}

// Polynomials in x, y, z keyed by exponent triples.
using Poly = std::map<std::array<int, 3>, Rational>;

Poly mul(const Poly& p, const Poly& q) {
    Poly r;
    for (const auto& [e, a] : p)
        for (const auto& [f, b] : q) r[{e[0] + f[0], e[1] + f[1], e[2] + f[2]}] += a * b;
    return r;
}

Poly add(Poly p, const Poly& q, const Rational& s = 1) {
    for (const auto& [e, a] : q) p[e] += s * a;
    for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
    return p;
}

Poly var(int i) {
    std::array<int, 3> e{};
    e[static_cast<std::size_t>(i)] = 1;
    return Poly{{e, Rational(1)}};
}

Poly constant(const Rational& c) { return Poly{{{0, 0, 0}, c}}; }

// f_A(u, v) written out term by term
Poly fA_poly(const Rational& A, int u, int v) {
    Poly U = var(u), V = var(v), p;
    p = add(p, mul(mul(U, U), U), Rational(-1, 12));
    p = add(p, mul(mul(V, V), V), Rational(-1, 12));
    p = add(p, mul(mul(U, U), V), Rational(-1, 2));
    p = add(p, mul(mul(U, V), V), Rational(-1, 2));
    p = add(p, mul(U, U), -(A - 2) / 12);
    p = add(p, mul(U, V), -(A - 2) / 3);
    p = add(p, mul(V, V), -(A - 2) / 12);
    p = add(p, add(U, V), -(1 - 2 * A) / 12);
    p = add(p, constant(-A / 18));
    return p;
}

Rational eval(const Poly& p, const Rational& x, const Rational& y, const Rational& z) {
    Rational s = 0;
    for (const auto& [e, a] : p) {
        Rational t = a;
        for (int i = 0; i < e[0]; ++i) t *= x;
        for (int i = 0; i < e[1]; ++i) t *= y;
        for (int i = 0; i < e[2]; ++i) t *= z;
        s += t;
    }
    return s;
}

}  // namespace

TEST_CASE("builders produce consistent families") {
    CHECK(is_consistent(build_unreachable(8).family).consistent);
    CHECK(is_consistent(build_nonstrong(8).family).consistent);
    CHECK(is_consistent(build_discontinuous(12).family).consistent);
    CHECK(is_consistent(build_uniformband(5).family).consistent);
    CHECK(is_consistent(build_nonuniform_2x2x2()).consistent);
    CHECK_THROWS_AS(build_discontinuous(10), DomainError);
    CHECK_THROWS_AS(build_unreachable(4), DomainError);
}

TEST_CASE("cyclic and fractional couplings have uniform pair projections") {
    for (int N : {1, 3, 6, 9}) {
        auto c = cyclic_coupling(N);
        CHECK(c.mass() == 1);
        CHECK(pair_projections_uniform(c));
        CHECK(frac_coupling(1, 1, 1, N) == c);
    }
    for (int N : {6, 12}) {
        auto f = frac_coupling(1, 1, 2, N);
        CHECK(pair_projections_uniform(f));
        for (std::size_t c = 0; c < f.cell_count(); ++c)
            if (f[c] != 0) CHECK(cell_meets_lattice_plane({1, 1, 2}, f.unravel(c), N));
    }
    CHECK(pair_projections_uniform(frac_coupling({1, 1, 2}, {12, 12, 8}, 12)));
    CHECK(pair_projections_uniform(frac_coupling({2, 3, 1}, {6, 6, 6}, 6)));
    CHECK_THROWS_AS(frac_coupling(1, 1, 2, 5), DomainError);
}

TEST_CASE("lattice plane test on small boxes") {
    // coordinate sums over the box: [0, 3/4] contains 0, [1/8, 1/2] has no integer
    CHECK(cell_meets_lattice_plane({1, 1, 1}, {0, 0, 0}, 4));
    CHECK_FALSE(cell_meets_lattice_plane({1, 1, 1}, {0, 0, 1}, 8));
    CHECK(cell_meets_lattice_plane({1, 1, 1}, {1, 1, 1}, 4));
}

TEST_CASE("piecewise dual values") {
    CHECK(PiecewiseDual32::f13(frac(1, 2), frac(1, 2)) == 0);
    CHECK(PiecewiseDual32::f13(frac(1, 2), frac(5, 6)) == frac(1, 4));
    CHECK(PiecewiseDual32::f12(frac(1, 3), frac(2, 3)) == 0);
    CHECK(discontinuous_cost(1, 1, frac(1, 3)) == 0);
    CHECK(discontinuous_cost(1, 1, 1) == 2);
    // Sum f <= c everywhere on a fine rational grid
    for (int a = 0; a <= 12; ++a)
        for (int b = 0; b <= 12; ++b)
            for (int c = 0; c <= 12; ++c) {
                Rational x = frac(a, 12), y = frac(b, 12), z = frac(c, 12);
                CHECK(PiecewiseDual32::F(x, y, z) <= discontinuous_cost(x, y, z));
            }
}

TEST_CASE("composite plan") {
    for (int N : {12, 24, 48}) {
        auto pi = composite_pi(N);
        CHECK(pi.mass() == 1);
        CHECK(pair_projections_uniform(pi));
        Rational low = 0, value = 0;
        for (std::size_t c = 0; c < pi.cell_count(); ++c) {
            if (pi[c] == 0) continue;
            auto x = pi.unravel(c);
            if (x[2] < N / 3) low += pi[c];
            Rational s = frac(2L * x[0] + 1, 2L * N) + frac(2L * x[1] + 1, 2L * N) + 3 * frac(2L * x[2] + 1, 2L * N) - 3;
            if (s > 0) value += pi[c] * s;
        }
        CHECK(low == frac(1, 3));
        CHECK(abs(value - frac(1, 6)) <= frac(2, N));
        auto dc = build_discontinuous(N);
        CHECK(plan_cost(pi, dc.cost) == value);
        auto a = audit_discontinuous(pi, dc);
        CHECK(a.unflagged_violations == 0);
        CHECK(a.violations <= 13u * static_cast<std::size_t>(N) * N);
        CHECK(a.flagged < a.support);
    }
}

TEST_CASE("discontinuous LP at N = 12") {
    auto dc = build_discontinuous(12);
    CHECK(check_dual_feasible(dc.dual, dc.cost) == 0);
    CHECK(integrate(dc.dual, dc.family) == frac(1, 6));
    TransportOptions o;
    o.allow_large_exact = true;
    auto r = verify_gap(dc.family, dc.cost, o);
    CHECK(r.primal_value == frac(1, 6));
    CHECK(r.gap == 0);
}

TEST_CASE("f_A identity pinned by expansion") {
    Poly s = add(add(var(0), var(1)), var(2));
    Poly s1 = add(s, constant(-1));
    for (int A = 0; A <= 2; ++A) {
        Poly lhs = mul(mul(var(0), var(1)), var(2));
        lhs = add(lhs, fA_poly(A, 0, 1), -1);
        lhs = add(lhs, fA_poly(A, 0, 2), -1);
        lhs = add(lhs, fA_poly(A, 1, 2), -1);
        Poly rhs = mul(mul(s1, s1), add(s, constant(A)));
        // the x^3 coefficient fixes kappa, then every coefficient must agree
        const Rational kappa = lhs[{3, 0, 0}] / rhs[{3, 0, 0}];
        CHECK(kappa == fA_kappa());
        CHECK(add(lhs, rhs, -kappa).empty());
        std::mt19937_64 rng(100 + static_cast<unsigned>(A));
        for (int t = 0; t < 200; ++t) {
            Rational x = oracle::random_rational(rng, 0, 7, 7), y = oracle::random_rational(rng, 0, 7, 7),
                     z = oracle::random_rational(rng, -3, 7, 5);
            CHECK(fA_gap(A, x, y, z) == eval(lhs, x, y, z));
            CHECK(eval_fA(A, x, y) == eval(fA_poly(A, 0, 1), x, y, 0));
        }
        std::uniform_real_distribution<double> u(0, 1);
        for (int t = 0; t < 500; ++t) {
            Rational x(u(rng)), y(u(rng)), z(u(rng));
            CHECK(fA_gap(A, x, y, z) >= 0);
        }
        for (int t = 0; t < 50; ++t) {
            Rational x = oracle::random_rational(rng, 0, 9, 9), y = (1 - x) * oracle::random_rational(rng, 0, 9, 9);
            CHECK(fA_gap(A, x, y, 1 - x - y) == 0);
        }
        CHECK(fA_plane_value(A) == frac(1, 60));
    }
    CHECK_THROWS_AS(eval_fA(-1, 0, 0), DomainError);
}

TEST_CASE("unreachable truncation") {
    auto uc = build_unreachable(8);
    CHECK(uc.M == frac(25, 9));
    CHECK(uc.alpha0 == 1 / (uc.M * pi_squared_upper() + 2));
    CHECK(uc.mu.mass() == 1);
    // the three cells of A_n share a weight, which decreases in n
    for (int n = 1; n <= 6; ++n) {
        auto a = a_cells(n), b = a_cells(n + 1);
        CHECK(uc.mu.at(a[0]) == uc.mu.at(a[1]));
        CHECK(uc.mu.at(a[1]) == uc.mu.at(a[2]));
        CHECK(uc.mu.at(a[0]) > uc.mu.at(b[0]));
        for (int t = 0; t < 3; ++t) CHECK(uc.cost.at(a[static_cast<std::size_t>(t)]) == 1);
    }
    CHECK(uc.cost.at({0, 0, 0}) == 0);
    CHECK(unreachable_lower_bound(0, 1) == 2 * frac(3, 4) / pi_squared_upper());
    for (const auto& b : check_unreachable_bounds(uc, 4)) {
        CHECK(b.positive);
        CHECK(b.within_slack);
    }
    auto g = diagnose_dual_growth(uc);
    CHECK(g.interior_bound);
    CHECK(g.weighted > diagnose_dual_growth(6).weighted);
}

TEST_CASE("nonstrong example") {
    auto nc = build_nonstrong(8);
    CHECK(nc.mu.mass() == 1);
    auto u = verify_nonstrong_uniqueness(nc, 3);
    CHECK(u.unique);
    CHECK(u.generic_min == u.generic_expected);
    auto d = nonstrong_dual(nc);
    CHECK(d.recurrence);
    // independent check of the recurrence from the returned numbers
    for (std::size_t n = 0; n + 1 < d.diagonal_F.size(); ++n) CHECK(d.diagonal_F[n + 1] - d.diagonal_F[n] == 3);
    // the unique measure puts all B-mass on cost 1 cells
    Rational bmass = 0;
    for (int n = 1; n <= 7; ++n)
        for (const auto& c : b_cells(n)) bmass += nc.mu.at(c);
    CHECK(d.value == bmass);
}

TEST_CASE("uniform band slices") {
    auto rep = run_uniformband(8);
    CHECK(rep.max_line_error < 1e-9);
    CHECK(rep.bang_bang_fraction >= 0.5);
    for (const auto& s : rep.slices) CHECK(s.rfind("P2\n8 8\n255\n", 0) == 0);
    auto ex = run_uniformband(4, lp::Arithmetic::Exact);
    CHECK(ex.max_line_error < 1e-12);
}

TEST_CASE("2x2x2 nonuniform family") {
    auto u = verify_unique_uniting(build_nonuniform_2x2x2());
    CHECK(u.unique);
    CHECK(u.witness.at({0, 0, 0}) == 0);
    CHECK(u.witness.at({1, 1, 1}) == 0);
    for (std::size_t c = 1; c + 1 < 8; ++c) CHECK(u.witness[c] == frac(1, 6));
    CHECK(u.cell_range.size() == 8);
}

TEST_CASE("case runner") {
    CHECK(case_names().size() == 6);
    CHECK_THROWS_AS(run_case("no-such-case", {}), DomainError);
    auto o = run_case("nonuniform222", {});
    CHECK(o.report["unique"] == true);
    auto pd = run_case("plane-duals", {});
    for (const auto& row : pd.report["duals"]) {
        CHECK(row["identity_ok"] == 200);
        CHECK(row["feasible"] == 200);
        CHECK(row["plane_equal"] == 200);
    }
    CaseParams p;
    p.N = 6;
    p.arithmetic = lp::Arithmetic::Float;
    auto ub = run_case("uniformband", p);
    CHECK(ub.images.size() == 3);
    CHECK(run_case("nonuniform222", {}).report.dump() == o.report.dump());
}
