#include "doctest.h"

#include <random>

#include "mmk/feasibility.hpp"
#include "mmk/transport.hpp"
#include "oracles.hpp"

using namespace mmk;

namespace {

IndexSet full(int n) {
    std::vector<int> a;
    for (int i = 1; i <= n; ++i) a.push_back(i);
    return IndexSet(a);
}

DiscreteMeasure random_measure(std::mt19937_64& rng, const std::vector<int>& sizes, int lo = 1, int hi = 9) {
    auto mu = DiscreteMeasure::zero(full(static_cast<int>(sizes.size())), sizes);
    std::uniform_int_distribution<int> d(lo, hi);
    for (auto& w : mu.weights()) w = d(rng);
    Rational t = mu.mass();
    for (auto& w : mu.weights()) w /= t;
    return mu;
}

CostGrid random_cost(std::mt19937_64& rng, const std::vector<int>& sizes, int lo, int hi) {
    return CostGrid::from_function(sizes, [&](const std::vector<int>&) { return oracle::random_rational(rng, lo, hi, 3); });
}

DualPotentials random_potentials(std::mt19937_64& rng, int n, int k, const std::vector<int>& sizes) {
    DualPotentials d;
    d.n = n;
    d.sizes = sizes;
    for (const auto& alpha : subsets(n, k)) {
        std::vector<int> sub;
        for (int a : alpha.members()) sub.push_back(sizes[static_cast<std::size_t>(a - 1)]);
        auto fa = DiscreteMeasure::zero(alpha, sub);
        for (auto& w : fa.weights()) w = oracle::random_rational(rng, -20, 20, 4);
        d.f.emplace(alpha, fa);
    }
    return d;
}

// Sum of potentials at a cell, evaluated without the library helpers.
Rational brute_sum(const DualPotentials& d, const std::vector<int>& cell) {
    Rational s = 0;
    for (const auto& [alpha, fa] : d.f) {
        std::size_t idx = 0;
        for (int a : alpha.members()) idx = idx * static_cast<std::size_t>(d.sizes[static_cast<std::size_t>(a - 1)]) + static_cast<std::size_t>(cell[static_cast<std::size_t>(a - 1)]);
        s += fa[idx];
    }
    return s;
}

std::vector<std::vector<int>> all_cells(const std::vector<int>& sizes) {
    std::vector<std::vector<int>> out;
    for_each_cell(sizes, [&](const std::vector<int>& c, std::size_t) { out.push_back(c); });
    return out;
}

// Optimum by enumerating the vertices of the marginal polytope.
Rational vertex_optimum(const MarginalFamily& fam, const CostGrid& c) {
    auto cells = all_cells(fam.sizes);
    oracle::Dense rows;
    std::vector<Rational> rhs;
    for (const auto& [alpha, mu] : fam.marginals) {
        for (std::size_t m = 0; m < mu.cell_count(); ++m) {
            auto xa = mu.unravel(m);
            std::vector<Rational> row(cells.size(), Rational(0));
            for (std::size_t j = 0; j < cells.size(); ++j) {
                bool hit = true;
                for (std::size_t i = 0; i < alpha.size(); ++i)
                    if (cells[j][static_cast<std::size_t>(alpha[i] - 1)] != xa[i]) hit = false;
                if (hit) row[j] = 1;
            }
            auto trial = rows;
            trial.push_back(row);
            if (oracle::rank(trial) == trial.size()) {
                rows.push_back(row);
                rhs.push_back(mu[m]);
            }
        }
    }
    auto r = oracle::vertex_min(rows, rhs, c.values);
    REQUIRE(r.feasible);
    return r.best;
}

MarginalFamily nonuniform_family() {
    auto mu = DiscreteMeasure::zero(full(3), {2, 2, 2});
    for (auto& w : mu.weights()) w = frac(1, 6);
    mu.at({0, 0, 0}) = 0;
    mu.at({1, 1, 1}) = 0;
    return marginals_of(mu, 2);
}

MarginalFamily uniform_pairs(int N) {
    MarginalFamily fam;
    fam.n = 3;
    fam.k = 2;
    fam.sizes = {N, N, N};
    for (const auto& alpha : subsets(3, 2)) fam.marginals.emplace(alpha, DiscreteMeasure::uniform(alpha, {N, N}));
    return fam;
}

MarginalFamily product_family(std::mt19937_64& rng, const std::vector<int>& sizes) {
    std::vector<DiscreteMeasure> ones;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        auto m = random_measure(rng, {sizes[i]});
        ones.emplace_back(IndexSet{static_cast<int>(i) + 1}, m.sizes(), m.weights());
    }
    return marginals_of(product(ones), 2);
}

Rational brute_section_norm(const CostGrid& c, const std::vector<DiscreteMeasure>& refs, const std::vector<int>& y,
                            const std::vector<int>& alpha) {
    Rational s = 0;
    for (const auto& x : all_cells(c.sizes)) {
        bool on = true;
        Rational w = 1;
        for (std::size_t i = 0; i < x.size(); ++i) {
            bool in = std::find(alpha.begin(), alpha.end(), static_cast<int>(i) + 1) != alpha.end();
            if (in)
                w *= refs[i][static_cast<std::size_t>(x[i])];
            else if (x[i] != y[i])
                on = false;
        }
        if (on) s += w * abs(c.at(x));
    }
    return s;
}

bool brute_admissible(const CostGrid& c, const std::vector<DiscreteMeasure>& refs, const std::vector<int>& y) {
    const int n = static_cast<int>(c.sizes.size());
    std::vector<int> every;
    for (int i = 1; i <= n; ++i) every.push_back(i);
    Rational bound = Rational(1 << (n + 1)) * brute_section_norm(c, refs, y, every);
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> alpha;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) alpha.push_back(i + 1);
        if (brute_section_norm(c, refs, y, alpha) > bound) return false;
    }
    return true;
}

std::vector<DiscreteMeasure> uniform_axes(const std::vector<int>& sizes) {
    std::vector<DiscreteMeasure> r;
    for (int s : sizes) r.push_back(DiscreteMeasure::uniform(IndexSet{1}, {s}));
    return r;
}

}  // namespace

TEST_CASE("decomp_lambda matches the tabulated coefficients") {
    CHECK(decomp_lambda(3, 2) == std::vector<Rational>{frac(1, 3), frac(-1, 2), Rational(1)});
    for (int n = 2; n <= 7; ++n) CHECK(decomp_lambda(n, 1) == std::vector<Rational>{frac(1, n) - 1, Rational(1)});
    CHECK_THROWS_AS(decomp_lambda(3, 3), DomainError);
    CHECK_THROWS_AS(decomp_lambda(3, 0), DomainError);
}

TEST_CASE("decomp_lambda solves its defining system") {
    auto C = [](int a, int b) { return Rational(binomial(a, b)); };
    for (int n = 2; n <= 7; ++n)
        for (int k = 1; k < n; ++k) {
            auto lam = decomp_lambda(n, k);
            REQUIRE(lam.size() == static_cast<std::size_t>(k + 1));
            CHECK(lam[static_cast<std::size_t>(k)] == 1);
            for (int a = 0; a < k; ++a) {
                Rational s = 0;
                for (int t = a; t <= k; ++t) s += lam[static_cast<std::size_t>(t)] * C(n - t, k - t) * C(n - k, t - a);
                CHECK(s == 0);
            }
        }
}

TEST_CASE("decomposition constant") {
    CHECK(decomposition_constant(3, 2) == frac(112, 3));
    CHECK(decomposition_constant(3, 2) <= 38);
    CHECK(decomposition_constant(2, 1) == Rational(8) * (frac(1, 2) + 1));
}

TEST_CASE("nk_decompose reconstructs sums of potentials") {
    std::mt19937_64 rng(11);
    struct Shape { int n, k; std::vector<int> sizes; };
    std::vector<Shape> shapes{{3, 2, {2, 3, 2}}, {4, 2, {2, 2, 3, 2}}, {4, 3, {2, 2, 2, 2}}, {3, 1, {3, 3, 2}}, {5, 2, {2, 2, 2, 2, 2}}};
    for (const auto& s : shapes) {
        for (int rep = 0; rep < 4; ++rep) {
            auto g = random_potentials(rng, s.n, s.k, s.sizes);
            std::vector<Rational> vals;
            auto cells = all_cells(s.sizes);
            for (const auto& x : cells) vals.push_back(brute_sum(g, x));
            CostGrid F(s.sizes, vals);
            const auto& y = cells[std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng)];
            auto f = nk_decompose(F, s.k, y, decomp_lambda(s.n, s.k));
            CHECK(f.f.size() == subsets(s.n, s.k).size());
            for (std::size_t i = 0; i < cells.size(); ++i) CHECK(brute_sum(f, cells[i]) == vals[i]);
        }
    }
}

TEST_CASE("nk_decompose of zero and of a linear function") {
    CostGrid zero({2, 2, 2}, std::vector<Rational>(8, Rational(0)));
    auto z = nk_decompose(zero, 2, {1, 0, 1}, decomp_lambda(3, 2));
    for (const auto& [a, fa] : z.f)
        for (const auto& w : fa.weights()) CHECK(w == 0);

    auto lin = CostGrid::from_function({2, 2, 2}, [](const std::vector<int>& x) { return Rational(x[0] + x[1] + x[2]); });
    auto f = nk_decompose(lin, 2, {0, 0, 0}, decomp_lambda(3, 2));
    // F(x1,x2,0) - F(x1,0,0)/2 - F(0,x2,0)/2 + F(0,0,0)/3 = (x1 + x2)/2
    for (const auto& [alpha, fa] : f.f)
        for (std::size_t i = 0; i < fa.cell_count(); ++i) {
            auto xa = fa.unravel(i);
            CHECK(fa[i] == frac(xa[0] + xa[1], 2));
        }
}

TEST_CASE("good_basepoint examples") {
    auto one = CostGrid::from_function({3, 3, 3}, [](const std::vector<int>&) { return Rational(1); });
    auto refs = uniform_axes({3, 3, 3});
    CHECK(good_basepoint(one, refs) == std::vector<int>{0, 0, 0});
    for (const auto& [alpha, s] : section_norms(one, refs, {2, 1, 0})) CHECK(s == 1);

    auto spike = CostGrid::from_function({4, 4, 4}, [](const std::vector<int>& x) { return Rational(x == std::vector<int>{0, 0, 0} ? 1 : 0); });
    auto r4 = uniform_axes({4, 4, 4});
    auto y = good_basepoint(spike, r4);
    CHECK(brute_admissible(spike, r4, y));
    CHECK(y != std::vector<int>{0, 0, 0});
    CHECK(l1_norm(spike, r4) == frac(1, 64));

    auto bad = refs;
    bad[0] = DiscreteMeasure(IndexSet{1}, {3}, {Rational(0), frac(1, 2), frac(1, 2)});
    CHECK_THROWS_AS(good_basepoint(one, bad), DomainError);
}

TEST_CASE("good_basepoint on random grids passes every section inequality") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 40; ++rep) {
        std::vector<int> sizes{3, 3, 3};
        CostGrid c = random_cost(rng, sizes, -30, 30);
        if (rep % 3 == 0)  // mostly-zero costs with a few large cells
            for (auto& v : c.values) v = (std::uniform_int_distribution<int>(0, 9)(rng) == 0) ? v * 50 : Rational(0);
        std::vector<DiscreteMeasure> refs;
        for (int s : sizes) {
            auto m = random_measure(rng, {s});
            refs.emplace_back(IndexSet{1}, m.sizes(), m.weights());
        }
        auto y = good_basepoint(c, refs);
        CHECK(brute_admissible(c, refs, y));
        // first admissible cell in scan order, when it lies within the scan window
        auto cells = all_cells(sizes);
        std::size_t first = 0;
        while (!brute_admissible(c, refs, cells[first])) ++first;
        if (first < 16) CHECK(y == cells[first]);
        auto norms = section_norms(c, refs, y);
        CHECK(norms.size() == 8);
        for (const auto& [alpha, s] : norms) CHECK(s == brute_section_norm(c, refs, y, alpha.members()));
    }
}

TEST_CASE("decomposition norm bound with a good base point") {
    std::mt19937_64 rng(23);
    const Rational C = decomposition_constant(3, 2);
    for (int rep = 0; rep < 25; ++rep) {
        std::vector<int> sizes{3, 2, 3};
        auto g = random_potentials(rng, 3, 2, sizes);
        std::vector<Rational> vals;
        for (const auto& x : all_cells(sizes)) vals.push_back(brute_sum(g, x));
        CostGrid F(sizes, vals);
        std::vector<DiscreteMeasure> refs;
        for (int s : sizes) {
            auto m = random_measure(rng, {s});
            refs.emplace_back(IndexSet{1}, m.sizes(), m.weights());
        }
        auto y = good_basepoint(F, refs);
        auto f = nk_decompose(F, 2, y, decomp_lambda(3, 2));
        Rational fn = l1_norm(F, refs);
        for (const auto& [alpha, fa] : f.f) {
            Rational s = 0;
            for (std::size_t i = 0; i < fa.cell_count(); ++i) {
                auto xa = fa.unravel(i);
                s += abs(fa[i]) * refs[static_cast<std::size_t>(alpha[0] - 1)][static_cast<std::size_t>(xa[0])] *
                     refs[static_cast<std::size_t>(alpha[1] - 1)][static_cast<std::size_t>(xa[1])];
            }
            CHECK(s <= C * fn);
        }
    }
}

TEST_CASE("strong duality against vertex enumeration") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<int> sizes = rep % 2 ? std::vector<int>{2, 2, 3} : std::vector<int>{2, 2, 2};
        auto mu = random_measure(rng, sizes);
        auto fam = marginals_of(mu, 2);
        auto c = random_cost(rng, sizes, -10, 10);
        auto r = verify_gap(fam, c);
        CHECK(r.gap == 0);
        CHECK(r.primal_value == vertex_optimum(fam, c));
        CHECK(check_dual_feasible(r.dual, c) <= 0);
        CHECK(complementary_slackness(r.pi, r.dual, c).empty());
        Rational v = 0;
        for (const auto& [alpha, fa] : r.dual.f)
            for (std::size_t i = 0; i < fa.cell_count(); ++i) v += fa[i] * fam.at(alpha)[i];
        CHECK(v == r.primal_value);
        for (const auto& [alpha, ma] : fam.marginals) CHECK(project(r.pi, alpha) == ma);
        // pinned constants
        auto last = std::prev(r.dual.f.end())->first;
        for (const auto& [alpha, fa] : r.dual.f)
            if (alpha != last) CHECK(fa[0] == 0);

        auto p = solve_primal(fam, c);
        auto d = solve_dual(fam, c);
        CHECK(p.feasible);
        CHECK(p.value == d.value);
    }
}

TEST_CASE("strong duality on (4,2) and (4,3) instances") {
    std::mt19937_64 rng(8);
    for (int k : {2, 3}) {
        for (int rep = 0; rep < 3; ++rep) {
            auto mu = random_measure(rng, {2, 2, 2, 2});
            auto fam = marginals_of(mu, k);
            auto c = random_cost(rng, {2, 2, 2, 2}, 0, 20);
            auto r = verify_gap(fam, c);
            CHECK(r.gap == 0);
            CHECK(r.primal_value == vertex_optimum(fam, c));
        }
    }
}

TEST_CASE("constant and zero costs") {
    std::mt19937_64 rng(4);
    auto fam = marginals_of(random_measure(rng, {3, 2, 2}), 2);
    auto zero = CostGrid::from_function({3, 2, 2}, [](const std::vector<int>&) { return Rational(0); });
    CHECK(solve_primal(fam, zero).value == 0);
    auto kappa = CostGrid::from_function({3, 2, 2}, [](const std::vector<int>&) { return frac(7, 3); });
    auto d = solve_dual(fam, kappa);
    CHECK(d.value == frac(7, 3));
    for (const auto& v : d.potentials.total()) CHECK(v == frac(7, 3));
}

TEST_CASE("unique uniting measure fixes the primal value") {
    auto fam = nonuniform_family();
    auto diag = CostGrid::from_function({2, 2, 2}, [](const std::vector<int>& x) { return Rational(x[0] == x[1] && x[1] == x[2] ? 1 : 0); });
    auto p = solve_primal(fam, diag);
    REQUIRE(p.feasible);
    CHECK(p.value == 0);
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        auto c = random_cost(rng, {2, 2, 2}, -5, 5);
        Rational expect = 0;
        for (const auto& x : all_cells({2, 2, 2}))
            if (!(x[0] == x[1] && x[1] == x[2])) expect += c.at(x) * frac(1, 6);
        CHECK(solve_primal(fam, c).value == expect);
        CHECK(verify_gap(fam, c).gap == 0);
    }
}

TEST_CASE("infeasible families") {
    auto fam = make_modk_counterexample(3, 2);
    auto c = CostGrid::from_function(fam.sizes, [](const std::vector<int>&) { return Rational(1); });
    auto p = solve_primal(fam, c);
    CHECK_FALSE(p.feasible);
    REQUIRE(p.certificate);
    CHECK(verify_kellerer_certificate(fam, p.certificate->certificate));
    CHECK_THROWS_AS(solve_dual(fam, c), DomainError);
    CHECK_THROWS_AS(verify_gap(fam, c), DomainError);
    auto j = to_json(transport_solve(fam, c));
    CHECK(j["feasible"] == false);
}

TEST_CASE("xor instance on the 4^3 grid") {
    auto fam = uniform_pairs(4);
    auto c = CostGrid::from_function({4, 4, 4}, [](const std::vector<int>& x) { return Rational(x[0] * x[1] * x[2]); });
    auto r = verify_gap(fam, c);
    CHECK(r.primal_value == frac(9, 4));
    CHECK(r.gap == 0);
    auto xo = DiscreteMeasure::zero(full(3), {4, 4, 4});
    Rational direct = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            xo.at({i, j, i ^ j}) = frac(1, 16);
            direct += frac(i * j * (i ^ j), 16);
        }
    CHECK(direct == frac(9, 4));
    for (const auto& [alpha, ma] : fam.marginals) CHECK(project(xo, alpha) == ma);
    CHECK(complementary_slackness(xo, r.dual, c).empty());

    auto b = extract_bounded_dual(fam, c, r.dual);
    const Rational cn = 27;
    CHECK(check_dual_feasible(b, c) <= 0);
    CHECK(integrate(b, fam) == frac(9, 4));
    for (const auto& [alpha, fa] : b.f)
        for (const auto& w : fa.weights()) {
            CHECK(w >= Rational(-80, 3) * cn);
            CHECK(w <= Rational(40, 3) * cn);
        }
    for (const auto& v : r.dual.total()) CHECK(v >= -12 * cn);
}

TEST_CASE("float mode agrees with the exact solve") {
    std::mt19937_64 rng(14);
    auto fam = marginals_of(random_measure(rng, {3, 3, 3}), 2);
    auto c = random_cost(rng, {3, 3, 3}, 0, 10);
    TransportOptions fo;
    fo.arithmetic = lp::Arithmetic::Float;
    auto rf = verify_gap(fam, c, fo);
    auto re = verify_gap(fam, c);
    CHECK_FALSE(rf.exact);
    CHECK(rf.primal_valuef == doctest::Approx(re.primal_value.get_d()).epsilon(1e-9));
    CHECK(std::abs(rf.gapf) < 1e-7);
    auto j = to_json(rf);
    CHECK(j["value"].is_number());
}

TEST_CASE("bounded dual extraction on product families") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 12; ++rep) {
        std::vector<int> sizes{3, 3, 2};
        auto fam = product_family(rng, sizes);
        auto c = random_cost(rng, sizes, 0, 12);
        auto r = verify_gap(fam, c);
        const Rational cn = c.sup_norm();
        for (const auto& v : r.dual.total()) CHECK(v >= -12 * cn);
        auto b = extract_bounded_dual(fam, c, r.dual);
        CHECK(integrate(b, fam) == r.dual_value);
        CHECK(check_dual_feasible(b, c) <= 0);
        for (const auto& [alpha, fa] : b.f)
            for (const auto& w : fa.weights()) {
                CHECK(w >= Rational(-80, 3) * cn);
                CHECK(w <= Rational(40, 3) * cn);
            }
        // pushing a large constant between two potentials keeps the value and feasibility
        auto shifted = r.dual;
        for (auto& w : shifted.f.at({1, 2}).weights()) w += 1000 * (cn + 1);
        for (auto& w : shifted.f.at({2, 3}).weights()) w -= 1000 * (cn + 1);
        auto b2 = extract_bounded_dual(fam, c, shifted);
        CHECK(integrate(b2, fam) == r.dual_value);
        for (const auto& [alpha, fa] : b2.f)
            for (const auto& w : fa.weights()) CHECK(abs(w) <= Rational(80, 3) * cn);
    }
}

TEST_CASE("bounded dual preconditions and the zero cost") {
    std::mt19937_64 rng(2);
    auto fam = product_family(rng, {2, 3, 2});
    auto zero = CostGrid::from_function({2, 3, 2}, [](const std::vector<int>&) { return Rational(0); });
    auto r = verify_gap(fam, zero);
    auto b = extract_bounded_dual(fam, zero, r.dual);
    for (const auto& [alpha, fa] : b.f)
        for (const auto& w : fa.weights()) CHECK(w == 0);

    auto c = random_cost(rng, {2, 3, 2}, 1, 9);
    auto rc = verify_gap(fam, c);
    auto weak = rc.dual;
    for (auto& w : weak.f.at({1, 3}).weights()) w -= 1;
    CHECK_THROWS_AS(extract_bounded_dual(fam, c, weak), DomainError);
    auto neg = c;
    neg.values[0] = -1;
    CHECK_THROWS_AS(extract_bounded_dual(fam, neg, rc.dual), DomainError);
    auto nonprod = marginals_of(random_measure(rng, {2, 3, 2}), 2);
    CHECK_THROWS_AS(extract_bounded_dual(nonprod, c, rc.dual), DomainError);
}

TEST_CASE("bounded dual floors null cells") {
    // mu_1 puts no mass on its last point; the potentials there are free
    std::vector<DiscreteMeasure> ones{DiscreteMeasure(IndexSet{1}, {3}, {frac(1, 2), frac(1, 2), Rational(0)}),
                                      DiscreteMeasure(IndexSet{2}, {2}, {frac(1, 3), frac(2, 3)}),
                                      DiscreteMeasure(IndexSet{3}, {2}, {frac(1, 4), frac(3, 4)})};
    auto fam = marginals_of(product(ones), 2);
    auto c = CostGrid::from_function({3, 2, 2}, [](const std::vector<int>& x) { return Rational(x[0] + 2 * x[1] * x[2] + 1); });
    auto r = verify_gap(fam, c);
    auto d = r.dual;
    for (std::size_t i = 0; i < d.f.at({1, 2}).cell_count(); ++i)
        if (d.f.at({1, 2}).unravel(i)[0] == 2) d.f.at({1, 2})[i] = -5000;
    REQUIRE(check_dual_feasible(d, c) <= 0);
    auto b = extract_bounded_dual(fam, c, d);
    const Rational cn = c.sup_norm();
    CHECK(integrate(b, fam) == r.dual_value);
    CHECK(check_dual_feasible(b, c) <= 0);
    bool floored = false;
    for (const auto& [alpha, fa] : b.f)
        for (const auto& w : fa.weights()) {
            CHECK(w >= Rational(-80, 3) * cn);
            CHECK(w <= Rational(40, 3) * cn);
            if (w == Rational(-80, 3) * cn) floored = true;
        }
    CHECK(floored);
}

TEST_CASE("check_dual_feasible shifts by epsilon") {
    std::mt19937_64 rng(6);
    auto fam = marginals_of(random_measure(rng, {2, 2, 2}), 2);
    auto c = random_cost(rng, {2, 2, 2}, 0, 5);
    auto r = verify_gap(fam, c);
    Rational before = check_dual_feasible(r.dual, c);
    auto bumped = r.dual;
    for (auto& w : bumped.f.at({1, 2}).weights()) w += frac(1, 7);
    CHECK(check_dual_feasible(bumped, c) == before + frac(1, 7));
    auto pi = r.pi;
    // move mass onto a cell with slack
    auto F = r.dual.total();
    std::size_t slack = 0;
    while (slack < F.size() && F[slack] == c.values[slack]) ++slack;
    if (slack < F.size()) {
        pi[slack] += frac(1, 100);
        CHECK_FALSE(complementary_slackness(pi, r.dual, c).empty());
    }
}

TEST_CASE("report JSON") {
    auto fam = uniform_pairs(2);
    auto c = CostGrid::from_function({2, 2, 2}, [](const std::vector<int>& x) { return Rational(x[0] + x[1] * x[2]); });
    auto j = to_json(verify_gap(fam, c));
    CHECK(j["gap"] == "0");
    CHECK(j["value"].is_string());
    CHECK(j["potentials"].contains("1,2"));
    CHECK(j["pi"]["weights"].size() == 8);
}
