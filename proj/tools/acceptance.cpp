// Runs the acceptance suite and prints one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "mmk/case_studies.hpp"
#include "mmk/feasibility.hpp"
#include "mmk/transport.hpp"
#include "mmk/xor_model.hpp"

using namespace mmk;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

DiscreteMeasure random_measure(std::mt19937_64& rng, const std::vector<int>& sizes, int lo = 1, int hi = 9) {
    std::vector<int> labels;
    for (std::size_t i = 0; i < sizes.size(); ++i) labels.push_back(static_cast<int>(i) + 1);
    auto mu = DiscreteMeasure::zero(IndexSet(labels), sizes);
    std::uniform_int_distribution<int> d(lo, hi);
    for (auto& w : mu.weights()) w = d(rng);
    mu *= 1 / mu.mass();
    return mu;
}

// probability measure on axis i + 1
DiscreteMeasure random_ref(std::mt19937_64& rng, int i, int size) {
    return DiscreteMeasure(IndexSet{i + 1}, {size}, random_measure(rng, {size}).weights());
}

std::vector<int> random_sizes(std::mt19937_64& rng, int n, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    std::vector<int> s(static_cast<std::size_t>(n));
    for (auto& v : s) v = d(rng);
    return s;
}

CostGrid random_cost(std::mt19937_64& rng, const std::vector<int>& sizes, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    std::size_t cells = 1;
    for (int s : sizes) cells *= static_cast<std::size_t>(s);
    std::vector<Rational> v(cells);
    for (auto& x : v) x = d(rng);
    return CostGrid(sizes, v);
}

bool projects_to(const DiscreteMeasure& mu, const MarginalFamily& fam) {
    for (const auto& [alpha, m] : fam.marginals)
        if (project(mu, alpha) != m) return false;
    return true;
}

Rational dyadic_value(const Dyadic& d) { return d.value(); }

Dyadic random_dyadic(std::mt19937_64& rng, int max_prec) {
    std::uniform_int_distribution<int> pd(0, max_prec);
    int p = pd(rng);
    std::uniform_int_distribution<long> ad(0, 1L << p);
    return Dyadic(Integer(ad(rng)), p);
}

// Integral of t xor s over [0, a/2^p] x [0, b/2^p] summed over dyadic squares
// of side h = 2^-p: each square contributes h^2 ((i xor j) h + h/2).
Rational riemann_xor_integral(std::uint64_t a, std::uint64_t b, int p) {
    Integer s = 0;
    for (std::uint64_t i = 0; i < a; ++i) {
        std::uint64_t row = 0;
        for (std::uint64_t j = 0; j < b; ++j) row += i ^ j;
        s += Integer(static_cast<unsigned long>(row));
    }
    const Rational h = pow2(-p);
    return h * h * h * Rational(s) + h * h * h / 2 * Rational(Integer(static_cast<unsigned long>(a * b)));
}

// ---- polynomial arithmetic for the f_A expansion
using Poly = std::map<std::array<int, 3>, Rational>;

Poly pmul(const Poly& p, const Poly& q) {
    Poly r;
    for (const auto& [e, a] : p)
        for (const auto& [f, b] : q) r[{e[0] + f[0], e[1] + f[1], e[2] + f[2]}] += a * b;
    return r;
}

Poly padd(Poly p, const Poly& q, const Rational& s = 1) {
    for (const auto& [e, a] : q) p[e] += s * a;
    for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
    return p;
}

Poly pvar(int i) {
    std::array<int, 3> e{};
    e[static_cast<std::size_t>(i)] = 1;
    return Poly{{e, Rational(1)}};
}

Poly pconst(const Rational& c) { return Poly{{{0, 0, 0}, c}}; }

Poly fA_poly(const Rational& A, int u, int v) {
    Poly U = pvar(u), V = pvar(v), p;
    p = padd(p, pmul(pmul(U, U), U), Rational(-1, 12));
    p = padd(p, pmul(pmul(V, V), V), Rational(-1, 12));
    p = padd(p, pmul(pmul(U, U), V), Rational(-1, 2));
    p = padd(p, pmul(pmul(U, V), V), Rational(-1, 2));
    p = padd(p, pmul(U, U), -(A - 2) / 12);
    p = padd(p, pmul(U, V), -(A - 2) / 3);
    p = padd(p, pmul(V, V), -(A - 2) / 12);
    p = padd(p, padd(U, V), -(1 - 2 * A) / 12);
    return padd(p, pconst(-A / 18));
}

// ---- criteria

void c1_lambda() {
    require(signed_lambda(3, 2) == std::vector<Rational>{1, -1, 1}, "signed_lambda(3,2)");
    require(decomp_lambda(3, 2) == std::vector<Rational>{frac(1, 3), frac(-1, 2), 1}, "decomp_lambda(3,2)");
    for (int n = 2; n <= 8; ++n)
        require(decomp_lambda(n, 1) == std::vector<Rational>{frac(1, n) - 1, 1}, "decomp_lambda(n,1) at n=" + std::to_string(n));
}

void c2_signed() {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 25; ++t) {
        const int n = t < 20 ? 3 : 4;
        auto sizes = random_sizes(rng, n, 1, 3);
        auto fam = marginals_of(random_measure(rng, sizes), 2);
        std::vector<DiscreteMeasure> refs;
        for (int i = 0; i < n; ++i) refs.push_back(random_ref(rng, i, sizes[static_cast<std::size_t>(i)]));
        require(is_consistent(fam).consistent, "random family inconsistent");
        auto s = signed_uniting(fam, refs);
        require(projects_to(s, fam), "signed uniting measure misses a marginal (trial " + std::to_string(t) + ")");
    }
}

void c3_certificates() {
    for (auto [n, k] : {std::pair{3, 2}, std::pair{4, 2}, std::pair{4, 3}}) {
        auto fam = make_modk_counterexample(n, k);
        const std::string tag = "(" + std::to_string(n) + "," + std::to_string(k) + ")";
        require(is_consistent(fam).consistent, "mod-k family inconsistent " + tag);
        auto v = kellerer_check(fam);
        require(!v.feasible, "mod-k family reported feasible " + tag);
        require(v.raw.has_value(), "no Farkas certificate " + tag);
        std::size_t cells = fam.grid().cell_count();
        auto mlp = build_marginal_lp(fam, std::vector<Rational>(cells, Rational(0)));
        require(lp::check_certificate(mlp.problem, *v.raw), "Farkas certificate fails " + tag);
        require(verify_kellerer_certificate(fam, v.certificate), "Kellerer tuple fails " + tag);
        for (auto F : v.certificate.total()) require(F >= 0, "certificate sum negative somewhere " + tag);
        require(integrate(v.certificate, fam) < 0, "certificate integral not negative " + tag);
        require(integrate(v.certificate, fam) == v.certificate_value, "certificate value mismatch " + tag);
    }
}

void c4_two_point() {
    auto bad = make_two_point_counterexample(frac(5, 2));
    auto vb = kellerer_check(bad);
    require(!vb.feasible, "ratio 5/2 reported feasible");
    require(verify_kellerer_certificate(bad, vb.certificate), "ratio 5/2 certificate fails");
    auto mid = make_two_point_counterexample(frac(3, 2));
    auto mu = uniting_by_density_32(mid, uniform_refs(mid));
    require(mu.nonnegative() && projects_to(mu, mid), "explicit formula at ratio 3/2");
    auto two = make_two_point_counterexample(Rational(2));
    auto v2 = kellerer_check(two);
    require(v2.feasible && v2.witness.nonnegative() && projects_to(v2.witness, two), "LP at ratio 2");
}

void c5_nonuniform() {
    auto u = verify_unique_uniting(build_nonuniform_2x2x2());
    require(u.cell_range.size() == 8, "expected 8 LP pairs");
    require(u.unique, "uniting measure not unique");
    for (std::size_t c = 0; c < 8; ++c) {
        Rational want = (c == 0 || c == 7) ? Rational(0) : frac(1, 6);
        require(u.witness[c] == want, "witness weight at cell " + std::to_string(c));
    }
}

void c6_duality() {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 20; ++t) {
        auto sizes = random_sizes(rng, 3, 2, 5);
        auto fam = marginals_of(random_measure(rng, sizes), 2);
        auto c = random_cost(rng, sizes, -5, 20);
        auto r = transport_solve(fam, c);
        require(r.feasible && r.exact, "instance infeasible");
        require(r.gap == 0 && r.primal_value == r.dual_value, "nonzero gap");
        require(integrate(r.dual, fam) == r.primal_value, "dual objective mismatch");
        require(check_dual_feasible(r.dual, c) == 0, "dual infeasible");
        Rational pv = 0;
        for (std::size_t i = 0; i < r.pi.cell_count(); ++i) pv += r.pi[i] * c.values[i];
        require(pv == r.primal_value && projects_to(r.pi, fam) && r.pi.nonnegative(), "primal plan check");
    }
}

void c7_xor() {
    const int P = 12;
    const std::uint64_t one = 1u << P;
    const Rational I11 = riemann_xor_integral(one, one, P), Ihh = riemann_xor_integral(one / 2, one / 2, P);
    require(I11 == frac(1, 2), "quadrature I(1,1)");
    require(I11 - I11 / 4 - I11 / 4 == frac(1, 4), "quadrature f(1,1)");
    require(Ihh - Ihh / 4 - Ihh / 4 == frac(1, 32), "quadrature f(1/2,1/2)");
    const Dyadic d1(1, 0), dh(1, 1);
    require(xor_integral(d1, d1) == I11, "closed form I(1,1)");
    require(dual_f(d1, d1) == frac(1, 4), "closed form f(1,1)");
    require(dual_f(dh, dh) == frac(1, 32), "closed form f(1/2,1/2)");
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> q(0, 64);
    for (int t = 0; t < 40; ++t) {
        std::uint64_t a = q(rng), b = q(rng);
        require(xor_integral(Dyadic(Integer(static_cast<unsigned long>(a)), 6), Dyadic(Integer(static_cast<unsigned long>(b)), 6)) ==
                    riemann_xor_integral(a << (P - 6), b << (P - 6), P),
                "closed form vs quadrature at random corners");
    }
    for (int t = 0; t < 1000; ++t) {
        auto x = random_dyadic(rng, 8), y = random_dyadic(rng, 8);
        auto z = xor_dyadic(x, y);
        require(F_xor(x, y, z) == dyadic_value(x) * dyadic_value(y) * dyadic_value(z), "F(x,y,x^y) != xyz");
    }
    for (int t = 0; t < 1000; ++t) {
        auto x = random_dyadic(rng, 8), y = random_dyadic(rng, 8), z = random_dyadic(rng, 8);
        require(F_xor(x, y, z) <= dyadic_value(x) * dyadic_value(y) * dyadic_value(z), "F > xyz");
    }
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + t % 5;
        const Rational bound = Rational(13) * pow2(-3 * n);
        std::uniform_int_distribution<int> cell(0, (1 << n) - 1), corner(0, 7), sub(0, 4);
        int a1 = cell(rng), a2 = cell(rng), a3 = a1 ^ a2, e = corner(rng);
        int s1 = sub(rng), s2 = sub(rng), s3 = sub(rng);
        // a corner of the cube and a point on a finer lattice inside it
        Dyadic x(a1 + (e & 1), n), y(a2 + (e >> 1 & 1), n), z(a3 + (e >> 2 & 1), n);
        require(abs(F_xor(x, y, z) - x.value() * y.value() * z.value()) <= bound, "cube bound at a corner");
        Dyadic xi(4 * a1 + s1, n + 2), yi(4 * a2 + s2, n + 2), zi(4 * a3 + s3, n + 2);
        require(abs(F_xor(xi, yi, zi) - xi.value() * yi.value() * zi.value()) <= bound, "cube bound inside");
    }
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + t % 5;
        std::uniform_int_distribution<int> cell(0, (1 << n) - 1), sub(0, 4);
        int a = cell(rng), b = cell(rng), s0 = sub(rng), s1 = sub(rng), t0 = sub(rng), t1 = sub(rng);
        if (s0 > s1) std::swap(s0, s1);
        if (t0 > t1) std::swap(t0, t1);
        Dyadic x0(4 * a + s0, n + 2), x1(4 * a + s1, n + 2), y0(4 * b + t0, n + 2), y1(4 * b + t1, n + 2);
        Rational d2 = dual_f(x1, y1) - dual_f(x0, y1) - dual_f(x1, y0) + dual_f(x0, y0);
        Rational ii = xor_integral(x1, y1) - xor_integral(x0, y1) - xor_integral(x1, y0) + xor_integral(x0, y0);
        require(abs(d2 - ii) <= Rational(54) * pow2(-3 * n), "rectangle bound");
    }
}

void c8_xor_lp() {
    const Rational expected[] = {0, frac(9, 4)};
    for (int n = 1; n <= 3; ++n) {
        auto inst = xor_instance(n);
        auto mu = xor_coupling(n);
        Rational v = 0;
        for (std::size_t i = 0; i < mu.cell_count(); ++i) v += mu[i] * inst.cost.values[i];
        if (n <= 2) require(v == expected[n - 1], "coupling cost at n=" + std::to_string(n));
        auto p = solve_primal(inst.family, inst.cost);
        require(p.feasible && p.value == v, "LP value differs from the coupling cost at n=" + std::to_string(n));
    }
}

void c9_bounded() {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        auto sizes = random_sizes(rng, 3, 2, 4);
        std::vector<DiscreteMeasure> refs;
        for (int i = 0; i < 3; ++i) refs.push_back(random_ref(rng, i, sizes[static_cast<std::size_t>(i)]));
        auto fam = marginals_of(product<Rational>(refs), 2);
        auto c = random_cost(rng, sizes, 0, 12);
        auto r = transport_solve(fam, c);
        auto d = extract_bounded_dual(fam, c, r.dual);
        const Rational norm = c.sup_norm();
        for (const auto& [alpha, fa] : d.f)
            for (const auto& v : fa.weights())
                require(v >= -frac(80, 3) * norm && v <= frac(40, 3) * norm, "potential outside [-26 2/3, 13 1/3] |c|");
        for (const auto& F : d.total()) require(F >= -12 * norm, "F below -12 |c|");
        require(integrate(d, fam) == r.primal_value, "dual value changed");
        require(check_dual_feasible(d, c) == 0, "bounded dual infeasible");
    }
}

void c10_discontinuous() {
    for (int N : {12, 24}) {
        auto pi = composite_pi(N);
        auto dc = build_discontinuous(N);
        require(projects_to(pi, dc.family), "composite plan projections at N=" + std::to_string(N));
        // midpoint quadrature of the piecewise dual against the uniform pair marginals
        Rational v = 0;
        const Rational h2 = frac(1, static_cast<long>(N) * N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                Rational u = cell_center(i, N), w = cell_center(j, N);
                v += h2 * (PiecewiseDual32::f12(u, w) + PiecewiseDual32::f13(u, w) + PiecewiseDual32::f23(u, w));
            }
        require(abs(v - frac(1, 6)) <= frac(2, N), "dual quadrature value at N=" + std::to_string(N));
        require(integrate(dc.dual, dc.family) == v, "sampled dual integral differs from quadrature");
        auto a = audit_discontinuous(pi, dc);
        require(a.unflagged_violations == 0, "slackness violation away from the boundary layer");
        require(a.violations <= 13u * static_cast<std::size_t>(N) * N, "boundary layer larger than 13 N^2");
    }
}

void c11_unreachable() {
    auto uc = build_unreachable(12);
    for (const auto& b : check_unreachable_bounds(uc, 4, frac(1, 20))) {
        require(b.positive, "gamma not positive on A_" + std::to_string(b.m));
        require(b.within_slack, "gamma below the bound minus 5% on A_" + std::to_string(b.m));
    }
    Rational prev = -1;
    for (int N : {8, 10, 12}) {
        auto g = N == 12 ? diagnose_dual_growth(uc) : diagnose_dual_growth(N);
        require(g.weighted > prev, "weighted diagonal sums not increasing at N=" + std::to_string(N));
        prev = g.weighted;
    }
}

void c12_nonstrong() {
    auto nc = build_nonstrong(10);
    require(verify_nonstrong_uniqueness(nc).unique, "uniting measure not unique");
    auto d = nonstrong_dual(nc);
    for (std::size_t n = 0; n + 1 < d.diagonal_F.size(); ++n)
        require(d.diagonal_F[n + 1] - d.diagonal_F[n] == 3, "F(n+1,n+1,n+1) - F(n,n,n) != 3 at n=" + std::to_string(n + 1));
}

void c13_uniformband(const std::filesystem::path& dir) {
    const int N = 24;
    auto u = build_uniformband(N);
    TransportOptions o;
    o.arithmetic = lp::Arithmetic::Float;
    auto r = transport_solve(u.family, u.cost, o);
    require(r.feasible, "LP infeasible");
    const auto& w = r.pif.weights();
    const double line = 1.0 / (3.0 * N), full = 3.0 / (N * N);
    std::size_t bang = 0;
    for (int z = 0; z < 3; ++z)
        for (int i = 0; i < N; ++i) {
            double row = 0, col = 0;
            for (int j = 0; j < N; ++j) {
                double a = w[static_cast<std::size_t>((i * N + j) * 3 + z)];
                row += a;
                col += w[static_cast<std::size_t>((j * N + i) * 3 + z)];
                if (std::abs(3 * a) <= 1e-6 || std::abs(3 * a - full) <= 1e-6) ++bang;
            }
            require(std::abs(row - line) <= 1e-7 && std::abs(col - line) <= 1e-7, "slice line mass off 1/(3N)");
        }
    require(static_cast<double>(bang) >= 0.9 * static_cast<double>(w.size()), "fewer than 90% bang-bang cells");
    auto rep = run_uniformband(N);
    std::filesystem::create_directories(dir);
    for (int z = 0; z < 3; ++z) {
        const auto& img = rep.slices[static_cast<std::size_t>(z)];
        require(img.rfind("P2\n24 24\n255\n", 0) == 0, "slice is not a 24x24 P2 image");
        std::ofstream(dir / ("uniformband_z" + std::to_string(z) + ".pgm")) << img;
    }
}

void c14_polynomial() {
    Poly s = padd(padd(pvar(0), pvar(1)), pvar(2));
    Poly s1 = padd(s, pconst(-1));
    std::mt19937_64 rng(14);
    std::uniform_int_distribution<int> num(0, 97);
    for (int A = 0; A <= 2; ++A) {
        Poly lhs = pmul(pmul(pvar(0), pvar(1)), pvar(2));
        for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) lhs = padd(lhs, fA_poly(A, a, b), -1);
        Poly rhs = pmul(pmul(s1, s1), padd(s, pconst(A)));
        const Rational kappa = lhs[{3, 0, 0}] / rhs[{3, 0, 0}];
        require(padd(lhs, rhs, -kappa).empty(), "expansion does not factor");
        require(kappa == fA_kappa(), "kappa differs from the expansion");
        for (int t = 0; t < 200; ++t) {
            Rational x = frac(num(rng), 97), y = frac(num(rng), 89), z = frac(num(rng), 83);
            Rational sum = x + y + z;
            require(fA_gap(A, x, y, z) == kappa * (sum - 1) * (sum - 1) * (sum + A), "identity fails at a random triple");
        }
        for (int t = 0; t < 50; ++t) {
            Rational x = frac(num(rng), 97), y = (1 - x) * frac(num(rng), 97), z = 1 - x - y;
            require(eval_fA(A, x, y) + eval_fA(A, x, z) + eval_fA(A, y, z) == x * y * z, "sum f_A != xyz on the plane");
        }
    }
}

struct Criterion {
    int id;
    std::string name;
    double limit;
    std::function<void()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance suite"};
    std::string out_dir = (std::filesystem::temp_directory_path() / "mmk_acceptance").string();
    std::vector<int> only;
    app.add_option("--out-dir", out_dir, "where the uniformband slices go");
    app.add_option("--only", only, "run only these criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "lambda systems", 1, c1_lambda},
        {2, "signed uniting measures", 5, c2_signed},
        {3, "mod-k infeasibility certificates", 5, c3_certificates},
        {4, "two-point family", 2, c4_two_point},
        {5, "2x2x2 unique uniting measure", 2, c5_nonuniform},
        {6, "exact strong duality", 30, c6_duality},
        {7, "xor golden values and estimates", 60, c7_xor},
        {8, "xor optimality at finite scale", 60, c8_xor_lp},
        {9, "bounded dual extraction", 60, c9_bounded},
        {10, "discontinuous example", 60, c10_discontinuous},
        {11, "unreachable dual supremum", 120, c11_unreachable},
        {12, "no strongly c-monotone plan", 60, c12_nonstrong},
        {13, "uniform band figure", 300, [&] { c13_uniformband(out_dir); }},
        {14, "polynomial duals", 5, c14_polynomial},
    };
    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        std::string why;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run();
        } catch (const std::exception& e) {
            why = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (why.empty() && secs > c.limit) {
            std::ostringstream os;
            os << "over the " << c.limit << " s limit";
            why = os.str();
        }
        std::cout << (why.empty() ? "PASS" : "FAIL") << ' ' << std::setw(2) << c.id << ' ' << c.name << " (" << std::fixed
                  << std::setprecision(2) << secs << " s)";
        if (!why.empty()) std::cout << ": " << why;
        std::cout << std::endl;
        if (!why.empty()) ++failed;
    }
    return failed ? 1 : 0;
}
