#include "mmk/case_studies.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mmk/transport.hpp"

namespace mmk {

namespace {

const IndexSet kFull{1, 2, 3};

lp::SolveOptions exact_opts() {
    lp::SolveOptions o;
    o.allow_large_exact = true;
    return o;
}

// min (or max) of sum w(x) gamma(x) over the uniting measures of fam.
// basis, if given, seeds the solve and receives the final basis.
Rational polytope_extreme(const MarginalFamily& fam, const std::vector<Rational>& w, lp::Sense sense,
                          std::vector<int>* basis = nullptr) {
    auto mlp = build_marginal_lp(fam, w, sense);
    auto o = exact_opts();
    if (basis) o.warm_basis = *basis;
    auto sol = lp::solve(mlp.problem, o);
    if (sol.status != lp::Status::Optimal) throw InvariantError("case LP did not reach an optimum");
    if (basis) *basis = sol.basis;
    return sol.value;
}

std::vector<Rational> indicator(const std::vector<int>& sizes, const std::vector<int>& cell) {
    ProductGrid g(sizes);
    std::vector<Rational> w(g.cell_count(), Rational(0));
    w[g.index(cell)] = 1;
    return w;
}

TransportOptions exact_transport() {
    TransportOptions o;
    o.allow_large_exact = true;
    return o;
}

std::string slice_pgm(const std::vector<double>& vals, int N) {
    std::ostringstream os;
    os << "P2\n" << N << ' ' << N << "\n255\n";
    for (int row = 0; row < N; ++row) {
        const int j = N - 1 - row;
        for (int i = 0; i < N; ++i) {
            double d = std::clamp(vals[static_cast<std::size_t>(i * N + j)], 0.0, 1.0);
            os << static_cast<int>(std::lround(255 * (1 - d))) << (i + 1 < N ? ' ' : '\n');
        }
    }
    return os.str();
}

nlohmann::json rationals(const std::vector<Rational>& v) {
    auto a = nlohmann::json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

}  // namespace

Rational pi_squared_lower() { return Rational(98696, 10000); }
Rational pi_squared_upper() { return Rational(98697, 10000); }

std::array<std::vector<int>, 3> a_cells(int n) {
    // integers (n+1,n,n) etc., shifted to 0-based indices
    return {std::vector<int>{n, n - 1, n - 1}, std::vector<int>{n - 1, n, n - 1}, std::vector<int>{n - 1, n - 1, n}};
}

std::array<std::vector<int>, 3> b_cells(int n) {
    return {std::vector<int>{n - 1, n, n}, std::vector<int>{n, n - 1, n}, std::vector<int>{n, n, n - 1}};
}

Rational unreachable_lower_bound(const Rational& alpha, int m) {
    Rational gap = frac(1, static_cast<long>(m) * m) - frac(1, static_cast<long>(m + 1) * (m + 1));
    return 2 * (1 - alpha) / pi_squared_upper() * gap - alpha * pow2(-m);
}

UnreachableCase build_unreachable(int N) {
    if (N < 6) throw DomainError("build_unreachable needs N >= 6");
    UnreachableCase uc;
    uc.N = N;
    uc.M = 0;
    for (int n = 1; n <= 64; ++n) {
        Rational r = pow2(-n) / (frac(1, static_cast<long>(n) * n) - frac(1, static_cast<long>(n + 1) * (n + 1)));
        uc.M = std::max(uc.M, r);
    }
    uc.alpha0 = Rational(1) / (uc.M * pi_squared_upper() + 2);
    const std::vector<int> sizes{N, N, N};
    auto mu = DiscreteMeasure::zero(kFull, sizes);
    for_each_cell(sizes, [&](const std::vector<int>& x, std::size_t i) {
        mu[i] = uc.alpha0 * pow2(-(x[0] + x[1] + x[2] + 3));
    });
    for (int n = 1; n <= N - 1; ++n)
        for (const auto& cell : a_cells(n)) mu.at(cell) += (1 - uc.alpha0) * 2 / (pi_squared_upper() * n * n);
    mu *= 1 / mu.mass();
    uc.mu = mu;
    uc.family = marginals_of(mu, 2);
    std::vector<Rational> c(mu.cell_count(), Rational(0));
    ProductGrid g(sizes);
    for (int n = 1; n <= N - 1; ++n)
        for (const auto& cell : a_cells(n)) c[g.index(cell)] = 1;
    uc.cost = CostGrid(sizes, c);
    return uc;
}

std::vector<AnBound> check_unreachable_bounds(const UnreachableCase& uc, int m_max, const Rational& slack) {
    std::vector<AnBound> out;
    std::vector<int> basis;
    for (int m = 1; m <= std::min(m_max, uc.N - 1); ++m) {
        AnBound b;
        b.m = m;
        b.bound = unreachable_lower_bound(uc.alpha0, m);
        b.within_slack = b.positive = true;
        auto cells = a_cells(m);
        for (std::size_t t = 0; t < 3; ++t) {
            b.lp_min[t] = polytope_extreme(uc.family, indicator(uc.family.sizes, cells[t]), lp::Sense::Minimize, &basis);
            if (b.lp_min[t] < (1 - slack) * b.bound) b.within_slack = false;
            if (b.lp_min[t] <= 0) b.positive = false;
        }
        out.push_back(b);
    }
    return out;
}

GrowthReport diagnose_dual_growth(const UnreachableCase& uc) {
    auto r = verify_gap(uc.family, uc.cost, exact_transport());
    GrowthReport g;
    g.N = uc.N;
    g.value = r.primal_value;
    g.weighted = 0;
    g.interior_bound = true;
    for (int n = 1; n <= uc.N; ++n) {
        const std::vector<int> nn{n - 1, n - 1};
        Rational s = 0;
        for (const auto& [alpha, fa] : r.dual.f) s += abs(fa.at(nn));
        g.diagonal_abs.push_back(s);
        g.diagonal_F.push_back(r.dual.sum_at({n - 1, n - 1, n - 1}));
        g.weighted += s / (n * n);
        if (n <= uc.N - 1 && s < 3 * (n - 1)) g.interior_bound = false;
    }
    return g;
}

GrowthReport diagnose_dual_growth(int N) { return diagnose_dual_growth(build_unreachable(N)); }

NonstrongCase build_nonstrong(int N) {
    if (N < 6) throw DomainError("build_nonstrong needs N >= 6");
    NonstrongCase nc;
    nc.N = N;
    const std::vector<int> sizes{N, N, N};
    auto mu = DiscreteMeasure::zero(kFull, sizes);
    std::vector<Rational> c(mu.cell_count(), Rational(0));
    ProductGrid g(sizes);
    for (int n = 1; n <= N - 1; ++n) {
        for (const auto& cell : a_cells(n)) mu.at(cell) = frac(1, static_cast<long>(n) * n);
        for (const auto& cell : b_cells(n)) {
            mu.at(cell) = frac(1, static_cast<long>(n) * n);
            c[g.index(cell)] = 1;
        }
    }
    mu *= 1 / mu.mass();
    nc.mu = mu;
    nc.family = marginals_of(mu, 2);
    nc.cost = CostGrid(sizes, c);
    return nc;
}

UniquenessReport verify_nonstrong_uniqueness(const NonstrongCase& nc, std::uint64_t seed) {
    UniquenessReport u;
    u.unique = true;
    std::vector<int> basis;
    for (int k = 1; k <= nc.N; ++k) {
        auto w = indicator(nc.family.sizes, {k - 1, k - 1, k - 1});
        Rational lo = polytope_extreme(nc.family, w, lp::Sense::Minimize, &basis);
        Rational hi = polytope_extreme(nc.family, w, lp::Sense::Maximize, &basis);
        u.diagonal_range.emplace_back(lo, hi);
        if (lo != 0 || hi != 0) u.unique = false;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(0, 1000);
    std::vector<Rational> w(nc.mu.cell_count());
    u.generic_expected = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = d(rng);
        u.generic_expected += w[i] * nc.mu[i];
    }
    u.generic_min = polytope_extreme(nc.family, w, lp::Sense::Minimize, &basis);
    u.generic_max = polytope_extreme(nc.family, w, lp::Sense::Maximize, &basis);
    if (u.generic_min != u.generic_expected || u.generic_max != u.generic_expected) u.unique = false;
    return u;
}

NonstrongDualReport nonstrong_dual(const NonstrongCase& nc) {
    auto r = verify_gap(nc.family, nc.cost, exact_transport());
    NonstrongDualReport d;
    d.value = r.primal_value;
    for (int n = 1; n <= nc.N; ++n) d.diagonal_F.push_back(r.dual.sum_at({n - 1, n - 1, n - 1}));
    d.recurrence = true;
    for (int n = 1; n <= nc.N - 1; ++n)
        if (d.diagonal_F[static_cast<std::size_t>(n)] - d.diagonal_F[static_cast<std::size_t>(n - 1)] != 3) d.recurrence = false;
    d.F111 = d.diagonal_F.front();
    return d;
}

Rational PiecewiseDual32::f12(const Rational&, const Rational&) { return 0; }

Rational PiecewiseDual32::f13(const Rational& x1, const Rational& x3) {
    if (x3 < Rational(2, 3)) return 0;
    return x1 + Rational(3, 2) * x3 - Rational(3, 2);
}

Rational PiecewiseDual32::f23(const Rational& x2, const Rational& x3) { return f13(x2, x3); }

Rational PiecewiseDual32::F(const Rational& x1, const Rational& x2, const Rational& x3) {
    return f12(x1, x2) + f13(x1, x3) + f23(x2, x3);
}

Rational discontinuous_cost(const Rational& x1, const Rational& x2, const Rational& x3) {
    Rational s = x1 + x2 + 3 * x3 - 3;
    return s > 0 ? s : Rational(0);
}

Rational cell_center(int i, int N) { return frac(2L * i + 1, 2L * N); }

DiscontinuousCase build_discontinuous(int N) {
    if (N <= 0 || N % 6 != 0) throw DomainError("build_discontinuous needs N divisible by 6");
    DiscontinuousCase dc;
    dc.N = N;
    dc.family.n = 3;
    dc.family.k = 2;
    dc.family.sizes = {N, N, N};
    for (const auto& alpha : subsets(3, 2)) dc.family.marginals.emplace(alpha, DiscreteMeasure::uniform(alpha, {N, N}));
    dc.cost = CostGrid::from_function({N, N, N}, [N](const std::vector<int>& x) {
        return discontinuous_cost(cell_center(x[0], N), cell_center(x[1], N), cell_center(x[2], N));
    });
    dc.dual.n = 3;
    dc.dual.sizes = {N, N, N};
    for (const auto& alpha : subsets(3, 2)) {
        auto fa = DiscreteMeasure::zero(alpha, {N, N});
        for (std::size_t c = 0; c < fa.cell_count(); ++c) {
            auto ij = fa.unravel(c);
            Rational u = cell_center(ij[0], N), v = cell_center(ij[1], N);
            if (alpha == IndexSet{1, 2}) fa[c] = PiecewiseDual32::f12(u, v);
            else if (alpha == IndexSet{1, 3}) fa[c] = PiecewiseDual32::f13(u, v);
            else fa[c] = PiecewiseDual32::f23(u, v);
        }
        dc.dual.f.emplace(alpha, std::move(fa));
    }
    return dc;
}

DiscreteMeasure cyclic_coupling(int N) {
    if (N < 1) throw DomainError("cyclic_coupling needs N >= 1");
    auto mu = DiscreteMeasure::zero(kFull, {N, N, N});
    const Rational w = frac(1, static_cast<long>(N) * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) mu.at({i, j, ((-(i + j)) % N + N) % N}) = w;
    return mu;
}

DiscreteMeasure frac_coupling(const std::array<int, 3>& a, const std::array<int, 3>& sizes, int L) {
    if (L < 1) throw DomainError("frac_coupling needs L >= 1");
    for (int i = 0; i < 3; ++i) {
        if (a[static_cast<std::size_t>(i)] < 1) throw DomainError("frac_coupling coefficients must be positive");
        const long ai = a[static_cast<std::size_t>(i)], ni = sizes[static_cast<std::size_t>(i)];
        if (ni < 1 || ni % ai != 0) throw DomainError("coefficient " + std::to_string(ai) + " does not divide the axis size " + std::to_string(ni));
        if ((ai * L) % ni != 0) throw DomainError("axis size " + std::to_string(ni) + " does not divide a_i L");
    }
    auto mu = DiscreteMeasure::zero(kFull, {sizes[0], sizes[1], sizes[2]});
    const Rational w = frac(1, static_cast<long>(L) * L * a[0] * a[1] * a[2]);
    std::array<long, 3> f{}, t{};
    std::vector<int> cell(3);
    for (f[0] = 0; f[0] < L; ++f[0])
        for (f[1] = 0; f[1] < L; ++f[1]) {
            f[2] = ((-(f[0] + f[1])) % L + L) % L;
            for (t[0] = 0; t[0] < a[0]; ++t[0])
                for (t[1] = 0; t[1] < a[1]; ++t[1])
                    for (t[2] = 0; t[2] < a[2]; ++t[2]) {
                        for (std::size_t i = 0; i < 3; ++i)
                            cell[i] = static_cast<int>((f[i] + t[i] * L) * sizes[i] / (static_cast<long>(a[i]) * L));
                        mu.at(cell) += w;
                    }
        }
    for (const auto& alpha : subsets(3, 2)) {
        auto pr = project(mu, alpha);
        if (pr != DiscreteMeasure::uniform(alpha, pr.sizes())) throw InvariantError("frac_coupling projection {" + alpha.key() + "} is not uniform");
    }
    return mu;
}

DiscreteMeasure frac_coupling(int a1, int a2, int a3, int N) { return frac_coupling({a1, a2, a3}, {N, N, N}, N); }

DiscreteMeasure composite_pi(int N) {
    if (N <= 0 || N % 6 != 0) throw DomainError("composite_pi needs N divisible by 6");
    auto pi = DiscreteMeasure::zero(kFull, {N, N, N});
    const int low = N / 3;
    const Rational w1 = frac(1, static_cast<long>(N) * N * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < low; ++k) pi.at({i, j, k}) = w1;
    auto hat = frac_coupling({1, 1, 2}, {N, N, N - low}, N);
    for (std::size_t c = 0; c < hat.cell_count(); ++c) {
        if (hat[c] == 0) continue;
        auto x = hat.unravel(c);
        x[2] += low;
        pi.at(x) += Rational(2, 3) * hat[c];
    }
    for (const auto& alpha : subsets(3, 2))
        if (project(pi, alpha) != DiscreteMeasure::uniform(alpha, {N, N})) throw InvariantError("composite plan projection {" + alpha.key() + "} is not uniform");
    return pi;
}

bool cell_meets_lattice_plane(const std::array<int, 3>& a, const std::vector<int>& cell, int N) {
    long lo = 0, hi = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        lo += static_cast<long>(a[i]) * cell[i];
        hi += static_cast<long>(a[i]) * (cell[i] + 1);
    }
    // some multiple of N in [lo, hi]
    long q = (lo + N - 1) / N;
    return q * N <= hi;
}

BoundaryAudit audit_discontinuous(const DiscreteMeasure& pi, const DiscontinuousCase& dc) {
    const int N = dc.N;
    auto F = dc.dual.total();
    BoundaryAudit a;
    const int edge = 2 * N / 3;
    for (std::size_t c = 0; c < pi.cell_count(); ++c) {
        if (pi[c] == 0) continue;
        ++a.support;
        auto x = pi.unravel(c);
        long s = x[0] + x[1] + 3L * x[2];
        bool crosses = s <= 3L * N && 3L * N <= s + 5;
        bool touches = x[2] == edge || x[2] == edge - 1;
        bool flag = crosses || touches;
        if (flag) ++a.flagged;
        if (F[c] < dc.cost.values[c]) {
            ++a.violations;
            if (!flag) ++a.unflagged_violations;
        }
    }
    return a;
}

Rational plan_cost(const DiscreteMeasure& pi, const CostGrid& c) {
    if (pi.sizes() != c.sizes) throw DomainError("plan and cost live on different grids");
    Rational v = 0;
    for (std::size_t i = 0; i < pi.cell_count(); ++i)
        if (pi[i] != 0) v += pi[i] * c.values[i];
    return v;
}

UniformbandCase build_uniformband(int N) {
    if (N < 3) throw DomainError("build_uniformband needs N >= 3");
    UniformbandCase u;
    u.N = N;
    u.family.n = 3;
    u.family.k = 2;
    u.family.sizes = {N, N, 3};
    u.family.marginals.emplace(IndexSet{1, 2}, DiscreteMeasure::uniform({1, 2}, {N, N}));
    u.family.marginals.emplace(IndexSet{1, 3}, DiscreteMeasure::uniform({1, 3}, {N, 3}));
    u.family.marginals.emplace(IndexSet{2, 3}, DiscreteMeasure::uniform({2, 3}, {N, 3}));
    u.cost = CostGrid::from_function({N, N, 3}, [N](const std::vector<int>& x) -> Rational {
        return cell_center(x[0], N) * cell_center(x[1], N) * Rational(x[2]);
    });
    return u;
}

UniformbandReport run_uniformband(int N, lp::Arithmetic arithmetic) {
    auto u = build_uniformband(N);
    TransportOptions o;
    o.arithmetic = arithmetic;
    o.allow_large_exact = true;
    auto r = verify_gap(u.family, u.cost, o);
    UniformbandReport rep;
    rep.N = N;
    rep.value = r.primal_valuef;
    const auto& w = r.pif.weights();
    const double n2 = static_cast<double>(N) * N;
    const double line = 1.0 / (3.0 * N), tol = 1e-7 / n2;
    std::size_t bang = 0;
    for (int z = 0; z < 3; ++z) {
        std::vector<double> dens(static_cast<std::size_t>(N * N));
        for (int i = 0; i < N; ++i) {
            double row = 0, col = 0;
            for (int j = 0; j < N; ++j) {
                double a = w[static_cast<std::size_t>((i * N + j) * 3 + z)];
                double b = w[static_cast<std::size_t>((j * N + i) * 3 + z)];
                row += a;
                col += b;
                dens[static_cast<std::size_t>(i * N + j)] = a * n2;
                // density 3 against Lebesgue x uniform{0,1,2} means weight 1/N^2
                if (std::abs(3 * a) < 3 * tol || std::abs(3 * a - 3 / n2) < 3 * tol) ++bang;
            }
            rep.max_line_error = std::max({rep.max_line_error, std::abs(row - line), std::abs(col - line)});
        }
        rep.slices[static_cast<std::size_t>(z)] = slice_pgm(dens, N);
    }
    rep.bang_bang_fraction = static_cast<double>(bang) / static_cast<double>(w.size());
    return rep;
}

Rational eval_fA(const Rational& A, const Rational& x, const Rational& y) {
    if (A < 0) throw DomainError("f_A needs A >= 0");
    return -(x * x * x + y * y * y) / 12 - x * y * (x + y) / 2 - (A - 2) * (x * x / 12 + x * y / 3 + y * y / 12) -
           (1 - 2 * A) * (x + y) / 12 - A / 18;
}

Rational fA_gap(const Rational& A, const Rational& x, const Rational& y, const Rational& z) {
    return x * y * z - (eval_fA(A, x, y) + eval_fA(A, x, z) + eval_fA(A, y, z));
}

Rational fA_kappa() { return Rational(1, 6); }

Rational fA_plane_value(const Rational& A) {
    // integral of x^a y^b over {x + y <= 1} is a! b! / (a + b + 2)!
    auto mono = [](int a, int b) -> Rational {
        Integer num = 1, den = 1;
        for (int i = 2; i <= a; ++i) num *= i;
        for (int i = 2; i <= b; ++i) num *= i;
        for (int i = 2; i <= a + b + 2; ++i) den *= i;
        return Rational(num, den) * 2;
    };
    Rational v = -(mono(3, 0) + mono(0, 3)) / 12 - (mono(2, 1) + mono(1, 2)) / 2 -
                 (A - 2) * (mono(2, 0) / 12 + mono(1, 1) / 3 + mono(0, 2) / 12) - (1 - 2 * A) * (mono(1, 0) + mono(0, 1)) / 12 -
                 A / 18 * mono(0, 0);
    v.canonicalize();
    return 3 * v;
}

MarginalFamily build_nonuniform_2x2x2() {
    MarginalFamily fam;
    fam.n = 3;
    fam.k = 2;
    fam.sizes = {2, 2, 2};
    for (const auto& alpha : subsets(3, 2)) {
        auto m = DiscreteMeasure::zero(alpha, {2, 2});
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) m.at({a, b}) = a == b ? frac(1, 6) : frac(1, 3);
        fam.marginals.emplace(alpha, m);
    }
    return fam;
}

UniqueWitnessReport verify_unique_uniting(const MarginalFamily& fam) {
    UniqueWitnessReport u;
    u.unique = true;
    const std::size_t cells = fam.grid().cell_count();
    std::vector<Rational> lo(cells);
    std::vector<int> basis;
    for (std::size_t c = 0; c < cells; ++c) {
        std::vector<Rational> w(cells, Rational(0));
        w[c] = 1;
        Rational a = polytope_extreme(fam, w, lp::Sense::Minimize, &basis);
        Rational b = polytope_extreme(fam, w, lp::Sense::Maximize, &basis);
        u.cell_range.emplace_back(a, b);
        lo[c] = a;
        if (a != b) u.unique = false;
    }
    std::vector<int> all;
    for (int i = 1; i <= fam.n; ++i) all.push_back(i);
    u.witness = DiscreteMeasure(IndexSet(all), fam.sizes, lo);
    return u;
}

const std::vector<std::string>& case_names() {
    static const std::vector<std::string> names{"unreachable", "nonstrong", "discontinuous", "uniformband", "plane-duals", "nonuniform222"};
    return names;
}

CaseOutput run_case(const std::string& name, const CaseParams& p) {
    CaseOutput out;
    auto& j = out.report;
    j["case"] = name;
    if (name == "unreachable") {
        const int N = p.N ? p.N : 12;
        auto uc = build_unreachable(N);
        j["N"] = N;
        j["M"] = to_string(uc.M);
        j["alpha0"] = to_string(uc.alpha0);
        auto rows = nlohmann::json::array();
        for (const auto& b : check_unreachable_bounds(uc, 4)) {
            rows.push_back({{"m", b.m}, {"lp_min", rationals({b.lp_min[0], b.lp_min[1], b.lp_min[2]})}, {"bound", to_string(b.bound)},
                            {"within_slack", b.within_slack}, {"positive", b.positive}});
        }
        j["A_bounds"] = rows;
        auto g = diagnose_dual_growth(uc);
        j["value"] = to_string(g.value);
        j["diagonal_abs"] = rationals(g.diagonal_abs);
        j["diagonal_F"] = rationals(g.diagonal_F);
        j["weighted_sum"] = to_string(g.weighted);
        j["weighted_sum_approx"] = g.weighted.get_d();
        j["interior_bound"] = g.interior_bound;
    } else if (name == "nonstrong") {
        const int N = p.N ? p.N : 8;
        auto nc = build_nonstrong(N);
        auto u = verify_nonstrong_uniqueness(nc, p.seed);
        auto d = nonstrong_dual(nc);
        j["N"] = N;
        j["unique"] = u.unique;
        j["value"] = to_string(d.value);
        j["diagonal_F"] = rationals(d.diagonal_F);
        j["recurrence"] = d.recurrence;
        j["F111"] = to_string(d.F111);
    } else if (name == "discontinuous") {
        const int N = p.N ? p.N : 12;
        auto dc = build_discontinuous(N);
        auto pi = composite_pi(N);
        TransportOptions o;
        o.arithmetic = p.arithmetic;
        o.allow_large_exact = true;
        auto r = verify_gap(dc.family, dc.cost, o);
        auto a = audit_discontinuous(pi, dc);
        j["N"] = N;
        if (r.exact) {
            j["value"] = to_string(r.primal_value);
        }
        j["value_approx"] = r.primal_valuef;
        j["sampled_dual_value"] = to_string(integrate(dc.dual, dc.family));
        j["sampled_dual_violation"] = to_string(check_dual_feasible(dc.dual, dc.cost));
        j["composite_cost"] = to_string(plan_cost(pi, dc.cost));
        j["audit"] = {{"support", a.support}, {"violations", a.violations}, {"flagged", a.flagged}, {"unflagged_violations", a.unflagged_violations}};
    } else if (name == "uniformband") {
        const int N = p.N ? p.N : 24;
        auto arith = p.arithmetic;
        auto rep = run_uniformband(N, arith);
        j["N"] = N;
        j["value"] = rep.value;
        j["max_line_error"] = rep.max_line_error;
        j["bang_bang_fraction"] = rep.bang_bang_fraction;
        for (int z = 0; z < 3; ++z) out.images.emplace_back("uniformband_z" + std::to_string(z), rep.slices[static_cast<std::size_t>(z)]);
    } else if (name == "plane-duals") {
        j["kappa"] = to_string(fA_kappa());
        std::mt19937_64 rng(p.seed);
        std::uniform_int_distribution<int> d(0, 60);
        auto rows = nlohmann::json::array();
        for (int A = 0; A <= 2; ++A) {
            int identity_ok = 0, feasible = 0, plane_equal = 0;
            for (int t = 0; t < 200; ++t) {
                Rational x = frac(d(rng), 60), y = frac(d(rng), 60), z = frac(d(rng), 60);
                Rational s = x + y + z;
                identity_ok += fA_gap(A, x, y, z) == fA_kappa() * (s - 1) * (s - 1) * (s + A);
                feasible += fA_gap(A, x, y, z) >= 0;
                Rational px = frac(d(rng), 60), py = frac(d(rng), 60) * (1 - px);
                plane_equal += fA_gap(A, px, py, 1 - px - py) == 0;
            }
            rows.push_back({{"A", A}, {"identity_ok", identity_ok}, {"feasible", feasible}, {"plane_equal", plane_equal},
                            {"dual_value", to_string(fA_plane_value(A))}, {"samples", 200}});
        }
        j["duals"] = rows;
    } else if (name == "nonuniform222") {
        auto fam = build_nonuniform_2x2x2();
        auto u = verify_unique_uniting(fam);
        j["unique"] = u.unique;
        j["witness"] = to_json(u.witness);
    } else {
        throw DomainError("unknown case '" + name + "'");
    }
    return out;
}

}  // namespace mmk
