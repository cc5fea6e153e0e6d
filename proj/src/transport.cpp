#include "mmk/transport.hpp"

#include <algorithm>
#include <random>

namespace mmk {

namespace {

IndexSet full_set(int n) {
    std::vector<int> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = i + 1;
    return IndexSet(a);
}

void require_cost(const MarginalFamily& fam, const CostGrid& c) {
    if (c.sizes != fam.sizes) throw DomainError("cost grid does not match the family's grid");
}

lp::SolveOptions lp_options(const TransportOptions& opt) {
    lp::SolveOptions o;
    o.arithmetic = opt.arithmetic;
    o.tolerance = opt.tolerance;
    o.allow_large_exact = opt.allow_large_exact;
    return o;
}

std::vector<Rational> one_axis_weights(const DiscreteMeasure& r) {
    if (r.axes().size() != 1) throw DomainError("reference measure must be one-dimensional");
    return r.weights();
}

// x_alpha placed into y, other coordinates kept from y.
std::vector<int> splice(const std::vector<int>& y, const IndexSet& alpha, const std::vector<int>& xa) {
    std::vector<int> cell = y;
    for (std::size_t i = 0; i < alpha.size(); ++i) cell[static_cast<std::size_t>(alpha[i] - 1)] = xa[i];
    return cell;
}

std::map<IndexSet, Rational> sections_impl(const CostGrid& c, const std::vector<std::vector<Rational>>& nu,
                                           const std::vector<int>& y) {
    const int n = static_cast<int>(c.sizes.size());
    ProductGrid g(c.sizes);
    std::map<IndexSet, Rational> out;
    for (const auto& alpha : all_subsets(n)) {
        std::vector<int> sub;
        for (int a : alpha.members()) sub.push_back(c.sizes[static_cast<std::size_t>(a - 1)]);
        Rational s = 0;
        if (alpha.empty()) {
            s = abs(c.values[g.index(y)]);
        } else {
            for_each_cell(sub, [&](const std::vector<int>& xa, std::size_t) {
                Rational w = 1;
                for (std::size_t i = 0; i < alpha.size(); ++i) w *= nu[static_cast<std::size_t>(alpha[i] - 1)][static_cast<std::size_t>(xa[i])];
                if (w != 0) s += w * abs(c.values[g.index(splice(y, alpha, xa))]);
            });
        }
        out.emplace(alpha, s);
    }
    return out;
}

Rational l1_impl(const CostGrid& c, const std::vector<std::vector<Rational>>& nu) {
    Rational s = 0;
    for_each_cell(c.sizes, [&](const std::vector<int>& x, std::size_t i) {
        Rational w = 1;
        for (std::size_t a = 0; a < x.size(); ++a) w *= nu[a][static_cast<std::size_t>(x[a])];
        if (w != 0) s += w * abs(c.values[i]);
    });
    return s;
}

std::vector<std::vector<Rational>> checked_weights(const CostGrid& c, const std::vector<DiscreteMeasure>& refs) {
    if (refs.size() != c.sizes.size()) throw DomainError("need one reference measure per axis");
    std::vector<std::vector<Rational>> nu;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        auto w = one_axis_weights(refs[i]);
        if (static_cast<int>(w.size()) != c.sizes[i]) throw DomainError("reference size mismatch on axis " + std::to_string(i + 1));
        nu.push_back(std::move(w));
    }
    return nu;
}

std::vector<int> basepoint_search(const CostGrid& c, const std::vector<std::vector<Rational>>& nu, std::uint64_t seed) {
    const int n = static_cast<int>(c.sizes.size());
    const Rational bound = pow2(n + 1) * l1_impl(c, nu);
    auto good = [&](const std::vector<int>& y) {
        for (const auto& [alpha, s] : sections_impl(c, nu, y))
            if (s > bound) return false;
        return true;
    };
    ProductGrid g(c.sizes);
    const std::size_t cells = g.cell_count();
    const long switch_after = 1L << (n + 1);
    long failures = 0;
    std::size_t scan = 0;
    for (; scan < cells && failures < switch_after; ++scan) {
        auto y = g.unravel(scan);
        if (good(y)) return y;
        ++failures;
    }
    std::mt19937_64 rng(seed);
    std::vector<std::discrete_distribution<int>> axis;
    for (const auto& w : nu) {
        std::vector<double> p;
        for (const auto& q : w) p.push_back(q.get_d());
        axis.emplace_back(p.begin(), p.end());
    }
    for (long tries = 0; tries < 64 * switch_after; ++tries) {
        std::vector<int> y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = axis[static_cast<std::size_t>(i)](rng);
        if (good(y)) return y;
    }
    for (; scan < cells; ++scan) {
        auto y = g.unravel(scan);
        if (good(y)) return y;
    }
    throw InvariantError("good_basepoint: no admissible cell");
}

template <class T>
void normalize_impl(BasicPotentials<T>& d) {
    if (d.f.size() < 2) return;
    auto last = std::prev(d.f.end());
    for (auto it = d.f.begin(); it != last; ++it) {
        if (it->second.cell_count() == 0) continue;
        T s = it->second[0];
        if (s == T(0)) continue;
        for (auto& v : it->second.weights()) v -= s;
        for (auto& v : last->second.weights()) v += s;
    }
}

}  // namespace

void normalize_constants(DualPotentials& d) { normalize_impl(d); }
void normalize_constants(FloatPotentials& d) { normalize_impl(d); }

SolveReport transport_solve(const MarginalFamily& fam, const CostGrid& c, const TransportOptions& opt) {
    fam.validate();
    require_cost(fam, c);
    auto mlp = build_marginal_lp(fam, c.values);
    auto sol = lp::solve(mlp.problem, lp_options(opt));
    SolveReport r;
    r.iterations = sol.iterations;
    r.exact = opt.arithmetic == lp::Arithmetic::Exact;
    if (sol.status == lp::Status::Infeasible) {
        r.feasible = false;
        if (r.exact) r.infeasible = kellerer_check(fam);
        return r;
    }
    if (sol.status != lp::Status::Optimal) throw InvariantError("transport LP is unbounded");
    const IndexSet all = full_set(fam.n);
    if (r.exact) {
        r.pi = DiscreteMeasure(all, fam.sizes, sol.x);
        r.dual = potentials_from_rows(fam, mlp, sol.y);
        if (opt.normalize) normalize_constants(r.dual);
        r.primal_value = sol.value;
        r.dual_value = integrate(r.dual, fam);
        r.gap = r.primal_value - r.dual_value;
        r.pif = r.pi.cast<double>([](const Rational& q) { return q.get_d(); });
        r.dualf.n = r.dual.n;
        r.dualf.sizes = r.dual.sizes;
        for (const auto& [alpha, fa] : r.dual.f) r.dualf.f.emplace(alpha, fa.cast<double>([](const Rational& q) { return q.get_d(); }));
        r.primal_valuef = r.primal_value.get_d();
        r.dual_valuef = r.dual_value.get_d();
        r.gapf = r.gap.get_d();
    } else {
        r.pif = FloatMeasure(all, fam.sizes, sol.xf);
        r.dualf = potentials_from_rows(fam, mlp, sol.yf);
        if (opt.normalize) normalize_constants(r.dualf);
        r.primal_valuef = sol.valuef;
        r.dual_valuef = integrate(r.dualf, fam);
        r.gapf = r.primal_valuef - r.dual_valuef;
    }
    return r;
}

PrimalResult solve_primal(const MarginalFamily& fam, const CostGrid& c) {
    auto r = transport_solve(fam, c);
    PrimalResult p;
    p.feasible = r.feasible;
    if (!r.feasible) {
        p.certificate = r.infeasible;
        return p;
    }
    p.pi = std::move(r.pi);
    p.value = r.primal_value;
    return p;
}

DualResult solve_dual(const MarginalFamily& fam, const CostGrid& c) {
    auto r = transport_solve(fam, c);
    if (!r.feasible) throw DomainError("family admits no uniting measure; the dual is unbounded");
    return DualResult{std::move(r.dual), r.dual_value};
}

SolveReport verify_gap(const MarginalFamily& fam, const CostGrid& c, const TransportOptions& opt) {
    auto r = transport_solve(fam, c, opt);
    if (!r.feasible) throw DomainError("family admits no uniting measure");
    if (r.exact) {
        if (r.gap != 0) throw InvariantError("nonzero duality gap " + to_string(r.gap));
        if (check_dual_feasible(r.dual, c) > 0) throw InvariantError("dual potentials violate the cost bound");
    } else if (std::abs(r.gapf) > 1e-7 * (1 + std::abs(r.primal_valuef))) {
        throw InvariantError("duality gap " + std::to_string(r.gapf) + " exceeds tolerance");
    }
    return r;
}

std::vector<Rational> decomp_lambda(int n, int k) {
    if (k < 1 || k >= n) throw DomainError("decomp_lambda needs 1 <= k < n");
    std::vector<Rational> lam(static_cast<std::size_t>(k + 1), Rational(0));
    lam[static_cast<std::size_t>(k)] = 1;
    for (int a = k - 1; a >= 0; --a) {
        Rational s = 0;
        for (int t = a + 1; t <= k; ++t)
            s += lam[static_cast<std::size_t>(t)] * Rational(binomial(n - t, k - t) * binomial(n - k, t - a));
        lam[static_cast<std::size_t>(a)] = -s / Rational(binomial(n - a, k - a));
    }
    return lam;
}

DualPotentials nk_decompose(const CostGrid& F, int k, const std::vector<int>& y, const std::vector<Rational>& lambda) {
    const int n = static_cast<int>(F.sizes.size());
    if (static_cast<int>(y.size()) != n) throw DomainError("base cell has the wrong dimension");
    if (static_cast<int>(lambda.size()) != k + 1) throw DomainError("coefficient vector must have k+1 entries");
    for (int i = 0; i < n; ++i)
        if (y[static_cast<std::size_t>(i)] < 0 || y[static_cast<std::size_t>(i)] >= F.sizes[static_cast<std::size_t>(i)])
            throw DomainError("base cell outside the grid");
    ProductGrid g(F.sizes);
    DualPotentials d;
    d.n = n;
    d.sizes = F.sizes;
    for (const auto& alpha : subsets(n, k)) {
        std::vector<int> sub;
        for (int a : alpha.members()) sub.push_back(F.sizes[static_cast<std::size_t>(a - 1)]);
        auto fa = DiscreteMeasure::zero(alpha, sub);
        const std::size_t masks = std::size_t{1} << alpha.size();
        for_each_cell(sub, [&](const std::vector<int>& xa, std::size_t idx) {
            Rational s = 0;
            for (std::size_t m = 0; m < masks; ++m) {
                std::vector<int> cell = y;
                int bits = 0;
                for (std::size_t i = 0; i < alpha.size(); ++i)
                    if (m >> i & 1) {
                        cell[static_cast<std::size_t>(alpha[i] - 1)] = xa[i];
                        ++bits;
                    }
                const auto& l = lambda[static_cast<std::size_t>(bits)];
                if (l != 0) s += l * F.values[g.index(cell)];
            }
            fa[idx] = s;
        });
        d.f.emplace(alpha, std::move(fa));
    }
    return d;
}

Rational decomposition_constant(int n, int k) {
    auto lam = decomp_lambda(n, k);
    Rational s = 0;
    for (int t = 0; t <= k; ++t) s += Rational(binomial(k, t)) * abs(lam[static_cast<std::size_t>(t)]);
    return pow2(n + 1) * s;
}

Rational l1_norm(const CostGrid& c, const std::vector<DiscreteMeasure>& refs) {
    return l1_impl(c, checked_weights(c, refs));
}

std::map<IndexSet, Rational> section_norms(const CostGrid& c, const std::vector<DiscreteMeasure>& refs,
                                           const std::vector<int>& y) {
    return sections_impl(c, checked_weights(c, refs), y);
}

std::vector<int> good_basepoint(const CostGrid& c, const std::vector<DiscreteMeasure>& refs, std::uint64_t seed) {
    auto nu = checked_weights(c, refs);
    for (std::size_t i = 0; i < nu.size(); ++i) {
        Rational mass = 0;
        for (const auto& w : nu[i]) {
            if (w <= 0) throw DomainError("reference on axis " + std::to_string(i + 1) + " is not strictly positive");
            mass += w;
        }
        if (mass != 1) throw DomainError("reference on axis " + std::to_string(i + 1) + " is not a probability measure");
    }
    return basepoint_search(c, nu, seed);
}

Rational check_dual_feasible(const DualPotentials& d, const CostGrid& c) {
    if (d.sizes != c.sizes) throw DomainError("potentials and cost live on different grids");
    auto F = d.total();
    Rational worst = F.empty() ? Rational(0) : F[0] - c.values[0];
    for (std::size_t i = 1; i < F.size(); ++i) worst = std::max(worst, Rational(F[i] - c.values[i]));
    return worst;
}

std::vector<std::size_t> complementary_slackness(const DiscreteMeasure& pi, const DualPotentials& d, const CostGrid& c) {
    if (d.sizes != c.sizes || pi.sizes() != c.sizes) throw DomainError("plan, potentials and cost live on different grids");
    auto F = d.total();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < F.size(); ++i)
        if (pi[i] > 0 && F[i] < c.values[i]) out.push_back(i);
    return out;
}

DualPotentials extract_bounded_dual(const MarginalFamily& fam, const CostGrid& c, const DualPotentials& d) {
    if (fam.n != 3 || fam.k != 2) throw DomainError("extract_bounded_dual needs a (3,2) family");
    fam.validate();
    require_cost(fam, c);
    if (!c.nonnegative()) throw DomainError("extract_bounded_dual needs a nonnegative cost");
    if (d.n != 3 || d.sizes != fam.sizes) throw DomainError("potentials do not match the family");
    for (const auto& alpha : subsets(3, 2))
        if (!d.f.count(alpha)) throw DomainError("potential {" + alpha.key() + "} missing");

    std::vector<DiscreteMeasure> mi;
    std::vector<std::vector<Rational>> nu;
    for (int i = 1; i <= 3; ++i) {
        mi.push_back(lower_marginal(fam, IndexSet{i}));
        nu.push_back(mi.back().weights());
    }
    for (const auto& alpha : subsets(3, 2)) {
        auto prod = product(std::vector<DiscreteMeasure>{mi[static_cast<std::size_t>(alpha[0] - 1)], mi[static_cast<std::size_t>(alpha[1] - 1)]});
        if (prod != fam.at(alpha)) throw DomainError("marginal {" + alpha.key() + "} is not the product of its one-dimensional marginals");
    }
    if (check_dual_feasible(d, c) > 0) throw DomainError("potentials are not feasible");
    auto primal = solve_primal(fam, c);
    if (!primal.feasible) throw DomainError("family admits no uniting measure");
    const Rational value = integrate(d, fam);
    if (value != primal.value)
        throw DomainError("potentials are not optimal: value " + to_string(value) + " vs optimum " + to_string(primal.value));

    const Rational cn = c.sup_norm();
    CostGrid F(fam.sizes, d.total());
    CostGrid bad(fam.sizes, std::vector<Rational>(F.values.size(), Rational(0)));
    for (std::size_t i = 0; i < F.values.size(); ++i)
        if (F.values[i] < -12 * cn || F.values[i] > cn) bad.values[i] = 1;
    if (l1_impl(bad, nu) != 0) throw InvariantError("sum of potentials leaves [-12|c|, |c|] on a set of positive measure");
    auto y = basepoint_search(bad, nu, 1);

    auto out = nk_decompose(F, 2, y, decomp_lambda(3, 2));
    const Rational lo = -17 * cn, hi = Rational(40, 3) * cn, floor = Rational(-80, 3) * cn;
    for (auto& [alpha, fa] : out.f) {
        const auto& mu = fam.at(alpha);
        for (std::size_t i = 0; i < fa.cell_count(); ++i)
            if (mu[i] == 0 && (fa[i] < lo || fa[i] > hi)) fa[i] = floor;
        for (std::size_t i = 0; i < fa.cell_count(); ++i)
            if (fa[i] < floor || fa[i] > hi) throw InvariantError("bounded dual leaves [-26 2/3 |c|, 13 1/3 |c|]");
    }
    if (integrate(out, fam) != value) throw InvariantError("bounded dual changed the dual value");
    if (check_dual_feasible(out, c) > 0) throw InvariantError("bounded dual is infeasible");
    return out;
}

nlohmann::json to_json(const SolveReport& r) {
    nlohmann::json j;
    if (!r.feasible) {
        j["feasible"] = false;
        if (r.infeasible) {
            j["certificate"] = to_json(r.infeasible->certificate);
            j["certificate_value"] = to_string(r.infeasible->certificate_value);
        }
        return j;
    }
    if (r.exact) {
        j["value"] = to_string(r.primal_value);
        j["gap"] = to_string(r.gap);
        j["pi"] = to_json(r.pi);
        j["potentials"] = to_json(r.dual);
    } else {
        j["value"] = r.primal_valuef;
        j["gap"] = r.gapf;
        j["pi"] = to_json(r.pif);
        j["potentials"] = to_json(r.dualf);
    }
    return j;
}

}  // namespace mmk
