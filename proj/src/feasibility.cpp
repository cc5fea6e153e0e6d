#include "mmk/feasibility.hpp"

#include <algorithm>

namespace mmk {

namespace {

DiscreteMeasure on_axis(const DiscreteMeasure& ref, int axis) {
    if (ref.axes().size() != 1) throw DomainError("reference measure must be one-dimensional");
    return DiscreteMeasure(IndexSet{axis}, ref.sizes(), ref.weights());
}

std::vector<DiscreteMeasure> checked_refs(const MarginalFamily& fam, const std::vector<DiscreteMeasure>& refs) {
    if (static_cast<int>(refs.size()) != fam.n) throw DomainError("need one reference measure per axis");
    std::vector<DiscreteMeasure> out;
    for (int i = 0; i < fam.n; ++i) {
        auto r = on_axis(refs[static_cast<std::size_t>(i)], i + 1);
        if (r.sizes()[0] != fam.sizes[static_cast<std::size_t>(i)]) throw DomainError("reference size mismatch on axis " + std::to_string(i + 1));
        if (!r.nonnegative() || r.mass() != 1) throw DomainError("reference on axis " + std::to_string(i + 1) + " is not a probability measure");
        out.push_back(std::move(r));
    }
    return out;
}

DiscreteMeasure ref_product(const std::vector<DiscreteMeasure>& refs, const IndexSet& alpha) {
    std::vector<DiscreteMeasure> fs;
    for (int a : alpha.members()) fs.push_back(refs[static_cast<std::size_t>(a - 1)]);
    if (fs.empty()) return DiscreteMeasure({}, {}, {Rational(1)});
    return product(fs);
}

void require_consistent(const MarginalFamily& fam) {
    fam.validate();
    auto rep = is_consistent(fam);
    if (!rep.consistent) {
        const auto& [a, b] = rep.offending.front();
        throw DomainError("family is inconsistent on {" + a.key() + "} vs {" + b.key() + "}");
    }
}

void require_32(const MarginalFamily& fam) {
    if (fam.n != 3 || fam.k != 2) throw DomainError("construction is defined for (3,2) families only");
}

DiscreteMeasure P(const std::vector<DiscreteMeasure>& fs) { return product(fs); }

bool projects_to(const DiscreteMeasure& mu, const MarginalFamily& fam) {
    for (const auto& [alpha, ma] : fam.marginals)
        if (project(mu, alpha) != ma) return false;
    return true;
}

void assert_uniting(const DiscreteMeasure& mu, const MarginalFamily& fam, const char* who) {
    if (!mu.nonnegative()) throw InvariantError(std::string(who) + ": assembled measure has a negative weight");
    if (!projects_to(mu, fam)) throw InvariantError(std::string(who) + ": projections do not match the family");
}

DiscreteMeasure twothirds_formula(const MarginalFamily& fam, const std::vector<DiscreteMeasure>& mi) {
    const auto &m12 = fam.at({1, 2}), &m13 = fam.at({1, 3}), &m23 = fam.at({2, 3});
    return P({mi[0], m23}) + P({mi[1], m13}) + P({mi[2], m12}) - P({mi[0], mi[1], mi[2]}) * Rational(2);
}

std::vector<DiscreteMeasure> lower_ones(const MarginalFamily& fam) {
    std::vector<DiscreteMeasure> mi;
    for (int i = 1; i <= fam.n; ++i) mi.push_back(lower_marginal(fam, IndexSet{i}));
    return mi;
}

}  // namespace

std::vector<Rational> signed_lambda(int n, int k) {
    if (k < 1 || k >= n) throw DomainError("signed_lambda: need 1 <= k < n");
    std::vector<Rational> lam(static_cast<std::size_t>(k + 1));
    for (int i = k; i >= 0; --i) {
        Rational s = i == k ? 1 : 0;
        for (int t = i + 1; t <= k; ++t) s -= lam[static_cast<std::size_t>(t)] * Rational(binomial(n - k, t - i));
        lam[static_cast<std::size_t>(i)] = s;  // diagonal entry C(n-k, 0) = 1
    }
    return lam;
}

SignedDiscreteMeasure signed_uniting(const MarginalFamily& fam, const std::vector<DiscreteMeasure>& refs_in) {
    require_consistent(fam);
    auto refs = checked_refs(fam, refs_in);
    auto lam = signed_lambda(fam.n, fam.k);
    std::vector<int> all(static_cast<std::size_t>(fam.n));
    for (int i = 0; i < fam.n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    IndexSet full(all);
    auto mu = SignedDiscreteMeasure::zero(full, fam.sizes);
    for (int t = 0; t <= fam.k; ++t) {
        if (lam[static_cast<std::size_t>(t)] == 0) continue;
        auto tilde = SignedDiscreteMeasure::zero(full, fam.sizes);
        for (const auto& alpha : subsets(fam.n, t)) {
            std::vector<DiscreteMeasure> fs;
            if (!alpha.empty()) fs.push_back(t == fam.k ? fam.at(alpha) : lower_marginal(fam, alpha));
            const IndexSet rest = full.minus(alpha);
            for (int i : rest.members()) fs.push_back(refs[static_cast<std::size_t>(i - 1)]);
            tilde += product(fs);
        }
        mu += tilde * lam[static_cast<std::size_t>(t)];
    }
    if (!projects_to(mu, fam)) throw InvariantError("signed_uniting: projections do not match the family");
    return mu;
}

FeasibilityVerdict kellerer_check(const MarginalFamily& fam) {
    require_consistent(fam);
    std::vector<Rational> zero(fam.grid().cell_count(), Rational(0));
    auto mlp = build_marginal_lp(fam, zero);
    lp::SolveOptions opt;
    opt.allow_large_exact = true;
    auto sol = lp::solve(mlp.problem, opt);
    FeasibilityVerdict v;
    std::vector<int> all(static_cast<std::size_t>(fam.n));
    for (int i = 0; i < fam.n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    if (sol.status == lp::Status::Optimal) {
        v.feasible = true;
        v.witness = DiscreteMeasure(IndexSet(all), fam.sizes, sol.x);
        if (!projects_to(v.witness, fam)) throw InvariantError("kellerer_check: witness does not unite the family");
        return v;
    }
    if (!sol.certificate) throw InvariantError("kellerer_check: infeasible without certificate");
    v.raw = sol.certificate;
    v.certificate = potentials_from_rows(fam, mlp, sol.certificate->y, Rational(-1));
    v.certificate_value = integrate(v.certificate, fam);
    if (!verify_kellerer_certificate(fam, v.certificate)) throw InvariantError("kellerer_check: certificate fails verification");
    return v;
}

bool verify_kellerer_certificate(const MarginalFamily& fam, const DualPotentials& f) {
    for (const auto& v : f.total())
        if (v < 0) return false;
    return integrate(f, fam) < 0;
}

DensityBounds density_bounds(const MarginalFamily& fam, const std::vector<DiscreteMeasure>& refs_in) {
    fam.validate();
    auto refs = checked_refs(fam, refs_in);
    bool first = true;
    DensityBounds b;
    for (const auto& [alpha, mu] : fam.marginals) {
        auto nu = ref_product(refs, alpha);
        for (std::size_t c = 0; c < mu.cell_count(); ++c) {
            if (nu[c] == 0) {
                if (mu[c] > 0) throw DomainError("marginal {" + alpha.key() + "} is not absolutely continuous w.r.t. the reference product");
                continue;
            }
            Rational r = mu[c] / nu[c];
            if (first || r < b.m) b.m = r;
            if (first || r > b.M) b.M = r;
            first = false;
        }
    }
    return b;
}

DiscreteMeasure uniting_by_density_32(const MarginalFamily& fam, const std::vector<DiscreteMeasure>& refs_in) {
    require_32(fam);
    require_consistent(fam);
    auto nu = checked_refs(fam, refs_in);
    auto b = density_bounds(fam, nu);
    if (b.M * 2 > b.m * 3) throw DomainError("uniting_by_density_32: M/m exceeds 3/2");
    auto mi = lower_ones(fam);
    const auto &m12 = fam.at({1, 2}), &m13 = fam.at({1, 3}), &m23 = fam.at({2, 3});
    DiscreteMeasure mu = P({mi[0], mi[1], mi[2]}) * Rational(4);
    mu -= (P({nu[0], mi[1], mi[2]}) + P({mi[0], nu[1], mi[2]}) + P({mi[0], mi[1], nu[2]})) * Rational(2);
    mu += (P({m12, nu[2]}) + P({m13, nu[1]}) + P({m23, nu[0]})) * Rational(2);
    mu -= P({m12, mi[2]}) + P({m13, mi[1]}) + P({m23, mi[0]});
    assert_uniting(mu, fam, "uniting_by_density_32");
    return mu;
}

DensityTwoResult uniting_by_density_2(const MarginalFamily& fam, const std::vector<DiscreteMeasure>& refs_in) {
    require_32(fam);
    require_consistent(fam);
    auto nu = checked_refs(fam, refs_in);
    for (const auto& r : nu)
        for (const auto& w : r.weights())
            if (w == 0) throw DomainError("uniting_by_density_2: reference measures must be strictly positive");
    auto b = density_bounds(fam, nu);
    if (b.M > b.m * 2) throw DomainError("uniting_by_density_2: M/m exceeds 2");

    DensityTwoResult res;
    res.m = b.m;
    res.M = b.M;
    const IndexSet full{1, 2, 3};
    const std::size_t cells = fam.grid().cell_count();

    // max xi(X) over xi >= 0 with prj_ij xi <= mu_ij - m nu_ij
    std::vector<Rational> ones(cells, Rational(1));
    auto mlp = build_marginal_lp(fam, ones, lp::Sense::Maximize);
    auto& prob = mlp.problem;
    for (std::size_t bi = 0; bi < mlp.blocks.size(); ++bi) {
        const auto& alpha = mlp.blocks[bi];
        auto nua = ref_product(nu, alpha);
        const auto& mua = fam.at(alpha);
        for (std::size_t c = 0; c < mua.cell_count(); ++c) {
            const std::size_t r = static_cast<std::size_t>(mlp.offsets[bi]) + c;
            prob.rhs[r] = mua[c] - b.m * nua[c];
            prob.rows[r].emplace_back(prob.num_vars(), Rational(1));
            prob.objective.push_back(0);
        }
    }
    lp::SolveOptions opt;
    opt.allow_large_exact = true;
    auto sol = lp::solve(prob, opt);
    if (sol.status != lp::Status::Optimal) throw InvariantError("uniting_by_density_2: extreme-measure LP not optimal");
    res.xi_max = DiscreteMeasure(full, fam.sizes, std::vector<Rational>(sol.x.begin(), sol.x.begin() + static_cast<long>(cells)));
    res.xi_mass = res.xi_max.mass();
    const Rational alpha = 1 - res.xi_mass;

    auto to_surd = [](const DiscreteMeasure& d) {
        return d.cast<Surd>([](const Rational& q) { return Surd(q); });
    };
    auto finish = [&](Measure<Surd> mu) {
        res.measure = std::move(mu);
        res.nonnegative = true;
        bool rational = true;
        for (std::size_t c = 0; c < res.measure.cell_count(); ++c) {
            if (res.measure[c].sign() < 0) {
                res.nonnegative = false;
                res.negative_cells.push_back(c);
            }
            rational = rational && res.measure[c].is_rational();
        }
        res.projections_exact = true;
        for (const auto& [a, ma] : fam.marginals)
            if (!(project(res.measure, a) == to_surd(ma))) res.projections_exact = false;
        if (rational) {
            std::vector<Rational> w;
            for (const auto& s : res.measure.weights()) w.push_back(s.rational_part());
            res.rational = DiscreteMeasure(full, fam.sizes, std::move(w));
        }
        if (!res.projections_exact) throw InvariantError("uniting_by_density_2: projections do not match the family");
        if (!res.nonnegative && res.diagnostic.empty())
            res.diagnostic = std::to_string(res.negative_cells.size()) + " cells negative after assembly";
        return res;
    };

    if (alpha == 0) {
        res.branch = "extreme";
        res.m_reduced = 0;
        return finish(to_surd(res.xi_max));
    }

    MarginalFamily red = fam;
    for (auto& [a, ma] : red.marginals) ma = (fam.at(a) - project(res.xi_max, a)) * Rational(1 / alpha);
    const Rational m = b.m / alpha;
    res.m_reduced = m;
    auto mi = lower_ones(red);
    const auto &m12 = red.at({1, 2}), &m13 = red.at({1, 3}), &m23 = red.at({2, 3});
    auto xi_s = to_surd(res.xi_max);

    if (m == 1) {
        res.branch = "product";
        return finish(to_surd(P({nu[0], nu[1], nu[2]}) * alpha) + xi_s);
    }
    if (m * 3 == 2) {
        res.branch = "two-thirds";
        return finish(to_surd(twothirds_formula(red, mi) * alpha) + xi_s);
    }
    if (m * 3 < 2 || m > 1) {
        res.branch = "error";
        res.diagnostic = "reduced lower bound " + to_string(m) + " lies outside [2/3, 1]";
        res.measure = to_surd(DiscreteMeasure::zero(full, fam.sizes));
        return res;
    }

    res.branch = "u-formula";
    res.u_squared = 3 - 2 / m;
    const Surd u = Surd::sqrt_of(res.u_squared);
    const Surd ms(m), u1 = u + Surd(1);
    const Surd u13 = u1 * u1 * u1, u12 = u1 * u1;
    const Surd c_mmm = Surd(-8) / (ms * ms * u * u13);
    const Surd c_nnn = Surd(2) * (Surd(5) * u + Surd(9)) / (u * u13);
    const Surd c_nmm = Surd(4) * (u + Surd(3)) / (ms * u * u13);
    const Surd c_mnn = -c_nnn;
    const Surd c_pn = Surd(2) * (u + Surd(2)) / u12;
    const Surd c_pm = Surd(-2) / (ms * u12);

    std::vector<std::pair<Surd, DiscreteMeasure>> terms;
    terms.emplace_back(c_mmm, P({mi[0], mi[1], mi[2]}));
    terms.emplace_back(c_nnn, P({nu[0], nu[1], nu[2]}));
    terms.emplace_back(c_nmm, P({nu[0], mi[1], mi[2]}) + P({mi[0], nu[1], mi[2]}) + P({mi[0], mi[1], nu[2]}));
    terms.emplace_back(c_mnn, P({mi[0], nu[1], nu[2]}) + P({nu[0], mi[1], nu[2]}) + P({nu[0], nu[1], mi[2]}));
    terms.emplace_back(c_pn, P({m23, nu[0]}) + P({m13, nu[1]}) + P({m12, nu[2]}));
    terms.emplace_back(c_pm, P({m23, mi[0]}) + P({m13, mi[1]}) + P({m12, mi[2]}));
    auto mu = Measure<Surd>::zero(full, fam.sizes);
    for (const auto& [coef, t] : terms)
        for (std::size_t c = 0; c < cells; ++c)
            if (t[c] != 0) mu[c] += coef * Surd(t[c]);

    // factorized form at the floor p_ij = m
    bool have = false;
    for (std::size_t c = 0; c < cells; ++c) {
        auto cell = mu.unravel(c);
        Surd prod(1);
        for (int i = 0; i < 3; ++i) {
            const Rational p = mi[static_cast<std::size_t>(i)][static_cast<std::size_t>(cell[static_cast<std::size_t>(i)])] /
                               nu[static_cast<std::size_t>(i)][static_cast<std::size_t>(cell[static_cast<std::size_t>(i)])];
            prod *= ms * (u + Surd(3)) - Surd(2 * p);
        }
        if (!have || prod < res.factor_min) res.factor_min = prod;
        have = true;
    }

    for (auto& w : mu.weights()) w *= Surd(alpha);
    auto out = finish(mu + xi_s);
    if (!out.nonnegative)
        out.diagnostic += "; the reduced family violates the pointwise density assumptions of the construction";
    return out;
}

DiscreteMeasure uniting_by_twothirds(const MarginalFamily& fam) {
    require_32(fam);
    require_consistent(fam);
    auto mi = lower_ones(fam);
    for (const auto& [alpha, ma] : fam.marginals) {
        auto pp = P({mi[static_cast<std::size_t>(alpha[0] - 1)], mi[static_cast<std::size_t>(alpha[1] - 1)]});
        for (std::size_t c = 0; c < ma.cell_count(); ++c)
            if (ma[c] * 3 < pp[c] * 2) {
                auto cell = ma.unravel(c);
                throw DomainError("uniting_by_twothirds: mu_{" + alpha.key() + "} < (2/3) mu_i x mu_j at cell (" +
                                  std::to_string(cell[0]) + "," + std::to_string(cell[1]) + ")");
            }
    }
    DiscreteMeasure mu = P({fam.at({1, 2}) - P({mi[0], mi[1]}) * frac(2, 3), mi[2]});
    mu += P({fam.at({1, 3}) - P({mi[0], mi[2]}) * frac(2, 3), mi[1]});
    mu += P({fam.at({2, 3}) - P({mi[1], mi[2]}) * frac(2, 3), mi[0]});
    assert_uniting(mu, fam, "uniting_by_twothirds");
    return mu;
}

MarginalFamily make_modk_counterexample(int n, int k) {
    if (k < 2 || k >= n) throw DomainError("make_modk_counterexample: need 1 < k < n");
    MarginalFamily fam;
    fam.n = n;
    fam.k = k;
    fam.sizes.assign(static_cast<std::size_t>(n), k);
    Integer kk = 1;
    for (int i = 0; i < k - 1; ++i) kk *= k;
    const Rational w = Rational(1) / Rational(kk);
    for (const auto& alpha : subsets(n, k)) {
        auto mu = DiscreteMeasure::zero(alpha, std::vector<int>(static_cast<std::size_t>(k), k));
        for (std::size_t c = 0; c < mu.cell_count(); ++c) {
            auto cell = mu.unravel(c);
            int s = 0;
            for (int x : cell) s += x;
            if (s % k == 1 % k) mu[c] = w;
        }
        fam.marginals.emplace(alpha, std::move(mu));
    }
    return fam;
}

MarginalFamily make_two_point_counterexample(const Rational& ratio) {
    if (ratio < 1) throw DomainError("make_two_point_counterexample: ratio must be >= 1");
    const Rational m = 1 / (2 * (1 + ratio));
    const Rational M = ratio * m;
    MarginalFamily fam;
    fam.n = 3;
    fam.k = 2;
    fam.sizes = {2, 2, 2};
    for (const auto& alpha : subsets(3, 2)) fam.marginals.emplace(alpha, DiscreteMeasure(alpha, {2, 2}, {m, M, M, m}));
    return fam;
}

std::vector<DiscreteMeasure> uniform_refs(const MarginalFamily& fam) {
    std::vector<DiscreteMeasure> out;
    for (int i = 0; i < fam.n; ++i) out.push_back(DiscreteMeasure::uniform(IndexSet{i + 1}, {fam.sizes[static_cast<std::size_t>(i)]}));
    return out;
}

std::vector<DiscreteMeasure> one_marginals(const MarginalFamily& fam) { return lower_ones(fam); }

}  // namespace mmk
