#include "mmk/potentials.hpp"

namespace mmk {

namespace {

template <class T>
auto integrate_impl(const BasicPotentials<T>& d, const MarginalFamily& fam) {
    T s(0);
    for (const auto& [alpha, fa] : d.f) {
        const auto& mu = fam.at(alpha);
        for (std::size_t c = 0; c < fa.cell_count(); ++c) {
            if constexpr (std::is_same_v<T, double>)
                s += fa[c] * mu[c].get_d();
            else
                s += fa[c] * mu[c];
        }
    }
    return s;
}

template <class T, class F>
BasicPotentials<T> reshape(const MarginalFamily& fam, const MarginalLP& mlp, const std::vector<T>& y, F scale_mul) {
    if (y.size() != mlp.problem.rhs.size()) throw DomainError("row vector length mismatch");
    BasicPotentials<T> d;
    d.n = fam.n;
    d.sizes = fam.sizes;
    for (std::size_t b = 0; b < mlp.blocks.size(); ++b) {
        const auto& alpha = mlp.blocks[b];
        const auto& mu = fam.at(alpha);
        auto fa = Measure<T>::zero(alpha, mu.sizes());
        for (std::size_t c = 0; c < fa.cell_count(); ++c) fa[c] = scale_mul(y[static_cast<std::size_t>(mlp.offsets[b]) + c]);
        d.f.emplace(alpha, std::move(fa));
    }
    return d;
}

}  // namespace

Rational integrate(const DualPotentials& d, const MarginalFamily& fam) { return integrate_impl(d, fam); }
double integrate(const FloatPotentials& d, const MarginalFamily& fam) { return integrate_impl(d, fam); }

nlohmann::json to_json(const DualPotentials& d) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [alpha, fa] : d.f) {
        auto arr = nlohmann::json::array();
        for (const auto& w : fa.weights()) arr.push_back(to_string(w));
        j[alpha.key()] = arr;
    }
    return j;
}

nlohmann::json to_json(const FloatPotentials& d) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [alpha, fa] : d.f) j[alpha.key()] = fa.weights();
    return j;
}

CostGrid::CostGrid(std::vector<int> s, std::vector<Rational> v) : sizes(std::move(s)), values(std::move(v)) {
    if (ProductGrid(sizes).cell_count() != values.size()) throw DomainError("cost grid size mismatch");
}

CostGrid CostGrid::from_function(const std::vector<int>& s, const std::function<Rational(const std::vector<int>&)>& fn) {
    std::vector<Rational> v(ProductGrid(s).cell_count());
    for_each_cell(s, [&](const std::vector<int>& cell, std::size_t i) { v[i] = fn(cell); });
    return CostGrid(s, std::move(v));
}

const Rational& CostGrid::at(const std::vector<int>& cell) const { return values[ProductGrid(sizes).index(cell)]; }

Rational CostGrid::sup_norm() const {
    Rational m = 0;
    for (const auto& v : values) m = std::max(m, abs(v));
    return m;
}

bool CostGrid::nonnegative() const {
    return std::all_of(values.begin(), values.end(), [](const Rational& v) { return v >= 0; });
}

MarginalLP build_marginal_lp(const MarginalFamily& fam, const std::vector<Rational>& cost, lp::Sense sense) {
    fam.validate();
    const ProductGrid grid = fam.grid();
    const std::size_t cells = grid.cell_count();
    if (cost.size() != cells) throw DomainError("cost length differs from grid cell count");
    MarginalLP m;
    m.problem.objective = cost;
    m.problem.sense = sense;
    std::vector<int> all(static_cast<std::size_t>(fam.n));
    for (int i = 0; i < fam.n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    IndexSet full(all);
    int offset = 0;
    for (const auto& alpha : subsets(fam.n, fam.k)) {
        const auto& mu = fam.at(alpha);
        m.blocks.push_back(alpha);
        m.offsets.push_back(offset);
        auto map = detail::coarse_index_map(full, fam.sizes, alpha, mu.sizes());
        std::vector<lp::SparseRow> rows(mu.cell_count());
        for (std::size_t c = 0; c < cells; ++c) rows[map[c]].emplace_back(static_cast<int>(c), Rational(1));
        for (std::size_t r = 0; r < rows.size(); ++r) m.problem.add_row(std::move(rows[r]), mu[r]);
        offset += static_cast<int>(mu.cell_count());
    }
    return m;
}

DualPotentials potentials_from_rows(const MarginalFamily& fam, const MarginalLP& mlp, const std::vector<Rational>& y,
                                    const Rational& scale) {
    return reshape<Rational>(fam, mlp, y, [&](const Rational& v) { return Rational(v * scale); });
}

FloatPotentials potentials_from_rows(const MarginalFamily& fam, const MarginalLP& mlp, const std::vector<double>& y,
                                     double scale) {
    return reshape<double>(fam, mlp, y, [&](double v) { return v * scale; });
}

}  // namespace mmk
