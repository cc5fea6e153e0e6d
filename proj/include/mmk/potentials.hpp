#pragma once

#include <map>
#include <vector>

#include <json.hpp>

#include "mmk/lp.hpp"
#include "mmk/measures.hpp"

namespace mmk {

// Tuple {f_alpha} of grid functions, f_alpha living on the sub-grid of alpha.
template <class T>
struct BasicPotentials {
    int n = 0;
    std::vector<int> sizes;
    std::map<IndexSet, Measure<T>> f;

    // F(x) = sum_alpha f_alpha(x_alpha) on every full cell, row-major.
    std::vector<T> total() const {
        IndexSet all = full_axes();
        std::size_t cells = 1;
        for (int s : sizes) cells *= static_cast<std::size_t>(s);
        std::vector<T> out(cells, T(0));
        for (const auto& [alpha, fa] : f) {
            auto map = detail::coarse_index_map(all, sizes, alpha, fa.sizes());
            for (std::size_t c = 0; c < cells; ++c) out[c] += fa[map[c]];
        }
        return out;
    }

    T sum_at(const std::vector<int>& cell) const {
        T s(0);
        for (const auto& [alpha, fa] : f) {
            std::vector<int> sub;
            for (int a : alpha.members()) sub.push_back(cell[static_cast<std::size_t>(a - 1)]);
            s += fa.at(sub);
        }
        return s;
    }

    IndexSet full_axes() const {
        std::vector<int> a(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = i + 1;
        return IndexSet(a);
    }
};

using DualPotentials = BasicPotentials<Rational>;
using FloatPotentials = BasicPotentials<double>;

// sum_alpha integral of f_alpha against mu_alpha.
Rational integrate(const DualPotentials& d, const MarginalFamily& fam);
double integrate(const FloatPotentials& d, const MarginalFamily& fam);

nlohmann::json to_json(const DualPotentials& d);
nlohmann::json to_json(const FloatPotentials& d);

// Cost or other function on the full grid of a family.
struct CostGrid {
    std::vector<int> sizes;
    std::vector<Rational> values;  // row-major

    CostGrid() = default;
    CostGrid(std::vector<int> s, std::vector<Rational> v);
    static CostGrid from_function(const std::vector<int>& s, const std::function<Rational(const std::vector<int>&)>& fn);
    const Rational& at(const std::vector<int>& cell) const;
    Rational sup_norm() const;
    bool nonnegative() const;
};

// LP over pi >= 0 on the full grid with prj_alpha pi = mu_alpha for every
// alpha in I_nk. Rows are grouped per alpha in lexicographic order, cells
// row-major inside each block.
struct MarginalLP {
    lp::LPProblem problem;
    std::vector<IndexSet> blocks;
    std::vector<int> offsets;
};

MarginalLP build_marginal_lp(const MarginalFamily& fam, const std::vector<Rational>& cost,
                             lp::Sense sense = lp::Sense::Minimize);

// Reshape a row vector of the marginal LP into per-alpha grid functions,
// multiplied by `scale`.
DualPotentials potentials_from_rows(const MarginalFamily& fam, const MarginalLP& mlp, const std::vector<Rational>& y,
                                    const Rational& scale = 1);
FloatPotentials potentials_from_rows(const MarginalFamily& fam, const MarginalLP& mlp, const std::vector<double>& y,
                                     double scale = 1);

}  // namespace mmk
