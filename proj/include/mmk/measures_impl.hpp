#pragma once

// Template definitions for measures.hpp.

#include <algorithm>
#include <numeric>
#include <set>

namespace mmk {

template <class T>
Measure<T>::Measure(IndexSet axes, std::vector<int> sizes, std::vector<T> weights)
    : axes_(std::move(axes)), sizes_(std::move(sizes)), w_(std::move(weights)) {
    if (axes_.size() != sizes_.size()) throw DomainError("axes/sizes length mismatch");
    std::size_t cells = 1;
    for (int s : sizes_) {
        if (s < 1) throw DomainError("axis size must be >= 1");
        cells *= static_cast<std::size_t>(s);
    }
    if (cells != w_.size())
        throw DomainError("weight count " + std::to_string(w_.size()) + " != cell count " +
                          std::to_string(cells));
}

template <class T>
Measure<T> Measure<T>::zero(IndexSet axes, std::vector<int> sizes) {
    std::size_t cells = 1;
    for (int s : sizes) cells *= static_cast<std::size_t>(std::max(s, 0));
    return Measure(std::move(axes), std::move(sizes), std::vector<T>(cells, T(0)));
}

template <class T>
Measure<T> Measure<T>::uniform(IndexSet axes, std::vector<int> sizes) {
    Measure m = zero(std::move(axes), std::move(sizes));
    T w = T(1) / T(static_cast<long>(m.cell_count()));
    for (auto& x : m.w_) x = w;
    return m;
}

template <class T>
std::size_t Measure<T>::index(const std::vector<int>& cell) const {
    if (cell.size() != sizes_.size()) throw DomainError("cell rank mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cell.size(); ++i) {
        if (cell[i] < 0 || cell[i] >= sizes_[i]) throw DomainError("cell out of range");
        idx = idx * static_cast<std::size_t>(sizes_[i]) + static_cast<std::size_t>(cell[i]);
    }
    return idx;
}

template <class T>
std::vector<int> Measure<T>::unravel(std::size_t idx) const {
    std::vector<int> cell(sizes_.size());
    for (std::size_t i = sizes_.size(); i-- > 0;) {
        cell[i] = static_cast<int>(idx % static_cast<std::size_t>(sizes_[i]));
        idx /= static_cast<std::size_t>(sizes_[i]);
    }
    return cell;
}

template <class T>
int Measure<T>::size_of_axis(int axis) const {
    for (std::size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i] == axis) return sizes_[i];
    throw DomainError("axis " + std::to_string(axis) + " not present");
}

template <class T>
T Measure<T>::mass() const {
    T s(0);
    for (const auto& x : w_) s += x;
    return s;
}

template <class T>
bool Measure<T>::nonnegative() const {
    return std::all_of(w_.begin(), w_.end(), [](const T& x) { return !(x < T(0)); });
}

template <class T>
Measure<T>& Measure<T>::operator+=(const Measure& o) {
    if (!same_shape(o)) throw DomainError("shape mismatch in measure sum");
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] += o.w_[i];
    return *this;
}

template <class T>
Measure<T>& Measure<T>::operator-=(const Measure& o) {
    if (!same_shape(o)) throw DomainError("shape mismatch in measure difference");
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] -= o.w_[i];
    return *this;
}

template <class T>
Measure<T>& Measure<T>::operator*=(const T& s) {
    for (auto& x : w_) x *= s;
    return *this;
}

namespace detail {

// Stride of each coarse axis inside the fine flat index, for coarse ⊆ fine.
inline std::vector<std::size_t> embed_strides(const IndexSet& coarse, const std::vector<int>& coarse_sizes,
                                              const IndexSet& fine) {
    std::vector<std::size_t> cstride(coarse.size());
    std::size_t s = 1;
    for (std::size_t i = coarse.size(); i-- > 0;) {
        cstride[i] = s;
        s *= static_cast<std::size_t>(coarse_sizes[i]);
    }
    std::vector<std::size_t> out(fine.size(), 0);
    std::size_t j = 0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
        if (j < coarse.size() && coarse[j] == fine[i]) out[i] = cstride[j++];
    }
    return out;
}

// Flat coarse index of every fine cell.
inline std::vector<std::size_t> coarse_index_map(const IndexSet& fine, const std::vector<int>& fine_sizes,
                                                 const IndexSet& coarse, const std::vector<int>& coarse_sizes) {
    auto st = embed_strides(coarse, coarse_sizes, fine);
    std::size_t cells = 1;
    for (int s : fine_sizes) cells *= static_cast<std::size_t>(s);
    std::vector<std::size_t> map(cells);
    std::vector<int> cell(fine.size(), 0);
    std::size_t cidx = 0;
    for (std::size_t f = 0; f < cells; ++f) {
        map[f] = cidx;
        for (std::size_t i = fine.size(); i-- > 0;) {
            if (++cell[i] < fine_sizes[i]) {
                cidx += st[i];
                break;
            }
            cidx -= st[i] * static_cast<std::size_t>(fine_sizes[i] - 1);
            cell[i] = 0;
        }
    }
    return map;
}

}  // namespace detail

template <class T>
Measure<T> project(const Measure<T>& mu, const IndexSet& alpha) {
    if (!alpha.subset_of(mu.axes()))
        throw DomainError("projection target {" + alpha.key() + "} not within {" + mu.axes().key() + "}");
    std::vector<int> sz;
    for (int a : alpha.members()) sz.push_back(mu.size_of_axis(a));
    Measure<T> out = Measure<T>::zero(alpha, sz);
    auto map = detail::coarse_index_map(mu.axes(), mu.sizes(), alpha, sz);
    for (std::size_t f = 0; f < map.size(); ++f) out[map[f]] += mu[f];
    return out;
}

template <class T>
std::vector<T> lift(const Measure<T>& f, const IndexSet& fine_axes, const std::vector<int>& fine_sizes) {
    if (!f.axes().subset_of(fine_axes)) throw DomainError("lift: axes not contained");
    auto map = detail::coarse_index_map(fine_axes, fine_sizes, f.axes(), f.sizes());
    std::vector<T> out;
    out.reserve(map.size());
    for (std::size_t c : map) out.push_back(f[c]);
    return out;
}

template <class T>
Measure<T> product(const std::vector<Measure<T>>& factors) {
    std::vector<std::pair<int, int>> ax;  // (axis, size)
    std::set<int> seen;
    for (const auto& f : factors)
        for (std::size_t i = 0; i < f.axes().size(); ++i) {
            if (!seen.insert(f.axes()[i]).second)
                throw DomainError("product factors overlap on axis " + std::to_string(f.axes()[i]));
            ax.emplace_back(f.axes()[i], f.sizes()[i]);
        }
    std::sort(ax.begin(), ax.end());
    std::vector<int> labels, sizes;
    for (auto [a, s] : ax) {
        labels.push_back(a);
        sizes.push_back(s);
    }
    IndexSet all(labels);
    Measure<T> out = Measure<T>::zero(all, sizes);
    for (auto& w : out.weights()) w = T(1);
    for (const auto& f : factors) {
        auto map = detail::coarse_index_map(all, sizes, f.axes(), f.sizes());
        for (std::size_t c = 0; c < map.size(); ++c) out[c] *= f[map[c]];
    }
    return out;
}

}  // namespace mmk
