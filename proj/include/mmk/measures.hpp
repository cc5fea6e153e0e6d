#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mmk/rational.hpp"

namespace mmk {

// Sorted, duplicate-free set of 1-based axis labels.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::initializer_list<int> members) : IndexSet(std::vector<int>(members)) {}
    explicit IndexSet(std::vector<int> members);

    const std::vector<int>& members() const { return m_; }
    std::size_t size() const { return m_.size(); }
    bool empty() const { return m_.empty(); }
    int operator[](std::size_t i) const { return m_[i]; }
    bool contains(int axis) const;
    bool subset_of(const IndexSet& o) const;
    IndexSet intersect(const IndexSet& o) const;
    IndexSet unite(const IndexSet& o) const;
    IndexSet minus(const IndexSet& o) const;
    int max_axis() const { return m_.empty() ? 0 : m_.back(); }

    std::string key() const;  // "1,3"
    static IndexSet parse_key(const std::string& key);

    auto operator<=>(const IndexSet&) const = default;

private:
    std::vector<int> m_;
};

// All k-element subsets of {1..n} in lexicographic order.
std::vector<IndexSet> subsets(int n, int k);
// All subsets of {1..n}, ordered by size then lexicographically.
std::vector<IndexSet> all_subsets(int n);

struct ProductGrid {
    std::vector<int> sizes;

    ProductGrid() = default;
    explicit ProductGrid(std::vector<int> s);

    int n() const { return static_cast<int>(sizes.size()); }
    std::size_t cell_count() const;
    std::size_t index(const std::vector<int>& cell) const;
    std::vector<int> unravel(std::size_t idx) const;
    std::vector<int> restrict_sizes(const IndexSet& alpha) const;
};

// Calls f(cell, flat_index) for every cell of the grid, row-major.
void for_each_cell(const std::vector<int>& sizes,
                   const std::function<void(const std::vector<int>&, std::size_t)>& f);

// Weights on a product of axes labelled by `axes`. Right-most axis varies fastest.
template <class T>
class Measure {
public:
    Measure() = default;
    Measure(IndexSet axes, std::vector<int> sizes, std::vector<T> weights);

    static Measure zero(IndexSet axes, std::vector<int> sizes);
    static Measure uniform(IndexSet axes, std::vector<int> sizes);

    const IndexSet& axes() const { return axes_; }
    const std::vector<int>& sizes() const { return sizes_; }
    const std::vector<T>& weights() const { return w_; }
    std::vector<T>& weights() { return w_; }
    std::size_t cell_count() const { return w_.size(); }

    const T& operator[](std::size_t i) const { return w_[i]; }
    T& operator[](std::size_t i) { return w_[i]; }
    const T& at(const std::vector<int>& cell) const { return w_[index(cell)]; }
    T& at(const std::vector<int>& cell) { return w_[index(cell)]; }
    std::size_t index(const std::vector<int>& cell) const;
    std::vector<int> unravel(std::size_t idx) const;
    int size_of_axis(int axis) const;

    T mass() const;
    bool nonnegative() const;
    bool same_shape(const Measure& o) const { return axes_ == o.axes_ && sizes_ == o.sizes_; }

    Measure& operator+=(const Measure& o);
    Measure& operator-=(const Measure& o);
    Measure& operator*=(const T& s);
    friend Measure operator+(Measure a, const Measure& b) { return a += b; }
    friend Measure operator-(Measure a, const Measure& b) { return a -= b; }
    friend Measure operator*(Measure a, const T& s) { return a *= s; }
    friend Measure operator*(const T& s, Measure a) { return a *= s; }
    friend bool operator==(const Measure& a, const Measure& b) {
        return a.axes_ == b.axes_ && a.sizes_ == b.sizes_ && a.w_ == b.w_;
    }

    template <class U>
    Measure<U> cast(const std::function<U(const T&)>& f) const {
        std::vector<U> w;
        w.reserve(w_.size());
        for (const auto& x : w_) w.push_back(f(x));
        return Measure<U>(axes_, sizes_, std::move(w));
    }

private:
    IndexSet axes_;
    std::vector<int> sizes_;
    std::vector<T> w_;
};

using DiscreteMeasure = Measure<Rational>;
using SignedDiscreteMeasure = Measure<Rational>;
using FloatMeasure = Measure<double>;

template <class T>
Measure<T> project(const Measure<T>& mu, const IndexSet& alpha);

// Product over pairwise disjoint axis sets.
template <class T>
Measure<T> product(const std::vector<Measure<T>>& factors);

// Weights of `f` pulled back to the finer grid of `mu`: g(x) = f(x_alpha).
template <class T>
std::vector<T> lift(const Measure<T>& f, const IndexSet& fine_axes, const std::vector<int>& fine_sizes);

struct MarginalFamily {
    int n = 0, k = 0;
    std::vector<int> sizes;
    std::map<IndexSet, DiscreteMeasure> marginals;

    const DiscreteMeasure& at(const IndexSet& alpha) const;
    ProductGrid grid() const { return ProductGrid(sizes); }
    // Throws DomainError unless keys enumerate I_{nk}, shapes agree, and each
    // marginal is a probability measure.
    void validate() const;
};

// Family of all k-marginals of a measure on the full grid.
MarginalFamily marginals_of(const DiscreteMeasure& mu, int k);

struct ConsistencyReport {
    bool consistent = true;
    std::vector<std::pair<IndexSet, IndexSet>> offending;
};

ConsistencyReport is_consistent(const MarginalFamily& fam);
DiscreteMeasure lower_marginal(const MarginalFamily& fam, const IndexSet& beta);

// {"axes":[...],"weights":[...]}; exact weights as "p/q" strings.
nlohmann::json to_json(const DiscreteMeasure& mu);
nlohmann::json to_json(const FloatMeasure& mu);
// Accepts strings or JSON numbers. Axis labels default to 1..n.
DiscreteMeasure measure_from_json(const nlohmann::json& j, IndexSet axes = {});

}  // namespace mmk

#include "mmk/measures_impl.hpp"
