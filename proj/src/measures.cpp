#include "mmk/measures.hpp"

#include <optional>
#include <sstream>

namespace mmk {

IndexSet::IndexSet(std::vector<int> members) : m_(std::move(members)) {
    for (std::size_t i = 0; i < m_.size(); ++i) {
        if (m_[i] < 1) throw DomainError("axis labels are 1-based");
        if (i > 0 && m_[i] <= m_[i - 1]) throw DomainError("index set must be strictly increasing");
    }
}

bool IndexSet::contains(int axis) const { return std::binary_search(m_.begin(), m_.end(), axis); }

bool IndexSet::subset_of(const IndexSet& o) const {
    return std::includes(o.m_.begin(), o.m_.end(), m_.begin(), m_.end());
}

IndexSet IndexSet::intersect(const IndexSet& o) const {
    std::vector<int> r;
    std::set_intersection(m_.begin(), m_.end(), o.m_.begin(), o.m_.end(), std::back_inserter(r));
    return IndexSet(r);
}

IndexSet IndexSet::unite(const IndexSet& o) const {
    std::vector<int> r;
    std::set_union(m_.begin(), m_.end(), o.m_.begin(), o.m_.end(), std::back_inserter(r));
    return IndexSet(r);
}

IndexSet IndexSet::minus(const IndexSet& o) const {
    std::vector<int> r;
    std::set_difference(m_.begin(), m_.end(), o.m_.begin(), o.m_.end(), std::back_inserter(r));
    return IndexSet(r);
}

std::string IndexSet::key() const {
    std::string s;
    for (std::size_t i = 0; i < m_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(m_[i]);
    }
    return s;
}

IndexSet IndexSet::parse_key(const std::string& key) {
    std::vector<int> v;
    std::stringstream ss(key);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw DomainError("bad index key: " + key);
        std::size_t used = 0;
        int a = 0;
        try {
            a = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw DomainError("bad index key: " + key);
        }
        if (used != tok.size()) throw DomainError("bad index key: " + key);
        v.push_back(a);
    }
    return IndexSet(v);
}

std::vector<IndexSet> subsets(int n, int k) {
    std::vector<IndexSet> out;
    if (k < 0 || k > n) return out;
    std::vector<int> c(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
        out.emplace_back(c);
        int i = k - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
        if (i < 0) break;
        ++c[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

std::vector<IndexSet> all_subsets(int n) {
    std::vector<IndexSet> out;
    for (int k = 0; k <= n; ++k)
        for (auto& s : subsets(n, k)) out.push_back(s);
    return out;
}

ProductGrid::ProductGrid(std::vector<int> s) : sizes(std::move(s)) {
    for (int x : sizes)
        if (x < 1) throw DomainError("axis size must be >= 1");
}

std::size_t ProductGrid::cell_count() const {
    std::size_t c = 1;
    for (int s : sizes) c *= static_cast<std::size_t>(s);
    return c;
}

std::size_t ProductGrid::index(const std::vector<int>& cell) const {
    if (cell.size() != sizes.size()) throw DomainError("cell rank mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cell.size(); ++i) {
        if (cell[i] < 0 || cell[i] >= sizes[i]) throw DomainError("cell out of range");
        idx = idx * static_cast<std::size_t>(sizes[i]) + static_cast<std::size_t>(cell[i]);
    }
    return idx;
}

std::vector<int> ProductGrid::unravel(std::size_t idx) const {
    std::vector<int> cell(sizes.size());
    for (std::size_t i = sizes.size(); i-- > 0;) {
        cell[i] = static_cast<int>(idx % static_cast<std::size_t>(sizes[i]));
        idx /= static_cast<std::size_t>(sizes[i]);
    }
    return cell;
}

std::vector<int> ProductGrid::restrict_sizes(const IndexSet& alpha) const {
    std::vector<int> r;
    for (int a : alpha.members()) {
        if (a > n()) throw DomainError("axis beyond grid");
        r.push_back(sizes[static_cast<std::size_t>(a - 1)]);
    }
    return r;
}

void for_each_cell(const std::vector<int>& sizes,
                   const std::function<void(const std::vector<int>&, std::size_t)>& f) {
    std::size_t cells = 1;
    for (int s : sizes) cells *= static_cast<std::size_t>(s);
    std::vector<int> cell(sizes.size(), 0);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        f(cell, idx);
        for (std::size_t i = sizes.size(); i-- > 0;) {
            if (++cell[i] < sizes[i]) break;
            cell[i] = 0;
        }
    }
}

const DiscreteMeasure& MarginalFamily::at(const IndexSet& alpha) const {
    auto it = marginals.find(alpha);
    if (it == marginals.end()) throw DomainError("no marginal for {" + alpha.key() + "}");
    return it->second;
}

void MarginalFamily::validate() const {
    if (k < 1 || k >= n) throw DomainError("need 1 <= k < n");
    if (static_cast<int>(sizes.size()) != n) throw DomainError("grid rank must equal n");
    auto expected = subsets(n, k);
    if (marginals.size() != expected.size()) throw DomainError("marginal keys must enumerate I_{nk}");
    auto g = grid();
    for (const auto& a : expected) {
        auto it = marginals.find(a);
        if (it == marginals.end()) throw DomainError("missing marginal {" + a.key() + "}");
        const auto& mu = it->second;
        if (mu.axes() != a || mu.sizes() != g.restrict_sizes(a))
            throw DomainError("marginal {" + a.key() + "} has wrong shape");
        if (!mu.nonnegative()) throw DomainError("marginal {" + a.key() + "} has negative weight");
        if (mu.mass() != 1) throw DomainError("marginal {" + a.key() + "} is not a probability measure");
    }
}

MarginalFamily marginals_of(const DiscreteMeasure& mu, int k) {
    MarginalFamily fam;
    fam.n = static_cast<int>(mu.axes().size());
    fam.k = k;
    fam.sizes = mu.sizes();
    for (const auto& a : subsets(fam.n, k)) fam.marginals.emplace(a, project(mu, a));
    return fam;
}

ConsistencyReport is_consistent(const MarginalFamily& fam) {
    ConsistencyReport rep;
    auto keys = subsets(fam.n, fam.k);
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = i + 1; j < keys.size(); ++j) {
            IndexSet common = keys[i].intersect(keys[j]);
            if (project(fam.at(keys[i]), common) != project(fam.at(keys[j]), common)) {
                rep.consistent = false;
                rep.offending.emplace_back(keys[i], keys[j]);
            }
        }
    return rep;
}

DiscreteMeasure lower_marginal(const MarginalFamily& fam, const IndexSet& beta) {
    if (static_cast<int>(beta.size()) > fam.k) throw DomainError("|beta| must not exceed k");
    if (!is_consistent(fam).consistent) throw DomainError("lower_marginal requires a consistent family");
    std::optional<DiscreteMeasure> result;
    for (const auto& a : subsets(fam.n, fam.k)) {
        if (!beta.subset_of(a)) continue;
        auto p = project(fam.at(a), beta);
        if (!result)
            result = std::move(p);
        else if (*result != p)
            throw InvariantError("lower marginal depends on the chosen superset");
    }
    if (!result) throw DomainError("no marginal contains {" + beta.key() + "}");
    return *result;
}

nlohmann::json to_json(const DiscreteMeasure& mu) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& x : mu.weights()) w.push_back(to_string(x));
    return {{"axes", mu.sizes()}, {"weights", w}};
}

nlohmann::json to_json(const FloatMeasure& mu) {
    return {{"axes", mu.sizes()}, {"weights", mu.weights()}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j, IndexSet axes) {
    if (!j.is_object() || !j.contains("axes") || !j.contains("weights"))
        throw DomainError("measure JSON needs \"axes\" and \"weights\"");
    std::vector<int> sizes;
    for (const auto& a : j.at("axes")) {
        if (!a.is_number_integer()) throw DomainError("axis sizes must be integers");
        sizes.push_back(a.get<int>());
    }
    if (axes.empty()) {
        std::vector<int> labels;
        for (std::size_t i = 0; i < sizes.size(); ++i) labels.push_back(static_cast<int>(i) + 1);
        axes = IndexSet(labels);
    }
    std::vector<Rational> w;
    for (const auto& x : j.at("weights")) {
        if (x.is_string())
            w.push_back(parse_rational(x.get<std::string>()));
        else if (x.is_number_integer())
            w.emplace_back(x.get<long>());
        else if (x.is_number())
            w.push_back(parse_rational(x.dump()));
        else
            throw DomainError("weights must be strings or numbers");
    }
    return DiscreteMeasure(axes, sizes, std::move(w));
}

}  // namespace mmk
