#include "exact_lu.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace mmk::lp::detail {

namespace {

// dst := dst - l * src, skipping column `skip`. Reports columns that appeared
// or vanished so the caller can keep its column index current.
void axpy_row(SparseVec& dst, const Rational& l, const SparseVec& src, int skip, std::vector<int>& added,
              std::vector<int>& removed) {
    SparseVec out;
    out.reserve(dst.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
        if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            if (dst[i].first == skip)
                removed.push_back(skip);
            else
                out.push_back(std::move(dst[i]));
            ++i;
        } else if (i == dst.size() || src[j].first < dst[i].first) {
            if (src[j].first != skip) {
                out.emplace_back(src[j].first, -l * src[j].second);
                added.push_back(src[j].first);
            }
            ++j;
        } else {
            int c = dst[i].first;
            if (c == skip) {
                removed.push_back(c);
            } else {
                Rational v = dst[i].second - l * src[j].second;
                if (v != 0)
                    out.emplace_back(c, std::move(v));
                else
                    removed.push_back(c);
            }
            ++i;
            ++j;
        }
    }
    dst = std::move(out);
}

}  // namespace

bool ExactLU::factor(int t, const std::vector<const SparseVec*>& cols) {
    t_ = t;
    prow_.assign(static_cast<std::size_t>(t), -1);
    pcol_.assign(static_cast<std::size_t>(t), -1);
    piv_.assign(static_cast<std::size_t>(t), Rational(0));
    uoff_.assign(static_cast<std::size_t>(t), {});
    lops_.assign(static_cast<std::size_t>(t), {});

    std::vector<SparseVec> rows(static_cast<std::size_t>(t));
    std::vector<std::set<int>> colrows(static_cast<std::size_t>(t));
    for (int c = 0; c < t; ++c)
        for (const auto& [r, v] : *cols[static_cast<std::size_t>(c)]) {
            if (v == 0) continue;
            rows[static_cast<std::size_t>(r)].emplace_back(c, v);
            colrows[static_cast<std::size_t>(c)].insert(r);
        }
    for (auto& r : rows) std::sort(r.begin(), r.end(), [](auto& a, auto& b) { return a.first < b.first; });

    std::vector<char> col_done(static_cast<std::size_t>(t), 0), row_done(static_cast<std::size_t>(t), 0);
    std::vector<int> added, removed;
    for (int step = 0; step < t; ++step) {
        int best_c = -1;
        std::size_t best_cnt = std::numeric_limits<std::size_t>::max();
        for (int c = 0; c < t; ++c) {
            if (col_done[static_cast<std::size_t>(c)]) continue;
            std::size_t cnt = colrows[static_cast<std::size_t>(c)].size();
            if (cnt < best_cnt) {
                best_cnt = cnt;
                best_c = c;
                if (cnt <= 1) break;
            }
        }
        if (best_c < 0 || best_cnt == 0) return false;
        int best_r = -1;
        std::size_t best_len = std::numeric_limits<std::size_t>::max();
        for (int r : colrows[static_cast<std::size_t>(best_c)]) {
            std::size_t len = rows[static_cast<std::size_t>(r)].size();
            if (len < best_len) {
                best_len = len;
                best_r = r;
            }
        }
        const int c = best_c, r = best_r;
        SparseVec& prow = rows[static_cast<std::size_t>(r)];
        Rational pv;
        for (auto& [cc, v] : prow)
            if (cc == c) pv = v;
        prow_[static_cast<std::size_t>(step)] = r;
        pcol_[static_cast<std::size_t>(step)] = c;
        piv_[static_cast<std::size_t>(step)] = pv;
        row_done[static_cast<std::size_t>(r)] = 1;
        col_done[static_cast<std::size_t>(c)] = 1;
        for (auto& [cc, v] : prow) colrows[static_cast<std::size_t>(cc)].erase(r);

        std::vector<int> others(colrows[static_cast<std::size_t>(c)].begin(), colrows[static_cast<std::size_t>(c)].end());
        for (int i : others) {
            SparseVec& row = rows[static_cast<std::size_t>(i)];
            Rational l;
            for (auto& [cc, v] : row)
                if (cc == c) {
                    l = v / pv;
                    break;
                }
            added.clear();
            removed.clear();
            axpy_row(row, l, prow, c, added, removed);
            for (int a : added) colrows[static_cast<std::size_t>(a)].insert(i);
            for (int a : removed) colrows[static_cast<std::size_t>(a)].erase(i);
            lops_[static_cast<std::size_t>(step)].emplace_back(i, std::move(l));
        }
        SparseVec& u = uoff_[static_cast<std::size_t>(step)];
        for (auto& [cc, v] : prow)
            if (cc != c) u.emplace_back(cc, std::move(v));
        prow.clear();
    }
    return true;
}

void ExactLU::solve(std::vector<Rational>& a) const {
    for (int s = 0; s < t_; ++s) {
        const Rational& ar = a[static_cast<std::size_t>(prow_[static_cast<std::size_t>(s)])];
        if (ar == 0) continue;
        Rational arc = ar;
        for (const auto& [i, l] : lops_[static_cast<std::size_t>(s)]) a[static_cast<std::size_t>(i)] -= l * arc;
    }
    std::vector<Rational> z(static_cast<std::size_t>(t_));
    for (int s = t_ - 1; s >= 0; --s) {
        Rational acc = a[static_cast<std::size_t>(prow_[static_cast<std::size_t>(s)])];
        for (const auto& [j, v] : uoff_[static_cast<std::size_t>(s)]) {
            const Rational& zj = z[static_cast<std::size_t>(j)];
            if (zj != 0) acc -= v * zj;
        }
        if (acc != 0) acc /= piv_[static_cast<std::size_t>(s)];
        z[static_cast<std::size_t>(pcol_[static_cast<std::size_t>(s)])] = std::move(acc);
    }
    a = std::move(z);
}

void ExactLU::solve_transpose(std::vector<Rational>& c) const {
    std::vector<Rational> acc(static_cast<std::size_t>(t_));
    std::vector<Rational> v(static_cast<std::size_t>(t_));
    for (int s = 0; s < t_; ++s) {
        const int col = pcol_[static_cast<std::size_t>(s)];
        Rational val = c[static_cast<std::size_t>(col)] - acc[static_cast<std::size_t>(col)];
        if (val != 0) {
            val /= piv_[static_cast<std::size_t>(s)];
            for (const auto& [j, u] : uoff_[static_cast<std::size_t>(s)]) acc[static_cast<std::size_t>(j)] += val * u;
        }
        v[static_cast<std::size_t>(prow_[static_cast<std::size_t>(s)])] = std::move(val);
    }
    for (int s = t_ - 1; s >= 0; --s) {
        Rational& w = v[static_cast<std::size_t>(prow_[static_cast<std::size_t>(s)])];
        for (const auto& [i, l] : lops_[static_cast<std::size_t>(s)]) {
            const Rational& vi = v[static_cast<std::size_t>(i)];
            if (vi != 0) w -= l * vi;
        }
    }
    c = std::move(v);
}

}  // namespace mmk::lp::detail
