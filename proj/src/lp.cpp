#include "mmk/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "exact_lu.hpp"

namespace mmk::lp {

using detail::ExactLU;
using detail::SparseVec;

const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "?";
}

std::size_t LPProblem::nnz() const {
    std::size_t k = 0;
    for (const auto& r : rows) k += r.size();
    return k;
}

void LPProblem::add_row(SparseRow row, Rational b) {
    rows.push_back(std::move(row));
    rhs.push_back(std::move(b));
}

void LPProblem::validate() const {
    if (rows.size() != rhs.size()) throw DomainError("lp: rhs length differs from row count");
    const int n = num_vars();
    for (const auto& r : rows)
        for (const auto& [j, v] : r)
            if (j < 0 || j >= n) throw DomainError("lp: column index out of range");
}

namespace {

// Row with merged duplicates, zeros removed, sorted by column.
SparseVec canonical(const SparseRow& r) {
    SparseVec out(r.begin(), r.end());
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
    SparseVec merged;
    for (auto& e : out) {
        if (!merged.empty() && merged.back().first == e.first)
            merged.back().second += e.second;
        else
            merged.push_back(e);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](auto& e) { return e.second == 0; }), merged.end());
    return merged;
}

const Rational* find_entry(const SparseVec& r, int col) {
    auto it = std::lower_bound(r.begin(), r.end(), col, [](const auto& e, int c) { return e.first < c; });
    if (it != r.end() && it->first == col) return &it->second;
    return nullptr;
}

// a := a - l*b
void sub_scaled(SparseVec& a, const Rational& l, const SparseVec& b) {
    SparseVec out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(std::move(a[i++]));
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, -l * b[j].second);
            ++j;
        } else {
            Rational v = a[i].second - l * b[j].second;
            if (v != 0) out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    a = std::move(out);
}

struct Reduction {
    std::vector<int> kept;
    std::vector<int> pivcols;
    int inconsistent = -1;
    std::vector<Rational> cert;  // over original rows
};

Reduction reduce_rows(const LPProblem& p, const std::vector<SparseVec>& rows) {
    Reduction red;
    std::vector<SparseVec> stored;
    std::vector<Rational> stored_b;
    for (int r = 0; r < p.num_rows(); ++r) {
        SparseVec row = rows[static_cast<std::size_t>(r)];
        Rational b = p.rhs[static_cast<std::size_t>(r)];
        for (std::size_t s = 0; s < stored.size() && !row.empty(); ++s) {
            const Rational* v = find_entry(row, red.pivcols[s]);
            if (!v) continue;
            Rational l = *v;
            sub_scaled(row, l, stored[s]);
            b -= l * stored_b[s];
        }
        if (row.empty()) {
            if (b != 0) {
                red.inconsistent = r;
                break;
            }
            continue;
        }
        Rational pv = row.front().second;
        for (auto& e : row) e.second /= pv;
        b /= pv;
        red.kept.push_back(r);
        red.pivcols.push_back(row.front().first);
        stored.push_back(std::move(row));
        stored_b.push_back(std::move(b));
    }
    if (red.inconsistent < 0) return red;

    // y_r = 1 and y_R solving y_R^T A[R, pivcols] = -A_r[pivcols]
    const int t = static_cast<int>(red.kept.size());
    std::vector<int> colpos(static_cast<std::size_t>(p.num_vars()), -1);
    for (int s = 0; s < t; ++s) colpos[static_cast<std::size_t>(red.pivcols[static_cast<std::size_t>(s)])] = s;
    std::vector<SparseVec> cols(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i)
        for (const auto& [j, v] : rows[static_cast<std::size_t>(red.kept[static_cast<std::size_t>(i)])]) {
            int c = colpos[static_cast<std::size_t>(j)];
            if (c >= 0) cols[static_cast<std::size_t>(c)].emplace_back(i, v);
        }
    std::vector<const SparseVec*> ptr;
    for (auto& c : cols) ptr.push_back(&c);
    ExactLU lu;
    if (t > 0 && !lu.factor(t, ptr)) throw InvariantError("lp: pivot block singular");
    std::vector<Rational> g(static_cast<std::size_t>(t));
    for (const auto& [j, v] : rows[static_cast<std::size_t>(red.inconsistent)]) {
        int c = colpos[static_cast<std::size_t>(j)];
        if (c >= 0) g[static_cast<std::size_t>(c)] = -v;
    }
    if (t > 0) lu.solve_transpose(g);
    red.cert.assign(static_cast<std::size_t>(p.num_rows()), Rational(0));
    red.cert[static_cast<std::size_t>(red.inconsistent)] = 1;
    for (int i = 0; i < t; ++i) red.cert[static_cast<std::size_t>(red.kept[static_cast<std::size_t>(i)])] = g[static_cast<std::size_t>(i)];
    Rational yb = 0;
    for (int r = 0; r < p.num_rows(); ++r) yb += red.cert[static_cast<std::size_t>(r)] * p.rhs[static_cast<std::size_t>(r)];
    if (yb < 0)
        for (auto& y : red.cert) y = -y;
    return red;
}

// Standard form over the kept rows: columns 0..n-1 structural, n..n+t-1
// artificial identity; rhs >= 0.
struct StdForm {
    int t = 0, n = 0;
    std::vector<SparseVec> cols;
    std::vector<Rational> b;
    std::vector<Rational> cost;  // minimization, structural only
    std::vector<int> rowsign;
};

StdForm standardize(const LPProblem& p, const std::vector<SparseVec>& rows, const Reduction& red) {
    StdForm f;
    f.t = static_cast<int>(red.kept.size());
    f.n = p.num_vars();
    f.cols.assign(static_cast<std::size_t>(f.n + f.t), {});
    f.b.resize(static_cast<std::size_t>(f.t));
    f.rowsign.resize(static_cast<std::size_t>(f.t));
    for (int i = 0; i < f.t; ++i) {
        int r = red.kept[static_cast<std::size_t>(i)];
        int s = p.rhs[static_cast<std::size_t>(r)] < 0 ? -1 : 1;
        f.rowsign[static_cast<std::size_t>(i)] = s;
        f.b[static_cast<std::size_t>(i)] = s * p.rhs[static_cast<std::size_t>(r)];
        for (const auto& [j, v] : rows[static_cast<std::size_t>(r)])
            f.cols[static_cast<std::size_t>(j)].emplace_back(i, s < 0 ? Rational(-v) : v);
        f.cols[static_cast<std::size_t>(f.n + i)].emplace_back(i, Rational(1));
    }
    f.cost.resize(static_cast<std::size_t>(f.n));
    for (int j = 0; j < f.n; ++j)
        f.cost[static_cast<std::size_t>(j)] =
            p.sense == Sense::Minimize ? p.objective[static_cast<std::size_t>(j)] : Rational(-p.objective[static_cast<std::size_t>(j)]);
    return f;
}

// ---------------------------------------------------------------------------
// Dense float tableau

struct FloatResult {
    bool ok = false;
    Status status = Status::Optimal;
    std::vector<int> basis;
    std::vector<double> x, y;
    double value = 0;
    long iterations = 0;
};

class FloatTableau {
public:
    FloatTableau(const StdForm& f, double tol) : t_(f.t), n_(f.n), N_(f.n + f.t), W_(N_ + 1), tol_(tol) {
        T_.assign(static_cast<std::size_t>(t_) * static_cast<std::size_t>(W_), 0.0);
        for (int j = 0; j < N_; ++j)
            for (const auto& [i, v] : f.cols[static_cast<std::size_t>(j)]) at(i, j) = v.get_d();
        for (int i = 0; i < t_; ++i) at(i, N_) = f.b[static_cast<std::size_t>(i)].get_d();
        basis_.resize(static_cast<std::size_t>(t_));
        std::iota(basis_.begin(), basis_.end(), n_);
        cost_.assign(static_cast<std::size_t>(N_), 0.0);
        for (int j = 0; j < n_; ++j) cost_[static_cast<std::size_t>(j)] = f.cost[static_cast<std::size_t>(j)].get_d();
        max_iter_ = 50L * (N_ + t_) + 1000;
    }

    FloatResult run() {
        FloatResult res;
        std::vector<double> c1(static_cast<std::size_t>(N_), 0.0);
        for (int i = 0; i < t_; ++i) c1[static_cast<std::size_t>(n_ + i)] = 1.0;
        price(c1);
        double bsum = 1.0;
        for (int i = 0; i < t_; ++i) bsum += std::abs(at(i, N_));
        int st = iterate(N_);
        if (st < 0) return res;
        if (z_ > tol_ * bsum * 10) {
            res.ok = true;
            res.status = Status::Infeasible;
            res.basis = basis_;
            res.iterations = iters_;
            return res;
        }
        for (int i = 0; i < t_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < n_) continue;
            int q = -1;
            double best = tol_;
            for (int j = 0; j < n_; ++j)
                if (std::abs(at(i, j)) > best && !is_basic(j)) {
                    best = std::abs(at(i, j));
                    q = j;
                }
            if (q >= 0) pivot(i, q);
        }
        return phase2();
    }

    // Pivot the given structural columns into the basis. Succeeds only if the
    // resulting basic solution is primal feasible with artificials at zero.
    bool warm(const std::vector<int>& cols) {
        d_.assign(static_cast<std::size_t>(N_) + 1, 0.0);
        for (int j : cols) {
            if (j < 0 || j >= n_ || is_basic(j)) continue;
            int p = -1;
            double best = 1e-9;
            for (int i = 0; i < t_; ++i)
                if (basis_[static_cast<std::size_t>(i)] >= n_ && std::abs(at(i, j)) > best) {
                    best = std::abs(at(i, j));
                    p = i;
                }
            if (p < 0) return false;
            pivot(p, j);
        }
        const double eps = tol_ * 100;
        for (int i = 0; i < t_; ++i) {
            double v = at(i, N_);
            if (v < -eps) return false;
            if (basis_[static_cast<std::size_t>(i)] >= n_ && v > eps) return false;
        }
        return true;
    }

    FloatResult phase2() {
        FloatResult res;
        price(cost_);
        int st = iterate(n_);
        if (st < 0) return res;
        res.ok = true;
        res.status = st == 1 ? Status::Unbounded : Status::Optimal;
        res.basis = basis_;
        res.iterations = iters_;
        res.x.assign(static_cast<std::size_t>(n_), 0.0);
        for (int i = 0; i < t_; ++i)
            if (basis_[static_cast<std::size_t>(i)] < n_) res.x[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = std::max(0.0, at(i, N_));
        res.y.resize(static_cast<std::size_t>(t_));
        for (int i = 0; i < t_; ++i) res.y[static_cast<std::size_t>(i)] = -d_[static_cast<std::size_t>(n_ + i)];
        res.value = z_;
        return res;
    }

private:
    double& at(int i, int j) { return T_[static_cast<std::size_t>(i) * static_cast<std::size_t>(W_) + static_cast<std::size_t>(j)]; }
    bool is_basic(int j) const { return std::find(basis_.begin(), basis_.end(), j) != basis_.end(); }

    void price(const std::vector<double>& c) {
        d_ = c;
        d_.push_back(0.0);
        z_ = 0;
        for (int i = 0; i < t_; ++i) {
            double cb = c[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
            if (cb == 0) continue;
            for (int j = 0; j < N_; ++j) d_[static_cast<std::size_t>(j)] -= cb * at(i, j);
            z_ += cb * at(i, N_);
        }
        for (int i = 0; i < t_; ++i) d_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = 0.0;
    }

    void pivot(int p, int q) {
        const double pv = at(p, q);
        double* prow = &at(p, 0);
        nz_.clear();
        for (int j = 0; j < W_; ++j)
            if (prow[j] != 0) {
                prow[j] /= pv;
                nz_.push_back(j);
            }
        prow[q] = 1.0;
        for (int i = 0; i < t_; ++i) {
            if (i == p) continue;
            double* row = &at(i, 0);
            const double f = row[q];
            if (f == 0) continue;
            for (int j : nz_) row[j] -= f * prow[j];
            row[q] = 0.0;
        }
        const double f = d_[static_cast<std::size_t>(q)];
        if (f != 0) {
            for (int j : nz_)
                if (j < N_) d_[static_cast<std::size_t>(j)] -= f * prow[j];
            z_ += f * prow[N_];
        }
        d_[static_cast<std::size_t>(q)] = 0.0;
        basis_[static_cast<std::size_t>(p)] = q;
        ++iters_;
    }

    // 0 optimal, 1 unbounded, -1 iteration limit. Columns >= limit never enter.
    int iterate(int limit) {
        int degenerate = 0;
        bool bland = false;
        for (;;) {
            if (iters_ > max_iter_) return -1;
            int q = -1;
            double best = -tol_;
            for (int j = 0; j < limit; ++j) {
                double d = d_[static_cast<std::size_t>(j)];
                if (d < best) {
                    q = j;
                    if (bland) break;
                    best = d;
                }
            }
            if (q < 0) return 0;
            int p = -1;
            double br = 0, bp = 0;
            for (int i = 0; i < t_; ++i) {
                double a = at(i, q);
                if (a <= tol_) continue;
                double ratio = std::max(0.0, at(i, N_)) / a;
                if (p < 0 || ratio < br - 1e-12) {
                    p = i;
                    br = ratio;
                    bp = a;
                } else if (ratio <= br + 1e-12) {
                    bool take = bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(p)] : a > bp;
                    if (take) {
                        p = i;
                        br = std::min(br, ratio);
                        bp = a;
                    }
                }
            }
            if (p < 0) return 1;
            if (br <= 1e-12) {
                if (++degenerate > 50) bland = true;
            } else {
                degenerate = 0;
                bland = false;
            }
            pivot(p, q);
        }
    }

    int t_, n_, N_, W_;
    double tol_;
    std::vector<double> T_, d_, cost_;
    double z_ = 0;
    std::vector<int> basis_, nz_;
    long iters_ = 0, max_iter_ = 0;
};

// ---------------------------------------------------------------------------
// Exact revised simplex

class ExactEngine {
public:
    explicit ExactEngine(const StdForm& f) : f_(f), t_(f.t), N_(f.n + f.t) {}

    bool set_basis(const std::vector<int>& basis) {
        basis_ = basis;
        pos_.assign(static_cast<std::size_t>(N_), -1);
        for (int i = 0; i < t_; ++i) pos_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = i;
        return refactor();
    }

    void set_identity() {
        std::vector<int> b(static_cast<std::size_t>(t_));
        std::iota(b.begin(), b.end(), f_.n);
        if (!set_basis(b)) throw InvariantError("lp: identity basis singular");
    }

    const std::vector<int>& basis() const { return basis_; }
    const std::vector<Rational>& xB() const { return xB_; }
    long iterations() const { return iters_; }

    bool primal_feasible() const {
        return std::all_of(xB_.begin(), xB_.end(), [](const Rational& v) { return v >= 0; });
    }
    bool has_artificial() const {
        return std::any_of(basis_.begin(), basis_.end(), [&](int j) { return j >= f_.n; });
    }

    std::vector<Rational> duals(const std::vector<Rational>& cost) const {
        std::vector<Rational> y(static_cast<std::size_t>(t_));
        for (int i = 0; i < t_; ++i) y[static_cast<std::size_t>(i)] = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
        btran(y);
        return y;
    }

    Rational reduced_cost(const std::vector<Rational>& cost, const std::vector<Rational>& y, int j) const {
        Rational d = cost[static_cast<std::size_t>(j)];
        for (const auto& [r, v] : f_.cols[static_cast<std::size_t>(j)])
            if (y[static_cast<std::size_t>(r)] != 0) d -= y[static_cast<std::size_t>(r)] * v;
        return d;
    }

    bool dual_feasible(const std::vector<Rational>& cost, int limit) const {
        auto y = duals(cost);
        for (int j = 0; j < limit; ++j)
            if (pos_[static_cast<std::size_t>(j)] < 0 && reduced_cost(cost, y, j) < 0) return false;
        return true;
    }

    Status primal(const std::vector<Rational>& cost, int limit, std::vector<Rational>* ray) {
        bool bland = false;
        int degenerate = 0;
        for (;;) {
            auto y = duals(cost);
            int q = -1;
            Rational best;
            for (int j = 0; j < limit; ++j) {
                if (pos_[static_cast<std::size_t>(j)] >= 0) continue;
                Rational d = reduced_cost(cost, y, j);
                if (d < 0 && (q < 0 || d < best)) {
                    q = j;
                    best = std::move(d);
                    if (bland) break;
                }
            }
            if (q < 0) return Status::Optimal;
            auto alpha = column(q);
            int p = -1;
            Rational br;
            for (int i = 0; i < t_; ++i) {
                if (alpha[static_cast<std::size_t>(i)] <= 0) continue;
                Rational ratio = xB_[static_cast<std::size_t>(i)] / alpha[static_cast<std::size_t>(i)];
                if (p < 0 || ratio < br || (ratio == br && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(p)])) {
                    p = i;
                    br = std::move(ratio);
                }
            }
            if (p < 0) {
                if (ray) {
                    ray->assign(static_cast<std::size_t>(N_), Rational(0));
                    (*ray)[static_cast<std::size_t>(q)] = 1;
                    for (int i = 0; i < t_; ++i) (*ray)[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = -alpha[static_cast<std::size_t>(i)];
                }
                return Status::Unbounded;
            }
            step_degeneracy(br == 0, degenerate, bland);
            pivot(p, q, alpha);
        }
    }

    // Dual simplex from a dual feasible basis. On infeasibility, *cert gets
    // y with y^T A <= 0, y^T b > 0 over the standard-form rows.
    Status dual(const std::vector<Rational>& cost, int limit, std::vector<Rational>* cert) {
        bool bland = false;
        int degenerate = 0;
        for (;;) {
            int p = -1;
            for (int i = 0; i < t_; ++i) {
                const Rational& v = xB_[static_cast<std::size_t>(i)];
                if (v >= 0) continue;
                if (p < 0) {
                    p = i;
                    continue;
                }
                const int bi = basis_[static_cast<std::size_t>(i)], bp = basis_[static_cast<std::size_t>(p)];
                if (bland ? bi < bp : (v < xB_[static_cast<std::size_t>(p)] || (v == xB_[static_cast<std::size_t>(p)] && bi < bp))) p = i;
            }
            if (p < 0) return Status::Optimal;
            std::vector<Rational> rho(static_cast<std::size_t>(t_));
            rho[static_cast<std::size_t>(p)] = 1;
            btran(rho);
            auto y = duals(cost);
            int q = -1;
            Rational br;
            for (int j = 0; j < limit; ++j) {
                if (pos_[static_cast<std::size_t>(j)] >= 0) continue;
                Rational a = 0;
                for (const auto& [r, v] : f_.cols[static_cast<std::size_t>(j)])
                    if (rho[static_cast<std::size_t>(r)] != 0) a += rho[static_cast<std::size_t>(r)] * v;
                if (a >= 0) continue;
                Rational ratio = reduced_cost(cost, y, j) / (-a);
                if (q < 0 || ratio < br) {
                    q = j;
                    br = std::move(ratio);
                }
            }
            if (q < 0) {
                if (cert) {
                    for (auto& v : rho) v = -v;
                    *cert = std::move(rho);
                }
                return Status::Infeasible;
            }
            step_degeneracy(br == 0, degenerate, bland);
            auto alpha = column(q);
            pivot(p, q, alpha);
        }
    }

    // Replace basic artificials at level zero by structural columns.
    void drive_out_artificials() {
        for (int p = 0; p < t_; ++p) {
            if (basis_[static_cast<std::size_t>(p)] < f_.n) continue;
            if (xB_[static_cast<std::size_t>(p)] != 0) throw InvariantError("lp: artificial at positive level");
            std::vector<Rational> rho(static_cast<std::size_t>(t_));
            rho[static_cast<std::size_t>(p)] = 1;
            btran(rho);
            int q = -1;
            for (int j = 0; j < f_.n && q < 0; ++j) {
                if (pos_[static_cast<std::size_t>(j)] >= 0) continue;
                for (const auto& [r, v] : f_.cols[static_cast<std::size_t>(j)])
                    if (rho[static_cast<std::size_t>(r)] != 0) {
                        Rational a = 0;
                        for (const auto& [r2, v2] : f_.cols[static_cast<std::size_t>(j)]) a += rho[static_cast<std::size_t>(r2)] * v2;
                        if (a != 0) q = j;
                        break;
                    }
            }
            if (q < 0) throw InvariantError("lp: dependent row survived reduction");
            auto alpha = column(q);
            pivot(p, q, alpha);
        }
    }

private:
    struct Eta {
        int p;
        Rational pivot;
        SparseVec rest;
    };

    static void step_degeneracy(bool degenerate_step, int& count, bool& bland) {
        if (degenerate_step) {
            if (++count > 50) bland = true;
        } else {
            count = 0;
            bland = false;
        }
    }

    bool refactor() {
        std::vector<const SparseVec*> ptr;
        ptr.reserve(static_cast<std::size_t>(t_));
        for (int j : basis_) ptr.push_back(&f_.cols[static_cast<std::size_t>(j)]);
        etas_.clear();
        if (t_ > 0 && !lu_.factor(t_, ptr)) return false;
        xB_ = f_.b;
        ftran(xB_);
        return true;
    }

    void ftran(std::vector<Rational>& a) const {
        if (t_ == 0) return;
        lu_.solve(a);
        for (const auto& e : etas_) {
            Rational& zp = a[static_cast<std::size_t>(e.p)];
            if (zp == 0) continue;
            zp /= e.pivot;
            for (const auto& [i, v] : e.rest) a[static_cast<std::size_t>(i)] -= v * zp;
        }
    }

    void btran(std::vector<Rational>& c) const {
        if (t_ == 0) return;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            Rational acc = c[static_cast<std::size_t>(it->p)];
            for (const auto& [i, v] : it->rest)
                if (c[static_cast<std::size_t>(i)] != 0) acc -= c[static_cast<std::size_t>(i)] * v;
            if (acc != 0) acc /= it->pivot;
            c[static_cast<std::size_t>(it->p)] = std::move(acc);
        }
        lu_.solve_transpose(c);
    }

    std::vector<Rational> column(int j) const {
        std::vector<Rational> a(static_cast<std::size_t>(t_));
        for (const auto& [r, v] : f_.cols[static_cast<std::size_t>(j)]) a[static_cast<std::size_t>(r)] = v;
        ftran(a);
        return a;
    }

    void pivot(int p, int q, const std::vector<Rational>& alpha) {
        const Rational& ap = alpha[static_cast<std::size_t>(p)];
        Rational theta = xB_[static_cast<std::size_t>(p)] / ap;
        if (theta != 0)
            for (int i = 0; i < t_; ++i)
                if (i != p && alpha[static_cast<std::size_t>(i)] != 0) xB_[static_cast<std::size_t>(i)] -= theta * alpha[static_cast<std::size_t>(i)];
        xB_[static_cast<std::size_t>(p)] = theta;
        pos_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(p)])] = -1;
        basis_[static_cast<std::size_t>(p)] = q;
        pos_[static_cast<std::size_t>(q)] = p;
        Eta e{p, ap, {}};
        for (int i = 0; i < t_; ++i)
            if (i != p && alpha[static_cast<std::size_t>(i)] != 0) e.rest.emplace_back(i, alpha[static_cast<std::size_t>(i)]);
        etas_.push_back(std::move(e));
        ++iters_;
        if (etas_.size() >= 64) {
            std::vector<Rational> keep = xB_;
            if (!refactor()) throw InvariantError("lp: basis became singular");
            if (keep != xB_) throw InvariantError("lp: refactorization drift");
        }
    }

    const StdForm& f_;
    int t_, N_;
    std::vector<int> basis_, pos_;
    ExactLU lu_;
    std::vector<Eta> etas_;
    std::vector<Rational> xB_;
    long iters_ = 0;
};

std::vector<Rational> lift_rows(const StdForm& f, const Reduction& red, int m, const std::vector<Rational>& y) {
    std::vector<Rational> out(static_cast<std::size_t>(m), Rational(0));
    for (int i = 0; i < f.t; ++i) {
        const Rational& v = y[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(red.kept[static_cast<std::size_t>(i)])] = f.rowsign[static_cast<std::size_t>(i)] < 0 ? Rational(-v) : v;
    }
    return out;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

void verify_optimal(const LPProblem& p, const LPSolution& s) {
    if (!is_primal_feasible(p, s.x)) throw InvariantError("lp: primal point fails exact check");
    if (!is_dual_feasible(p, s.y)) throw InvariantError("lp: dual prices fail exact check");
    if (dot(p.objective, s.x) != dot(p.rhs, s.y)) throw InvariantError("lp: duality gap nonzero");
}

}  // namespace

bool is_primal_feasible(const LPProblem& p, const std::vector<Rational>& x) {
    if (static_cast<int>(x.size()) != p.num_vars()) return false;
    for (const auto& v : x)
        if (v < 0) return false;
    for (int r = 0; r < p.num_rows(); ++r) {
        Rational s = 0;
        for (const auto& [j, v] : p.rows[static_cast<std::size_t>(r)]) s += v * x[static_cast<std::size_t>(j)];
        if (s != p.rhs[static_cast<std::size_t>(r)]) return false;
    }
    return true;
}

bool is_dual_feasible(const LPProblem& p, const std::vector<Rational>& y) {
    if (static_cast<int>(y.size()) != p.num_rows()) return false;
    std::vector<Rational> aty(static_cast<std::size_t>(p.num_vars()));
    for (int r = 0; r < p.num_rows(); ++r) {
        if (y[static_cast<std::size_t>(r)] == 0) continue;
        for (const auto& [j, v] : p.rows[static_cast<std::size_t>(r)]) aty[static_cast<std::size_t>(j)] += y[static_cast<std::size_t>(r)] * v;
    }
    for (int j = 0; j < p.num_vars(); ++j) {
        const Rational& c = p.objective[static_cast<std::size_t>(j)];
        const Rational& a = aty[static_cast<std::size_t>(j)];
        if (p.sense == Sense::Minimize ? a > c : a < c) return false;
    }
    return true;
}

bool check_certificate(const LPProblem& p, const Certificate& c) {
    if (static_cast<int>(c.y.size()) != p.num_rows()) return false;
    std::vector<Rational> aty(static_cast<std::size_t>(p.num_vars()));
    for (int r = 0; r < p.num_rows(); ++r) {
        if (c.y[static_cast<std::size_t>(r)] == 0) continue;
        for (const auto& [j, v] : p.rows[static_cast<std::size_t>(r)]) {
            if (j < 0 || j >= p.num_vars()) return false;
            aty[static_cast<std::size_t>(j)] += c.y[static_cast<std::size_t>(r)] * v;
        }
    }
    for (const auto& a : aty)
        if (a > 0) return false;
    return dot(c.y, p.rhs) > 0;
}

LPSolution solve(const LPProblem& p, const SolveOptions& opt) {
    p.validate();
    const bool exact = opt.arithmetic == Arithmetic::Exact;
    if (exact && p.nnz() > opt.exact_nnz_cap && !opt.allow_large_exact)
        throw DomainError("lp: problem exceeds the rational-mode size cap; use float arithmetic or allow_large_exact");

    std::vector<SparseVec> rows;
    rows.reserve(p.rows.size());
    for (const auto& r : p.rows) rows.push_back(canonical(r));

    LPSolution sol;
    sol.exact = exact;
    Reduction red = reduce_rows(p, rows);
    sol.kept_rows = red.kept;
    if (red.inconsistent >= 0) {
        sol.status = Status::Infeasible;
        sol.certificate = Certificate{red.cert};
        return sol;
    }
    StdForm f = standardize(p, rows, red);
    const int n = f.n, t = f.t, m = p.num_rows();
    const Rational sense_sign = p.sense == Sense::Minimize ? 1 : -1;

    FloatResult fr;
    bool warmed = false;
    if (!opt.warm_basis.empty()) {
        FloatTableau tab(f, opt.tolerance);
        if (tab.warm(opt.warm_basis)) {
            fr = tab.phase2();
            warmed = fr.ok;
        }
    }
    if (!warmed) {
        FloatTableau tab(f, opt.tolerance);
        fr = tab.run();
    }
    sol.iterations = fr.iterations;

    if (!exact) {
        if (!fr.ok) throw InvariantError("lp: float simplex hit its iteration limit");
        sol.status = fr.status;
        sol.basis = fr.basis;
        if (fr.status == Status::Optimal || fr.status == Status::Unbounded) sol.xf = fr.x;
        if (fr.status == Status::Optimal) {
            sol.yf.assign(static_cast<std::size_t>(m), 0.0);
            for (int i = 0; i < t; ++i)
                sol.yf[static_cast<std::size_t>(red.kept[static_cast<std::size_t>(i)])] =
                    f.rowsign[static_cast<std::size_t>(i)] * fr.y[static_cast<std::size_t>(i)] * sense_sign.get_d();
            sol.valuef = fr.value * sense_sign.get_d();
        }
        return sol;
    }

    ExactEngine eng(f);
    if (!(fr.ok && eng.set_basis(fr.basis))) eng.set_identity();

    std::vector<Rational> c1(static_cast<std::size_t>(n + t), Rational(0));
    for (int i = 0; i < t; ++i) c1[static_cast<std::size_t>(n + i)] = 1;
    std::vector<Rational> c2(static_cast<std::size_t>(n + t), Rational(0));
    for (int j = 0; j < n; ++j) c2[static_cast<std::size_t>(j)] = f.cost[static_cast<std::size_t>(j)];

    auto finish_infeasible = [&](const std::vector<Rational>& ystd) {
        sol.status = Status::Infeasible;
        sol.certificate = Certificate{lift_rows(f, red, m, ystd)};
        sol.exact_iterations = eng.iterations();
        sol.iterations += eng.iterations();
        if (!check_certificate(p, *sol.certificate)) throw InvariantError("lp: certificate fails exact check");
        return sol;
    };

    if (!eng.primal_feasible()) {
        if (!eng.has_artificial() && eng.dual_feasible(c2, n)) {
            std::vector<Rational> cert;
            if (eng.dual(c2, n, &cert) == Status::Infeasible) return finish_infeasible(cert);
        } else {
            eng.set_identity();
        }
    }

    auto phase1_value = [&] {
        Rational s = 0;
        for (int i = 0; i < t; ++i)
            if (eng.basis()[static_cast<std::size_t>(i)] >= n) s += eng.xB()[static_cast<std::size_t>(i)];
        return s;
    };
    if (phase1_value() > 0) {
        eng.primal(c1, n + t, nullptr);
        if (phase1_value() > 0) return finish_infeasible(eng.duals(c1));
    }
    eng.drive_out_artificials();

    std::vector<Rational> ray;
    Status st = eng.primal(c2, n, &ray);
    sol.exact_iterations = eng.iterations();
    sol.iterations += eng.iterations();
    sol.basis = eng.basis();

    sol.x.assign(static_cast<std::size_t>(n), Rational(0));
    for (int i = 0; i < t; ++i) {
        int j = eng.basis()[static_cast<std::size_t>(i)];
        if (j < n) sol.x[static_cast<std::size_t>(j)] = eng.xB()[static_cast<std::size_t>(i)];
    }
    if (st == Status::Unbounded) {
        sol.status = Status::Unbounded;
        sol.ray.assign(ray.begin(), ray.begin() + n);
        return sol;
    }
    sol.status = Status::Optimal;
    auto ystd = eng.duals(c2);
    sol.y = lift_rows(f, red, m, ystd);
    if (p.sense == Sense::Maximize)
        for (auto& v : sol.y) v = -v;
    sol.value = dot(p.objective, sol.x);
    sol.xf.resize(sol.x.size());
    for (std::size_t j = 0; j < sol.x.size(); ++j) sol.xf[j] = sol.x[j].get_d();
    sol.yf.resize(sol.y.size());
    for (std::size_t i = 0; i < sol.y.size(); ++i) sol.yf[i] = sol.y[i].get_d();
    sol.valuef = sol.value.get_d();
    verify_optimal(p, sol);
    return sol;
}

std::string dump_tableau(const LPProblem& p, const std::vector<int>& basis) {
    p.validate();
    const int m = p.num_rows(), n = p.num_vars();
    if (static_cast<int>(basis.size()) != m) throw DomainError("dump_tableau: basis size must equal row count");
    std::vector<SparseVec> cols(static_cast<std::size_t>(n));
    for (int r = 0; r < m; ++r)
        for (const auto& [j, v] : canonical(p.rows[static_cast<std::size_t>(r)])) cols[static_cast<std::size_t>(j)].emplace_back(r, v);
    std::vector<const SparseVec*> ptr;
    for (int j : basis) {
        if (j < 0 || j >= n) throw DomainError("dump_tableau: basis index out of range");
        ptr.push_back(&cols[static_cast<std::size_t>(j)]);
    }
    ExactLU lu;
    if (m > 0 && !lu.factor(m, ptr)) throw DomainError("dump_tableau: basis is singular");
    std::vector<std::vector<Rational>> body(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        std::vector<Rational> a(static_cast<std::size_t>(m));
        if (j < n)
            for (const auto& [r, v] : cols[static_cast<std::size_t>(j)]) a[static_cast<std::size_t>(r)] = v;
        else
            a = p.rhs;
        if (m > 0) lu.solve(a);
        body[static_cast<std::size_t>(j)] = std::move(a);
    }
    std::ostringstream os;
    for (int i = 0; i < m; ++i) {
        os << "x" << basis[static_cast<std::size_t>(i)] << " |";
        for (int j = 0; j < n; ++j) os << ' ' << mmk::to_string(body[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        os << " | " << mmk::to_string(body[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)]) << '\n';
    }
    os << "d  |";
    Rational z = 0;
    for (int i = 0; i < m; ++i) z += p.objective[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] * body[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
        Rational d = p.objective[static_cast<std::size_t>(j)];
        for (int i = 0; i < m; ++i)
            d -= p.objective[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] * body[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        os << ' ' << mmk::to_string(d);
    }
    os << " | " << mmk::to_string(z) << '\n';
    return os.str();
}

}  // namespace mmk::lp
