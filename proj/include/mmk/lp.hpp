#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmk/rational.hpp"

namespace mmk::lp {

enum class Sense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };
enum class Arithmetic { Exact, Float };

const char* to_string(Status s);

using SparseRow = std::vector<std::pair<int, Rational>>;

// optimize c^T x subject to A x = b, x >= 0
struct LPProblem {
    std::vector<Rational> objective;
    std::vector<SparseRow> rows;
    std::vector<Rational> rhs;
    Sense sense = Sense::Minimize;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
    std::size_t nnz() const;
    void add_row(SparseRow row, Rational b);
    // Throws DomainError on dimension mismatch or out-of-range columns.
    void validate() const;
};

// Farkas witness: y^T A <= 0 componentwise and y^T b > 0.
struct Certificate {
    std::vector<Rational> y;
};

struct LPSolution {
    Status status = Status::Infeasible;
    bool exact = true;
    std::vector<Rational> x;  // primal point (Optimal)
    std::vector<Rational> y;  // dual prices, one per row (Optimal)
    Rational value = 0;
    std::vector<double> xf, yf;  // float-mode counterparts
    double valuef = 0;
    std::optional<Certificate> certificate;  // Infeasible, exact mode
    std::vector<Rational> ray;               // Unbounded, exact mode
    std::vector<int> basis;                  // basic columns of the kept rows
    std::vector<int> kept_rows;              // rows surviving dependency removal
    long iterations = 0;
    long exact_iterations = 0;
};

struct SolveOptions {
    Arithmetic arithmetic = Arithmetic::Exact;
    double tolerance = 1e-9;
    std::size_t exact_nnz_cap = 50000;
    bool allow_large_exact = false;
    // Basis of a previous solve() with the same constraints; used as a
    // starting point when it is primal feasible, ignored otherwise.
    std::vector<int> warm_basis;
};

LPSolution solve(const LPProblem& p, const SolveOptions& opt = {});

bool check_certificate(const LPProblem& p, const Certificate& c);

// Exact residual checks used by tests and by solve() itself.
bool is_primal_feasible(const LPProblem& p, const std::vector<Rational>& x);
bool is_dual_feasible(const LPProblem& p, const std::vector<Rational>& y);

// Text rendering of the simplex tableau B^{-1}[A | b] for the given basis,
// with the reduced-cost row last. Rows must be linearly independent.
std::string dump_tableau(const LPProblem& p, const std::vector<int>& basis);

}  // namespace mmk::lp
