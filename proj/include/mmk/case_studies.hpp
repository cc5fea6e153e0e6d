#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mmk/lp.hpp"
#include "mmk/measures.hpp"
#include "mmk/potentials.hpp"

namespace mmk {

// Certified rational bounds for pi^2.
Rational pi_squared_lower();
Rational pi_squared_upper();

// ---- dual supremum not attained, truncated to {1..N}^3 (index i is the integer i+1)

struct UnreachableCase {
    int N = 0;
    Rational M;       // max over n <= 64 of 2^-n / (1/n^2 - 1/(n+1)^2)
    Rational alpha0;  // half of 2 / (M pi^2 + 2), pi^2 taken from above
    DiscreteMeasure mu;
    MarginalFamily family;
    CostGrid cost;  // indicator of the union of the A_n
};

UnreachableCase build_unreachable(int N);
// The three cells of A_n, as grid indices. Needs 1 <= n <= N-1.
std::array<std::vector<int>, 3> a_cells(int n);
std::array<std::vector<int>, 3> b_cells(int n);

// 2(1-a)/pi^2 (1/m^2 - 1/(m+1)^2) - a/2^m with pi^2 from above.
Rational unreachable_lower_bound(const Rational& alpha, int m);

struct AnBound {
    int m = 0;
    std::array<Rational, 3> lp_min;  // min of gamma over the uniting measures, per cell of A_m
    Rational bound;                  // unreachable_lower_bound(alpha0, m)
    bool within_slack = false;       // lp_min >= (1 - slack) * bound for all three cells
    bool positive = false;
};

std::vector<AnBound> check_unreachable_bounds(const UnreachableCase& uc, int m_max, const Rational& slack = Rational(1, 20));

struct GrowthReport {
    int N = 0;
    Rational value;
    std::vector<Rational> diagonal_abs;  // |f12(n,n)| + |f13(n,n)| + |f23(n,n)|, n = 1..N
    std::vector<Rational> diagonal_F;    // F(n,n,n)
    Rational weighted;                   // sum over n of diagonal_abs / n^2
    bool interior_bound = false;         // diagonal_abs >= 3(n-1) for n <= N-1
};

GrowthReport diagnose_dual_growth(const UnreachableCase& uc);
GrowthReport diagnose_dual_growth(int N);

// ---- no strongly c-monotone plan

struct NonstrongCase {
    int N = 0;
    DiscreteMeasure mu;
    MarginalFamily family;
    CostGrid cost;  // indicator of the union of the B_n
};

NonstrongCase build_nonstrong(int N);

struct UniquenessReport {
    bool unique = false;
    std::vector<std::pair<Rational, Rational>> diagonal_range;  // (min, max) of gamma(k,k,k)
    Rational generic_min, generic_max, generic_expected;         // random objective over the polytope
};

UniquenessReport verify_nonstrong_uniqueness(const NonstrongCase& nc, std::uint64_t seed = 1);

struct NonstrongDualReport {
    Rational value;
    std::vector<Rational> diagonal_F;  // F(n,n,n), n = 1..N
    bool recurrence = false;           // F(n+1,n+1,n+1) - F(n,n,n) = 3 for n <= N-1
    Rational F111;
};

NonstrongDualReport nonstrong_dual(const NonstrongCase& nc);

// ---- discontinuous dual on [0,1]^3, cells of side 1/N, values at cell centers

struct PiecewiseDual32 {
    static Rational f12(const Rational& x1, const Rational& x2);
    static Rational f13(const Rational& x1, const Rational& x3);
    static Rational f23(const Rational& x2, const Rational& x3);
    static Rational F(const Rational& x1, const Rational& x2, const Rational& x3);
};

Rational discontinuous_cost(const Rational& x1, const Rational& x2, const Rational& x3);
Rational cell_center(int i, int N);

struct DiscontinuousCase {
    int N = 0;
    MarginalFamily family;
    CostGrid cost;
    DualPotentials dual;  // PiecewiseDual32 sampled at centers
};

DiscontinuousCase build_discontinuous(int N);

DiscreteMeasure cyclic_coupling(int N);
DiscreteMeasure frac_coupling(int a1, int a2, int a3, int N);
// General form: axis i has sizes[i] cells; a cyclic coupling at resolution L is
// pushed through x -> (x + t_i)/a_i. Needs a_i | sizes[i] and sizes[i] | a_i L.
DiscreteMeasure frac_coupling(const std::array<int, 3>& a, const std::array<int, 3>& sizes, int L);
DiscreteMeasure composite_pi(int N);

// True when the closed cell box meets the plane a . x = integer for some integer.
bool cell_meets_lattice_plane(const std::array<int, 3>& a, const std::vector<int>& cell, int N);

struct BoundaryAudit {
    std::size_t violations = 0;   // pi > 0 and F < c at the center
    std::size_t flagged = 0;      // support cells crossing x1+x2+3x3 = 3 or touching x3 = 2/3
    std::size_t unflagged_violations = 0;
    std::size_t support = 0;
};

BoundaryAudit audit_discontinuous(const DiscreteMeasure& pi, const DiscontinuousCase& dc);
Rational plan_cost(const DiscreteMeasure& pi, const CostGrid& c);

// ---- uniform-band example: axes N x N x 3

struct UniformbandCase {
    int N = 0;
    MarginalFamily family;
    CostGrid cost;  // x y z with x, y at cell centers and z in {0,1,2}
};

UniformbandCase build_uniformband(int N);

struct UniformbandReport {
    int N = 0;
    double value = 0;
    double max_line_error = 0;    // worst |row or column mass - 1/(3N)| over the three slices
    double bang_bang_fraction = 0;  // cells with 3 pi in {0, 3/N^2} up to 1e-7/N^2
    std::array<std::string, 3> slices;  // P2 images, black where 3 pi N^2 is near 3
};

UniformbandReport run_uniformband(int N, lp::Arithmetic arithmetic = lp::Arithmetic::Float);

// ---- polynomial duals f_A

Rational eval_fA(const Rational& A, const Rational& x, const Rational& y);
// xyz - sum of f_A over the three pairs
Rational fA_gap(const Rational& A, const Rational& x, const Rational& y, const Rational& z);
// Constant kappa with fA_gap = kappa (x+y+z-1)^2 (x+y+z+A).
Rational fA_kappa();
// sum over pairs of the integral of f_A against density 2 on {x + y <= 1}.
Rational fA_plane_value(const Rational& A);

// ---- 2x2x2 family with a unique uniting measure

MarginalFamily build_nonuniform_2x2x2();

struct UniqueWitnessReport {
    bool unique = false;
    DiscreteMeasure witness;
    std::vector<std::pair<Rational, Rational>> cell_range;  // (min, max) of gamma per cell
};

UniqueWitnessReport verify_unique_uniting(const MarginalFamily& fam);

// ---- CLI-facing runners

struct CaseParams {
    int N = 0;  // 0 picks the per-case default
    lp::Arithmetic arithmetic = lp::Arithmetic::Exact;
    std::uint64_t seed = 1;
};

struct CaseOutput {
    nlohmann::json report;
    std::vector<std::pair<std::string, std::string>> images;  // (file stem, P2 contents)
};

const std::vector<std::string>& case_names();
// Throws DomainError for an unknown name.
CaseOutput run_case(const std::string& name, const CaseParams& params);

}  // namespace mmk
