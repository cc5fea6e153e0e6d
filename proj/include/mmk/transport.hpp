#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "mmk/feasibility.hpp"
#include "mmk/lp.hpp"
#include "mmk/measures.hpp"
#include "mmk/potentials.hpp"

namespace mmk {

struct TransportOptions {
    lp::Arithmetic arithmetic = lp::Arithmetic::Exact;
    double tolerance = 1e-9;
    bool normalize = true;  // pin f_alpha(first cell) = 0 for all but the last alpha
    bool allow_large_exact = false;
};

struct SolveReport {
    bool feasible = true;
    bool exact = true;
    // exact mode
    DiscreteMeasure pi;
    DualPotentials dual;
    Rational primal_value = 0, dual_value = 0, gap = 0;
    // float mode (also filled from the exact answer in exact mode)
    FloatMeasure pif;
    FloatPotentials dualf;
    double primal_valuef = 0, dual_valuef = 0, gapf = 0;
    std::optional<FeasibilityVerdict> infeasible;  // set when the family has no uniting measure
    long iterations = 0;
};

// Solves the primal LP and reads the dual from its prices.
SolveReport transport_solve(const MarginalFamily& fam, const CostGrid& c, const TransportOptions& opt = {});

struct PrimalResult {
    bool feasible = false;
    DiscreteMeasure pi;
    Rational value = 0;
    std::optional<FeasibilityVerdict> certificate;
};

PrimalResult solve_primal(const MarginalFamily& fam, const CostGrid& c);

struct DualResult {
    DualPotentials potentials;
    Rational value = 0;
};

// Throws DomainError if the family is infeasible.
DualResult solve_dual(const MarginalFamily& fam, const CostGrid& c);

// Zero gap is asserted: exactly in exact mode, within 1e-7 (1 + |value|) in float mode.
SolveReport verify_gap(const MarginalFamily& fam, const CostGrid& c, const TransportOptions& opt = {});

// Shifts constants so f_alpha(first cell) = 0 for all but the last alpha; the
// sum over alpha is unchanged on every cell.
void normalize_constants(DualPotentials& d);
void normalize_constants(FloatPotentials& d);

// Upper-triangular system sum_t lambda_t C(n-t, k-t) C(n-k, t-a) = 0 for a < k, lambda_k = 1.
std::vector<Rational> decomp_lambda(int n, int k);

// f_alpha(x_alpha) = sum_{beta subset alpha} lambda_|beta| F(x_beta, y_rest).
DualPotentials nk_decompose(const CostGrid& F, int k, const std::vector<int>& y, const std::vector<Rational>& lambda);

// 2^{n+1} sum_t C(k, t) |lambda_t|
Rational decomposition_constant(int n, int k);

// L1 norm of c against the product of refs.
Rational l1_norm(const CostGrid& c, const std::vector<DiscreteMeasure>& refs);
// Norms of the sections x_alpha -> c(x_alpha, y_rest) against nu_alpha, for every alpha subset of {1..n}.
std::map<IndexSet, Rational> section_norms(const CostGrid& c, const std::vector<DiscreteMeasure>& refs,
                                           const std::vector<int>& y);

// First cell in lexicographic order whose sections all satisfy
// norm <= 2^{n+1} ||c||_1; random nu-weighted search after 2^{n+1} failures.
std::vector<int> good_basepoint(const CostGrid& c, const std::vector<DiscreteMeasure>& refs, std::uint64_t seed = 1);

// Bounded optimal dual for a (3,2) family with mu_ij = mu_i x mu_j and c >= 0.
DualPotentials extract_bounded_dual(const MarginalFamily& fam, const CostGrid& c, const DualPotentials& d);

// max over cells of sum_alpha f_alpha - c.
Rational check_dual_feasible(const DualPotentials& d, const CostGrid& c);

// Cells with positive pi-weight where sum_alpha f_alpha < c.
std::vector<std::size_t> complementary_slackness(const DiscreteMeasure& pi, const DualPotentials& d, const CostGrid& c);

nlohmann::json to_json(const SolveReport& r);

}  // namespace mmk
