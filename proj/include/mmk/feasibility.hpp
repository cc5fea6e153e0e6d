#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmk/lp.hpp"
#include "mmk/measures.hpp"
#include "mmk/potentials.hpp"
#include "mmk/surd.hpp"

namespace mmk {

// lambda_0..lambda_k with sum_{t>=i} lambda_t C(n-k, t-i) = [i == k].
std::vector<Rational> signed_lambda(int n, int k);

// Signed measure sum_t lambda_t mu~_t whose k-marginals are exactly the
// family's. refs[i] is nu_{i+1}.
SignedDiscreteMeasure signed_uniting(const MarginalFamily& fam, const std::vector<DiscreteMeasure>& refs);

struct FeasibilityVerdict {
    bool feasible = false;
    DiscreteMeasure witness;            // feasible: uniting measure
    DualPotentials certificate;         // infeasible: sum f >= 0 cellwise, sum int f dmu < 0
    Rational certificate_value = 0;     // sum_alpha int f_alpha dmu_alpha
    std::optional<lp::Certificate> raw;  // Farkas row vector of the marginal LP
};

FeasibilityVerdict kellerer_check(const MarginalFamily& fam);

// True iff the tuple satisfies both Kellerer infeasibility conditions exactly.
bool verify_kellerer_certificate(const MarginalFamily& fam, const DualPotentials& f);

struct DensityBounds {
    Rational m, M;
};

DensityBounds density_bounds(const MarginalFamily& fam, const std::vector<DiscreteMeasure>& refs);

DiscreteMeasure uniting_by_density_32(const MarginalFamily& fam, const std::vector<DiscreteMeasure>& refs);

struct DensityTwoResult {
    std::string branch;           // "extreme", "product", "two-thirds", "u-formula", "error"
    Measure<Surd> measure;        // alpha mu' + xi_max, exact in Q(u)
    std::optional<DiscreteMeasure> rational;  // set when every weight is rational
    DiscreteMeasure xi_max;
    Rational xi_mass = 0;         // xi_max(X)
    Rational m = 0, M = 0;        // bounds of the input family
    Rational m_reduced = 0;       // m / (1 - xi_max(X))
    Rational u_squared = 0;       // 3 - 2/m_reduced (u-formula branch)
    bool nonnegative = false;
    bool projections_exact = false;
    std::vector<std::size_t> negative_cells;
    Surd factor_min;               // min over cells of prod_i (m'(u+3) - 2 rho_i), exact
    std::string diagnostic;
};

DensityTwoResult uniting_by_density_2(const MarginalFamily& fam, const std::vector<DiscreteMeasure>& refs);

DiscreteMeasure uniting_by_twothirds(const MarginalFamily& fam);

MarginalFamily make_modk_counterexample(int n, int k);
MarginalFamily make_two_point_counterexample(const Rational& ratio);

// Uniform probability measures on each axis of the family's grid.
std::vector<DiscreteMeasure> uniform_refs(const MarginalFamily& fam);
// One-dimensional marginals of the family, as refs.
std::vector<DiscreteMeasure> one_marginals(const MarginalFamily& fam);

}  // namespace mmk
