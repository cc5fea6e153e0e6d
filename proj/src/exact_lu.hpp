#pragma once

#include <utility>
#include <vector>

#include "mmk/rational.hpp"

namespace mmk::lp::detail {

using SparseVec = std::vector<std::pair<int, Rational>>;  // sorted by index

// Sparse Gaussian elimination over the rationals with a Markowitz-style pivot
// order. Factors a square matrix given by columns.
class ExactLU {
public:
    // Returns false if the matrix is singular.
    bool factor(int t, const std::vector<const SparseVec*>& cols);

    // B z = a. Input indexed by row, output indexed by column position.
    void solve(std::vector<Rational>& a) const;
    // w^T B = c^T. Input indexed by column position, output indexed by row.
    void solve_transpose(std::vector<Rational>& c) const;

    int dim() const { return t_; }

private:
    int t_ = 0;
    std::vector<int> prow_, pcol_;
    std::vector<Rational> piv_;
    std::vector<SparseVec> uoff_;  // per step: entries in later pivot columns
    std::vector<SparseVec> lops_;  // per step: (row, multiplier)
};

}  // namespace mmk::lp::detail
