#pragma once

#include <string>
#include <vector>

#include "mmk/measures.hpp"
#include "mmk/potentials.hpp"
#include "mmk/rational.hpp"

namespace mmk {

// a / 2^p with 0 <= a <= 2^p. Not reduced, so the digit string stays explicit.
struct Dyadic {
    Integer a = 0;
    int p = 0;

    Dyadic() = default;
    Dyadic(Integer num, int prec);

    static Dyadic from_rational(const Rational& q);  // DomainError unless q in [0,1] has a 2-power denominator
    static Dyadic parse(const std::string& s);
    Rational value() const;
    Dyadic at_precision(int prec) const;  // prec >= p
    bool is_one() const;
    // k-th binary digit, 1-based, of the finite expansion (or of 0.111... for 1).
    int digit(int k) const;
    std::string to_string() const;
};

// Digitwise xor; 1 is read as 0.111..., so 1 xor y = 1 - y.
Dyadic xor_dyadic(const Dyadic& x, const Dyadic& y);

// Integral of t xor s over [0,x] x [0,y].
Rational xor_integral(const Dyadic& x, const Dyadic& y);

// I(x,y) - I(x,x)/4 - I(y,y)/4
Rational dual_f(const Dyadic& x, const Dyadic& y);

Rational F_xor(const Dyadic& x, const Dyadic& y, const Dyadic& z);

// Some choice of binary representations has x_k xor y_k xor z_k = 0 for k <= depth.
bool sierpinski_member(const Dyadic& x, const Dyadic& y, const Dyadic& z, int depth);

// Weight 4^-n on (i, j, i xor j).
DiscreteMeasure xor_coupling(int n);

struct XorInstance {
    int n = 0;
    MarginalFamily family;
    CostGrid cost;  // i * j * k on integer indices
};

XorInstance xor_instance(int n);

// Slice of S at height z on a 2^depth x 2^depth grid: the pixel of cell (i, j)
// is black when i xor j equals the first depth digits of some binary
// representation of z. Row 0 holds the top cells (y near 1).
std::string sierpinski_slice_pgm(int depth, const Dyadic& z);

}  // namespace mmk
