#include "mmk/xor_model.hpp"

#include <sstream>

namespace mmk {

namespace {

Integer pow2i(int e) {
    Integer r = 1;
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return r;
}

Integer shl(const Integer& a, int e) {
    Integer r;
    mpz_mul_2exp(r.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return r;
}

Integer ixor(const Integer& a, const Integer& b) {
    Integer r;
    mpz_xor(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Number of a in [0, A) with bit k set.
Integer ones_below(const Integer& A, int k) {
    Integer block = pow2i(k + 1), half = pow2i(k);
    Integer q = A / block, r = A % block;
    Integer extra = r - half;
    if (extra < 0) extra = 0;
    return q * half + extra;
}

// sum over a < A, b < B of a xor b
Integer xor_block_sum(const Integer& A, const Integer& B) {
    Integer s = 0;
    const std::size_t bits = std::max(mpz_sizeinbase(A.get_mpz_t(), 2), mpz_sizeinbase(B.get_mpz_t(), 2));
    for (int k = 0; k < static_cast<int>(bits); ++k) {
        Integer oa = ones_below(A, k), ob = ones_below(B, k);
        s += shl(oa * (B - ob) + (A - oa) * ob, k);
    }
    return s;
}

// Digit strings of the (at most two) binary representations, first `depth` digits.
std::vector<std::vector<int>> representations(const Dyadic& x, int depth) {
    std::vector<std::vector<int>> out;
    std::vector<int> fin(static_cast<std::size_t>(depth));
    for (int k = 1; k <= depth; ++k) fin[static_cast<std::size_t>(k - 1)] = x.digit(k);
    out.push_back(fin);
    if (x.a != 0 && !x.is_one()) {
        // trailing-ones form: lower the last 1 digit, then ones forever
        Dyadic low(x.a - 1, x.p);
        std::vector<int> alt(static_cast<std::size_t>(depth));
        for (int k = 1; k <= depth; ++k) alt[static_cast<std::size_t>(k - 1)] = k <= x.p ? low.digit(k) : 1;
        out.push_back(alt);
    }
    return out;
}

}  // namespace

Dyadic::Dyadic(Integer num, int prec) : a(std::move(num)), p(prec) {
    if (p < 0) throw DomainError("dyadic precision must be nonnegative");
    if (a < 0 || a > pow2i(p)) throw DomainError("dyadic numerator must lie in [0, 2^p]");
}

Dyadic Dyadic::from_rational(const Rational& q) {
    if (q < 0 || q > 1) throw DomainError("dyadic value must lie in [0,1]");
    Integer den = q.get_den();
    if (mpz_popcount(den.get_mpz_t()) != 1) throw DomainError("denominator of " + mmk::to_string(q) + " is not a power of two");
    int p = static_cast<int>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;
    return Dyadic(q.get_num(), p);
}

Dyadic Dyadic::parse(const std::string& s) { return from_rational(parse_rational(s)); }

Rational Dyadic::value() const {
    Rational q(a, pow2i(p));
    q.canonicalize();
    return q;
}

Dyadic Dyadic::at_precision(int prec) const {
    if (prec < p) throw DomainError("cannot lower dyadic precision");
    return Dyadic(shl(a, prec - p), prec);
}

bool Dyadic::is_one() const { return a == pow2i(p); }

int Dyadic::digit(int k) const {
    if (k < 1) throw DomainError("digits are 1-based");
    if (is_one()) return 1;
    if (k > p) return 0;
    return mpz_tstbit(a.get_mpz_t(), static_cast<mp_bitcnt_t>(p - k));
}

std::string Dyadic::to_string() const { return a.get_str() + "/2^" + std::to_string(p); }

Dyadic xor_dyadic(const Dyadic& x, const Dyadic& y) {
    const int p = std::max(x.p, y.p);
    Dyadic X = x.at_precision(p), Y = y.at_precision(p);
    const Integer one = pow2i(p);
    if (X.is_one() && Y.is_one()) return Dyadic(0, p);
    if (X.is_one()) return Dyadic(one - Y.a, p);
    if (Y.is_one()) return Dyadic(one - X.a, p);
    return Dyadic(ixor(X.a, Y.a), p);
}

// Over a cell of side 2^-p, t xor s is (a xor b) 2^-p plus a rescaled copy of xor
// on the unit square, whose mean is 1/2.
Rational xor_integral(const Dyadic& x, const Dyadic& y) {
    const int p = std::max(x.p, y.p);
    Dyadic X = x.at_precision(p), Y = y.at_precision(p);
    Rational s(xor_block_sum(X.a, Y.a));
    s += Rational(X.a * Y.a) / 2;
    return s / Rational(pow2i(3 * p));
}

Rational dual_f(const Dyadic& x, const Dyadic& y) {
    return xor_integral(x, y) - xor_integral(x, x) / 4 - xor_integral(y, y) / 4;
}

Rational F_xor(const Dyadic& x, const Dyadic& y, const Dyadic& z) {
    return dual_f(x, y) + dual_f(x, z) + dual_f(y, z);
}

bool sierpinski_member(const Dyadic& x, const Dyadic& y, const Dyadic& z, int depth) {
    if (depth < 0) throw DomainError("depth must be nonnegative");
    auto rx = representations(x, depth), ry = representations(y, depth), rz = representations(z, depth);
    for (const auto& a : rx)
        for (const auto& b : ry)
            for (const auto& c : rz) {
                bool ok = true;
                for (int k = 0; k < depth && ok; ++k) ok = (a[static_cast<std::size_t>(k)] ^ b[static_cast<std::size_t>(k)] ^ c[static_cast<std::size_t>(k)]) == 0;
                if (ok) return true;
            }
    return false;
}

DiscreteMeasure xor_coupling(int n) {
    if (n < 0 || n > 10) throw DomainError("xor_coupling resolution must lie in [0,10]");
    const int N = 1 << n;
    auto mu = DiscreteMeasure::zero(IndexSet{1, 2, 3}, {N, N, N});
    const Rational w = pow2(-2L * n);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) mu.at({i, j, i ^ j}) = w;
    for (const auto& alpha : subsets(3, 2))
        if (project(mu, alpha) != DiscreteMeasure::uniform(alpha, {N, N}))
            throw InvariantError("xor coupling projection {" + alpha.key() + "} is not uniform");
    return mu;
}

XorInstance xor_instance(int n) {
    if (n < 0 || n > 6) throw DomainError("xor instance resolution must lie in [0,6]");
    const int N = 1 << n;
    XorInstance inst;
    inst.n = n;
    inst.family.n = 3;
    inst.family.k = 2;
    inst.family.sizes = {N, N, N};
    for (const auto& alpha : subsets(3, 2)) inst.family.marginals.emplace(alpha, DiscreteMeasure::uniform(alpha, {N, N}));
    inst.cost = CostGrid::from_function({N, N, N}, [](const std::vector<int>& x) { return Rational(x[0] * x[1] * x[2]); });
    return inst;
}

std::string sierpinski_slice_pgm(int depth, const Dyadic& z) {
    if (depth < 0 || depth > 12) throw DomainError("slice depth must lie in [0,12]");
    const int N = 1 << depth;
    std::vector<int> prefixes;
    for (const auto& r : representations(z, depth)) {
        int v = 0;
        for (int d : r) v = 2 * v + d;
        prefixes.push_back(v);
    }
    std::ostringstream os;
    os << "P2\n" << N << ' ' << N << "\n255\n";
    for (int row = 0; row < N; ++row) {
        const int j = N - 1 - row;
        for (int i = 0; i < N; ++i) {
            bool hit = false;
            for (int k : prefixes) hit = hit || (i ^ j) == k;
            os << (hit ? 0 : 255) << (i + 1 < N ? ' ' : '\n');
        }
    }
    return os.str();
}

}  // namespace mmk
