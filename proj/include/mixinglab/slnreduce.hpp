#pragma once

// Reduction machinery from SL(n) to the affine SL(2) subgroup: the block
// embedding of SL(2,k) |x k^2 at row/column indices (j, l), the splitting of
// a diagonal element into a chamber factor (b at j, b^{-1} at l) times a
// factor centralizing the embedded compact (equal entries at j and l), and
// root-pair selection / one-parameter decomposition for type A.
//
// Archimedean splits exist in two flavors: floating point (always defined,
// verified to 1e-12 by callers) and exact rational (defined when a_j a_l is
// a perfect square; used by property tests). Valuation mode splits exponent
// vectors; an odd exponent sum triggers the half-integer parity compensation
// which the split records in a flag.

#include "mixinglab/numeric.hpp"
#include "mixinglab/repdata.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mixinglab {

// Minimal dense square matrix over an exact or floating scalar.
template <class S>
class Matrix {
public:
    explicit Matrix(std::size_t n = 0) : n_(n), a_(n * n, S(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = S(1);
        return m;
    }

    std::size_t dim() const { return n_; }
    S& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const S& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    Matrix operator*(const Matrix& o) const {
        if (n_ != o.n_) throw std::invalid_argument("Matrix mul: dimension mismatch");
        Matrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                if (at(i, k) == S(0)) continue;
                for (std::size_t j = 0; j < n_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
            }
        return r;
    }

    bool operator==(const Matrix& o) const { return n_ == o.n_ && a_ == o.a_; }

private:
    std::size_t n_;
    std::vector<S> a_;
};

template <class S>
struct AffineSl2 {
    S a{1}, b{0}, c{0}, d{1};  // SL(2) part, ad - bc = 1
    S x{0}, y{0};              // translation part

    AffineSl2 compose(const AffineSl2& o) const {
        AffineSl2 r;
        r.a = a * o.a + b * o.c;
        r.b = a * o.b + b * o.d;
        r.c = c * o.a + d * o.c;
        r.d = c * o.b + d * o.d;
        r.x = a * o.x + b * o.y + x;
        r.y = c * o.x + d * o.y + y;
        return r;
    }
};

// Embed SL(2,k) |x k^2 into SL(n,k) with the SL(2) block at rows/columns
// (j, l) and the translation column at l+1 (both 1-based). When l = n there
// is no room for the translation column; only the SL(2) part embeds and a
// nonzero translation is rejected.
template <class S>
Matrix<S> embed_affine_sl2(std::size_t n, std::size_t j, std::size_t l,
                           const AffineSl2<S>& e) {
    if (!(1 <= j && j < l && l <= n))
        throw std::invalid_argument("embed_affine_sl2: require 1 <= j < l <= n");
    if (e.a * e.d - e.b * e.c != S(1))
        throw std::invalid_argument("embed_affine_sl2: SL(2) part must have determinant 1");
    Matrix<S> m = Matrix<S>::identity(n);
    std::size_t J = j - 1, L = l - 1;
    m.at(J, J) = e.a;
    m.at(J, L) = e.b;
    m.at(L, J) = e.c;
    m.at(L, L) = e.d;
    if (l < n) {
        std::size_t T = l;  // 0-based index of column l+1
        m.at(J, T) = e.x;
        m.at(L, T) = e.y;
    } else if (e.x != S(0) || e.y != S(0)) {
        throw std::invalid_argument(
            "embed_affine_sl2: l = n leaves no translation column; only the SL(2) part embeds");
    }
    return m;
}

template <class S>
struct DiagonalSplit {
    std::vector<S> chamber;       // b at j, b^{-1} at l, 1 elsewhere
    std::vector<S> centralizing;  // c at j and l, original entries elsewhere
    std::size_t j = 0, l = 0;     // 1-based block indices
    bool parity_compensated = false;
};

// Floating-point split: c = sqrt(a_j a_l), b = a_j / c.
inline DiagonalSplit<double> split_diagonal(const std::vector<double>& entries, std::size_t j,
                                            std::size_t l) {
    if (!(1 <= j && j < l && l <= entries.size()))
        throw std::invalid_argument("split_diagonal: require 1 <= j < l <= n");
    for (double e : entries)
        if (!(e > 0)) throw std::invalid_argument("split_diagonal: entries must be positive");
    DiagonalSplit<double> out;
    out.j = j;
    out.l = l;
    double aj = entries[j - 1], al = entries[l - 1];
    double c = std::sqrt(aj * al);
    double b = aj / c;
    out.chamber.assign(entries.size(), 1.0);
    out.chamber[j - 1] = b;
    out.chamber[l - 1] = 1.0 / b;
    out.centralizing = entries;
    out.centralizing[j - 1] = c;
    out.centralizing[l - 1] = c;
    return out;
}

inline std::optional<Rational> exact_sqrt(const Rational& x) {
    if (x < 0) return std::nullopt;
    BigInt n = numerator(x), d = denominator(x);
    BigInt sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
    if (sn * sn != n || sd * sd != d) return std::nullopt;
    return Rational(sn, sd);
}

// Exact split, defined when a_j a_l is a perfect rational square.
inline DiagonalSplit<Rational> split_diagonal_exact(const DiagonalElement& a, std::size_t j,
                                                    std::size_t l) {
    const auto& entries = a.entries();
    if (!(1 <= j && j < l && l <= entries.size()))
        throw std::invalid_argument("split_diagonal_exact: require 1 <= j < l <= n");
    auto c = exact_sqrt(entries[j - 1] * entries[l - 1]);
    if (!c)
        throw std::domain_error(
            "split_diagonal_exact: a_j a_l is not a perfect square; use the floating split");
    DiagonalSplit<Rational> out;
    out.j = j;
    out.l = l;
    Rational b = entries[j - 1] / *c;
    out.chamber.assign(entries.size(), Rational(1));
    out.chamber[j - 1] = b;
    out.chamber[l - 1] = Rational(denominator(b), numerator(b));
    out.centralizing = entries;
    out.centralizing[j - 1] = *c;
    out.centralizing[l - 1] = *c;
    return out;
}

// Valuation-mode split on exponent vectors. Even exponent sum: c-exponent
// (n_j + n_l)/2 at both slots. Odd sum: compensate with a q^{1/2} pair so all
// stored exponents stay integral; the centralizing part's j/l entries then
// differ by one exponent and the flag records the adjustment.
inline DiagonalSplit<BigInt> split_diagonal_valuation(const DiagonalElement& a, std::size_t j,
                                                      std::size_t l) {
    const auto& vals = a.valuations();
    if (!(1 <= j && j < l && l <= vals.size()))
        throw std::invalid_argument("split_diagonal_valuation: require 1 <= j < l <= n");
    DiagonalSplit<BigInt> out;
    out.j = j;
    out.l = l;
    BigInt nj = vals[j - 1], nl = vals[l - 1];
    out.chamber.assign(vals.size(), BigInt(0));
    out.centralizing = vals;
    if ((nj + nl) % 2 == 0) {
        BigInt cexp = (nj + nl) / 2;
        BigInt bexp = nj - cexp;
        out.chamber[j - 1] = bexp;
        out.chamber[l - 1] = -bexp;
        out.centralizing[j - 1] = cexp;
        out.centralizing[l - 1] = cexp;
    } else {
        out.parity_compensated = true;
        BigInt bexp2 = nj - nl;  // 2 * b-exponent, odd
        BigInt bplus = (bexp2 + 1) / 2;
        out.chamber[j - 1] = bplus;
        out.chamber[l - 1] = -bplus;
        out.centralizing[j - 1] = (nj + nl - 1) / 2;
        out.centralizing[l - 1] = (nj + nl + 1) / 2;
    }
    return out;
}

// Adjacent simple root in the A_{n-1} Dynkin chain; deterministic lower
// index when both neighbors exist. Rank-1 groups admit no such pair. Only
// type A is handled; the rank-2 symplectic branch is out of scope here.
inline std::size_t select_root_pair(std::size_t n, std::size_t root_index) {
    if (n < 3)
        throw std::invalid_argument("select_root_pair: rank >= 2 required (n >= 3)");
    if (!(1 <= root_index && root_index <= n - 1))
        throw std::invalid_argument("select_root_pair: simple root index out of range");
    return root_index > 1 ? root_index - 1 : root_index + 1;
}

template <class S>
struct TorusDecomposition {
    std::vector<S> kernel_part;  // root evaluates to 1 here
    std::vector<S> root_part;    // t at j, t^{-1} at l, 1 elsewhere
};

// Decompose a positive diagonal along the root e_j - e_l: the root part is
// diag(.., t, .., t^{-1}, ..) with t = sqrt(a_j / a_l), and the kernel part
// is the entrywise quotient.
inline TorusDecomposition<double> decompose_torus(const std::vector<double>& entries,
                                                  const WeightVector& root) {
    if (root.rank() != entries.size())
        throw std::invalid_argument("decompose_torus: rank mismatch");
    std::size_t j = entries.size(), l = entries.size();
    int plus = 0, minus = 0;
    for (std::size_t i = 0; i < root.exponents.size(); ++i) {
        if (root.exponents[i] == 1) {
            j = i;
            ++plus;
        } else if (root.exponents[i] == -1) {
            l = i;
            ++minus;
        } else if (root.exponents[i] != 0) {
            throw std::invalid_argument("decompose_torus: root must be of the form e_j - e_l");
        }
    }
    if (plus != 1 || minus != 1)
        throw std::invalid_argument("decompose_torus: root must be of the form e_j - e_l");
    for (double e : entries)
        if (!(e > 0)) throw std::invalid_argument("decompose_torus: entries must be positive");

    TorusDecomposition<double> out;
    double t = std::sqrt(entries[j] / entries[l]);
    out.root_part.assign(entries.size(), 1.0);
    out.root_part[j] = t;
    out.root_part[l] = 1.0 / t;
    out.kernel_part = entries;
    out.kernel_part[j] /= t;
    out.kernel_part[l] *= t;
    return out;
}

}  // namespace mixinglab
