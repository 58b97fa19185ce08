#pragma once

// The exactly computable mixing model: SL(2,Z) |x Z^2 embedded in SL(3,Z),
// acting on T^3 by automorphisms. Group elements are pairs (A, v) with the
// semidirect law (A,v)(B,w) = (AB, Aw + v); the 3x3 embedding [[A,v],[0,1]]
// realizes the pair as a lattice automorphism. Characters e_m transform by
// the dual action m -> (g^{-1})^T m, which fixes the line (0,0,m3).

#include "mixinglab/intmat.hpp"
#include "mixinglab/numeric.hpp"
#include "mixinglab/repdata.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mixinglab {

class AffineLatticeElement {
public:
    AffineLatticeElement()
        : a_{BigInt(1), BigInt(0), BigInt(0), BigInt(1)}, v_{BigInt(0), BigInt(0)} {}

    AffineLatticeElement(std::array<BigInt, 4> a, std::array<BigInt, 2> v)
        : a_(std::move(a)), v_(std::move(v)) {
        if (det() != 1)
            throw std::invalid_argument("AffineLatticeElement: linear part must have det 1");
    }

    static AffineLatticeElement from_ints(long a11, long a12, long a21, long a22, long v1,
                                          long v2) {
        return AffineLatticeElement({BigInt(a11), BigInt(a12), BigInt(a21), BigInt(a22)},
                                    {BigInt(v1), BigInt(v2)});
    }

    const std::array<BigInt, 4>& linear() const { return a_; }
    const std::array<BigInt, 2>& translation() const { return v_; }

    BigInt det() const { return a_[0] * a_[3] - a_[1] * a_[2]; }

    bool is_identity() const {
        return a_[0] == 1 && a_[1] == 0 && a_[2] == 0 && a_[3] == 1 && v_[0] == 0 && v_[1] == 0;
    }

    AffineLatticeElement compose(const AffineLatticeElement& o) const {
        std::array<BigInt, 4> a{a_[0] * o.a_[0] + a_[1] * o.a_[2],
                                a_[0] * o.a_[1] + a_[1] * o.a_[3],
                                a_[2] * o.a_[0] + a_[3] * o.a_[2],
                                a_[2] * o.a_[1] + a_[3] * o.a_[3]};
        std::array<BigInt, 2> v{a_[0] * o.v_[0] + a_[1] * o.v_[1] + v_[0],
                                a_[2] * o.v_[0] + a_[3] * o.v_[1] + v_[1]};
        return AffineLatticeElement(std::move(a), std::move(v));
    }

    AffineLatticeElement invert() const {
        // det 1: A^{-1} = [[d,-b],[-c,a]]; (A,v)^{-1} = (A^{-1}, -A^{-1} v).
        std::array<BigInt, 4> ai{a_[3], -a_[1], -a_[2], a_[0]};
        std::array<BigInt, 2> vi{-(ai[0] * v_[0] + ai[1] * v_[1]),
                                 -(ai[2] * v_[0] + ai[3] * v_[1])};
        return AffineLatticeElement(std::move(ai), std::move(vi));
    }

    AffineLatticeElement pow(long e) const {
        AffineLatticeElement base = e < 0 ? invert() : *this;
        unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
        AffineLatticeElement acc;
        while (n) {
            if (n & 1) acc = acc.compose(base);
            base = base.compose(base);
            n >>= 1;
        }
        return acc;
    }

    IntMatrix embedding() const {
        IntMatrix m(3);
        m.at(0, 0) = a_[0];
        m.at(0, 1) = a_[1];
        m.at(0, 2) = v_[0];
        m.at(1, 0) = a_[2];
        m.at(1, 1) = a_[3];
        m.at(1, 2) = v_[1];
        m.at(2, 2) = 1;
        return m;
    }

    bool operator==(const AffineLatticeElement& o) const { return a_ == o.a_ && v_ == o.v_; }

private:
    std::array<BigInt, 4> a_;
    std::array<BigInt, 2> v_;
};

// m -> (g^{-1})^T m on Z^3; fixes (0,0,m3) for every g.
inline FreqVector frequency_action(const AffineLatticeElement& g, const FreqVector& m) {
    if (m.size() != 3) throw std::invalid_argument("frequency_action: Z^3 frequency required");
    return dual_action(g.embedding()) * m;
}

struct CartanProxy {
    double sigma1 = 1.0;  // largest singular value of the linear part
    double sigma2 = 1.0;  // = 1/sigma1 for det-1 matrices

    DiagonalElement chamber_element() const {
        return DiagonalElement::sl2_cartan(Rational(sigma1));
    }
};

// Singular values of the 2x2 integer linear part, by the closed-form
// quadratic for the eigenvalues of A^T A (trace T, determinant 1):
// sigma1^2 = (T + sqrt(T^2 - 4)) / 2.
inline CartanProxy cartan_proxy(const AffineLatticeElement& g) {
    const auto& a = g.linear();
    BigInt t_big = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
    double t = to_double(t_big);
    CartanProxy p;
    if (t <= 2.0) {
        p.sigma1 = 1.0;  // orthogonal linear part
        p.sigma2 = 1.0;
        return p;
    }
    double disc = std::sqrt(t - 2.0) * std::sqrt(t + 2.0);
    p.sigma1 = std::sqrt((t + disc) / 2.0);
    p.sigma2 = 1.0 / p.sigma1;
    return p;
}

inline bool is_hyperbolic(const AffineLatticeElement& g) {
    // |trace| > 2 for the SL(2,Z) part <=> sigma1 of every power grows.
    BigInt tr = g.linear()[0] + g.linear()[3];
    return abs_big(tr) > 2;
}

}  // namespace mixinglab
