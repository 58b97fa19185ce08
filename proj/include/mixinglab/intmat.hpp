#pragma once

// Dense integer vectors/matrices over BigInt. Frequency vectors, lattice
// automorphisms and their dual (inverse-transpose) actions all live here.

#include "mixinglab/numeric.hpp"

#include <cstddef>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixinglab {

using FreqVector = std::vector<BigInt>;

inline BigInt max_norm(const FreqVector& m) {
    BigInt r = 0;
    for (const auto& x : m) {
        BigInt a = abs_big(x);
        if (a > r) r = a;
    }
    return r;
}

inline bool is_zero(const FreqVector& m) {
    for (const auto& x : m)
        if (x != 0) return false;
    return true;
}

inline FreqVector add(const FreqVector& a, const FreqVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("FreqVector add: dimension mismatch");
    FreqVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline FreqVector negate(const FreqVector& a) {
    FreqVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline std::string freq_to_string(const FreqVector& m) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) os << ",";
        os << m[i];
    }
    os << ")";
    return os.str();
}

// Square integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() : n_(0) {}
    explicit IntMatrix(std::size_t n) : n_(n), a_(n * n, 0) {}
    IntMatrix(std::size_t n, std::vector<BigInt> entries) : n_(n), a_(std::move(entries)) {
        if (a_.size() != n * n) throw std::invalid_argument("IntMatrix: entry count mismatch");
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t dim() const { return n_; }
    BigInt& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    bool operator==(const IntMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }

    IntMatrix operator*(const IntMatrix& o) const {
        if (n_ != o.n_) throw std::invalid_argument("IntMatrix mul: dimension mismatch");
        IntMatrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                const BigInt& aik = at(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < n_; ++j) r.at(i, j) += aik * o.at(k, j);
            }
        return r;
    }

    FreqVector operator*(const FreqVector& v) const {
        if (v.size() != n_) throw std::invalid_argument("IntMatrix apply: dimension mismatch");
        FreqVector r(n_, BigInt(0));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (at(i, j) != 0) r[i] += at(i, j) * v[j];
        return r;
    }

    IntMatrix transpose() const {
        IntMatrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    BigInt det() const {
        // Cofactor expansion; matrices here are tiny (d <= 5).
        if (n_ == 0) return 1;
        if (n_ == 1) return at(0, 0);
        if (n_ == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
        BigInt d = 0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (at(0, j) == 0) continue;
            IntMatrix minor(n_ - 1);
            for (std::size_t r = 1; r < n_; ++r) {
                std::size_t cc = 0;
                for (std::size_t c = 0; c < n_; ++c) {
                    if (c == j) continue;
                    minor.at(r - 1, cc++) = at(r, c);
                }
            }
            BigInt term = at(0, j) * minor.det();
            d += (j % 2 == 0) ? term : -term;
        }
        return d;
    }

    bool is_unimodular() const {
        BigInt d = det();
        return d == 1 || d == -1;
    }

    // Exact inverse; requires det = +-1 (adjugate divided by determinant).
    IntMatrix inverse_unimodular() const {
        BigInt d = det();
        if (d != 1 && d != -1)
            throw std::invalid_argument("IntMatrix inverse: matrix is not unimodular");
        IntMatrix adj(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                IntMatrix minor(n_ - 1);
                for (std::size_t r = 0, rr = 0; r < n_; ++r) {
                    if (r == i) continue;
                    for (std::size_t c = 0, cc = 0; c < n_; ++c) {
                        if (c == j) continue;
                        minor.at(rr, cc++) = at(r, c);
                    }
                    ++rr;
                }
                BigInt cof = minor.det();
                if ((i + j) % 2 == 1) cof = -cof;
                adj.at(j, i) = cof;  // adjugate transposes the cofactor grid
            }
        if (d == -1)
            for (auto& x : adj.a_) x = -x;
        return adj;
    }

    IntMatrix pow(unsigned long e) const {
        IntMatrix acc = identity(n_);
        IntMatrix b = *this;
        while (e) {
            if (e & 1) acc = acc * b;
            b = b * b;
            e >>= 1;
        }
        return acc;
    }

private:
    std::size_t n_;
    std::vector<BigInt> a_;
};

// Dual (frequency-space) action of a lattice automorphism g: m -> (g^{-1})^T m.
// With this convention the translate g.e_m of a character is e_{dual_action(g) m}.
inline IntMatrix dual_action(const IntMatrix& g) { return g.inverse_unimodular().transpose(); }

}  // namespace mixinglab
