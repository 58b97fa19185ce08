#pragma once

// Exact scalar types shared across the library.
//
// Frequencies and lattice matrix entries use arbitrary-precision integers:
// dual actions of hyperbolic matrices grow entries exponentially in the
// power, so fixed-width integers would silently wrap in longer sweeps.
// Diagonal group elements carry exact rationals so that character identities
// can be asserted without tolerance.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mixinglab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

inline BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

inline Rational rational_pow(const Rational& base, long e) {
    if (base == 0) {
        if (e <= 0) throw std::domain_error("rational_pow: zero base with nonpositive exponent");
        return 0;
    }
    Rational acc = 1;
    Rational b = e < 0 ? Rational(denominator(base), numerator(base)) : base;
    for (long n = e < 0 ? -e : e; n > 0; n >>= 1) {
        if (n & 1) acc *= b;
        b *= b;
    }
    return acc;
}

// p-adic valuation of a nonzero rational: v(n/d) = v(n) - v(d).
inline long padic_valuation(const Rational& x, const BigInt& p) {
    if (x == 0) throw std::domain_error("padic_valuation: zero input");
    if (p < 2) throw std::invalid_argument("padic_valuation: p must be >= 2");
    auto val = [&p](BigInt n) {
        n = abs_big(n);
        long v = 0;
        while (n % p == 0) { n /= p; ++v; }
        return v;
    };
    return val(numerator(x)) - val(denominator(x));
}

// --------------------------------------------------------------------------
// Order-independent exact summation of doubles (Shewchuk expansions).
//
// Coefficient accumulations in the correlation engine must not depend on
// iteration order: the same multiset of terms has to produce the same
// rounded double after any permutation (frequency relabelling permutes the
// natural traversal order). The accumulator keeps the running sum as a
// nonoverlapping expansion and rounds exactly once at the end.
// --------------------------------------------------------------------------
class ExactSum {
public:
    void add(double x) {
        if (x == 0.0) return;
        std::size_t out = 0;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            double y = parts_[i];
            double hi = x + y;
            double bv = hi - x;
            double err = (x - (hi - bv)) + (y - bv);
            if (err != 0.0) parts_[out++] = err;
            x = hi;
        }
        parts_.resize(out);
        if (x != 0.0) parts_.push_back(x);
    }

    double value() const {
        double s = 0.0;
        for (double p : parts_) s += p;  // ascending magnitude: final rounding exact
        return s;
    }

    bool empty() const { return parts_.empty(); }

private:
    std::vector<double> parts_;
};

class ExactComplexSum {
public:
    void add(std::complex<double> z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    ExactSum re_, im_;
};

// splitmix64: seed derivation for independent substreams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(master ^ (a * 0x9e3779b97f4a7c15ULL)) ^ b);
}

}  // namespace mixinglab
