#pragma once

// Trigonometric polynomials on T^d as sparse frequency/coefficient maps.
// Pointwise products become frequency convolutions; everything indexed by
// exact integer frequency vectors. Coefficient maps are kept canonical:
// no stored zero coefficients, ordered (lexicographic) iteration.
//
// Coefficient accumulation uses order-independent exact summation, so any
// two evaluation orders of the same term multiset return identical doubles.

#include "mixinglab/intmat.hpp"
#include "mixinglab/numeric.hpp"

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mixinglab {

using Complex = std::complex<double>;

class TrigPolynomial {
public:
    using CoeffMap = std::map<FreqVector, Complex>;

    explicit TrigPolynomial(int dim = 0) : dim_(dim) {
        if (dim < 0) throw std::invalid_argument("TrigPolynomial: negative dimension");
    }

    static TrigPolynomial character(FreqVector m, Complex c = 1.0) {
        TrigPolynomial f(static_cast<int>(m.size()));
        f.set(std::move(m), c);
        return f;
    }

    static TrigPolynomial constant(int dim, Complex c) {
        return character(FreqVector(dim, BigInt(0)), c);
    }

    int dim() const { return dim_; }
    const CoeffMap& coefficients() const { return coeffs_; }
    std::size_t support_size() const { return coeffs_.size(); }
    bool is_zero() const { return coeffs_.empty(); }

    Complex coefficient(const FreqVector& m) const {
        auto it = coeffs_.find(m);
        return it == coeffs_.end() ? Complex(0.0) : it->second;
    }

    Complex mean() const { return coefficient(FreqVector(dim_, BigInt(0))); }

    void set(FreqVector m, Complex c) {
        if (static_cast<int>(m.size()) != dim_)
            throw std::invalid_argument("TrigPolynomial::set: frequency dimension mismatch");
        if (c == Complex(0.0))
            coeffs_.erase(m);
        else
            coeffs_[std::move(m)] = c;
    }

    void add_term(const FreqVector& m, Complex c) { set(m, coefficient(m) + c); }

    TrigPolynomial operator+(const TrigPolynomial& o) const {
        check_dim(o);
        TrigPolynomial r = *this;
        for (const auto& [m, c] : o.coeffs_) r.add_term(m, c);
        return r;
    }

    TrigPolynomial operator-(const TrigPolynomial& o) const {
        check_dim(o);
        TrigPolynomial r = *this;
        for (const auto& [m, c] : o.coeffs_) r.add_term(m, -c);
        return r;
    }

    TrigPolynomial scaled(Complex z) const {
        TrigPolynomial r(dim_);
        if (z == Complex(0.0)) return r;
        for (const auto& [m, c] : coeffs_) r.coeffs_[m] = z * c;
        return r;
    }

    TrigPolynomial conjugate() const {
        TrigPolynomial r(dim_);
        for (const auto& [m, c] : coeffs_) r.coeffs_[negate(m)] = std::conj(c);
        return r;
    }

    // Frequency relabelling f -> sum c_m e_{T m}; with T = dual_action(g)
    // this is the unitary translate of f by the automorphism g.
    TrigPolynomial remapped(const IntMatrix& t) const {
        if (t.dim() != static_cast<std::size_t>(dim_))
            throw std::invalid_argument("TrigPolynomial::remapped: matrix dimension mismatch");
        TrigPolynomial r(dim_);
        for (const auto& [m, c] : coeffs_) {
            FreqVector tm = t * m;
            if (r.coeffs_.count(tm))
                throw std::logic_error("TrigPolynomial::remapped: relabelling not injective");
            r.coeffs_[std::move(tm)] = c;
        }
        return r;
    }

    // Pointwise product = frequency convolution. Each output coefficient is
    // the exactly-rounded sum of its cross terms.
    TrigPolynomial operator*(const TrigPolynomial& o) const {
        check_dim(o);
        std::map<FreqVector, ExactComplexSum> acc;
        for (const auto& [u, cu] : coeffs_)
            for (const auto& [v, cv] : o.coeffs_) acc[add(u, v)].add(cu * cv);
        TrigPolynomial r(dim_);
        for (const auto& [m, s] : acc) {
            Complex c = s.value();
            if (c != Complex(0.0)) r.coeffs_[m] = c;
        }
        return r;
    }

    // <f,g> = integral of f * conj(g) = sum_m c_f(m) conj(c_g(m)).
    Complex inner_product(const TrigPolynomial& o) const {
        check_dim(o);
        ExactComplexSum s;
        for (const auto& [m, c] : coeffs_) {
            auto it = o.coeffs_.find(m);
            if (it != o.coeffs_.end()) s.add(c * std::conj(it->second));
        }
        return s.value();
    }

    double l2_norm_sq() const {
        ExactSum s;
        for (const auto& [m, c] : coeffs_) {
            s.add(c.real() * c.real());
            s.add(c.imag() * c.imag());
        }
        return s.value();
    }

    double l2_norm() const { return std::sqrt(l2_norm_sq()); }

    // Triangle-inequality upper bound sum |c_m| >= ||f||_inf; the exact sup
    // is not computable from finitely many samples.
    double linf_upper_bound() const {
        ExactSum s;
        for (const auto& [m, c] : coeffs_) s.add(std::abs(c));
        return s.value();
    }

    bool operator==(const TrigPolynomial& o) const {
        return dim_ == o.dim_ && coeffs_ == o.coeffs_;
    }

private:
    void check_dim(const TrigPolynomial& o) const {
        if (dim_ != o.dim_)
            throw std::invalid_argument("TrigPolynomial: dimension mismatch between operands");
    }

    int dim_;
    CoeffMap coeffs_;
};

// ---------------------------------------------------------------------------
// JSON wire format: {"dim": d, "terms": [{"freq": [...], "re": x, "im": y}]}
// Frequencies in the serialized form must fit in 64-bit integers; internal
// arithmetic is unbounded but the exchange format keeps plain JSON numbers.
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const TrigPolynomial& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : f.coefficients()) {
        nlohmann::json freq = nlohmann::json::array();
        for (const auto& x : m) {
            if (x > std::numeric_limits<std::int64_t>::max() ||
                x < std::numeric_limits<std::int64_t>::min())
                throw std::range_error("TrigPolynomial serialization: frequency exceeds int64");
            freq.push_back(x.convert_to<std::int64_t>());
        }
        terms.push_back({{"freq", freq}, {"re", c.real()}, {"im", c.imag()}});
    }
    return {{"dim", f.dim()}, {"terms", terms}};
}

inline TrigPolynomial trigpoly_from_json(const nlohmann::json& j) {
    if (!j.contains("dim") || !j.contains("terms"))
        throw std::invalid_argument("TrigPolynomial JSON: required keys 'dim' and 'terms'");
    TrigPolynomial f(j.at("dim").get<int>());
    for (const auto& t : j.at("terms")) {
        FreqVector m;
        for (const auto& x : t.at("freq")) m.emplace_back(x.get<std::int64_t>());
        f.add_term(m, Complex(t.value("re", 0.0), t.value("im", 0.0)));
    }
    return f;
}

}  // namespace mixinglab
