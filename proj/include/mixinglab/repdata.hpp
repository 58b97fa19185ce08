#pragma once

// Weight data for diagonal torus actions: characters, highest/lowest weight
// bookkeeping, the representation decay exponent, the two weight-sum factors
// whose product drives every bound, element ordering and the divergence
// condition on acting tuples.
//
// Diagonal elements come in two modes. Archimedean elements store exact
// rationals (entries of diag(a_1..a_d), product 1). Valuation elements store
// the integer exponents n_i of a uniformizer q, so diag(q^{n_1}..q^{n_d});
// every quantity in the bounds depends only on |chi(a)|, which is a power of
// the residue cardinality, so no p-adic field arithmetic is needed.

#include "mixinglab/numeric.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixinglab {

struct WeightVector {
    std::vector<long> exponents;  // fixed gauge, no implicit normalization

    std::size_t rank() const { return exponents.size(); }
    bool operator==(const WeightVector& o) const { return exponents == o.exponents; }
};

inline WeightVector weight_difference(const WeightVector& a, const WeightVector& b) {
    if (a.rank() != b.rank()) throw std::invalid_argument("weight_difference: rank mismatch");
    WeightVector r = a;
    for (std::size_t i = 0; i < r.exponents.size(); ++i) r.exponents[i] -= b.exponents[i];
    return r;
}

class DiagonalElement {
public:
    enum class Mode { Archimedean, Valuation };

    static DiagonalElement archimedean(std::vector<Rational> entries) {
        Rational prod = 1;
        for (const auto& e : entries) {
            if (e <= 0) throw std::invalid_argument("DiagonalElement: entries must be positive");
            prod *= e;
        }
        if (prod != 1) throw std::invalid_argument("DiagonalElement: entries must multiply to 1");
        DiagonalElement d;
        d.mode_ = Mode::Archimedean;
        d.entries_ = std::move(entries);
        return d;
    }

    // diag(t, 1/t); the reciprocal is formed in exact arithmetic so the
    // determinant constraint holds even when t came from a double.
    static DiagonalElement sl2_cartan(const Rational& t) {
        if (t <= 0) throw std::invalid_argument("sl2_cartan: t must be positive");
        return archimedean({t, Rational(denominator(t), numerator(t))});
    }

    static DiagonalElement valuation(std::vector<BigInt> exps) {
        BigInt s = 0;
        for (const auto& e : exps) s += e;
        if (s != 0) throw std::invalid_argument("DiagonalElement: valuations must sum to 0");
        DiagonalElement d;
        d.mode_ = Mode::Valuation;
        d.valuations_ = std::move(exps);
        return d;
    }

    static DiagonalElement identity(std::size_t rank, Mode mode = Mode::Archimedean) {
        if (mode == Mode::Archimedean)
            return archimedean(std::vector<Rational>(rank, Rational(1)));
        return valuation(std::vector<BigInt>(rank, BigInt(0)));
    }

    Mode mode() const { return mode_; }
    std::size_t rank() const {
        return mode_ == Mode::Archimedean ? entries_.size() : valuations_.size();
    }
    const std::vector<Rational>& entries() const {
        require_mode(Mode::Archimedean);
        return entries_;
    }
    const std::vector<BigInt>& valuations() const {
        require_mode(Mode::Valuation);
        return valuations_;
    }

    bool is_identity() const {
        if (mode_ == Mode::Archimedean)
            return std::all_of(entries_.begin(), entries_.end(),
                               [](const Rational& e) { return e == 1; });
        return std::all_of(valuations_.begin(), valuations_.end(),
                           [](const BigInt& v) { return v == 0; });
    }

    DiagonalElement operator*(const DiagonalElement& o) const {
        check_compatible(o);
        if (mode_ == Mode::Archimedean) {
            std::vector<Rational> e(entries_);
            for (std::size_t i = 0; i < e.size(); ++i) e[i] *= o.entries_[i];
            return archimedean(std::move(e));
        }
        std::vector<BigInt> v(valuations_);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.valuations_[i];
        return valuation(std::move(v));
    }

    DiagonalElement inverse() const {
        if (mode_ == Mode::Archimedean) {
            std::vector<Rational> e;
            e.reserve(entries_.size());
            for (const auto& x : entries_) e.emplace_back(denominator(x), numerator(x));
            return archimedean(std::move(e));
        }
        std::vector<BigInt> v;
        v.reserve(valuations_.size());
        for (const auto& x : valuations_) v.push_back(-x);
        return valuation(std::move(v));
    }

    DiagonalElement divide(const DiagonalElement& o) const { return *this * o.inverse(); }

    // D+ membership for the standard simple-root ordering of SL(d):
    // archimedean entries nonincreasing, valuations nondecreasing.
    bool in_positive_chamber() const {
        if (mode_ == Mode::Archimedean) {
            for (std::size_t i = 1; i < entries_.size(); ++i)
                if (entries_[i - 1] < entries_[i]) return false;
            return true;
        }
        for (std::size_t i = 1; i < valuations_.size(); ++i)
            if (valuations_[i - 1] > valuations_[i]) return false;
        return true;
    }

private:
    void require_mode(Mode m) const {
        if (mode_ != m) throw std::logic_error("DiagonalElement: wrong mode for this accessor");
    }
    void check_compatible(const DiagonalElement& o) const {
        if (mode_ != o.mode_ || rank() != o.rank())
            throw std::invalid_argument("DiagonalElement: incompatible operands");
    }

    Mode mode_ = Mode::Archimedean;
    std::vector<Rational> entries_;
    std::vector<BigInt> valuations_;
};

// chi_w(a) = prod_i a_i^{w_i}, exact.
inline Rational evaluate_weight(const WeightVector& w, const DiagonalElement& a) {
    if (w.rank() != a.rank()) throw std::invalid_argument("evaluate_weight: rank mismatch");
    if (a.mode() != DiagonalElement::Mode::Archimedean)
        throw std::invalid_argument("evaluate_weight: archimedean element required");
    Rational r = 1;
    for (std::size_t i = 0; i < w.exponents.size(); ++i)
        r *= rational_pow(a.entries()[i], w.exponents[i]);
    return r;
}

// Valuation of chi_w(a) = q^{sum_i w_i n_i}; |value| = (residue cardinality)^{-result}.
inline BigInt evaluate_weight_valuation(const WeightVector& w, const DiagonalElement& a) {
    if (w.rank() != a.rank()) throw std::invalid_argument("evaluate_weight: rank mismatch");
    if (a.mode() != DiagonalElement::Mode::Valuation)
        throw std::invalid_argument("evaluate_weight_valuation: valuation element required");
    BigInt s = 0;
    for (std::size_t i = 0; i < w.exponents.size(); ++i) s += w.exponents[i] * a.valuations()[i];
    return s;
}

// |chi_w(a)| as an exact rational. In valuation mode the residue cardinality
// must be supplied; |q^n| = Q^{-n}.
inline Rational weight_abs(const WeightVector& w, const DiagonalElement& a,
                           const BigInt& residue_cardinality = 0) {
    if (a.mode() == DiagonalElement::Mode::Archimedean) return evaluate_weight(w, a);
    if (residue_cardinality < 2)
        throw std::invalid_argument("weight_abs: residue cardinality >= 2 required");
    BigInt n = evaluate_weight_valuation(w, a);
    Rational q(residue_cardinality, 1);
    return rational_pow(q, -n.convert_to<long>());
}

struct RepresentationData {
    std::string name;  // "standard" | "adjoint" | custom label
    std::vector<WeightVector> weights;
    std::vector<int> weight_dims;
    WeightVector highest;
    WeightVector lowest;

    std::size_t weight_count() const { return weights.size(); }
    int highest_dim() const {
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (weights[i] == highest) return weight_dims[i];
        throw std::logic_error("RepresentationData: highest weight not in weight list");
    }
    void validate() const {
        if (weights.size() != weight_dims.size())
            throw std::invalid_argument("RepresentationData: dims/weights length mismatch");
        auto member = [this](const WeightVector& w) {
            return std::find(weights.begin(), weights.end(), w) != weights.end();
        };
        if (!member(highest) || !member(lowest))
            throw std::invalid_argument(
                "RepresentationData: designated extreme weights must be listed");
        for (int d : weight_dims)
            if (d <= 0) throw std::invalid_argument("RepresentationData: dims must be positive");
    }

    static RepresentationData standard_sl2() {
        RepresentationData r;
        r.name = "standard";
        r.weights = {WeightVector{{1, 0}}, WeightVector{{0, 1}}};
        r.weight_dims = {1, 1};
        r.highest = WeightVector{{1, 0}};
        r.lowest = WeightVector{{0, 1}};
        return r;
    }

    static RepresentationData adjoint_sl2() {
        RepresentationData r;
        r.name = "adjoint";
        r.weights = {WeightVector{{1, -1}}, WeightVector{{0, 0}}, WeightVector{{-1, 1}}};
        r.weight_dims = {1, 1, 1};
        r.highest = WeightVector{{1, -1}};
        r.lowest = WeightVector{{-1, 1}};
        return r;
    }
};

// Decay exponent of the representation: (1/3)^{#weights-1} when the highest
// weight space has dimension > 1, otherwise (1/3)^{#weights-2}. The optional
// override substitutes a caller-chosen exponent; reports must echo the value
// actually used.
inline Rational decay_exponent(const RepresentationData& rep,
                               const std::optional<Rational>& override_value = std::nullopt) {
    if (override_value) return *override_value;
    rep.validate();
    if (rep.weight_count() < 2)
        throw std::invalid_argument("decay_exponent: representation has fewer than 2 weights");
    long k = static_cast<long>(rep.weight_count());
    long e = rep.highest_dim() > 1 ? k - 1 : k - 2;
    return rational_pow(Rational(1, 3), e);
}

enum class FirstSumRange {
    FromZero,  // i = 0..k-1, includes the identity slot (default)
    FromOne,   // i = 1..k-1
};

struct RatioFactors {
    Rational highest_sum;     // |sum_i lambda(a^k / a^i)|
    Rational lowest_inv_sum;  // |sum_i rho(a^i)^{-1}|
    Rational product() const { return highest_sum * lowest_inv_sum; }
    double product_double() const { return to_double(highest_sum * lowest_inv_sum); }
};

namespace detail {

// Exact absolute value of sum_j q^{v_j} in the appropriate field: rational
// absolute value in the archimedean case, Q^{-v_p(sum)} in valuation mode.
inline Rational abs_of_character_sum(const std::vector<Rational>& arch_terms) {
    Rational s = 0;
    for (const auto& t : arch_terms) s += t;
    return s < 0 ? Rational(-s) : s;
}

inline Rational abs_of_valuation_sum(const std::vector<BigInt>& vals,
                                     const BigInt& residue_cardinality) {
    if (residue_cardinality < 2)
        throw std::invalid_argument("ratio_factors: residue cardinality >= 2 required");
    Rational s = 0;
    Rational q(residue_cardinality, 1);
    for (const auto& v : vals) s += rational_pow(q, v.convert_to<long>());
    if (s == 0) return 0;
    long v = padic_valuation(s, residue_cardinality);
    return rational_pow(q, -v);
}

inline void check_tuple(const std::vector<DiagonalElement>& tuple) {
    if (tuple.empty()) throw std::invalid_argument("acting tuple must be nonempty");
    if (!tuple.front().is_identity())
        throw std::invalid_argument("acting tuple must start with the identity element");
    if (tuple.size() < 2)
        throw std::invalid_argument("acting tuple needs at least one non-identity slot (k >= 1)");
}

}  // namespace detail

// The two factors |sum lambda(a^k/a^i)| * |sum rho(a^i)^{-1}| controlling the
// decay. The tuple includes a^0 = identity in slot 0; k = tuple.size()-1. The
// first sum ranges over i = 0..k-1 by default (the larger, safer sum); the
// range is exposed for sensitivity checks. The second sum is always i = 1..k.
inline RatioFactors ratio_factors(const RepresentationData& rep,
                                  const std::vector<DiagonalElement>& tuple,
                                  FirstSumRange range = FirstSumRange::FromZero,
                                  const BigInt& residue_cardinality = 0) {
    detail::check_tuple(tuple);
    rep.validate();
    const std::size_t k = tuple.size() - 1;
    const auto& last = tuple[k];
    const bool arch = last.mode() == DiagonalElement::Mode::Archimedean;
    const std::size_t first_lo = range == FirstSumRange::FromZero ? 0 : 1;

    RatioFactors out;
    if (arch) {
        std::vector<Rational> first, second;
        for (std::size_t i = first_lo; i < k; ++i)
            first.push_back(evaluate_weight(rep.highest, last.divide(tuple[i])));
        for (std::size_t i = 1; i <= k; ++i) {
            Rational r = evaluate_weight(rep.lowest, tuple[i]);
            second.emplace_back(denominator(r), numerator(r));
        }
        // k = 1 under FromOne leaves the first sum empty; its value is 0 and
        // the bound evaluators reject the resulting nonpositive factor.
        out.highest_sum = detail::abs_of_character_sum(first);
        out.lowest_inv_sum = detail::abs_of_character_sum(second);
    } else {
        std::vector<BigInt> first, second;
        for (std::size_t i = first_lo; i < k; ++i)
            first.push_back(evaluate_weight_valuation(rep.highest, last.divide(tuple[i])));
        for (std::size_t i = 1; i <= k; ++i)
            second.push_back(-evaluate_weight_valuation(rep.lowest, tuple[i]));
        out.highest_sum = detail::abs_of_valuation_sum(first, residue_cardinality);
        out.lowest_inv_sum = detail::abs_of_valuation_sum(second, residue_cardinality);
    }
    return out;
}

// Sort ascending in |lambda(a)|, ties broken lexicographically on entries.
inline std::vector<DiagonalElement> order_by_highest_weight(
    const RepresentationData& rep, std::vector<DiagonalElement> tuple,
    const BigInt& residue_cardinality = 2) {
    auto key_less = [&](const DiagonalElement& x, const DiagonalElement& y) {
        Rational lx = weight_abs(rep.highest, x, residue_cardinality);
        Rational ly = weight_abs(rep.highest, y, residue_cardinality);
        if (lx != ly) return lx < ly;
        if (x.mode() == DiagonalElement::Mode::Archimedean) return x.entries() < y.entries();
        return x.valuations() < y.valuations();
    };
    std::stable_sort(tuple.begin(), tuple.end(), key_less);
    return tuple;
}

struct DivergenceResult {
    bool satisfied = false;
    Rational attained_min;  // min over both families of character magnitudes
};

// Checks min( min_{i=0..k-1} |lambda(a^k/a^i)|, min_{i=1..k} |rho(a^i)^{-1}| ) > threshold.
inline DivergenceResult check_divergence(const RepresentationData& rep,
                                         const std::vector<DiagonalElement>& tuple,
                                         const Rational& threshold,
                                         const BigInt& residue_cardinality = 2) {
    detail::check_tuple(tuple);
    rep.validate();
    const std::size_t k = tuple.size() - 1;
    const auto& last = tuple[k];
    std::optional<Rational> mn;
    auto feed = [&mn](const Rational& v) {
        if (!mn || v < *mn) mn = v;
    };
    for (std::size_t i = 0; i < k; ++i)
        feed(weight_abs(rep.highest, last.divide(tuple[i]), residue_cardinality));
    for (std::size_t i = 1; i <= k; ++i) {
        Rational r = weight_abs(rep.lowest, tuple[i], residue_cardinality);
        feed(Rational(denominator(r), numerator(r)));
    }
    DivergenceResult res;
    res.attained_min = *mn;
    res.satisfied = *mn > threshold;
    return res;
}

}  // namespace mixinglab
