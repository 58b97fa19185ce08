#pragma once

// Right-hand-side evaluators for the correlation decay bounds, the exponent
// optimization that removes the spectral-truncation parameter, and the
// empirical calibration of the existential constant.
//
// The assembly C * s^{2q} * sqrt(d0 dk) * F1^{-q/2} * F2^{-q/2} is shared by
// every evaluator (the SL(2) corollaries fix q = 1 and feed their own weight
// sums), so the printed special cases agree with the general formula by
// construction, bit for bit.

#include "mixinglab/numeric.hpp"
#include "mixinglab/repdata.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixinglab {

struct BoundInputs {
    double constant = 1.0;          // C, existential in the theory; explicit here
    double divergence_floor = 1.0;  // C', threshold for the applicability check
    double spectral_radius = 1.0;   // s with all functions inside Ann(s)
    Rational q = 1;                 // decay exponent actually used
    double a_norm = 1.0;            // A for the tail-norm variants
    int d0 = 1;                     // dim <K . f_0>
    int dk = 1;                     // dim <K . f_k>
    std::vector<double> linf_norms;       // ||f_i||_inf, i = 0..k
    std::vector<double> tail_norms;       // ||f_i||_{+-, A}
    std::vector<double> sobolev_norms;    // ||f_i||_{inf, A, m}

    void validate_core() const {
        if (!(spectral_radius >= 1.0))
            throw std::invalid_argument("BoundInputs: spectral radius s >= 1 required");
        if (!(q > 0) || q > 1)
            throw std::invalid_argument("BoundInputs: decay exponent must lie in (0, 1]");
        if (d0 < 1 || dk < 1)
            throw std::invalid_argument("BoundInputs: orbit dimensions must be positive");
        if (!(constant > 0)) throw std::invalid_argument("BoundInputs: C > 0 required");
    }
};

namespace detail {

inline double assemble_bound(double c, double s, double q, int d0, int dk, double f1, double f2) {
    if (!(f1 > 0) || !(f2 > 0))
        throw std::invalid_argument("bound evaluation: ratio factors must be positive");
    return c * std::pow(s, 2.0 * q) * std::sqrt(static_cast<double>(d0)) *
           std::sqrt(static_cast<double>(dk)) * std::pow(f1, -q / 2.0) * std::pow(f2, -q / 2.0);
}

}  // namespace detail

// C s^{2q} d0^{1/2} dk^{1/2} F1^{-q/2} F2^{-q/2}.
inline double rhs_main_bound(const BoundInputs& in, const RatioFactors& factors) {
    in.validate_core();
    return detail::assemble_bound(in.constant, in.spectral_radius, to_double(in.q), in.d0, in.dk,
                                  to_double(factors.highest_sum),
                                  to_double(factors.lowest_inv_sum));
}

// Optimal epsilon for s = R^eps balancing R^{-A eps} against R^{2q eps - q/2}:
// eps* = q / (2 (A + 2q)), achieved decay exponent A q / (2 (A + 2q)).
inline double optimal_epsilon(double a, double q) {
    if (!(a > 0)) throw std::invalid_argument("optimal_epsilon: A > 0 required");
    if (!(q > 0)) throw std::invalid_argument("optimal_epsilon: q > 0 required");
    return q / (2.0 * (a + 2.0 * q));
}

inline double tail_bound_exponent(double a, double q) { return a * optimal_epsilon(a, q); }

// d0^{1/2} dk^{1/2} prod_i(||f_i||_inf ||f_i||_{+-,A}) * R^{-A q / (2(A + 2q))}.
inline double rhs_tail_norm_bound(const BoundInputs& in, const RatioFactors& factors) {
    in.validate_core();
    if (!(in.a_norm > 0)) throw std::invalid_argument("rhs_tail_norm_bound: A > 0 required");
    if (in.linf_norms.empty() || in.linf_norms.size() != in.tail_norms.size())
        throw std::invalid_argument(
            "rhs_tail_norm_bound: matching linf and tail norm lists required");
    double r = to_double(factors.product());
    if (!(r > 0))
        throw std::invalid_argument("rhs_tail_norm_bound: ratio factor must be positive");
    double prod = 1.0;
    for (std::size_t i = 0; i < in.linf_norms.size(); ++i)
        prod *= in.linf_norms[i] * in.tail_norms[i];
    double expo = tail_bound_exponent(in.a_norm, to_double(in.q));
    return std::sqrt(static_cast<double>(in.d0)) * std::sqrt(static_cast<double>(in.dk)) * prod *
           std::pow(r, -expo);
}

// prod_i ||f_i||^2_{inf, A, m} * R^{-A q / (2(A + 2q))}.
inline double rhs_sobolev_bound(const BoundInputs& in, const RatioFactors& factors) {
    in.validate_core();
    if (!(in.a_norm > 0)) throw std::invalid_argument("rhs_sobolev_bound: A > 0 required");
    if (in.sobolev_norms.empty())
        throw std::invalid_argument("rhs_sobolev_bound: sobolev norm list required");
    double r = to_double(factors.product());
    if (!(r > 0))
        throw std::invalid_argument("rhs_sobolev_bound: ratio factor must be positive");
    double prod = 1.0;
    for (double n : in.sobolev_norms) prod *= n * n;
    return prod * std::pow(r, -tail_bound_exponent(in.a_norm, to_double(in.q)));
}

enum class Sl2Action { Standard, Adjoint };

// SL(2) corollaries, evaluated exactly as printed: a-values 1 = a0 < a1 <
// ... < ak, standard weights a_k/a_i and a_i, adjoint with both squared;
// decay exponent 1/2 on each factor (assembly with q = 1).
inline double corollary_sl2(Sl2Action action, const std::vector<double>& a_values,
                            const BoundInputs& in) {
    if (a_values.empty()) throw std::invalid_argument("corollary_sl2: empty a-value list");
    if (a_values.front() != 1.0)
        throw std::invalid_argument("corollary_sl2: a_0 = 1 (identity) required");
    for (std::size_t i = 1; i < a_values.size(); ++i)
        if (!(a_values[i] > a_values[i - 1]))
            throw std::invalid_argument("corollary_sl2: a-values must increase strictly");
    in.validate_core();

    const std::size_t k = a_values.size() - 1;
    if (k < 1) throw std::invalid_argument("corollary_sl2: k >= 1 required");
    // Weight sums in exact rational arithmetic with one rounding at the end,
    // so the corollary agrees bitwise with the general evaluator fed by
    // ratio_factors on the same tuple.
    Rational ak(a_values[k]);
    Rational f1 = 0, f2 = 0;
    for (std::size_t i = 0; i < k; ++i) {
        Rational r = ak / Rational(a_values[i]);
        f1 += action == Sl2Action::Standard ? r : r * r;
    }
    for (std::size_t i = 1; i <= k; ++i) {
        Rational a(a_values[i]);
        f2 += action == Sl2Action::Standard ? a : a * a;
    }
    return detail::assemble_bound(in.constant, in.spectral_radius, 1.0, in.d0, in.dk,
                                  to_double(f1), to_double(f2));
}

struct CalibrationRow {
    double exact_abs = 0.0;
    double unit_bound = 0.0;  // bound evaluated with C = 1
    bool applicable = true;   // divergence condition held
};

struct CalibrationResult {
    double constant = 0.0;  // C_cal = max |exact| / unit_bound over usable rows
    std::size_t rows_used = 0;
    std::vector<std::size_t> holdout_violations;  // indices into the holdout list
};

// C_cal from a training set, then a validity verdict on held-out rows:
// a violation is |exact| > C_cal * unit_bound (with a 1+1e-12 rounding guard).
inline CalibrationResult calibrate_constant(const std::vector<CalibrationRow>& train,
                                            const std::vector<CalibrationRow>& holdout = {}) {
    if (train.empty()) throw std::invalid_argument("calibrate_constant: empty training set");
    CalibrationResult res;
    for (const auto& row : train) {
        if (!row.applicable) continue;
        if (!(row.unit_bound > 0))
            throw std::invalid_argument("calibrate_constant: nonpositive unit bound");
        res.constant = std::max(res.constant, row.exact_abs / row.unit_bound);
        ++res.rows_used;
    }
    if (res.rows_used == 0)
        throw std::invalid_argument("calibrate_constant: no applicable training rows");
    for (std::size_t i = 0; i < holdout.size(); ++i) {
        const auto& row = holdout[i];
        if (!row.applicable) continue;
        if (row.exact_abs > res.constant * row.unit_bound * (1.0 + 1e-12))
            res.holdout_violations.push_back(i);
    }
    return res;
}

}  // namespace mixinglab
