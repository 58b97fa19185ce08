#pragma once

// Multiple-correlation evaluation on the T^3 model, two independent routes:
//
//  * exact: the integral of f0 * (g1.f1) * ... * (gk.fk) collapses to the
//    coefficient-cancellation sum over frequency tuples with
//    m0 + sum_i dual(g_i) m_i = 0, computed by sparse convolution (smallest
//    supports first, optional split against the largest factor when the
//    work product exceeds a budget);
//
//  * Monte Carlo: plain averaging over uniform sample points with Welford
//    variance, sharded deterministically by a seed-derived substream per
//    shard so results are reproducible for a fixed shard count.
//
// Uniform points are dyadic: x_i = j_i 2^{-53}. Character phases are then
// exact modular arithmetic, (m . x mod 1) = ((sum m_i j_i) mod 2^53) 2^{-53},
// evaluated with 64-bit wraparound (2^53 divides 2^64).

#include "mixinglab/affine.hpp"
#include "mixinglab/trigpoly.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mixinglab {

// Functions on the model must avoid the invariant character line: any
// frequency with (m1, m2) = (0, 0) is fixed by every group element (this
// includes the constants, so zero mean comes for free).
inline std::optional<FreqVector> invariant_line_witness(const TrigPolynomial& f) {
    for (const auto& [m, c] : f.coefficients())
        if (m[0] == 0 && m[1] == 0) return m;
    return std::nullopt;
}

inline void require_model_function(const TrigPolynomial& f) {
    if (f.dim() != 3)
        throw std::invalid_argument("model function must live on T^3 (dim 3)");
    if (auto w = invariant_line_witness(f))
        throw std::invalid_argument(
            "model function has spectral support on the invariant character line at " +
            freq_to_string(*w));
}

namespace detail {

// Pointwise-product polynomial of pre-translated factors, smallest supports
// convolved first.
inline TrigPolynomial convolve_all(std::vector<TrigPolynomial> factors) {
    if (factors.empty()) throw std::logic_error("convolve_all: no factors");
    std::sort(factors.begin(), factors.end(),
              [](const TrigPolynomial& a, const TrigPolynomial& b) {
                  return a.support_size() < b.support_size();
              });
    TrigPolynomial acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = acc * factors[i];
    return acc;
}

}  // namespace detail

struct ExactCorrelationOptions {
    // When k >= 3 and the full convolution work product exceeds this budget,
    // the largest factor is held back and matched by hash lookups against
    // supp(f0) instead of being convolved in.
    std::size_t split_budget = 2'000'000;
};

// integral of f0(x) f1(g1^{-1} x) ... fk(gk^{-1} x) dx, exact up to one
// correct rounding per accumulated coefficient.
inline Complex exact_multicorrelation(const std::vector<TrigPolynomial>& fs,
                                      const std::vector<AffineLatticeElement>& gs,
                                      const ExactCorrelationOptions& opts = {}) {
    if (fs.size() != gs.size() + 1)
        throw std::invalid_argument("exact_multicorrelation: need k+1 functions for k elements");
    for (const auto& f : fs) require_model_function(f);
    if (gs.empty()) throw std::invalid_argument("exact_multicorrelation: k >= 1 required");
    for (const auto& f : fs)
        if (f.is_zero()) return 0.0;

    std::vector<TrigPolynomial> translated;  // g_i . f_i in frequency space
    translated.reserve(gs.size());
    for (std::size_t i = 0; i < gs.size(); ++i)
        translated.push_back(fs[i + 1].remapped(dual_action(gs[i].embedding())));

    const TrigPolynomial& f0 = fs[0];

    std::size_t work = 1;
    bool overflow = false;
    for (const auto& t : translated) {
        if (t.support_size() != 0 && work > opts.split_budget / t.support_size()) overflow = true;
        work *= std::max<std::size_t>(t.support_size(), 1);
    }

    ExactComplexSum total;
    if (translated.size() >= 3 && (overflow || work > opts.split_budget)) {
        // Hold the largest factor back; probe it with -(m0 + partial sums).
        auto largest = std::max_element(translated.begin(), translated.end(),
                                        [](const TrigPolynomial& a, const TrigPolynomial& b) {
                                            return a.support_size() < b.support_size();
                                        });
        TrigPolynomial held = *largest;
        translated.erase(largest);
        TrigPolynomial partial = detail::convolve_all(std::move(translated));
        for (const auto& [m0, c0] : f0.coefficients())
            for (const auto& [u, cu] : partial.coefficients()) {
                Complex ch = held.coefficient(negate(add(m0, u)));
                if (ch != Complex(0.0)) total.add(c0 * cu * ch);
            }
    } else {
        TrigPolynomial prod = detail::convolve_all(std::move(translated));
        for (const auto& [m0, c0] : f0.coefficients()) {
            Complex cp = prod.coefficient(negate(m0));
            if (cp != Complex(0.0)) total.add(c0 * cp);
        }
    }
    return total.value();
}

struct McEstimate {
    Complex estimate{0.0, 0.0};
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

struct McOptions {
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 20240817;
    unsigned shards = 4;  // fixed shard count keeps results byte-reproducible
};

namespace detail {

struct PreparedFactor {
    // One row per term: reduced frequency coordinates mod 2^53 and coefficient.
    std::vector<std::array<std::uint64_t, 3>> freq_mod;
    std::vector<Complex> coeff;
};

inline PreparedFactor prepare_factor(const TrigPolynomial& f) {
    constexpr std::uint64_t kMod = 1ULL << 53;
    PreparedFactor p;
    for (const auto& [m, c] : f.coefficients()) {
        std::array<std::uint64_t, 3> row{};
        for (int i = 0; i < 3; ++i) {
            BigInt r = m[i] % kMod;
            if (r < 0) r += kMod;
            row[i] = r.convert_to<std::uint64_t>();
        }
        p.freq_mod.push_back(row);
        p.coeff.push_back(c);
    }
    return p;
}

struct WelfordState {
    std::uint64_t n = 0;
    Complex mean{0.0, 0.0};
    double m2 = 0.0;  // sum of |z - mean|^2

    void push(Complex z) {
        ++n;
        Complex d = z - mean;
        mean += d / static_cast<double>(n);
        Complex d2 = z - mean;
        m2 += d.real() * d2.real() + d.imag() * d2.imag();
    }

    static WelfordState merged(const WelfordState& a, const WelfordState& b) {
        if (a.n == 0) return b;
        if (b.n == 0) return a;
        WelfordState r;
        r.n = a.n + b.n;
        Complex d = b.mean - a.mean;
        double na = static_cast<double>(a.n), nb = static_cast<double>(b.n);
        r.mean = a.mean + d * (nb / (na + nb));
        r.m2 = a.m2 + b.m2 + std::norm(d) * (na * nb / (na + nb));
        return r;
    }
};

}  // namespace detail

// Monte Carlo estimate of the same correlation; the independent oracle for
// exact_multicorrelation. Standard error is sqrt(sample variance / N) with
// the complex sample variance E|Z - mean(Z)|^2 / (N - 1).
inline McEstimate mc_multicorrelation(const std::vector<TrigPolynomial>& fs,
                                      const std::vector<AffineLatticeElement>& gs,
                                      const McOptions& opts = {}) {
    if (fs.size() != gs.size() + 1)
        throw std::invalid_argument("mc_multicorrelation: need k+1 functions for k elements");
    if (opts.samples < 2) throw std::invalid_argument("mc_multicorrelation: N >= 2 required");
    if (opts.shards < 1) throw std::invalid_argument("mc_multicorrelation: shards >= 1");
    for (const auto& f : fs) require_model_function(f);

    std::vector<detail::PreparedFactor> prepared;
    prepared.push_back(detail::prepare_factor(fs[0]));
    for (std::size_t i = 0; i < gs.size(); ++i)
        prepared.push_back(
            detail::prepare_factor(fs[i + 1].remapped(dual_action(gs[i].embedding()))));

    constexpr std::uint64_t kMask = (1ULL << 53) - 1;
    constexpr double kInv = 1.0 / static_cast<double>(1ULL << 53);
    const double two_pi = 8.0 * std::atan(1.0);

    auto run_shard = [&](std::uint64_t count, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        detail::WelfordState w;
        for (std::uint64_t it = 0; it < count; ++it) {
            std::array<std::uint64_t, 3> x;
            for (int i = 0; i < 3; ++i) x[i] = rng() >> 11;  // dyadic j in [0, 2^53)
            Complex value{1.0, 0.0};
            for (const auto& factor : prepared) {
                Complex fx{0.0, 0.0};
                for (std::size_t t = 0; t < factor.coeff.size(); ++t) {
                    std::uint64_t phase = (factor.freq_mod[t][0] * x[0] +
                                           factor.freq_mod[t][1] * x[1] +
                                           factor.freq_mod[t][2] * x[2]) &
                                          kMask;
                    double ang = two_pi * (static_cast<double>(phase) * kInv);
                    fx += factor.coeff[t] * Complex(std::cos(ang), std::sin(ang));
                }
                value *= fx;
            }
            w.push(value);
        }
        return w;
    };

    std::vector<detail::WelfordState> states(opts.shards);
    std::vector<std::thread> pool;
    std::uint64_t base = opts.samples / opts.shards;
    std::uint64_t rem = opts.samples % opts.shards;
    for (unsigned s = 0; s < opts.shards; ++s) {
        std::uint64_t count = base + (s < rem ? 1 : 0);
        std::uint64_t seed = derive_seed(opts.seed, 0x6d63 /*"mc"*/, s);
        pool.emplace_back([&states, s, count, seed, &run_shard] {
            states[s] = run_shard(count, seed);
        });
    }
    for (auto& t : pool) t.join();

    detail::WelfordState all;
    for (const auto& s : states) all = detail::WelfordState::merged(all, s);

    McEstimate out;
    out.samples = all.n;
    out.estimate = all.mean;
    if (all.n > 1) {
        double var = all.m2 / static_cast<double>(all.n - 1);
        out.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(all.n));
    }
    return out;
}

// Default K-finiteness dimension for the model: rank of the orbit of f under
// the signed-permutation group of Z^3 (the stabilizer of the max-norm),
// acting by frequency relabelling. The theorems treat this dimension as an
// input; this finite-orbit computation is the model default.
inline int orbit_span_dimension(const TrigPolynomial& f, double tol = 1e-9) {
    if (f.is_zero()) return 0;

    // All 48 signed permutation matrices on Z^3.
    std::vector<IntMatrix> group;
    int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& p : perms)
        for (int signs = 0; signs < 8; ++signs) {
            IntMatrix m(3);
            for (int i = 0; i < 3; ++i) m.at(i, p[i]) = (signs >> i) & 1 ? -1 : 1;
            group.push_back(m);
        }

    std::vector<TrigPolynomial> orbit;
    for (const auto& kappa : group) orbit.push_back(f.remapped(kappa));

    // Gram-based rank with tolerance.
    std::map<FreqVector, std::size_t> index;
    for (const auto& h : orbit)
        for (const auto& [m, c] : h.coefficients())
            index.emplace(m, index.size());
    std::vector<std::vector<Complex>> rows;
    for (const auto& h : orbit) {
        std::vector<Complex> row(index.size(), Complex(0.0));
        for (const auto& [m, c] : h.coefficients()) row[index.at(m)] = c;
        rows.push_back(std::move(row));
    }
    int rank = 0;
    std::vector<std::vector<Complex>> basis;
    for (auto& row : rows) {
        for (const auto& b : basis) {
            Complex proj{0.0, 0.0};
            double nb = 0.0;
            for (std::size_t i = 0; i < row.size(); ++i) {
                proj += row[i] * std::conj(b[i]);
                nb += std::norm(b[i]);
            }
            proj /= nb;
            for (std::size_t i = 0; i < row.size(); ++i) row[i] -= proj * b[i];
        }
        double nr = 0.0;
        for (const auto& x : row) nr += std::norm(x);
        if (std::sqrt(nr) > tol * std::sqrt(static_cast<double>(row.size()))) {
            basis.push_back(row);
            ++rank;
        }
    }
    return rank;
}

}  // namespace mixinglab
