#pragma once

// Randomized property suites shared by the CLI `verify` command and the
// acceptance gate. Each suite runs a configurable number of instances and
// reports the first failure with a witness description.
//
// Exactness note: the operator-identity checks assert bitwise equality.
// Symbols drawn for those checks take values in {0} u 2^k {1,-1,i,-i}
// (indicators, annuli, unit-dyadic scalars and products thereof), the
// subalgebra in which coefficient scaling is exact in IEEE arithmetic, so
// algebraic identities survive floating point verbatim. Positivity and
// monotonicity are inequalities and run over arbitrary real symbols.

#include "mixinglab/correlation.hpp"
#include "mixinglab/intmat.hpp"
#include "mixinglab/slnreduce.hpp"
#include "mixinglab/specproj.hpp"
#include "mixinglab/trigpoly.hpp"

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mixinglab {

struct SuiteResult {
    std::string name;
    std::size_t instances = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool passed() const { return failures == 0; }

    void record_failure(const std::string& witness) {
        if (failures == 0) first_failure = witness;
        ++failures;
    }
};

class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : rng_(seed) {}

    long uniform_int(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng_);
    }
    double uniform_real(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    bool coin() { return (rng_() & 1) != 0; }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

// Product of elementary shears and signed swaps; det is +-1 by construction.
inline IntMatrix random_unimodular(RandomSource& rnd, std::size_t d, int steps = 6) {
    IntMatrix m = IntMatrix::identity(d);
    for (int s = 0; s < steps; ++s) {
        if (d >= 2 && rnd.uniform_int(0, 3) == 0) {
            // signed swap of two rows
            std::size_t i = static_cast<std::size_t>(rnd.uniform_int(0, static_cast<long>(d) - 1));
            std::size_t j = static_cast<std::size_t>(rnd.uniform_int(0, static_cast<long>(d) - 1));
            if (i == j) continue;
            IntMatrix e = IntMatrix::identity(d);
            e.at(i, i) = 0;
            e.at(j, j) = 0;
            e.at(i, j) = 1;
            e.at(j, i) = rnd.coin() ? -1 : 1;
            m = m * e;
        } else {
            std::size_t i = static_cast<std::size_t>(rnd.uniform_int(0, static_cast<long>(d) - 1));
            std::size_t j = static_cast<std::size_t>(rnd.uniform_int(0, static_cast<long>(d) - 1));
            if (i == j) continue;
            IntMatrix e = IntMatrix::identity(d);
            e.at(i, j) = rnd.uniform_int(-2, 2);
            m = m * e;
        }
    }
    return m;
}

inline TrigPolynomial random_trigpoly(RandomSource& rnd, int dim, int max_terms, long band) {
    TrigPolynomial f(dim);
    int terms = static_cast<int>(rnd.uniform_int(1, max_terms));
    for (int t = 0; t < terms; ++t) {
        FreqVector m;
        for (int i = 0; i < dim; ++i) m.emplace_back(rnd.uniform_int(-band, band));
        f.add_term(m, {rnd.uniform_real(-2.0, 2.0), rnd.uniform_real(-2.0, 2.0)});
    }
    return f;
}

namespace detail {

inline Complex random_unit_dyadic(RandomSource& rnd) {
    double mag = std::ldexp(1.0, static_cast<int>(rnd.uniform_int(-3, 3)));
    switch (rnd.uniform_int(0, 3)) {
        case 0: return {mag, 0.0};
        case 1: return {-mag, 0.0};
        case 2: return {0.0, mag};
        default: return {0.0, -mag};
    }
}

inline std::set<FreqVector> random_subset_of_support(RandomSource& rnd,
                                                     const TrigPolynomial& f, long band) {
    std::set<FreqVector> s;
    for (const auto& [m, c] : f.coefficients())
        if (rnd.coin()) s.insert(m);
    int extras = static_cast<int>(rnd.uniform_int(0, 3));
    for (int i = 0; i < extras; ++i) {
        FreqVector m;
        for (int k = 0; k < f.dim(); ++k) m.emplace_back(rnd.uniform_int(-band, band));
        s.insert(m);
    }
    return s;
}

// Symbols exactly representable under coefficient scaling; see header note.
inline SpectralSymbol random_exact_symbol(RandomSource& rnd, const TrigPolynomial& context,
                                          long band, int depth = 0) {
    long kind = rnd.uniform_int(0, depth < 2 ? 3 : 2);
    switch (kind) {
        case 0:
            return SpectralSymbol::indicator(random_subset_of_support(rnd, context, band));
        case 1:
            return SpectralSymbol::annulus(1.0 + rnd.uniform_int(1, 2 * band));
        case 2:
            return SpectralSymbol::constant(random_unit_dyadic(rnd));
        default:
            return random_exact_symbol(rnd, context, band, depth + 1) *
                   random_exact_symbol(rnd, context, band, depth + 1);
    }
}

// Arbitrary nonnegative real symbol (ramps allowed) for inequality checks.
inline SpectralSymbol random_nonneg_symbol(RandomSource& rnd, long band) {
    RadialProfile p;
    double r0 = rnd.uniform_real(0.5, band / 2.0 + 1.0);
    double r1 = r0 + rnd.uniform_real(0.5, band + 1.0);
    double v0 = rnd.uniform_real(0.0, 3.0);
    double v1 = rnd.uniform_real(0.0, 3.0);
    p.nodes = {{r0, v0}, {r1, v1}};
    return SpectralSymbol::radial(std::move(p));
}

}  // namespace detail

// Operator identities: multiplier homomorphism, self-adjointness,
// positivity/monotonicity, conjugation law. Exact equality throughout.
inline SuiteResult suite_operator_identities(std::size_t instances, std::uint64_t seed) {
    SuiteResult res;
    res.name = "operator-identities";
    RandomSource rnd(seed);
    const long band = 5;
    for (std::size_t i = 0; i < instances; ++i) {
        ++res.instances;
        int dim = static_cast<int>(rnd.uniform_int(2, 3));
        auto f = random_trigpoly(rnd, dim, 8, band);
        auto g = random_trigpoly(rnd, dim, 8, band);
        auto phi = detail::random_exact_symbol(rnd, f, band);
        auto psi = detail::random_exact_symbol(rnd, g, band);

        // P_{phi psi} = P_phi . P_psi
        if (!(apply_multiplier(phi * psi, f) ==
              apply_multiplier(phi, apply_multiplier(psi, f)))) {
            res.record_failure("homomorphism failed at instance " + std::to_string(i));
            continue;
        }

        // <P_phi f, g> = <f, P_{conj phi} g>
        Complex lhs = apply_multiplier(phi, f).inner_product(g);
        Complex rhs = f.inner_product(apply_multiplier(phi.conjugate(), g));
        if (lhs != rhs) {
            std::ostringstream os;
            os << "self-adjointness failed at instance " << i << ": " << lhs.real() << "+"
               << lhs.imag() << "i vs " << rhs.real() << "+" << rhs.imag() << "i";
            res.record_failure(os.str());
            continue;
        }

        // 0 <= <P_{r ind} f, f> <= <P_r f, f> for real r >= 0
        auto r = detail::random_nonneg_symbol(rnd, band);
        auto smaller =
            r * SpectralSymbol::indicator(detail::random_subset_of_support(rnd, f, band));
        double hi = apply_multiplier(r, f).inner_product(f).real();
        double lo = apply_multiplier(smaller, f).inner_product(f).real();
        if (!(0.0 <= lo && lo <= hi)) {
            res.record_failure("positivity/monotonicity failed at instance " +
                               std::to_string(i));
            continue;
        }

        // sigma(u) P_phi sigma(u^{-1}) = P_{phi(dual(u^{-1}) .)}
        IntMatrix u = random_unimodular(rnd, static_cast<std::size_t>(dim));
        auto conjugated = apply_conjugated_multiplier(u, phi, f);
        auto transported =
            apply_multiplier(phi.transported(dual_action(u.inverse_unimodular())), f);
        if (!(conjugated == transported)) {
            res.record_failure("conjugation law failed at instance " + std::to_string(i));
            continue;
        }
    }
    return res;
}

// Sumset stability suite, including adversarial instances in which omega
// misses one sumset frequency and the product concentrates mass there.
inline SuiteResult suite_sumset_projection(std::size_t instances, std::uint64_t seed) {
    SuiteResult res;
    res.name = "sumset-projection";
    RandomSource rnd(seed);
    const long band = 6;
    for (std::size_t i = 0; i < instances; ++i) {
        ++res.instances;
        int dim = static_cast<int>(rnd.uniform_int(2, 3));
        auto f = random_trigpoly(rnd, dim, 6, band);
        auto g = random_trigpoly(rnd, dim, 6, band);
        auto s = detail::random_subset_of_support(rnd, f, band);
        auto t = detail::random_subset_of_support(rnd, g, band);
        if (s.empty() || t.empty()) continue;
        auto phi = SpectralSymbol::indicator(s);
        auto psi = SpectralSymbol::indicator(t);

        bool adversarial = i % 3 == 2;
        if (!adversarial) {
            auto check = sumset_projection_check(phi, psi, sumset_indicator(s, t), f, g);
            if (!check.passed) {
                res.record_failure("sumset identity failed at instance " + std::to_string(i));
                continue;
            }
        } else {
            // Remove one sumset point and concentrate mass on a preimage pair.
            FreqVector u = *s.begin(), v = *t.begin();
            FreqVector w = add(u, v);
            std::set<FreqVector> sum;
            for (const auto& a : s)
                for (const auto& b : t) sum.insert(add(a, b));
            sum.erase(w);
            auto omega = SpectralSymbol::indicator(sum);
            auto fa = f + TrigPolynomial::character(u, 1.0);
            auto ga = g + TrigPolynomial::character(v, 1.0);
            auto check = sumset_projection_check(phi, psi, omega, fa, ga);
            if (check.passed || !check.witness) {
                res.record_failure("adversarial case not caught at instance " +
                                   std::to_string(i));
                continue;
            }
        }
    }
    return res;
}

// Dual-action homomorphism and invariant-line fixing for the affine model.
inline SuiteResult suite_frequency_action(std::size_t instances, std::uint64_t seed) {
    SuiteResult res;
    res.name = "frequency-action";
    RandomSource rnd(seed);
    auto random_element = [&rnd]() {
        // random product of the standard generators keeps entries tame
        AffineLatticeElement e;
        int steps = static_cast<int>(rnd.uniform_int(1, 6));
        for (int s = 0; s < steps; ++s) {
            long choice = rnd.uniform_int(0, 2);
            AffineLatticeElement gstep =
                choice == 0
                    ? AffineLatticeElement::from_ints(1, rnd.uniform_int(-2, 2), 0, 1, 0, 0)
                    : choice == 1
                        ? AffineLatticeElement::from_ints(1, 0, rnd.uniform_int(-2, 2), 1, 0, 0)
                        : AffineLatticeElement::from_ints(1, 0, 0, 1, rnd.uniform_int(-3, 3),
                                                          rnd.uniform_int(-3, 3));
            e = e.compose(gstep);
        }
        return e;
    };
    for (std::size_t i = 0; i < instances; ++i) {
        ++res.instances;
        auto g = random_element();
        auto h = random_element();
        FreqVector m{BigInt(rnd.uniform_int(-9, 9)), BigInt(rnd.uniform_int(-9, 9)),
                     BigInt(rnd.uniform_int(-9, 9))};
        auto lhs = frequency_action(g.compose(h), m);
        auto rhs = frequency_action(g, frequency_action(h, m));
        if (lhs != rhs) {
            res.record_failure("dual action not a homomorphism at instance " +
                               std::to_string(i) + " m=" + freq_to_string(m));
            continue;
        }
        FreqVector fixed{BigInt(0), BigInt(0), BigInt(rnd.uniform_int(-9, 9))};
        if (frequency_action(g, fixed) != fixed) {
            res.record_failure("invariant character moved at instance " + std::to_string(i));
            continue;
        }
    }
    return res;
}

// Unitarity: translating every slot by a common element leaves the exact
// correlation unchanged, bitwise (order-independent accumulation).
inline SuiteResult suite_translation_invariance(std::size_t instances, std::uint64_t seed) {
    SuiteResult res;
    res.name = "translation-invariance";
    RandomSource rnd(seed);
    auto random_model_poly = [&rnd](int terms) {
        TrigPolynomial f(3);
        for (int t = 0; t < terms; ++t) {
            long m1 = rnd.uniform_int(-3, 3);
            long m2 = rnd.uniform_int(-3, 3);
            if (m1 == 0 && m2 == 0) m1 = 1;
            f.add_term({BigInt(m1), BigInt(m2), BigInt(rnd.uniform_int(-3, 3))},
                       {rnd.uniform_real(-1.0, 1.0), rnd.uniform_real(-1.0, 1.0)});
        }
        return f;
    };
    for (std::size_t i = 0; i < instances; ++i) {
        ++res.instances;
        std::size_t k = static_cast<std::size_t>(rnd.uniform_int(1, 3));
        std::vector<TrigPolynomial> fs;
        for (std::size_t j = 0; j <= k; ++j) fs.push_back(random_model_poly(3));
        std::vector<AffineLatticeElement> gs;
        for (std::size_t j = 0; j < k; ++j)
            gs.push_back(AffineLatticeElement::from_ints(2, 1, 1, 1, rnd.uniform_int(-2, 2),
                                                         rnd.uniform_int(-2, 2))
                             .pow(rnd.uniform_int(0, 2)));
        auto h = AffineLatticeElement::from_ints(1, 1, 0, 1, rnd.uniform_int(-2, 2), 0)
                     .compose(AffineLatticeElement::from_ints(1, 0, 1, 1, 0, 1));

        Complex base = exact_multicorrelation(fs, gs);

        std::vector<TrigPolynomial> fs2 = fs;
        fs2[0] = fs[0].remapped(dual_action(h.embedding()));
        std::vector<AffineLatticeElement> gs2;
        for (const auto& g : gs) gs2.push_back(h.compose(g));
        Complex moved = exact_multicorrelation(fs2, gs2);

        if (base != moved) {
            std::ostringstream os;
            os << "translation changed the value at instance " << i << ": (" << base.real()
               << "," << base.imag() << ") vs (" << moved.real() << "," << moved.imag() << ")";
            res.record_failure(os.str());
        }
    }
    return res;
}

// Exact vs Monte Carlo agreement within five standard errors.
inline SuiteResult suite_exact_vs_mc(std::size_t instances, std::uint64_t seed,
                                     std::uint64_t samples, unsigned shards = 4) {
    SuiteResult res;
    res.name = "exact-vs-mc";
    RandomSource rnd(seed);
    for (std::size_t i = 0; i < instances; ++i) {
        ++res.instances;
        std::size_t k = static_cast<std::size_t>(rnd.uniform_int(1, 3));
        std::vector<TrigPolynomial> fs;
        for (std::size_t j = 0; j <= k; ++j) {
            TrigPolynomial f(3);
            int terms = static_cast<int>(rnd.uniform_int(1, 4));
            for (int t = 0; t < terms; ++t) {
                long m1 = rnd.uniform_int(-2, 2);
                long m2 = rnd.uniform_int(-2, 2);
                if (m1 == 0 && m2 == 0) m2 = rnd.coin() ? 1 : -1;
                f.add_term({BigInt(m1), BigInt(m2), BigInt(rnd.uniform_int(-2, 2))},
                           {rnd.uniform_real(-1.0, 1.0), rnd.uniform_real(-1.0, 1.0)});
            }
            fs.push_back(f);
        }
        std::vector<AffineLatticeElement> gs;
        for (std::size_t j = 0; j < k; ++j) {
            auto base = AffineLatticeElement::from_ints(2, 1, 1, 1, rnd.uniform_int(-1, 1),
                                                        rnd.uniform_int(-1, 1));
            gs.push_back(base.pow(rnd.uniform_int(0, 2)));
        }
        Complex exact = exact_multicorrelation(fs, gs);
        McOptions opts;
        opts.samples = samples;
        opts.seed = derive_seed(seed, 0x7472, i);
        opts.shards = shards;
        McEstimate mc = mc_multicorrelation(fs, gs, opts);
        double dist = std::abs(exact - mc.estimate);
        if (dist > 5.0 * mc.std_error && dist > 1e-12) {
            std::ostringstream os;
            os << "MC disagrees at instance " << i << ": |exact-mc|=" << dist
               << " stderr=" << mc.std_error;
            res.record_failure(os.str());
        }
    }
    return res;
}

// Splitting suite: chamber * centralizing = a, determinants 1, compact
// commutation, valuation parity round trip.
inline SuiteResult suite_diagonal_splitting(std::size_t instances, std::uint64_t seed) {
    SuiteResult res;
    res.name = "diagonal-splitting";
    RandomSource rnd(seed);
    // Rational rotation generators: rational points of SO(2) plus the Weyl flip.
    std::vector<AffineSl2<Rational>> compact_gens;
    {
        AffineSl2<Rational> weyl;
        weyl.a = 0;
        weyl.b = -1;
        weyl.c = 1;
        weyl.d = 0;
        compact_gens.push_back(weyl);
        AffineSl2<Rational> pyth;
        pyth.a = Rational(3, 5);
        pyth.b = Rational(-4, 5);
        pyth.c = Rational(4, 5);
        pyth.d = Rational(3, 5);
        compact_gens.push_back(pyth);
    }

    for (std::size_t i = 0; i < instances; ++i) {
        ++res.instances;
        std::size_t n = static_cast<std::size_t>(rnd.uniform_int(3, 5));
        std::size_t j = static_cast<std::size_t>(rnd.uniform_int(1, static_cast<long>(n) - 1));
        std::size_t l = static_cast<std::size_t>(rnd.uniform_int(static_cast<long>(j) + 1,
                                                                 static_cast<long>(n)));

        // exact branch: every entry a square of rationals with product 1, so
        // each pairwise product has an exact square root
        std::vector<Rational> roots;
        Rational rprod = 1;
        for (std::size_t t = 0; t + 1 < n; ++t) {
            Rational base(rnd.uniform_int(1, 9), rnd.uniform_int(1, 9));
            roots.push_back(base);
            rprod *= base;
        }
        roots.emplace_back(denominator(rprod), numerator(rprod));
        std::vector<Rational> entries;
        for (const auto& b : roots) entries.push_back(b * b);
        auto a = DiagonalElement::archimedean(entries);

        auto split = split_diagonal_exact(a, j, l);
        bool ok = true;
        Rational det_ch = 1, det_ce = 1;
        for (std::size_t t = 0; t < n; ++t) {
            if (split.chamber[t] * split.centralizing[t] != entries[t]) ok = false;
            det_ch *= split.chamber[t];
            det_ce *= split.centralizing[t];
        }
        if (det_ch != 1 || det_ce != 1) ok = false;
        if (!ok) {
            res.record_failure("exact split failed to recompose at instance " +
                               std::to_string(i));
            continue;
        }

        // centralizing part commutes with the embedded compact generators
        Matrix<Rational> cmat(n);
        for (std::size_t t = 0; t < n; ++t) cmat.at(t, t) = split.centralizing[t];
        for (const auto& gen : compact_gens) {
            auto e = embed_affine_sl2<Rational>(n, j, l, gen);
            if (!(cmat * e == e * cmat)) {
                res.record_failure("centralizing part does not commute at instance " +
                                   std::to_string(i));
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        // floating branch on arbitrary positive entries
        std::vector<double> de;
        double dprod = 1.0;
        for (std::size_t t = 0; t + 1 < n; ++t) {
            double v = rnd.uniform_real(0.1, 8.0);
            de.push_back(v);
            dprod *= v;
        }
        de.push_back(1.0 / dprod);
        auto dsplit = split_diagonal(de, j, l);
        for (std::size_t t = 0; t < n; ++t) {
            double err = std::abs(dsplit.chamber[t] * dsplit.centralizing[t] - de[t]);
            if (err > 1e-12 * std::max(1.0, de[t])) {
                res.record_failure("floating split error " + std::to_string(err) +
                                   " at instance " + std::to_string(i));
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        // valuation split round-trips exactly, with and without compensation
        std::vector<BigInt> vals;
        BigInt vsum = 0;
        for (std::size_t t = 0; t + 1 < n; ++t) {
            BigInt v(rnd.uniform_int(-6, 6));
            vals.push_back(v);
            vsum += v;
        }
        vals.push_back(-vsum);
        auto qa = DiagonalElement::valuation(vals);
        auto qsplit = split_diagonal_valuation(qa, j, l);
        BigInt qsum_ch = 0;
        for (std::size_t t = 0; t < n; ++t) {
            if (qsplit.chamber[t] + qsplit.centralizing[t] != vals[t]) {
                res.record_failure("valuation split failed to recompose at instance " +
                                   std::to_string(i));
                ok = false;
                break;
            }
            qsum_ch += qsplit.chamber[t];
        }
        if (ok && qsum_ch != 0)
            res.record_failure("valuation chamber determinant broken at instance " +
                               std::to_string(i));
        bool odd = (vals[j - 1] + vals[l - 1]) % 2 != 0;
        if (ok && odd != qsplit.parity_compensated)
            res.record_failure("parity flag wrong at instance " + std::to_string(i));
    }
    return res;
}

inline std::vector<SuiteResult> run_default_verify(std::uint64_t seed) {
    return {
        suite_operator_identities(300, derive_seed(seed, 1)),
        suite_sumset_projection(150, derive_seed(seed, 2)),
        suite_frequency_action(1000, derive_seed(seed, 3)),
        suite_translation_invariance(60, derive_seed(seed, 4)),
        suite_exact_vs_mc(10, derive_seed(seed, 5), 40'000),
        suite_diagonal_splitting(300, derive_seed(seed, 6)),
    };
}

}  // namespace mixinglab
