#pragma once

// Spectral projection machinery on trigonometric polynomials.
//
// A multiplier symbol is a function on frequency space; applying it scales
// each coefficient by the symbol value at its frequency. Symbols are only
// ever evaluated on the finite support of the operand, so indicators of
// infinite sets (annuli, balls) and radial profiles are all exact.
//
// Conventions, fixed once and used everywhere:
//   * frequency norm: max-norm (invariant under signed permutations);
//   * apply_multiplier(phi, e_m) = phi(m) e_m;
//   * annuli are open on both sides: s^{-1} < ||m|| < s;
//   * the ball of radius s keeps ||m|| < s, its complement keeps ||m|| >= s.

#include "mixinglab/intmat.hpp"
#include "mixinglab/repdata.hpp"
#include "mixinglab/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mixinglab {

// Exact comparison of a nonnegative integer norm against a double bound.
inline bool norm_less_than(const BigInt& n, double s) {
    if (std::isinf(s)) return s > 0;
    double fs = std::floor(s);
    BigInt fb(fs);
    return (s == fs) ? n < fb : n <= fb;
}

inline bool norm_at_least(const BigInt& n, double s) { return !norm_less_than(n, s); }

struct AnnulusSpec {
    double s;
    explicit AnnulusSpec(double s_) : s(s_) {
        if (!(s > 1.0)) throw std::invalid_argument("AnnulusSpec: s > 1 required");
    }
    // For integer frequencies the inner constraint s^{-1} < ||m|| is m != 0.
    bool contains(const FreqVector& m) const {
        return !is_zero(m) && norm_less_than(max_norm(m), s);
    }
};

// Piecewise-linear radial profile in r = ||m||; nodes sorted by radius.
// Constant extension left of the first node and right of the last.
struct RadialProfile {
    std::vector<std::pair<double, double>> nodes;  // (radius, value)

    double eval(double r) const {
        if (nodes.empty()) throw std::logic_error("RadialProfile: empty node list");
        if (r <= nodes.front().first) return nodes.front().second;
        if (r >= nodes.back().first) return nodes.back().second;
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            if (r <= nodes[i].first) {
                double r0 = nodes[i - 1].first, v0 = nodes[i - 1].second;
                double r1 = nodes[i].first, v1 = nodes[i].second;
                return v0 + (r - r0) / (r1 - r0) * (v1 - v0);
            }
        }
        return nodes.back().second;
    }
};

class SpectralSymbol {
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    enum class Kind { Indicator, Annulus, Ball, Scalar, Radial, Product, Sum, Conj, Transport };

    struct Node {
        Kind kind;
        std::set<FreqVector> support;  // Indicator
        double s = 0.0;                // Annulus / Ball radius
        bool inside = true;            // Ball orientation
        Complex scalar{0.0, 0.0};      // Scalar
        RadialProfile profile;         // Radial
        IntMatrix map;                 // Transport
        NodePtr lhs, rhs;              // Product / Sum / Conj(lhs) / Transport(lhs)
    };

    explicit SpectralSymbol(NodePtr n) : node_(std::move(n)) {}

    static NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

public:
    static SpectralSymbol indicator(std::set<FreqVector> support) {
        Node n;
        n.kind = Kind::Indicator;
        n.support = std::move(support);
        return SpectralSymbol(make(std::move(n)));
    }

    static SpectralSymbol annulus(double s) {
        AnnulusSpec check(s);  // validates s > 1
        Node n;
        n.kind = Kind::Annulus;
        n.s = check.s;
        return SpectralSymbol(make(std::move(n)));
    }

    // inside=true keeps ||m|| < s; inside=false keeps ||m|| >= s.
    static SpectralSymbol ball(double s, bool inside) {
        Node n;
        n.kind = Kind::Ball;
        n.s = s;
        n.inside = inside;
        return SpectralSymbol(make(std::move(n)));
    }

    static SpectralSymbol constant(Complex c) {
        Node n;
        n.kind = Kind::Scalar;
        n.scalar = c;
        return SpectralSymbol(make(std::move(n)));
    }

    static SpectralSymbol radial(RadialProfile p) {
        Node n;
        n.kind = Kind::Radial;
        n.profile = std::move(p);
        return SpectralSymbol(make(std::move(n)));
    }

    // Approximant equal to 1 on Ann(s), 0 outside Ann(s + 1/k), linear ramps
    // in between.
    static SpectralSymbol annulus_approximant(double s, int k) {
        if (!(s > 1.0) || k < 1)
            throw std::invalid_argument("annulus_approximant: require s > 1, k >= 1");
        double t = s + 1.0 / k;
        RadialProfile p;
        p.nodes = {{1.0 / t, 0.0}, {1.0 / s, 1.0}, {s, 1.0}, {t, 0.0}};
        return radial(std::move(p));
    }

    SpectralSymbol operator*(const SpectralSymbol& o) const {
        Node n;
        n.kind = Kind::Product;
        n.lhs = node_;
        n.rhs = o.node_;
        return SpectralSymbol(make(std::move(n)));
    }

    SpectralSymbol operator+(const SpectralSymbol& o) const {
        Node n;
        n.kind = Kind::Sum;
        n.lhs = node_;
        n.rhs = o.node_;
        return SpectralSymbol(make(std::move(n)));
    }

    SpectralSymbol conjugate() const {
        Node n;
        n.kind = Kind::Conj;
        n.lhs = node_;
        return SpectralSymbol(make(std::move(n)));
    }

    // Transported symbol m -> phi(T m); with T = dual_action(g^{-1}) this is
    // the symbol of the conjugated operator sigma(g) P_phi sigma(g^{-1}).
    SpectralSymbol transported(IntMatrix t) const {
        Node n;
        n.kind = Kind::Transport;
        n.map = std::move(t);
        n.lhs = node_;
        return SpectralSymbol(make(std::move(n)));
    }

    Complex eval(const FreqVector& m) const { return eval_node(*node_, m); }

    // Finite support when the symbol is a finite indicator or a product
    // involving one; nullopt otherwise.
    std::optional<std::set<FreqVector>> finite_support() const {
        switch (node_->kind) {
            case Kind::Indicator:
                return node_->support;
            case Kind::Product: {
                SpectralSymbol l(node_->lhs), r(node_->rhs);
                auto ls = l.finite_support();
                auto rs = r.finite_support();
                if (!ls && !rs) return std::nullopt;
                const auto& base = ls ? *ls : *rs;
                std::set<FreqVector> out;
                for (const auto& m : base)
                    if (eval(m) != Complex(0.0)) out.insert(m);
                return out;
            }
            default:
                return std::nullopt;
        }
    }

private:
    static Complex eval_node(const Node& n, const FreqVector& m) {
        switch (n.kind) {
            case Kind::Indicator:
                return n.support.count(m) ? 1.0 : 0.0;
            case Kind::Annulus:
                return (!is_zero(m) && norm_less_than(max_norm(m), n.s)) ? 1.0 : 0.0;
            case Kind::Ball: {
                bool in_ball = norm_less_than(max_norm(m), n.s);
                return (n.inside ? in_ball : !in_ball) ? 1.0 : 0.0;
            }
            case Kind::Scalar:
                return n.scalar;
            case Kind::Radial:
                return n.profile.eval(to_double(max_norm(m)));
            case Kind::Product:
                return eval_node(*n.lhs, m) * eval_node(*n.rhs, m);
            case Kind::Sum:
                return eval_node(*n.lhs, m) + eval_node(*n.rhs, m);
            case Kind::Conj:
                return std::conj(eval_node(*n.lhs, m));
            case Kind::Transport:
                return eval_node(*n.lhs, n.map * m);
        }
        throw std::logic_error("SpectralSymbol: unknown node kind");
    }

    NodePtr node_;
};

// P_phi f: coefficientwise product c_m -> phi(m) c_m.
inline TrigPolynomial apply_multiplier(const SpectralSymbol& phi, const TrigPolynomial& f) {
    TrigPolynomial r(f.dim());
    for (const auto& [m, c] : f.coefficients()) r.set(m, phi.eval(m) * c);
    return r;
}

// sigma(g) P_phi sigma(g^{-1}) f, computed literally: translate by g^{-1},
// apply the multiplier, translate back. Equals applying the transported
// symbol m -> phi(dual_action(g^{-1}) m) directly, with identical doubles.
inline TrigPolynomial apply_conjugated_multiplier(const IntMatrix& g, const SpectralSymbol& phi,
                                                  const TrigPolynomial& f) {
    if (!g.is_unimodular())
        throw std::invalid_argument("apply_conjugated_multiplier: matrix must be unimodular");
    IntMatrix fwd = dual_action(g.inverse_unimodular());
    IntMatrix back = dual_action(g);
    return apply_multiplier(phi, f.remapped(fwd)).remapped(back);
}

// P_{(s)}: keep exactly the open-annulus frequencies s^{-1} < ||m|| < s.
// Idempotent; always strips the mean (frequency 0 lies below the inner edge).
inline TrigPolynomial annulus_truncate(double s, const TrigPolynomial& f) {
    AnnulusSpec ann(s);
    TrigPolynomial r(f.dim());
    for (const auto& [m, c] : f.coefficients())
        if (ann.contains(m)) r.set(m, c);
    return r;
}

struct SumsetCheckResult {
    bool passed = false;
    std::optional<FreqVector> witness;  // a sumset frequency where omega != 1
    bool identity_verified = false;     // exact equality of the two sides
};

// Sumset stability: if omega is identically 1 on supp(phi)+supp(psi), then
// P_omega(P_phi(f) P_psi(g)) = P_phi(f) P_psi(g). phi and psi must have
// finite support. On hypothesis failure the offending sumset frequency is
// reported and no equality is claimed.
inline SumsetCheckResult sumset_projection_check(const SpectralSymbol& phi,
                                                 const SpectralSymbol& psi,
                                                 const SpectralSymbol& omega,
                                                 const TrigPolynomial& f,
                                                 const TrigPolynomial& g) {
    auto sp = phi.finite_support();
    auto sq = psi.finite_support();
    if (!sp || !sq)
        throw std::invalid_argument(
            "sumset_projection_check: phi and psi must have finite support");
    SumsetCheckResult res;
    for (const auto& u : *sp)
        for (const auto& v : *sq) {
            FreqVector w = add(u, v);
            if (omega.eval(w) != Complex(1.0)) {
                res.witness = std::move(w);
                return res;
            }
        }
    TrigPolynomial prod = apply_multiplier(phi, f) * apply_multiplier(psi, g);
    res.identity_verified = apply_multiplier(omega, prod) == prod;
    res.passed = res.identity_verified;
    return res;
}

// Indicator of the Minkowski sum S + T of two finite frequency sets.
inline SpectralSymbol sumset_indicator(const std::set<FreqVector>& s,
                                       const std::set<FreqVector>& t) {
    std::set<FreqVector> sum;
    for (const auto& u : s)
        for (const auto& v : t) sum.insert(add(u, v));
    return SpectralSymbol::indicator(std::move(sum));
}

// ---------------------------------------------------------------------------
// Spectral tail norms: for A > 0,
//   low  = sup_{s>0} s^{-A} ||P_{B(0,s)} f||_2     (ball keeps ||m|| < s)
//   high = sup_{s>0} s^{A}  ||P_{B(0,s)^c} f||_2   (complement keeps ||m|| >= s)
// Both suprema reduce to the finitely many support radii. A nonzero mean
// makes the low norm infinite (the ball near s = 0 still holds that mass).
// ---------------------------------------------------------------------------
struct SpectralTailNorms {
    double low = 0.0;
    double high = 0.0;
    double combined = 0.0;
};

inline SpectralTailNorms spectral_tail_norms(double a, const TrigPolynomial& f) {
    if (!(a > 0)) throw std::invalid_argument("spectral_tail_norms: A > 0 required");
    SpectralTailNorms out;
    if (f.is_zero()) return out;

    std::map<BigInt, double> mass_at_radius;  // radius -> sum |c|^2
    for (const auto& [m, c] : f.coefficients()) mass_at_radius[max_norm(m)] += std::norm(c);

    if (mass_at_radius.count(0)) {
        out.low = std::numeric_limits<double>::infinity();
    } else {
        double cum = 0.0;
        for (const auto& [r, mass] : mass_at_radius) {
            cum += mass;
            out.low = std::max(out.low, std::pow(to_double(r), -a) * std::sqrt(cum));
        }
    }

    double tail = 0.0;
    for (auto it = mass_at_radius.rbegin(); it != mass_at_radius.rend(); ++it) {
        if (it->first == 0) continue;  // frequency 0 never meets ||m|| >= s, s > 0
        tail += it->second;
        out.high = std::max(out.high, std::pow(to_double(it->first), a) * std::sqrt(tail));
    }
    out.combined = out.low + out.high;
    return out;
}

// ---------------------------------------------------------------------------
// Cones and spread regions.
// ---------------------------------------------------------------------------

struct ConeSpec {
    enum class Variant { HighestWeight, LowestWeight };
    Variant variant = Variant::HighestWeight;
    double c = 0.0;                        // bound on the designated projection
    double s = 0.0;                        // lower bound on ||m||
    std::vector<std::size_t> coordinates;  // indices forming the weight projection
};

inline bool cone_contains(const ConeSpec& spec, const FreqVector& m) {
    BigInt proj = 0;
    for (std::size_t i : spec.coordinates) {
        if (i >= m.size()) throw std::invalid_argument("cone_contains: coordinate out of range");
        BigInt a = abs_big(m[i]);
        if (a > proj) proj = a;
    }
    // ||proj|| <= c and ||m|| >= s, both exact for integer frequencies.
    bool proj_ok = norm_less_than(proj, spec.c) || to_double(proj) == spec.c;
    return proj_ok && norm_at_least(max_norm(m), spec.s);
}

// ||P_U f||_2 for U given by an arbitrary membership predicate.
template <class Predicate>
double projection_mass(const TrigPolynomial& f, Predicate&& contains) {
    ExactSum s;
    for (const auto& [m, c] : f.coefficients())
        if (contains(m)) s.add(std::norm(c));
    return std::sqrt(s.value());
}

inline double cone_mass(const ConeSpec& spec, const TrigPolynomial& f) {
    return projection_mass(f, [&spec](const FreqVector& m) { return cone_contains(spec, m); });
}

// ---------------------------------------------------------------------------
// Spread regions X(a, s) = Ann(s) intersect sum_i D_i(Ann(s)), where each
// D_i is a positive diagonal scaling (the dual action of a diagonal acting
// element) and the sum is a Minkowski sumset. Each scaled annulus decomposes
// into at most 2d open boxes (outer box minus an inner slab, split per
// coordinate and sign); a Minkowski sum of open boxes is an open box, so
// membership reduces to finitely many open-interval tests.
// ---------------------------------------------------------------------------
class SpreadRegion {
public:
    // scalings: one vector per acting element, the diagonal of its dual action.
    SpreadRegion(std::vector<std::vector<double>> scalings, double s)
        : scalings_(std::move(scalings)), ann_(s) {
        if (scalings_.empty()) throw std::invalid_argument("SpreadRegion: empty scaling list");
        d_ = scalings_.front().size();
        for (const auto& sc : scalings_) {
            if (sc.size() != d_) throw std::invalid_argument("SpreadRegion: ragged scalings");
            for (double x : sc)
                if (!(x > 0)) throw std::invalid_argument("SpreadRegion: scalings must be > 0");
        }
        build_boxes();
    }

    bool contains(const FreqVector& m) const {
        if (m.size() != d_) throw std::invalid_argument("SpreadRegion: dimension mismatch");
        if (!ann_.contains(m)) return false;
        std::vector<double> target(d_);
        for (std::size_t i = 0; i < d_; ++i) target[i] = to_double(m[i]);
        return search(target, 0, std::vector<double>(d_, 0.0), std::vector<double>(d_, 0.0));
    }

    double mass(const TrigPolynomial& f) const {
        return projection_mass(f, [this](const FreqVector& m) { return contains(m); });
    }

private:
    struct Box {
        std::vector<double> lo, hi;  // open intervals (lo, hi)
    };

    void build_boxes() {
        boxes_.resize(scalings_.size());
        const double s = ann_.s;
        for (std::size_t i = 0; i < scalings_.size(); ++i) {
            const auto& sc = scalings_[i];
            // y in D_i(Ann(s))  <=>  s^{-1} < max_j |y_j / sc_j| < s.
            // Outer: |y_j| < s*sc_j for all j. Inner: some |y_j| > sc_j / s.
            for (std::size_t j = 0; j < d_; ++j) {
                double t = sc[j] / s;
                for (int sign = 0; sign < 2; ++sign) {
                    Box b;
                    b.lo.resize(d_);
                    b.hi.resize(d_);
                    for (std::size_t c = 0; c < d_; ++c) {
                        b.lo[c] = -s * sc[c];
                        b.hi[c] = s * sc[c];
                    }
                    if (sign == 0)
                        b.lo[j] = t;
                    else
                        b.hi[j] = -t;
                    boxes_[i].push_back(std::move(b));
                }
            }
        }
    }

    bool search(const std::vector<double>& target, std::size_t level, std::vector<double> lo,
                std::vector<double> hi) const {
        if (level == boxes_.size()) {
            for (std::size_t c = 0; c < d_; ++c)
                if (!(lo[c] < target[c] && target[c] < hi[c])) return false;
            return true;
        }
        for (const auto& b : boxes_[level]) {
            std::vector<double> nlo(d_), nhi(d_);
            bool feasible = true;
            for (std::size_t c = 0; c < d_; ++c) {
                nlo[c] = lo[c] + b.lo[c];
                nhi[c] = hi[c] + b.hi[c];
                if (!(nlo[c] < nhi[c])) feasible = false;
            }
            if (feasible && search(target, level + 1, std::move(nlo), std::move(nhi))) return true;
        }
        return false;
    }

    std::vector<std::vector<double>> scalings_;
    AnnulusSpec ann_;
    std::size_t d_ = 0;
    std::vector<std::vector<Box>> boxes_;
};

// Dual-action scalings of a diagonal acting element: rho*(a) = diag(1/a_i).
inline std::vector<double> dual_scalings(const DiagonalElement& a) {
    std::vector<double> out;
    for (const auto& e : a.entries()) out.push_back(1.0 / to_double(e));
    return out;
}

}  // namespace mixinglab
