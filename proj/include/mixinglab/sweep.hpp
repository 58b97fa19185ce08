#pragma once

// Decay sweep harness: evaluates exact (and optionally Monte Carlo)
// correlations for powers of a base element against the evaluated decay
// bound, emits CSV/JSON rows, and calibrates the bound constant on a
// training segment of the sweep.
//
// Acting tuples are (base^{n p_1}, ..., base^{n p_k}) for each n in the
// power list, with a per-slot pattern p (default 1, 2, ..., k). The bound is
// evaluated at the singular-value chamber proxies of the linear parts,
// labelled as proxies in the reports.

#include "mixinglab/bounds.hpp"
#include "mixinglab/correlation.hpp"
#include "mixinglab/specproj.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace mixinglab {

inline constexpr int kReportSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Function presets.
// ---------------------------------------------------------------------------

// Fixed band-limited real function; every slot gets the same one.
inline std::vector<TrigPolynomial> preset_lowband(std::size_t k) {
    TrigPolynomial f(3);
    auto put = [&f](long a, long b, long c) {
        f.add_term({BigInt(a), BigInt(b), BigInt(c)}, 1.0);
        f.add_term({BigInt(-a), BigInt(-b), BigInt(-c)}, 1.0);
    };
    put(1, 0, 0);
    put(0, 1, 1);
    put(2, 1, 0);
    f = f.scaled(1.0 / f.l2_norm());
    return std::vector<TrigPolynomial>(k + 1, f);
}

struct OrbitPresetParams {
    long segment = 4;     // J: orbit length per translated factor
    double ratio = 0.25;  // geometric coefficient decay along the orbit
    FreqVector seed_frequency{BigInt(1), BigInt(0), BigInt(0)};
};

// Resonant preset aligned with the dual orbit of the base element: the
// translated slots carry short orbit segments, and slot 0 carries every sum
// the acting tuples can produce across the power list. Coefficients decay
// geometrically along the orbit, so exact correlations stay nonzero over
// the whole sweep and decay strictly faster than the bound.
inline std::vector<TrigPolynomial> preset_orbit(const AffineLatticeElement& base,
                                                const std::vector<long>& pattern, long max_power,
                                                const OrbitPresetParams& params) {
    if (!is_hyperbolic(base))
        throw std::invalid_argument("preset_orbit: hyperbolic base element required");
    const std::size_t k = pattern.size();
    IntMatrix dual = dual_action(base.embedding());

    long max_range = 0;
    for (long p : pattern) max_range = std::max(max_range, p * max_power + params.segment);

    std::vector<FreqVector> orbit{params.seed_frequency};
    for (long j = 0; j < max_range; ++j) orbit.push_back(dual * orbit.back());

    std::vector<TrigPolynomial> fs;
    TrigPolynomial f0(3);
    std::vector<long> odometer(k, 0);
    while (true) {
        FreqVector sum(3, BigInt(0));
        long total = 0;
        for (std::size_t i = 0; i < k; ++i) {
            sum = add(sum, orbit[static_cast<std::size_t>(odometer[i])]);
            total += odometer[i];
        }
        f0.add_term(negate(sum), std::pow(params.ratio, static_cast<double>(total)));
        std::size_t slot = 0;
        while (slot < k) {
            long limit = pattern[slot] * max_power + params.segment;
            if (++odometer[slot] <= limit) break;
            odometer[slot] = 0;
            ++slot;
        }
        if (slot == k) break;
    }
    fs.push_back(f0.scaled(1.0 / f0.l2_norm()));

    TrigPolynomial seg(3);
    for (long j = 0; j <= params.segment; ++j)
        seg.add_term(orbit[static_cast<std::size_t>(j)],
                     std::pow(params.ratio, static_cast<double>(j)));
    seg = seg.scaled(1.0 / seg.l2_norm());
    for (std::size_t i = 0; i < k; ++i) fs.push_back(seg);
    return fs;
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

struct CorrelationReport {
    std::size_t k = 0;
    std::vector<long> powers;    // the actual exponents n * p_i
    std::vector<double> sigma1;  // chamber proxies of the acting elements
    Rational q_used = 1;
    bool applicable = true;      // divergence condition held at the floor C'
    double divergence_min = 0.0;
    double r_factor = 0.0;       // product of the two weight-sum factors
    double rhs_unit = 0.0;       // bound evaluated with C = 1
    double rhs_bound = 0.0;      // bound with the configured C
    Complex exact{0.0, 0.0};
    std::optional<McEstimate> mc;
    double ratio = std::numeric_limits<double>::quiet_NaN();  // |exact| / rhs_bound
};

namespace detail {

inline std::string format_double(double x) {
    if (std::isnan(x)) return "na";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_rational(const Rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << "/" << denominator(q);
    return os.str();
}

template <class T, class F>
std::string join_list(const std::vector<T>& xs, const char* sep, F&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += fmt(xs[i]);
    }
    return out;
}

}  // namespace detail

inline const char* report_csv_header() {
    return "k,powers,sigma1_list,q_used,R_factor,rhs_bound,exact_re,exact_im,exact_abs,"
           "mc_est_re,mc_est_im,mc_stderr,ratio";
}

inline std::string report_csv_row(const CorrelationReport& r) {
    std::ostringstream os;
    os << r.k << ",";
    os << detail::join_list(r.powers, ";", [](long p) { return std::to_string(p); }) << ",";
    os << detail::join_list(r.sigma1, ";", detail::format_double) << ",";
    os << detail::format_rational(r.q_used) << ",";
    os << detail::format_double(r.r_factor) << ",";
    os << (r.applicable ? detail::format_double(r.rhs_bound) : std::string("na")) << ",";
    os << detail::format_double(r.exact.real()) << ",";
    os << detail::format_double(r.exact.imag()) << ",";
    os << detail::format_double(std::abs(r.exact)) << ",";
    if (r.mc) {
        os << detail::format_double(r.mc->estimate.real()) << ","
           << detail::format_double(r.mc->estimate.imag()) << ","
           << detail::format_double(r.mc->std_error) << ",";
    } else {
        os << "na,na,na,";
    }
    os << (r.applicable ? detail::format_double(r.ratio) : std::string("na"));
    return os.str();
}

inline nlohmann::json report_to_json(const CorrelationReport& r) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["k"] = r.k;
    j["powers"] = r.powers;
    j["sigma1_list"] = r.sigma1;
    j["sigma1_is_proxy"] = true;  // chamber proxy of integer acting elements
    j["q_used"] = detail::format_rational(r.q_used);
    j["applicable"] = r.applicable;
    j["divergence_min"] = r.divergence_min;
    j["R_factor"] = r.r_factor;
    j["rhs_unit"] = r.rhs_unit;
    j["rhs_bound"] = r.rhs_bound;
    j["exact_re"] = r.exact.real();
    j["exact_im"] = r.exact.imag();
    j["exact_abs"] = std::abs(r.exact);
    if (r.mc) {
        j["mc_est_re"] = r.mc->estimate.real();
        j["mc_est_im"] = r.mc->estimate.imag();
        j["mc_stderr"] = r.mc->std_error;
        j["mc_samples"] = r.mc->samples;
    }
    if (r.applicable)
        j["ratio"] = r.ratio;
    return j;
}

// ---------------------------------------------------------------------------
// The sweep.
// ---------------------------------------------------------------------------

struct SweepConfig {
    AffineLatticeElement base;
    std::vector<long> powers;   // n values, strictly increasing
    std::vector<long> pattern;  // per-slot multipliers; defines k
    std::string preset = "orbit";
    std::vector<TrigPolynomial> explicit_functions;  // preset == "explicit"
    OrbitPresetParams orbit;

    Rational q = 1;
    double constant = 1.0;          // C
    double divergence_floor = 2.0;  // C'
    std::optional<double> spectral_radius;
    std::optional<int> d0, dk;
    FirstSumRange sum_range = FirstSumRange::FromZero;

    std::uint64_t mc_samples = 0;  // 0 disables the cross-check
    unsigned mc_shards = 4;
    std::uint64_t seed = 20240817;
    ExactCorrelationOptions exact_opts;
    unsigned row_threads = 4;
};

struct SweepOutput {
    std::vector<CorrelationReport> rows;
    std::vector<TrigPolynomial> functions;
    double spectral_radius = 0.0;
    int d0 = 1, dk = 1;
};

inline std::vector<TrigPolynomial> build_preset_functions(const SweepConfig& cfg) {
    const std::size_t k = cfg.pattern.size();
    if (cfg.preset == "lowband") return preset_lowband(k);
    if (cfg.preset == "orbit") {
        long max_power = cfg.powers.empty() ? 0 : cfg.powers.back();
        return preset_orbit(cfg.base, cfg.pattern, max_power, cfg.orbit);
    }
    if (cfg.preset == "explicit") {
        if (cfg.explicit_functions.size() != k + 1)
            throw std::invalid_argument("sweep: explicit preset needs k+1 functions");
        return cfg.explicit_functions;
    }
    throw std::invalid_argument("sweep: unknown preset '" + cfg.preset + "'");
}

inline SweepOutput decay_sweep(const SweepConfig& cfg) {
    if (cfg.pattern.empty()) throw std::invalid_argument("sweep: empty pattern (k = 0)");
    if (cfg.powers.empty()) throw std::invalid_argument("sweep: empty power list");
    for (std::size_t i = 1; i < cfg.powers.size(); ++i)
        if (cfg.powers[i] <= cfg.powers[i - 1])
            throw std::invalid_argument("sweep: power list must increase strictly");
    const bool hyperbolic = is_hyperbolic(cfg.base);

    SweepOutput out;
    out.functions = build_preset_functions(cfg);
    for (const auto& f : out.functions) require_model_function(f);

    if (cfg.spectral_radius) {
        out.spectral_radius = *cfg.spectral_radius;
    } else {
        BigInt top = 1;
        for (const auto& f : out.functions)
            for (const auto& [m, c] : f.coefficients()) top = std::max(top, max_norm(m));
        out.spectral_radius = to_double(top) + 1.0;  // smallest integer radius covering supp
    }
    out.d0 = cfg.d0 ? *cfg.d0 : orbit_span_dimension(out.functions.front());
    out.dk = cfg.dk ? *cfg.dk : orbit_span_dimension(out.functions.back());

    auto rep = RepresentationData::standard_sl2();
    const std::size_t k = cfg.pattern.size();
    out.rows.resize(cfg.powers.size());

    auto eval_row = [&](std::size_t idx) {
        long n = cfg.powers[idx];
        CorrelationReport row;
        row.k = k;
        row.q_used = cfg.q;

        std::vector<AffineLatticeElement> gs;
        std::vector<DiagonalElement> tuple{DiagonalElement::identity(2)};
        for (std::size_t i = 0; i < k; ++i) {
            long e = n * cfg.pattern[i];
            row.powers.push_back(e);
            auto g = cfg.base.pow(e);
            gs.push_back(g);
            double s1 = cartan_proxy(g).sigma1;
            row.sigma1.push_back(s1);
            tuple.push_back(DiagonalElement::sl2_cartan(Rational(s1)));
        }

        row.exact = exact_multicorrelation(out.functions, gs, cfg.exact_opts);
        if (cfg.mc_samples > 0) {
            McOptions mo;
            mo.samples = cfg.mc_samples;
            mo.seed = derive_seed(cfg.seed, 0x726f77 /*"row"*/, idx);
            mo.shards = cfg.mc_shards;
            row.mc = mc_multicorrelation(out.functions, gs, mo);
        }

        auto ordered = order_by_highest_weight(
            rep, std::vector<DiagonalElement>(tuple.begin() + 1, tuple.end()));
        std::vector<DiagonalElement> full{DiagonalElement::identity(2)};
        for (auto& e : ordered) full.push_back(std::move(e));

        auto div = check_divergence(rep, full, Rational(cfg.divergence_floor));
        row.divergence_min = to_double(div.attained_min);
        row.applicable = hyperbolic && div.satisfied;

        auto rf = ratio_factors(rep, full, cfg.sum_range);
        row.r_factor = rf.product_double();
        if (rf.highest_sum > 0 && rf.lowest_inv_sum > 0) {
            BoundInputs in;
            in.constant = 1.0;
            in.divergence_floor = cfg.divergence_floor;
            in.spectral_radius = out.spectral_radius;
            in.q = cfg.q;
            in.d0 = out.d0;
            in.dk = out.dk;
            row.rhs_unit = rhs_main_bound(in, rf);
            row.rhs_bound = cfg.constant * row.rhs_unit;
            if (row.applicable && row.rhs_bound > 0)
                row.ratio = std::abs(row.exact) / row.rhs_bound;
        }
        out.rows[idx] = std::move(row);
    };

    unsigned workers = std::max(1u, cfg.row_threads);
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex mu;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                std::size_t idx;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (next >= cfg.powers.size()) return;
                    idx = next++;
                }
                eval_row(idx);
            }
        });
    for (auto& t : pool) t.join();
    return out;
}

// Calibration over a sweep: rows whose first power entry is in train_powers
// form the training set, everything else is held out.
struct SweepCalibration {
    double constant = 0.0;
    std::size_t train_rows = 0;
    std::vector<std::size_t> holdout_violations;  // row indices in the sweep
};

inline SweepCalibration calibrate_sweep(const SweepOutput& sweep,
                                        const std::vector<long>& train_powers) {
    std::vector<CalibrationRow> train, holdout;
    std::vector<std::size_t> holdout_index;
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const auto& r = sweep.rows[i];
        CalibrationRow row{std::abs(r.exact), r.rhs_unit, r.applicable && r.rhs_unit > 0};
        long base_power = r.powers.empty() ? 0 : r.powers.front();
        bool in_train = std::find(train_powers.begin(), train_powers.end(), base_power) !=
                        train_powers.end();
        if (in_train)
            train.push_back(row);
        else {
            holdout.push_back(row);
            holdout_index.push_back(i);
        }
    }
    auto res = calibrate_constant(train, holdout);
    SweepCalibration out;
    out.constant = res.constant;
    out.train_rows = res.rows_used;
    for (std::size_t v : res.holdout_violations) out.holdout_violations.push_back(holdout_index[v]);
    return out;
}

// Least-squares slope of log|exact| against log R over rows with positive
// exact mass (and an applicable bound); nullopt when degenerate.
inline std::optional<double> decay_slope(const SweepOutput& sweep, std::size_t min_points = 2) {
    std::vector<double> xs, ys;
    for (const auto& r : sweep.rows)
        if (std::abs(r.exact) > 0 && r.r_factor > 0) {
            xs.push_back(std::log(r.r_factor));
            ys.push_back(std::log(std::abs(r.exact)));
        }
    if (xs.size() < min_points) return std::nullopt;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) return std::nullopt;
    return sxy / sxx;
}

}  // namespace mixinglab
