// Acceptance gate: one line per criterion, nonzero exit on any failure.
// Tolerances and instance counts are pinned here, in code.

#include "mixinglab/bounds.hpp"
#include "mixinglab/runner.hpp"
#include "mixinglab/sweep.hpp"
#include "mixinglab/verify.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace mixinglab;

namespace {

constexpr std::uint64_t kSeed = 20240817;

struct Criterion {
    std::string name;
    std::function<std::string()> run;  // empty string = pass, else failure detail
};

std::string check_operator_identities() {
    auto res = suite_operator_identities(1000, derive_seed(kSeed, 101));
    if (!res.passed())
        return "failures=" + std::to_string(res.failures) + " first: " + res.first_failure;
    return "";
}

std::string check_sumset_suite() {
    auto res = suite_sumset_projection(500, derive_seed(kSeed, 102));
    if (!res.passed())
        return "failures=" + std::to_string(res.failures) + " first: " + res.first_failure;
    return "";
}

std::string check_oracle_equivalence() {
    auto res = suite_exact_vs_mc(50, derive_seed(kSeed, 103), 1'000'000, 8);
    if (!res.passed())
        return "failures=" + std::to_string(res.failures) + " first: " + res.first_failure;
    return "";
}

std::string check_two_mixing_recovery() {
    RandomSource rnd(derive_seed(kSeed, 104));
    auto rep = RepresentationData::standard_sl2();
    for (int i = 0; i < 100; ++i) {
        double a = rnd.uniform_real(1.5, 200.0);
        BoundInputs in;
        in.constant = rnd.uniform_real(0.1, 5.0);
        in.spectral_radius = 1.0 + rnd.uniform_real(0.0, 9.0);
        in.q = 1;
        in.d0 = static_cast<int>(rnd.uniform_int(1, 6));
        in.dk = static_cast<int>(rnd.uniform_int(1, 6));

        std::vector<DiagonalElement> tuple{DiagonalElement::identity(2),
                                           DiagonalElement::sl2_cartan(Rational(a))};
        double theorem = rhs_main_bound(in, ratio_factors(rep, tuple));
        double corollary = corollary_sl2(Sl2Action::Standard, {1.0, a}, in);
        if (theorem != corollary)
            return "mismatch at instance " + std::to_string(i) + ": " +
                   std::to_string(theorem) + " vs " + std::to_string(corollary);

        // the k = 1 rate is exactly C s^2 sqrt(d0 dk) / a
        double rate = in.constant * std::pow(in.spectral_radius, 2.0) *
                      std::sqrt(static_cast<double>(in.d0)) *
                      std::sqrt(static_cast<double>(in.dk)) / a;
        if (std::abs(theorem - rate) > 1e-12 * rate)
            return "rate deviates from a^{-1} at instance " + std::to_string(i);
    }
    return "";
}

SweepConfig acceptance_sweep(const Rational& q) {
    SweepConfig sw;
    sw.base = AffineLatticeElement::from_ints(2, 1, 1, 1, 1, 0);
    sw.powers = {1, 2, 3, 4, 5, 6, 7, 8};
    sw.pattern = {1, 2};
    sw.preset = "orbit";
    sw.q = q;
    sw.constant = 1.0;
    sw.divergence_floor = 2.0;
    sw.seed = kSeed;
    return sw;
}

std::string check_bound_validity_sweep() {
    for (Rational q : {Rational(1), Rational(1, 3)}) {
        auto res = decay_sweep(acceptance_sweep(q));
        if (res.rows.size() != 8) return "expected 8 rows";
        for (const auto& row : res.rows)
            if (!row.applicable)
                return "row with powers " + std::to_string(row.powers.front()) +
                       " not applicable (q=" + detail::format_rational(q) + ")";
        auto cal = calibrate_sweep(res, {1, 2, 3, 4});
        if (cal.train_rows != 4)
            return "training rows != 4 (q=" + detail::format_rational(q) + ")";
        if (!(cal.constant > 0))
            return "degenerate calibration constant (q=" + detail::format_rational(q) + ")";
        if (!cal.holdout_violations.empty())
            return std::to_string(cal.holdout_violations.size()) +
                   " holdout violations (q=" + detail::format_rational(q) + ")";
    }
    return "";
}

std::string check_decay_rate_sanity() {
    for (Rational q : {Rational(1), Rational(1, 3)}) {
        auto res = decay_sweep(acceptance_sweep(q));
        std::size_t positive = 0;
        for (const auto& row : res.rows)
            if (std::abs(row.exact) > 0) ++positive;
        if (positive < 4) continue;  // criterion applies only with >= 4 points
        auto slope = decay_slope(res, 4);
        if (!slope) return "slope regression degenerate";
        double limit = -to_double(q) / 2.0 + 0.1;
        if (!(*slope <= limit))
            return "slope " + std::to_string(*slope) + " exceeds " + std::to_string(limit) +
                   " (q=" + detail::format_rational(q) + ")";
    }
    return "";
}

std::string check_exponent_optimization() {
    // iterated grid refinement, no calculus, resolution well under 1e-6
    auto grid_search = [](double a, double q) {
        double lo = 0.0, hi = 0.5, best = 0.0;
        for (int round = 0; round < 8; ++round) {
            double best_val = std::numeric_limits<double>::infinity();
            double step = (hi - lo) / 500.0;
            for (double e = lo; e <= hi + step / 2; e += step) {
                double val = std::max(-a * e, 2.0 * q * e - q / 2.0);
                if (val < best_val) {
                    best_val = val;
                    best = e;
                }
            }
            lo = std::max(0.0, best - 2 * step);
            hi = best + 2 * step;
        }
        return best;
    };
    for (int i = 0; i < 20; ++i)
        for (int jj = 1; jj <= 20; ++jj) {
            double a = 0.1 + i * (9.9 / 19.0);
            double q = jj / 20.0;
            double eps = optimal_epsilon(a, q);
            double grid = grid_search(a, q);
            if (std::abs(eps - grid) > 1e-6)
                return "grid mismatch at A=" + std::to_string(a) + " q=" + std::to_string(q) +
                       ": " + std::to_string(std::abs(eps - grid));

            // balanced envelope: the crossing of R^{-A e} and R^{2q e - q/2},
            // solved by bisection, must reproduce the closed-form exponent
            double blo = 0.0, bhi = 0.5;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (blo + bhi);
                double diff = (2.0 * q * mid - q / 2.0) - (-a * mid);
                (diff < 0 ? blo : bhi) = mid;
            }
            double balanced_exponent = a * 0.5 * (blo + bhi);
            if (std::abs(balanced_exponent - tail_bound_exponent(a, q)) > 1e-9)
                return "envelope mismatch at A=" + std::to_string(a) +
                       " q=" + std::to_string(q);
        }
    return "";
}

std::string check_splitting_suite() {
    auto res = suite_diagonal_splitting(1000, derive_seed(kSeed, 108));
    if (!res.passed())
        return "failures=" + std::to_string(res.failures) + " first: " + res.first_failure;
    return "";
}

std::string check_reproducibility() {
    const char* cfg_text = R"(
matrix = 2 1 1 1
translation = 1 0
k = 2
powers = 1 2 3 4 5
pattern = 1 2
preset = orbit
q = 1/3
C = 1.0
Cprime = 2.0
mc_samples = 20000
mc_shards = 4
seed = 424242
train_powers = 1 2 3
)";
    auto cfg = KeyValueConfig::parse_text(cfg_text);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    run_command("decay", cfg, "acceptance_rep_1.csv");
    run_command("decay", cfg, "acceptance_rep_2.csv");
    bool csv_ok = slurp("acceptance_rep_1.csv") == slurp("acceptance_rep_2.csv") &&
                  !slurp("acceptance_rep_1.csv").empty();
    bool meta_ok =
        slurp("acceptance_rep_1.csv.meta.json") == slurp("acceptance_rep_2.csv.meta.json");
    auto cal1 = run_command("calibrate", cfg, "");
    auto cal2 = run_command("calibrate", cfg, "");
    bool json_ok = cal1.stdout_text == cal2.stdout_text && !cal1.stdout_text.empty();
    for (const char* p : {"acceptance_rep_1.csv", "acceptance_rep_2.csv",
                          "acceptance_rep_1.csv.meta.json", "acceptance_rep_2.csv.meta.json"})
        std::remove(p);
    if (!csv_ok) return "CSV outputs differ between identical runs";
    if (!meta_ok) return "metadata outputs differ between identical runs";
    if (!json_ok) return "calibration JSON differs between identical runs";
    return "";
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {"operator-identity suite (1000 exact instances)", check_operator_identities},
        {"sumset projection suite (500 instances, adversarial included)", check_sumset_suite},
        {"oracle equivalence exact vs MC (50 instances, N=1e6, 5 sigma)",
         check_oracle_equivalence},
        {"two-mixing rate recovery (100 exact agreements)", check_two_mixing_recovery},
        {"bound validity sweep (calibrate n=1..4, holdout n=5..8, q=1 and 1/3)",
         check_bound_validity_sweep},
        {"decay-rate sanity (slope <= -q/2 + 0.1)", check_decay_rate_sanity},
        {"exponent optimization (20x20 grid, 1e-6; envelope 1e-9)",
         check_exponent_optimization},
        {"splitting suite (1000 instances, n in {3,4,5})", check_splitting_suite},
        {"reproducibility (byte-identical reruns)", check_reproducibility},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        try {
            detail = criteria[i].run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  [%zu/%zu] %s (%.1fs)%s%s\n", detail.empty() ? "PASS" : "FAIL", i + 1,
                    criteria.size(), criteria[i].name.c_str(), secs,
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!detail.empty()) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
