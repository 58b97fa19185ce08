#include "mixinglab/bounds.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace mixinglab;

namespace {

RatioFactors make_factors(double f1, double f2) {
    RatioFactors r;
    r.highest_sum = Rational(f1);
    r.lowest_inv_sum = Rational(f2);
    return r;
}

BoundInputs unit_inputs() {
    BoundInputs in;
    in.constant = 1.0;
    in.spectral_radius = 1.0;
    in.q = 1;
    in.d0 = in.dk = 1;
    return in;
}

// Independent check for the balancing argument: the achieved exponent is the
// value of max(R^{-A e}, R^{2q e - q/2}) at its minimizer over e, found by
// iterated grid refinement (no calculus).
double grid_search_epsilon(double a, double q, double tol) {
    double lo = 0.0, hi = 0.5;
    double best = 0.0;
    for (int round = 0; round < 6; ++round) {
        double best_val = std::numeric_limits<double>::infinity();
        double step = (hi - lo) / 400.0;
        for (double e = lo; e <= hi + step / 2; e += step) {
            double val = std::max(-a * e, 2.0 * q * e - q / 2.0);  // log scale
            if (val < best_val) {
                best_val = val;
                best = e;
            }
        }
        lo = std::max(0.0, best - 2 * step);
        hi = best + 2 * step;
        if (step < tol / 10) break;
    }
    return best;
}

}  // namespace

TEST_CASE("main bound evaluation") {
    auto in = unit_inputs();
    CHECK(rhs_main_bound(in, make_factors(12, 10)) ==
          Catch::Approx(std::pow(120.0, -0.5)).epsilon(1e-12));

    SECTION("k = 1 gives the two-mixing rate a^{-1}") {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> av(1.5, 100.0);
        for (int i = 0; i < 50; ++i) {
            double a = av(rng);
            double bound = rhs_main_bound(in, make_factors(a, a));
            CHECK(bound == Catch::Approx(1.0 / a).epsilon(1e-12));
        }
    }

    SECTION("homogeneity in the orbit dimensions") {
        auto in2 = in;
        in2.d0 = 2;
        CHECK(rhs_main_bound(in2, make_factors(12, 10)) ==
              Catch::Approx(std::sqrt(2.0) * rhs_main_bound(in, make_factors(12, 10))));
    }

    SECTION("monotone nonincreasing in each factor") {
        std::mt19937_64 rng(34);
        std::uniform_real_distribution<double> fv(1.0, 50.0);
        for (int i = 0; i < 100; ++i) {
            double f1 = fv(rng), f2 = fv(rng), bump = fv(rng);
            double base = rhs_main_bound(in, make_factors(f1, f2));
            CHECK(rhs_main_bound(in, make_factors(f1 + bump, f2)) <= base);
            CHECK(rhs_main_bound(in, make_factors(f1, f2 + bump)) <= base);
        }
    }

    SECTION("nonpositive factors are rejected") {
        CHECK_THROWS_AS(rhs_main_bound(in, make_factors(0.0, 10.0)), std::invalid_argument);
        CHECK_THROWS_AS(rhs_main_bound(in, make_factors(12.0, -1.0)), std::invalid_argument);
    }
}

TEST_CASE("bound matches the ratio-factor pipeline end to end") {
    // the worked two-element example: factors (12, 10) from the weight sums
    auto rep = RepresentationData::standard_sl2();
    std::vector<DiagonalElement> tuple{DiagonalElement::identity(2),
                                       DiagonalElement::sl2_cartan(2),
                                       DiagonalElement::sl2_cartan(8)};
    auto rf = ratio_factors(rep, tuple);
    auto in = unit_inputs();
    CHECK(rhs_main_bound(in, rf) == Catch::Approx(std::pow(120.0, -0.5)).epsilon(1e-12));
}

TEST_CASE("epsilon optimization") {
    CHECK(optimal_epsilon(2.0, 1.0) == Catch::Approx(0.125));
    CHECK(tail_bound_exponent(2.0, 1.0) == Catch::Approx(0.25));

    SECTION("grid search agreement") {
        for (double a : {0.1, 0.7, 2.0, 5.0, 10.0})
            for (double q : {0.05, 1.0 / 3.0, 0.5, 1.0}) {
                double eps = optimal_epsilon(a, q);
                double grid = grid_search_epsilon(a, q, 1e-9);
                CHECK(eps == Catch::Approx(grid).margin(1e-6));
            }
    }

    SECTION("large A recovers the q/2 rate") {
        CHECK(tail_bound_exponent(1e12, 1.0) == Catch::Approx(0.5).epsilon(1e-9));
        CHECK(tail_bound_exponent(1e12, 1.0 / 3.0) == Catch::Approx(1.0 / 6.0).epsilon(1e-9));
    }

    SECTION("vanishing q gives no decay") {
        CHECK(tail_bound_exponent(2.0, 1e-12) == Catch::Approx(0.0).margin(1e-11));
    }

    SECTION("exponent ratio approaches 1 as A grows") {
        double q = 1.0;
        double ratio = tail_bound_exponent(1e6, q) / (q / 2.0);
        CHECK(std::abs(ratio - 1e6 / (1e6 + 2.0 * q)) < 1e-9);
        CHECK(std::abs(ratio - 1.0) < 1e-5);
    }

    CHECK_THROWS_AS(optimal_epsilon(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("tail norm bound") {
    auto in = unit_inputs();
    in.a_norm = 2.0;
    in.linf_norms = {1.0, 1.0};
    in.tail_norms = {1.0, 1.0};
    // unit norms and R = 16: exponent 1/4 gives 16^{-1/4} = 1/2
    CHECK(rhs_tail_norm_bound(in, make_factors(4, 4)) == Catch::Approx(0.5).epsilon(1e-12));

    in.tail_norms = {2.0, 1.0};
    CHECK(rhs_tail_norm_bound(in, make_factors(4, 4)) == Catch::Approx(1.0).epsilon(1e-12));

    in.tail_norms.clear();
    CHECK_THROWS_AS(rhs_tail_norm_bound(in, make_factors(4, 4)), std::invalid_argument);
}

TEST_CASE("sobolev norm bound") {
    auto in = unit_inputs();
    in.a_norm = 2.0;
    in.sobolev_norms = {1.0, 1.0, 1.0};
    CHECK(rhs_sobolev_bound(in, make_factors(4, 4)) == Catch::Approx(0.5).epsilon(1e-12));

    in.sobolev_norms = {2.0, 1.0, 1.0};
    CHECK(rhs_sobolev_bound(in, make_factors(4, 4)) == Catch::Approx(2.0).epsilon(1e-12));

    in.sobolev_norms.clear();
    CHECK_THROWS_AS(rhs_sobolev_bound(in, make_factors(4, 4)), std::invalid_argument);
}

TEST_CASE("sl2 corollaries") {
    auto in = unit_inputs();

    SECTION("standard action worked example") {
        CHECK(corollary_sl2(Sl2Action::Standard, {1, 2, 8}, in) ==
              Catch::Approx(std::pow(120.0, -0.5)).epsilon(1e-12));
    }

    SECTION("adjoint action squares the weights") {
        CHECK(corollary_sl2(Sl2Action::Adjoint, {1, 2, 8}, in) ==
              Catch::Approx(std::pow(80.0, -0.5) * std::pow(68.0, -0.5)).epsilon(1e-12));
    }

    SECTION("k = 1 standard gives a^{-1}") {
        CHECK(corollary_sl2(Sl2Action::Standard, {1, 7}, in) ==
              Catch::Approx(1.0 / 7.0).epsilon(1e-12));
    }

    SECTION("exact agreement with the general bound at q = 1") {
        std::mt19937_64 rng(56);
        std::uniform_real_distribution<double> step(1.1, 4.0);
        for (int i = 0; i < 100; ++i) {
            std::vector<double> a_values{1.0};
            int k = 1 + static_cast<int>(rng() % 3);
            for (int j = 0; j < k; ++j) a_values.push_back(a_values.back() * step(rng));

            std::vector<DiagonalElement> tuple;
            for (double a : a_values) tuple.push_back(DiagonalElement::sl2_cartan(Rational(a)));

            auto in2 = unit_inputs();
            in2.spectral_radius = 1.0 + std::uniform_real_distribution<double>(0, 4)(rng);
            in2.constant = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
            in2.d0 = 1 + static_cast<int>(rng() % 4);
            in2.dk = 1 + static_cast<int>(rng() % 4);

            auto rep = RepresentationData::standard_sl2();
            double via_theorem = rhs_main_bound(in2, ratio_factors(rep, tuple));
            double via_corollary = corollary_sl2(Sl2Action::Standard, a_values, in2);
            CHECK(via_theorem == via_corollary);  // bitwise

            auto adj = RepresentationData::adjoint_sl2();
            double adj_theorem = rhs_main_bound(in2, ratio_factors(adj, tuple));
            double adj_corollary = corollary_sl2(Sl2Action::Adjoint, a_values, in2);
            CHECK(adj_theorem == adj_corollary);  // bitwise
        }
    }

    SECTION("unordered values are rejected") {
        CHECK_THROWS_AS(corollary_sl2(Sl2Action::Standard, {1, 8, 2}, in),
                        std::invalid_argument);
        CHECK_THROWS_AS(corollary_sl2(Sl2Action::Standard, {2, 8}, in), std::invalid_argument);
    }
}

TEST_CASE("constant calibration") {
    SECTION("all-zero exacts give zero") {
        std::vector<CalibrationRow> rows{{0.0, 0.5, true}, {0.0, 0.1, true}};
        CHECK(calibrate_constant(rows).constant == 0.0);
    }

    SECTION("single ratio") {
        std::vector<CalibrationRow> rows{{0.05, 0.1, true}};
        CHECK(calibrate_constant(rows).constant == Catch::Approx(0.5));
    }

    SECTION("holdout verdicts") {
        std::vector<CalibrationRow> train{{0.2, 0.4, true}, {0.1, 0.4, true}};
        std::vector<CalibrationRow> hold{{0.19, 0.4, true}, {0.3, 0.4, true}, {9.0, 0.1, false}};
        auto res = calibrate_constant(train, hold);
        CHECK(res.constant == Catch::Approx(0.5));
        REQUIRE(res.holdout_violations.size() == 1);
        CHECK(res.holdout_violations[0] == 1);  // inapplicable row 2 is skipped
    }

    CHECK_THROWS_AS(calibrate_constant({}), std::invalid_argument);
}
