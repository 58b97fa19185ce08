#include "mixinglab/repdata.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace mixinglab;

namespace {

DiagonalElement diag2(const Rational& a) { return DiagonalElement::sl2_cartan(a); }

std::vector<DiagonalElement> tuple_with_identity(std::vector<DiagonalElement> rest) {
    std::vector<DiagonalElement> t{DiagonalElement::identity(rest.front().rank())};
    for (auto& e : rest) t.push_back(std::move(e));
    return t;
}

}  // namespace

TEST_CASE("weight evaluation on diagonal elements") {
    WeightVector w{{1, -1}};
    CHECK(evaluate_weight(w, diag2(2)) == Rational(4));
    CHECK(evaluate_weight(w, DiagonalElement::identity(2)) == Rational(1));
    CHECK(evaluate_weight(WeightVector{{2, -2}}, diag2(3)) == Rational(81));

    CHECK_THROWS_AS(evaluate_weight(WeightVector{{1}}, diag2(2)), std::invalid_argument);
}

TEST_CASE("weight evaluation is a character, exactly") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> num(1, 40);
    std::uniform_int_distribution<int> expo(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        Rational s(num(rng), num(rng));
        Rational t(num(rng), num(rng));
        DiagonalElement a = diag2(s), b = diag2(t);
        WeightVector w{{expo(rng), expo(rng)}};
        CHECK(evaluate_weight(w, a * b) == evaluate_weight(w, a) * evaluate_weight(w, b));
    }
}

TEST_CASE("valuation-mode weights") {
    auto a = DiagonalElement::valuation({BigInt(-2), BigInt(2)});
    WeightVector lambda{{1, 0}};
    CHECK(evaluate_weight_valuation(lambda, a) == -2);
    CHECK(weight_abs(lambda, a, 3) == Rational(9));
    CHECK_THROWS_AS(weight_abs(lambda, a, 1), std::invalid_argument);
}

TEST_CASE("decay exponent from representation shape") {
    auto std_rep = RepresentationData::standard_sl2();
    auto adj_rep = RepresentationData::adjoint_sl2();
    CHECK(decay_exponent(std_rep) == Rational(1));
    CHECK(decay_exponent(adj_rep) == Rational(1, 3));

    RepresentationData synthetic;
    synthetic.name = "synthetic";
    synthetic.weights = {WeightVector{{1, 0}}, WeightVector{{0, 0}}, WeightVector{{0, 1}}};
    synthetic.weight_dims = {2, 1, 1};
    synthetic.highest = WeightVector{{1, 0}};
    synthetic.lowest = WeightVector{{0, 1}};
    CHECK(decay_exponent(synthetic) == Rational(1, 9));

    CHECK(decay_exponent(adj_rep, Rational(1)) == Rational(1));  // caller override

    RepresentationData degenerate;
    degenerate.name = "degenerate";
    degenerate.weights = {WeightVector{{1, 0}}};
    degenerate.weight_dims = {1};
    degenerate.highest = degenerate.lowest = WeightVector{{1, 0}};
    CHECK_THROWS_AS(decay_exponent(degenerate), std::invalid_argument);
}

TEST_CASE("decay exponent lies in (0,1], equals 1 only for the minimal shape") {
    for (int weights = 2; weights <= 6; ++weights) {
        for (int topdim = 1; topdim <= 2; ++topdim) {
            RepresentationData rep;
            rep.name = "probe";
            for (int i = 0; i < weights; ++i)
                rep.weights.push_back(WeightVector{{i, weights - i}});
            rep.weight_dims.assign(weights, 1);
            rep.weight_dims[0] = topdim;
            rep.highest = rep.weights.front();
            rep.lowest = rep.weights.back();
            Rational q = decay_exponent(rep);
            CHECK(q > 0);
            CHECK(q <= 1);
            CHECK((q == 1) == (weights == 2 && topdim == 1));
        }
    }
}

TEST_CASE("ratio factors for the standard representation") {
    auto rep = RepresentationData::standard_sl2();

    SECTION("two-element tuple") {
        auto t = tuple_with_identity({diag2(2), diag2(8)});
        auto rf = ratio_factors(rep, t);
        CHECK(rf.highest_sum == Rational(12));
        CHECK(rf.lowest_inv_sum == Rational(10));
        CHECK(rf.product() == Rational(120));
    }

    SECTION("k = 1 reduces to a^2") {
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<int> num(2, 30);
        for (int trial = 0; trial < 50; ++trial) {
            Rational a(num(rng));
            auto rf = ratio_factors(rep, tuple_with_identity({diag2(a)}));
            CHECK(rf.product() == a * a);
        }
    }

    SECTION("identity tuple gives k * k") {
        std::vector<DiagonalElement> t(4, DiagonalElement::identity(2));
        auto rf = ratio_factors(rep, t);
        CHECK(rf.product() == Rational(9));
    }

    SECTION("errors") {
        CHECK_THROWS_AS(ratio_factors(rep, {}), std::invalid_argument);
        CHECK_THROWS_AS(ratio_factors(rep, {diag2(2)}), std::invalid_argument);
    }
}

TEST_CASE("ratio factors in valuation mode use exact ultrametric sums") {
    auto rep = RepresentationData::standard_sl2();
    auto e1 = DiagonalElement::valuation({BigInt(-1), BigInt(1)});
    auto e2 = DiagonalElement::valuation({BigInt(-3), BigInt(3)});
    auto t = std::vector<DiagonalElement>{
        DiagonalElement::identity(2, DiagonalElement::Mode::Valuation), e1, e2};
    auto rf = ratio_factors(rep, t, FirstSumRange::FromZero, 2);
    CHECK(rf.highest_sum == Rational(8));    // |q^{-3} + q^{-2}| = Q^3
    CHECK(rf.lowest_inv_sum == Rational(8));  // |q^{-1} + q^{-3}| = Q^3
}

TEST_CASE("first-sum range is a sensitivity parameter") {
    auto rep = RepresentationData::standard_sl2();
    auto t = tuple_with_identity({diag2(2), diag2(8)});
    auto from_one = ratio_factors(rep, t, FirstSumRange::FromOne);
    CHECK(from_one.highest_sum == Rational(4));  // only lambda(a^2/a^1)
    CHECK(from_one.lowest_inv_sum == Rational(10));
}

TEST_CASE("ordering by highest weight value") {
    auto rep = RepresentationData::standard_sl2();
    auto big = diag2(8), small = diag2(2);

    auto sorted = order_by_highest_weight(rep, {big, small});
    CHECK(sorted[0].entries() == small.entries());
    CHECK(sorted[1].entries() == big.entries());

    auto single = order_by_highest_weight(rep, {big});
    CHECK(single[0].entries() == big.entries());

    auto tie = order_by_highest_weight(rep, {small, small});
    CHECK(tie[0].entries() == small.entries());
    CHECK(tie[1].entries() == small.entries());
}

TEST_CASE("ordering makes ratio factors a function of the multiset") {
    auto rep = RepresentationData::standard_sl2();
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> num(2, 50);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<DiagonalElement> base{diag2(num(rng)), diag2(num(rng)), diag2(num(rng))};
        auto permuted = base;
        std::shuffle(permuted.begin(), permuted.end(), rng);
        auto t1 = tuple_with_identity(order_by_highest_weight(rep, base));
        auto t2 = tuple_with_identity(order_by_highest_weight(rep, permuted));
        CHECK(ratio_factors(rep, t1).product() == ratio_factors(rep, t2).product());
    }
}

TEST_CASE("divergence condition") {
    auto rep = RepresentationData::standard_sl2();
    auto t = tuple_with_identity({diag2(2), diag2(8)});

    auto r1 = check_divergence(rep, t, Rational(3, 2));
    CHECK(r1.satisfied);
    CHECK(r1.attained_min == Rational(2));

    auto r2 = check_divergence(rep, t, Rational(4));
    CHECK_FALSE(r2.satisfied);
    CHECK(r2.attained_min == Rational(2));

    std::vector<DiagonalElement> ids(3, DiagonalElement::identity(2));
    CHECK_FALSE(check_divergence(rep, ids, Rational(1)).satisfied);

    SECTION("monotone in the threshold") {
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> num(2, 60);
        for (int trial = 0; trial < 50; ++trial) {
            auto tup = tuple_with_identity({diag2(num(rng)), diag2(num(rng) + 60)});
            Rational hi(num(rng), 3);
            Rational lo = hi / 2;
            if (check_divergence(rep, tup, hi).satisfied)
                CHECK(check_divergence(rep, tup, lo).satisfied);
        }
    }
}

TEST_CASE("chamber membership predicate") {
    CHECK(diag2(2).in_positive_chamber());
    CHECK_FALSE(diag2(Rational(1, 2)).in_positive_chamber());
    CHECK(DiagonalElement::valuation({BigInt(-2), BigInt(2)}).in_positive_chamber());
    CHECK(DiagonalElement::archimedean({Rational(4), Rational(1), Rational(1, 4)})
              .in_positive_chamber());
}
