#include "mixinglab/runner.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace mixinglab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSweepText = R"(
matrix = 2 1 1 1
translation = 1 0
k = 2
powers = 1 2 3 4
pattern = 1 2
preset = orbit
q = 1
C = 1.0
Cprime = 2.0
seed = 20240817
)";

}  // namespace

TEST_CASE("key-value config parsing") {
    auto cfg = KeyValueConfig::parse_text("a = 3\nb = 1/3\n# comment\nlist = 1 2 3\n");
    CHECK(cfg.get_long("a") == 3);
    CHECK(cfg.get_rational("b") == Rational(1, 3));
    CHECK(cfg.get_long_list("list") == std::vector<long>{1, 2, 3});
    CHECK(cfg.get_long_or("missing", 7) == 7);

    SECTION("diagnostics name the offending key") {
        CHECK_THROWS_WITH(cfg.get_long("b"), Catch::Matchers::ContainsSubstring("'b'"));
        CHECK_THROWS_WITH(cfg.get_string("absent"),
                          Catch::Matchers::ContainsSubstring("'absent'"));
        auto bad = KeyValueConfig::parse_text("x = 1/8\n");
        CHECK_THROWS_WITH(bad.get_double_list("x"), Catch::Matchers::ContainsSubstring("'x'"));
    }

    SECTION("unused keys are reported") {
        auto c2 = KeyValueConfig::parse_text("used = 1\nstray = 2\n");
        (void)c2.get_long("used");
        auto unused = c2.unused_keys();
        REQUIRE(unused.size() == 1);
        CHECK(unused[0] == "stray");
    }

    SECTION("malformed lines are rejected") {
        CHECK_THROWS_WITH(KeyValueConfig::parse_text("just words\n"),
                          Catch::Matchers::ContainsSubstring("line 1"));
    }
}

TEST_CASE("sweep emits the pinned csv schema") {
    auto cfg = KeyValueConfig::parse_text(kSweepText);
    auto sw = parse_sweep_config(cfg);
    auto res = decay_sweep(sw);

    REQUIRE(res.rows.size() == 4);
    CHECK(std::string(report_csv_header()) ==
          "k,powers,sigma1_list,q_used,R_factor,rhs_bound,exact_re,exact_im,exact_abs,"
          "mc_est_re,mc_est_im,mc_stderr,ratio");

    for (const auto& row : res.rows) {
        CHECK(row.k == 2);
        CHECK(row.powers.size() == 2);
        CHECK(row.powers[1] == 2 * row.powers[0]);
        CHECK(std::abs(row.exact) > 0);
        CHECK(row.applicable);
        CHECK(row.ratio <= 1.0);  // the huge s^2 constant dominates at C = 1
        auto cells = report_csv_row(row);
        CHECK(std::count(cells.begin(), cells.end(), ',') == 12);
    }

    SECTION("ratios decrease along the sweep") {
        for (std::size_t i = 1; i < res.rows.size(); ++i)
            CHECK(res.rows[i].ratio < res.rows[i - 1].ratio);
    }

    SECTION("rows are reproducible under re-evaluation") {
        auto res2 = decay_sweep(sw);
        for (std::size_t i = 0; i < res.rows.size(); ++i) {
            CHECK(res.rows[i].exact == res2.rows[i].exact);
            CHECK(report_csv_row(res.rows[i]) == report_csv_row(res2.rows[i]));
        }
    }
}

TEST_CASE("sweep validation errors") {
    auto cfg = KeyValueConfig::parse_text(kSweepText);
    auto sw = parse_sweep_config(cfg);

    auto bad_powers = sw;
    bad_powers.powers = {3, 2};
    CHECK_THROWS_AS(decay_sweep(bad_powers), std::invalid_argument);

    auto bad_preset = sw;
    bad_preset.preset = "nonsense";
    CHECK_THROWS_AS(decay_sweep(bad_preset), std::invalid_argument);

    auto missing_explicit = sw;
    missing_explicit.preset = "explicit";
    CHECK_THROWS_AS(decay_sweep(missing_explicit), std::invalid_argument);
}

TEST_CASE("non-hyperbolic base flags every row inapplicable") {
    auto cfg = KeyValueConfig::parse_text(R"(
matrix = 1 0 0 1
translation = 1 0
k = 2
powers = 1 2
preset = lowband
)");
    auto sw = parse_sweep_config(cfg);
    auto res = decay_sweep(sw);
    for (const auto& row : res.rows) {
        CHECK_FALSE(row.applicable);
        auto csv = report_csv_row(row);
        CHECK_THAT(csv, Catch::Matchers::ContainsSubstring("na"));
    }
}

TEST_CASE("lowband preset dies out under hyperbolic powers") {
    auto cfg = KeyValueConfig::parse_text(kSweepText);
    auto sw = parse_sweep_config(cfg);
    sw.preset = "lowband";
    sw.powers = {4, 5, 6};
    auto res = decay_sweep(sw);
    for (const auto& row : res.rows) CHECK(std::abs(row.exact) == 0.0);
}

TEST_CASE("calibration on the sweep holds out cleanly") {
    auto cfg = KeyValueConfig::parse_text(kSweepText);
    auto sw = parse_sweep_config(cfg);
    sw.powers = {1, 2, 3, 4, 5, 6};
    auto res = decay_sweep(sw);
    auto cal = calibrate_sweep(res, {1, 2, 3});
    CHECK(cal.train_rows == 3);
    CHECK(cal.constant > 0);
    CHECK(cal.holdout_violations.empty());

    auto slope = decay_slope(res);
    REQUIRE(slope.has_value());
    CHECK(*slope < -0.4);
}

TEST_CASE("runner end-to-end byte reproducibility") {
    std::string cfg_path = "test_run_cfg.tmp";
    std::string out1 = "test_run_out1.tmp", out2 = "test_run_out2.tmp";
    {
        std::ofstream f(cfg_path);
        f << kSweepText;
    }
    auto cfg = KeyValueConfig::parse_file(cfg_path);
    run_command("decay", cfg, out1);
    run_command("decay", cfg, out2);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(out1 + ".meta.json") == slurp(out2 + ".meta.json"));

    auto first_line = slurp(out1).substr(0, slurp(out1).find('\n'));
    CHECK(first_line == report_csv_header());

    for (const auto& p : {out1, out2, out1 + ".meta.json", out2 + ".meta.json", cfg_path})
        std::remove(p.c_str());
}

TEST_CASE("bound command prints the worked corollary value") {
    auto cfg = KeyValueConfig::parse_text(
        "bound = corollary_standard\na_values = 1 2 8\nC = 1.0\ns = 1.0\n");
    auto r = run_bound(cfg);
    CHECK(r.stdout_text == "0.0912870929175\n");
}

TEST_CASE("correlate command emits a full json report") {
    auto cfg = KeyValueConfig::parse_text(R"(
matrix = 2 1 1 1
k = 1
powers = 1
f0 = {"dim":3,"terms":[{"freq":[-1,1,0],"re":1}]}
f1 = {"dim":3,"terms":[{"freq":[1,0,0],"re":1}]}
mc_samples = 5000
seed = 7
)");
    auto r = run_correlate(cfg, "");
    auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["schema_version"] == kReportSchemaVersion);
    CHECK(j["exact_re"] == 1.0);
    CHECK(j["exact_im"] == 0.0);
    CHECK(j["mc_samples"] == 5000);
    CHECK(j.contains("ratio"));
    CHECK(j["sigma1_is_proxy"] == true);
    CHECK(j["q_used"] == "1");
    CHECK(j["seed"] == 7);
}

TEST_CASE("explicit preset runs through the config surface") {
    auto cfg = KeyValueConfig::parse_text(R"(
matrix = 2 1 1 1
k = 1
powers = 1 2
pattern = 1
preset = explicit
f0 = {"dim":3,"terms":[{"freq":[-1,1,0],"re":1}]}
f1 = {"dim":3,"terms":[{"freq":[1,0,0],"re":1}]}
)");
    auto sw = parse_sweep_config(cfg);
    auto res = decay_sweep(sw);
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].exact == Complex(1.0));  // the single-tuple cancellation
    CHECK(res.rows[1].exact == Complex(0.0));  // power 2 escapes
}
