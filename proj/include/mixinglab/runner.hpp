#pragma once

// Command orchestrator behind the CLI: each command takes a parsed config
// and writes its artifacts (CSV to the output path, JSON to the output path
// or stdout). Lives in a header so tests can run commands in-process and
// compare output bytes.

#include "mixinglab/config.hpp"
#include "mixinglab/slnreduce.hpp"
#include "mixinglab/sweep.hpp"
#include "mixinglab/verify.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace mixinglab {

struct RunResult {
    int exit_code = 0;
    std::string stdout_text;  // what the CLI prints
};

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << content;
}

inline nlohmann::json sweep_provenance(const SweepConfig& sw, const SweepOutput& res) {
    nlohmann::json meta;
    meta["schema_version"] = kReportSchemaVersion;
    const auto& a = sw.base.linear();
    meta["matrix"] = {a[0].convert_to<long long>(), a[1].convert_to<long long>(),
                      a[2].convert_to<long long>(), a[3].convert_to<long long>()};
    meta["translation"] = {sw.base.translation()[0].convert_to<long long>(),
                           sw.base.translation()[1].convert_to<long long>()};
    meta["powers"] = sw.powers;
    meta["pattern"] = sw.pattern;
    meta["preset"] = sw.preset;
    meta["q"] = detail::format_rational(sw.q);
    meta["C"] = sw.constant;
    meta["Cprime"] = sw.divergence_floor;
    meta["s"] = res.spectral_radius;
    meta["d0"] = res.d0;
    meta["dk"] = res.dk;
    meta["sum_range"] = sw.sum_range == FirstSumRange::FromZero ? "from_zero" : "from_one";
    meta["mc_samples"] = sw.mc_samples;
    meta["mc_shards"] = sw.mc_shards;
    meta["seed"] = sw.seed;
    if (sw.preset == "orbit") {
        meta["orbit_segment"] = sw.orbit.segment;
        meta["orbit_ratio"] = sw.orbit.ratio;
    }
    return meta;
}

inline std::string sweep_csv(const SweepOutput& res) {
    std::ostringstream os;
    os << report_csv_header() << "\n";
    for (const auto& row : res.rows) os << report_csv_row(row) << "\n";
    return os.str();
}

}  // namespace detail

inline RunResult run_verify(const KeyValueConfig& cfg) {
    RunResult r;
    std::ostringstream os;
    auto suites = run_default_verify(cfg.get_seed_or("seed", kDefaultSeed));
    for (const auto& s : suites) {
        os << (s.passed() ? "PASS" : "FAIL") << " " << s.name << " (" << s.instances
           << " instances)";
        if (!s.passed()) {
            os << "\n  first failure: " << s.first_failure;
            r.exit_code = 1;
        }
        os << "\n";
    }
    r.stdout_text = os.str();
    return r;
}

inline RunResult run_correlate(const KeyValueConfig& cfg, const std::string& out_path) {
    long k = cfg.get_long_or("k", 1);
    if (k < 1) throw ConfigError("k", "k >= 1 required");
    std::vector<TrigPolynomial> fs;
    for (long i = 0; i <= k; ++i) {
        std::string key = "f" + std::to_string(i);
        fs.push_back(parse_function_value(key, cfg.get_string(key)));
    }
    auto base = parse_base_element(cfg);
    std::vector<long> powers = cfg.has("powers") ? cfg.get_long_list("powers")
                                                 : std::vector<long>(k, 1);
    if (static_cast<long>(powers.size()) != k)
        throw ConfigError("powers", "need one power per acting slot");
    std::vector<AffineLatticeElement> gs;
    for (long e : powers) gs.push_back(base.pow(e));

    CorrelationReport row;
    row.k = static_cast<std::size_t>(k);
    row.powers = powers;
    row.q_used = cfg.get_rational_or("q", Rational(1));
    for (const auto& g : gs) row.sigma1.push_back(cartan_proxy(g).sigma1);
    row.exact = exact_multicorrelation(fs, gs);

    McOptions mo;
    mo.samples = static_cast<std::uint64_t>(cfg.get_long_or("mc_samples", 100'000));
    mo.seed = cfg.get_seed_or("seed", kDefaultSeed);
    mo.shards = static_cast<unsigned>(cfg.get_long_or("mc_shards", 4));
    if (mo.samples > 0) row.mc = mc_multicorrelation(fs, gs, mo);

    // bound at the proxies, echoing the inputs used
    auto rep = RepresentationData::standard_sl2();
    std::vector<DiagonalElement> tuple{DiagonalElement::identity(2)};
    for (double s1 : row.sigma1) tuple.push_back(DiagonalElement::sl2_cartan(Rational(s1)));
    auto ordered = order_by_highest_weight(
        rep, std::vector<DiagonalElement>(tuple.begin() + 1, tuple.end()));
    std::vector<DiagonalElement> full{DiagonalElement::identity(2)};
    for (auto& e : ordered) full.push_back(std::move(e));

    BoundInputs in;
    in.constant = cfg.get_double_or("C", 1.0);
    in.q = row.q_used;
    BigInt top = 1;
    for (const auto& f : fs)
        for (const auto& [m, c] : f.coefficients()) top = std::max(top, max_norm(m));
    in.spectral_radius = cfg.has("s") && cfg.get_string("s") != "auto"
                             ? cfg.get_double("s")
                             : to_double(top) + 1.0;
    in.d0 = cfg.has("d0") && cfg.get_string("d0") != "auto"
                ? static_cast<int>(cfg.get_long("d0"))
                : orbit_span_dimension(fs.front());
    in.dk = cfg.has("dk") && cfg.get_string("dk") != "auto"
                ? static_cast<int>(cfg.get_long("dk"))
                : orbit_span_dimension(fs.back());
    auto div = check_divergence(rep, full, Rational(cfg.get_double_or("Cprime", 2.0)));
    row.divergence_min = to_double(div.attained_min);
    row.applicable = div.satisfied;
    auto rf = ratio_factors(rep, full);
    row.r_factor = rf.product_double();
    if (rf.highest_sum > 0 && rf.lowest_inv_sum > 0) {
        BoundInputs unit = in;
        unit.constant = 1.0;
        row.rhs_unit = rhs_main_bound(unit, rf);
        row.rhs_bound = in.constant * row.rhs_unit;
        if (row.applicable && row.rhs_bound > 0)
            row.ratio = std::abs(row.exact) / row.rhs_bound;
    }

    nlohmann::json j = report_to_json(row);
    j["s"] = in.spectral_radius;
    j["C"] = in.constant;
    j["d0"] = in.d0;
    j["dk"] = in.dk;
    j["seed"] = mo.seed;
    std::string text = j.dump(2) + "\n";
    RunResult r;
    r.stdout_text = text;
    if (!out_path.empty()) detail::write_file(out_path, text);
    return r;
}

inline RunResult run_bound(const KeyValueConfig& cfg) {
    std::string kind = cfg.get_string_or("bound", "main");
    BoundInputs in;
    in.constant = cfg.get_double_or("C", 1.0);
    in.spectral_radius = cfg.get_double_or("s", 1.0);
    in.q = cfg.get_rational_or("q", Rational(1));
    in.d0 = static_cast<int>(cfg.get_long_or("d0", 1));
    in.dk = static_cast<int>(cfg.get_long_or("dk", 1));
    in.a_norm = cfg.get_double_or("A", 1.0);

    double value = 0.0;
    if (kind == "corollary_standard" || kind == "corollary_adjoint") {
        auto a_values = cfg.get_double_list("a_values");
        value = corollary_sl2(
            kind == "corollary_standard" ? Sl2Action::Standard : Sl2Action::Adjoint, a_values,
            in);
    } else {
        RatioFactors rf;
        auto factors = cfg.get_double_list("factors");
        if (factors.size() != 2) throw ConfigError("factors", "need exactly 2 values");
        rf.highest_sum = Rational(factors[0]);
        rf.lowest_inv_sum = Rational(factors[1]);
        if (kind == "main") {
            value = rhs_main_bound(in, rf);
        } else if (kind == "tail") {
            in.linf_norms = cfg.get_double_list("norms_linf");
            in.tail_norms = cfg.get_double_list("norms_tail");
            value = rhs_tail_norm_bound(in, rf);
        } else if (kind == "sobolev") {
            in.sobolev_norms = cfg.get_double_list("norms_sobolev");
            value = rhs_sobolev_bound(in, rf);
        } else {
            throw ConfigError("bound", "unknown bound kind '" + kind + "'");
        }
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    RunResult r;
    r.stdout_text = std::string(buf) + "\n";
    return r;
}

inline RunResult run_reduce(const KeyValueConfig& cfg, const std::string& out_path) {
    std::size_t j = static_cast<std::size_t>(cfg.get_long("j"));
    std::size_t l = static_cast<std::size_t>(cfg.get_long("l"));
    std::string mode = cfg.get_string_or("mode", "floating");

    nlohmann::json out;
    out["schema_version"] = kReportSchemaVersion;
    out["j"] = j;
    out["l"] = l;
    out["mode"] = mode;

    if (mode == "valuation") {
        auto vals = cfg.get_long_list("valuations");
        std::vector<BigInt> v(vals.begin(), vals.end());
        auto a = DiagonalElement::valuation(v);
        auto split = split_diagonal_valuation(a, j, l);
        out["chamber"] = nlohmann::json::array();
        out["centralizing"] = nlohmann::json::array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            out["chamber"].push_back(split.chamber[i].convert_to<long long>());
            out["centralizing"].push_back(split.centralizing[i].convert_to<long long>());
        }
        out["parity_compensated"] = split.parity_compensated;
    } else if (mode == "exact") {
        auto entries = cfg.get_rational_list("entries");
        auto a = DiagonalElement::archimedean(entries);
        auto split = split_diagonal_exact(a, j, l);
        out["chamber"] = nlohmann::json::array();
        out["centralizing"] = nlohmann::json::array();
        for (std::size_t i = 0; i < entries.size(); ++i) {
            out["chamber"].push_back(detail::format_rational(split.chamber[i]));
            out["centralizing"].push_back(detail::format_rational(split.centralizing[i]));
        }
    } else if (mode == "floating") {
        // entries accept rationals like 1/8 and are converted to doubles
        auto rentries = cfg.get_rational_list("entries");
        std::vector<double> entries;
        for (const auto& e : rentries) entries.push_back(to_double(e));
        auto split = split_diagonal(entries, j, l);
        out["chamber"] = split.chamber;
        out["centralizing"] = split.centralizing;
    } else {
        throw ConfigError("mode", "expected floating, exact or valuation");
    }

    std::string text = out.dump(2) + "\n";
    RunResult r;
    r.stdout_text = text;
    if (!out_path.empty()) detail::write_file(out_path, text);
    return r;
}

inline RunResult run_decay(const KeyValueConfig& cfg, const std::string& out_path) {
    auto sw = parse_sweep_config(cfg);
    auto res = decay_sweep(sw);
    std::string csv = detail::sweep_csv(res);
    RunResult r;
    if (!out_path.empty()) {
        detail::write_file(out_path, csv);
        detail::write_file(out_path + ".meta.json",
                           detail::sweep_provenance(sw, res).dump(2) + "\n");
        r.stdout_text = "wrote " + std::to_string(res.rows.size()) + " rows to " + out_path + "\n";
    } else {
        r.stdout_text = csv;
    }
    return r;
}

inline RunResult run_calibrate(const KeyValueConfig& cfg, const std::string& out_path) {
    auto sw = parse_sweep_config(cfg);
    auto train_powers = cfg.get_long_list("train_powers");
    auto res = decay_sweep(sw);
    auto cal = calibrate_sweep(res, train_powers);

    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["C_cal"] = cal.constant;
    j["train_rows"] = cal.train_rows;
    j["holdout_violations"] = cal.holdout_violations;
    j["verdict"] = cal.holdout_violations.empty() ? "pass" : "fail";
    j["rows"] = nlohmann::json::array();
    for (const auto& row : res.rows) j["rows"].push_back(report_to_json(row));
    j["provenance"] = detail::sweep_provenance(sw, res);
    j["provenance"]["train_powers"] = train_powers;

    std::string text = j.dump(2) + "\n";
    RunResult r;
    r.stdout_text = text;
    if (!out_path.empty()) detail::write_file(out_path, text);
    return r;
}

inline RunResult run_command(const std::string& command, const KeyValueConfig& cfg,
                             const std::string& out_path) {
    if (command == "verify") return run_verify(cfg);
    if (command == "correlate") return run_correlate(cfg, out_path);
    if (command == "bound") return run_bound(cfg);
    if (command == "reduce") return run_reduce(cfg, out_path);
    if (command == "decay") return run_decay(cfg, out_path);
    if (command == "calibrate") return run_calibrate(cfg, out_path);
    throw std::runtime_error("unknown command '" + command +
                             "' (expected verify|correlate|bound|reduce|decay|calibrate)");
}

}  // namespace mixinglab
