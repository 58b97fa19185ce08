#pragma once

// Flat key-value run configuration: one `key = value` per line, '#' starts a
// comment. Commands: verify | correlate | bound | reduce | decay | calibrate.
// Parsing is strict: unknown or malformed keys name themselves in the error.

#include "mixinglab/numeric.hpp"
#include "mixinglab/sweep.hpp"
#include "mixinglab/trigpoly.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixinglab {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error("config key '" + key + "': " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_text(ss.str());
    }

    static KeyValueConfig parse_text(const std::string& text) {
        KeyValueConfig cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            auto notspace = line.find_first_not_of(" \t\r\n");
            if (notspace == std::string::npos) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": expected 'key = value'");
            cfg.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError(key, "required key missing");
        used_.insert(key);
        return it->second;
    }

    std::string get_string_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? get_string(key) : fallback;
    }

    long get_long(const std::string& key) const {
        return parse_long(key, get_string(key));
    }
    long get_long_or(const std::string& key, long fallback) const {
        return has(key) ? get_long(key) : fallback;
    }

    double get_double(const std::string& key) const {
        const std::string v = get_string(key);
        try {
            std::size_t pos = 0;
            double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return d;
        } catch (...) {
            throw ConfigError(key, "not a number: '" + v + "'");
        }
    }
    double get_double_or(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    Rational get_rational(const std::string& key) const {
        const std::string v = get_string(key);
        auto slash = v.find('/');
        try {
            if (slash == std::string::npos) {
                if (v.find('.') != std::string::npos) return Rational(std::stod(v));
                return Rational(BigInt(v));
            }
            return Rational(BigInt(trim(v.substr(0, slash))), BigInt(trim(v.substr(slash + 1))));
        } catch (const ConfigError&) {
            throw;
        } catch (...) {
            throw ConfigError(key, "not a rational: '" + v + "'");
        }
    }
    Rational get_rational_or(const std::string& key, const Rational& fallback) const {
        return has(key) ? get_rational(key) : fallback;
    }

    std::vector<long> get_long_list(const std::string& key) const {
        std::istringstream in(get_string(key));
        std::vector<long> out;
        std::string tok;
        while (in >> tok) out.push_back(parse_long(key, tok));
        if (out.empty()) throw ConfigError(key, "empty list");
        return out;
    }

    std::vector<double> get_double_list(const std::string& key) const {
        std::istringstream in(get_string(key));
        std::vector<double> out;
        std::string tok;
        while (in >> tok) {
            try {
                std::size_t pos = 0;
                double d = std::stod(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument("");
                out.push_back(d);
            } catch (...) {
                throw ConfigError(key, "not a number: '" + tok + "'");
            }
        }
        if (out.empty()) throw ConfigError(key, "empty list");
        return out;
    }

    std::vector<Rational> get_rational_list(const std::string& key) const {
        std::istringstream in(get_string(key));
        std::vector<Rational> out;
        std::string tok;
        while (in >> tok) {
            auto slash = tok.find('/');
            try {
                if (slash == std::string::npos) {
                    if (tok.find('.') != std::string::npos)
                        out.push_back(Rational(std::stod(tok)));
                    else
                        out.push_back(Rational(BigInt(tok)));
                } else {
                    out.push_back(
                        Rational(BigInt(tok.substr(0, slash)), BigInt(tok.substr(slash + 1))));
                }
            } catch (...) {
                throw ConfigError(key, "not a rational: '" + tok + "'");
            }
        }
        if (out.empty()) throw ConfigError(key, "empty list");
        return out;
    }

    std::uint64_t get_seed_or(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const std::string v = get_string(key);
        try {
            return std::stoull(v);
        } catch (...) {
            throw ConfigError(key, "not a seed value: '" + v + "'");
        }
    }

    // Keys present in the file but never consumed: typo protection.
    std::vector<std::string> unused_keys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        auto e = s.find_last_not_of(" \t\r\n");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }

    long parse_long(const std::string& key, const std::string& v) const {
        try {
            std::size_t pos = 0;
            long x = std::stol(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return x;
        } catch (...) {
            throw ConfigError(key, "not an integer: '" + v + "'");
        }
    }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

// Default seed recorded in every output for reproducibility.
inline constexpr std::uint64_t kDefaultSeed = 20240817;

inline AffineLatticeElement parse_base_element(const KeyValueConfig& cfg) {
    auto m = cfg.get_long_list("matrix");
    if (m.size() != 4) throw ConfigError("matrix", "need 4 integers (row-major 2x2)");
    std::vector<long> v{0, 0};
    if (cfg.has("translation")) {
        v = cfg.get_long_list("translation");
        if (v.size() != 2) throw ConfigError("translation", "need 2 integers");
    }
    try {
        return AffineLatticeElement::from_ints(m[0], m[1], m[2], m[3], v[0], v[1]);
    } catch (const std::exception& e) {
        throw ConfigError("matrix", e.what());
    }
}

inline TrigPolynomial parse_function_value(const std::string& key, const std::string& value) {
    try {
        return trigpoly_from_json(nlohmann::json::parse(value));
    } catch (const std::exception& e) {
        throw ConfigError(key, std::string("bad function JSON: ") + e.what());
    }
}

inline SweepConfig parse_sweep_config(const KeyValueConfig& cfg) {
    SweepConfig sw;
    sw.base = parse_base_element(cfg);
    sw.powers = cfg.get_long_list("powers");
    long k = cfg.get_long_or("k", 2);
    if (cfg.has("pattern")) {
        sw.pattern = cfg.get_long_list("pattern");
        if (static_cast<long>(sw.pattern.size()) != k)
            throw ConfigError("pattern", "length must equal k");
    } else {
        for (long i = 1; i <= k; ++i) sw.pattern.push_back(i);
    }
    sw.preset = cfg.get_string_or("preset", "orbit");
    if (sw.preset == "explicit") {
        for (long i = 0; i <= k; ++i) {
            std::string key = "f" + std::to_string(i);
            sw.explicit_functions.push_back(parse_function_value(key, cfg.get_string(key)));
        }
    }
    sw.orbit.segment = cfg.get_long_or("orbit_segment", 4);
    sw.orbit.ratio = cfg.get_double_or("orbit_ratio", 0.25);
    sw.q = cfg.get_rational_or("q", Rational(1));
    sw.constant = cfg.get_double_or("C", 1.0);
    sw.divergence_floor = cfg.get_double_or("Cprime", 2.0);
    if (cfg.has("s") && cfg.get_string("s") != "auto") sw.spectral_radius = cfg.get_double("s");
    if (cfg.has("d0") && cfg.get_string("d0") != "auto")
        sw.d0 = static_cast<int>(cfg.get_long("d0"));
    if (cfg.has("dk") && cfg.get_string("dk") != "auto")
        sw.dk = static_cast<int>(cfg.get_long("dk"));
    std::string range = cfg.get_string_or("sum_range", "from_zero");
    if (range == "from_zero")
        sw.sum_range = FirstSumRange::FromZero;
    else if (range == "from_one")
        sw.sum_range = FirstSumRange::FromOne;
    else
        throw ConfigError("sum_range", "expected from_zero or from_one");
    sw.mc_samples = static_cast<std::uint64_t>(cfg.get_long_or("mc_samples", 0));
    sw.mc_shards = static_cast<unsigned>(cfg.get_long_or("mc_shards", 4));
    sw.seed = cfg.get_seed_or("seed", kDefaultSeed);
    sw.exact_opts.split_budget =
        static_cast<std::size_t>(cfg.get_long_or("split_budget", 2'000'000));
    sw.row_threads = static_cast<unsigned>(cfg.get_long_or("row_threads", 4));
    return sw;
}

}  // namespace mixinglab
