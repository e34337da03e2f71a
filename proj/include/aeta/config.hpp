#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "aeta/attacks.hpp"
#include "aeta/channel.hpp"
#include "aeta/common.hpp"
#include "aeta/inference.hpp"
#include "aeta/lfsr.hpp"
#include "aeta/report.hpp"

namespace aeta {

enum class Quantity {
    equivocation,
    spurious,
    pi,
    U,
    seqinfo,
    bounds_overlay,
    map_attack,
    unicity,
    majority_vote,
    identity_check,
};

inline const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::equivocation: return "equivocation";
        case Quantity::spurious: return "spurious";
        case Quantity::pi: return "pi";
        case Quantity::U: return "U";
        case Quantity::seqinfo: return "seqinfo";
        case Quantity::bounds_overlay: return "bounds_overlay";
        case Quantity::map_attack: return "map_attack";
        case Quantity::unicity: return "unicity";
        case Quantity::majority_vote: return "majority_vote";
        case Quantity::identity_check: return "identity_check";
    }
    return "?";
}

inline Quantity quantity_from_name(const std::string& s) {
    for (Quantity q :
         {Quantity::equivocation, Quantity::spurious, Quantity::pi, Quantity::U,
          Quantity::seqinfo, Quantity::bounds_overlay, Quantity::map_attack, Quantity::unicity,
          Quantity::majority_vote, Quantity::identity_check})
        if (s == quantity_name(q)) return q;
    throw validation_error("unknown quantity '" + s + "'");
}

struct SweepRange {
    enum class Kind { n, periods };
    Kind kind = Kind::n;
    std::int64_t from = 1;
    std::int64_t to = 1;
    std::int64_t step = 1;

    std::vector<std::int64_t> values() const {
        std::vector<std::int64_t> v;
        for (std::int64_t x = from; x <= to; x += step) v.push_back(x);
        return v;
    }
};

// Plaintext bits from a hex string, MSB-first within each digit.
inline std::vector<std::uint8_t> bits_from_hex(const std::string& hex) {
    std::vector<std::uint8_t> bits;
    for (char c : hex) {
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw validation_error(std::string("bits_hex: invalid hex digit '") + c + "'");
        for (int b = 3; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((v >> b) & 1));
    }
    return bits;
}

struct OutputSpec {
    std::string dir = ".";
    std::string format = "both";  // csv | json | both
};

struct ExperimentConfig {
    SystemParams params = SystemParams::make(default_lfsr(8), 8, 4.0, NoiseKind::truncated);
    PlaintextSource source = PlaintextSource::uniform();
    Quantity quantity = Quantity::spurious;
    SweepRange sweep;
    std::int64_t trials = 1000;
    std::uint64_t master_seed = 1;
    double target_p = 0.999;  // unicity only
    InferenceLimits limits;
    std::int64_t max_vote_symbols = std::int64_t{1} << 21;
    OutputSpec output;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json canonical_json() const;  // everything that affects results
    std::string params_hash() const { return report::hash_hex(canonical_json().dump()); }
    std::vector<std::string> validation_issues() const;
    void validate() const;
    nlohmann::json derived_report() const;  // resolved caps and derived quantities
};

inline ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    if (!j.contains("L")) throw validation_error("config: missing L");
    const int length = j.at("L").get<int>();
    if (length < 2 || length > kMaxRegisterLength)
        throw validation_error("config: L must be in [2, 24], got " + std::to_string(length));
    LfsrSpec spec;
    spec.length = length;
    spec.taps = j.contains("taps") ? j.at("taps").get<std::vector<int>>() : primitive_taps(length);

    const int m = j.value("M", 8);
    const double photon_n = j.value("photon_N", 4.0);
    NoiseKind kind = NoiseKind::full_gaussian;
    if (j.contains("noise")) {
        const std::string k = j.at("noise").value("kind", "full_gaussian");
        if (k == "full_gaussian")
            kind = NoiseKind::full_gaussian;
        else if (k == "truncated")
            kind = NoiseKind::truncated;
        else
            throw validation_error("config: noise.kind must be full_gaussian or truncated");
    }
    spec.validate();
    c.params = SystemParams::make(spec, m, photon_n, kind);

    if (j.contains("source")) {
        const auto& s = j.at("source");
        const std::string k = s.value("kind", "uniform");
        if (k == "uniform")
            c.source = PlaintextSource::uniform();
        else if (k == "bernoulli")
            c.source = PlaintextSource::bernoulli(s.value("p", 0.5));
        else if (k == "known") {
            if (!s.contains("bits_hex"))
                throw validation_error("config: known source requires source.bits_hex");
            c.source = PlaintextSource::known(bits_from_hex(s.at("bits_hex").get<std::string>()));
        } else {
            throw validation_error("config: source.kind must be known, uniform or bernoulli");
        }
    }

    c.quantity = quantity_from_name(j.value("quantity", "spurious"));

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        const std::string k = s.value("kind", "n");
        if (k == "n")
            c.sweep.kind = SweepRange::Kind::n;
        else if (k == "periods")
            c.sweep.kind = SweepRange::Kind::periods;
        else
            throw validation_error("config: sweep.kind must be n or periods");
        c.sweep.from = s.value("from", std::int64_t{1});
        c.sweep.to = s.value("to", c.sweep.from);
        c.sweep.step = s.value("step", std::int64_t{1});
    }

    c.trials = j.value("trials", std::int64_t{1000});
    c.master_seed = j.value("master_seed", std::uint64_t{1});
    c.target_p = j.value("target_p", 0.999);
    if (j.contains("limits")) {
        const auto& l = j.at("limits");
        c.limits.max_joint_length = l.value("max_joint_length", c.limits.max_joint_length);
        c.limits.max_joint_symbol_bits =
            l.value("max_joint_symbol_bits", c.limits.max_joint_symbol_bits);
        c.max_vote_symbols = l.value("max_vote_symbols", c.max_vote_symbols);
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        c.output.dir = o.value("dir", std::string("."));
        c.output.format = o.value("format", std::string("both"));
    }
    if (c.output.format != "csv" && c.output.format != "json" && c.output.format != "both")
        throw validation_error("config: output.format must be csv, json or both");
    return c;
}

inline nlohmann::json ExperimentConfig::canonical_json() const {
    nlohmann::json j;
    j["L"] = params.lfsr.length;
    j["taps"] = params.lfsr.taps;
    j["M"] = params.M;
    j["photon_N"] = params.photon_N;
    j["sigma"] = params.sigma();
    j["noise"] = params.noise.kind == NoiseKind::truncated ? "truncated" : "full_gaussian";
    switch (source.kind) {
        case PlaintextSource::Kind::known: {
            j["source"] = "known";
            j["source_bits"] = source.known_bits;
            break;
        }
        case PlaintextSource::Kind::uniform: j["source"] = "uniform"; break;
        case PlaintextSource::Kind::bernoulli:
            j["source"] = "bernoulli";
            j["source_p"] = source.p;
            break;
    }
    j["quantity"] = quantity_name(quantity);
    j["sweep_kind"] = sweep.kind == SweepRange::Kind::n ? "n" : "periods";
    j["sweep"] = {sweep.from, sweep.to, sweep.step};
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    if (quantity == Quantity::unicity) j["target_p"] = target_p;
    j["max_joint_length"] = limits.max_joint_length;
    j["max_joint_symbol_bits"] = limits.max_joint_symbol_bits;
    return j;
}

inline std::vector<std::string> ExperimentConfig::validation_issues() const {
    std::vector<std::string> issues;
    auto probe = [&](auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            issues.emplace_back(e.what());
        }
    };
    probe([&] { params.validate(); });
    probe([&] { source.validate(); });

    if (sweep.from < 0) issues.push_back("sweep: from must be >= 0");
    if (sweep.step < 1) issues.push_back("sweep: step must be >= 1");
    if (sweep.to < sweep.from) issues.push_back("sweep: empty range (to < from)");
    if (trials < 1) issues.push_back("trials must be >= 1");

    const bool wants_periods = quantity == Quantity::majority_vote;
    if (wants_periods && sweep.kind != SweepRange::Kind::periods)
        issues.push_back("majority_vote sweeps periods; set sweep.kind = periods");
    if (!wants_periods && sweep.kind != SweepRange::Kind::n)
        issues.push_back("this quantity sweeps n; set sweep.kind = n");

    const std::int64_t max_n = sweep.to;
    if (source.kind == PlaintextSource::Kind::known && quantity != Quantity::U &&
        quantity != Quantity::majority_vote &&
        static_cast<std::int64_t>(source.known_bits.size()) < max_n)
        issues.push_back("known source provides " + std::to_string(source.known_bits.size()) +
                         " bits but the sweep needs " + std::to_string(max_n));

    if (quantity == Quantity::seqinfo || quantity == Quantity::identity_check ||
        quantity == Quantity::bounds_overlay)
        probe([&] { detail::check_joint_caps(params, max_n, limits); });

    if (quantity == Quantity::majority_vote)
        probe([&] {
            const std::int64_t total = symbols_per_period(params) * sweep.to;
            if (total > max_vote_symbols)
                throw cap_error("majority_vote needs " + std::to_string(total) +
                                " symbols; cap is " + std::to_string(max_vote_symbols));
        });

    if (quantity == Quantity::unicity) {
        if (!(target_p > 0.0 && target_p <= 1.0))
            issues.push_back("target_p must lie in (0, 1]");
        if (sweep.to < 1) issues.push_back("unicity: sweep.to is n_max and must be >= 1");
    }
    return issues;
}

inline void ExperimentConfig::validate() const {
    const auto issues = validation_issues();
    if (issues.empty()) return;
    std::string msg = "config validation failed:";
    for (const auto& s : issues) msg += "\n  - " + s;
    throw validation_error(msg);
}

inline nlohmann::json ExperimentConfig::derived_report() const {
    nlohmann::json j;
    j["params_hash"] = params_hash();
    j["sigma"] = params.sigma();
    j["seg_bits"] = params.seg_bits();
    const auto dep = params.dependency();
    j["n_dep"] = {{"exact", dep.exact.str()},
                  {"value", dep.exact.value()},
                  {"floor", dep.floor_value}};
    j["H_K"] = params.key_entropy_bits();
    j["num_keys"] = params.num_keys();
    j["symbols_per_period"] = symbols_per_period(params);
    j["redundancy_D"] = source.redundancy();
    j["entropy_rate"] = source.entropy_rate();
    nlohmann::json enumeration;
    enumeration["posterior_keys"] = params.num_keys();
    enumeration["joint_bits_at_max_n"] = params.lfsr.length + sweep.to * params.seg_bits();
    j["enumeration"] = enumeration;
    j["caps"] = {{"max_posterior_L", limits.max_posterior_length},
                 {"max_joint_L", limits.max_joint_length},
                 {"max_joint_symbol_bits", limits.max_joint_symbol_bits},
                 {"max_vote_symbols", max_vote_symbols}};
    const auto issues = validation_issues();
    j["issues"] = issues;
    j["valid"] = issues.empty();
    return j;
}

// Dot-path override: "source.kind=known" and "sweep.to=12" style. Values are
// parsed as JSON when possible and fall back to strings.
inline void apply_override(nlohmann::json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw validation_error("--set expects key=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(raw);
    } catch (...) {
        value = raw;
    }
    nlohmann::json* at = &j;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw validation_error("--set: empty path segment in '" + path + "'");
        if (dot == std::string::npos) {
            (*at)[key] = value;
            return;
        }
        at = &(*at)[key];
        start = dot + 1;
    }
}

}  // namespace aeta
