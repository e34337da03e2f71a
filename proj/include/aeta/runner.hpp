#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aeta/attacks.hpp"
#include "aeta/bounds.hpp"
#include "aeta/config.hpp"
#include "aeta/inference.hpp"
#include "aeta/report.hpp"

namespace aeta {

struct RunOutcome {
    std::vector<std::string> files_written;
    std::vector<report::Record> records;
    std::string csv_text;  // full CSV including the timestamp line
};

namespace detail {

inline std::string fd(double v) { return report::format_double(v); }

struct RowSink {
    report::Csv csv;
    std::vector<report::Record>* records;
    std::string hash;
    std::uint64_t seed;

    RowSink(std::string h, std::uint64_t s, std::vector<std::string> cols,
            std::vector<report::Record>* rec)
        : csv(h, std::move(cols)), records(rec), hash(std::move(h)), seed(s) {}

    void push(const std::string& quantity, std::int64_t n, double value, double se,
              std::int64_t trials, std::vector<std::string> cells,
              nlohmann::json extra = nlohmann::json::object()) {
        csv.add_row(cells);
        records->push_back({quantity, hash, n, value, se, trials, seed, std::move(extra)});
    }
};

}  // namespace detail

// Executes the configured sweep and writes CSV/JSON atomically. Deterministic
// for a fixed master seed: the worker count never changes any output byte
// after the timestamp line.
inline RunOutcome run(const ExperimentConfig& cfg, int workers) {
    cfg.validate();
    RunOutcome out;
    const std::string hash = cfg.params_hash();
    const std::uint64_t seed = cfg.master_seed;
    McOptions mc{cfg.trials, cfg.master_seed, workers, 0};

    auto sink = [&](std::vector<std::string> cols) {
        return detail::RowSink(hash, seed, std::move(cols), &out.records);
    };
    using detail::fd;

    detail::RowSink rows = [&]() -> detail::RowSink {
        switch (cfg.quantity) {
            case Quantity::equivocation: {
                auto s = sink({"n", "equivocation", "std_error", "trials"});
                for (std::int64_t n : cfg.sweep.values()) {
                    const auto e = key_equivocation(cfg.params, cfg.source, n, mc, cfg.limits);
                    s.push("equivocation", n, e.value, e.std_error, e.trials,
                           {std::to_string(n), fd(e.value), fd(e.std_error),
                            std::to_string(e.trials)});
                }
                return s;
            }
            case Quantity::spurious: {
                auto s = sink({"n", "avg_spurious", "std_error", "trials"});
                for (std::int64_t n : cfg.sweep.values()) {
                    const auto e = avg_spurious(cfg.params, cfg.source, n, mc, cfg.limits);
                    s.push("spurious", n, e.value, e.std_error, e.trials,
                           {std::to_string(n), fd(e.value), fd(e.std_error),
                            std::to_string(e.trials)});
                }
                return s;
            }
            case Quantity::pi: {
                auto s = sink({"n", "pi_lower", "std_error", "trials"});
                for (std::int64_t n : cfg.sweep.values()) {
                    const auto e = pi_function(cfg.params, cfg.source, n, mc, cfg.limits);
                    s.push("pi", n, e.value, e.std_error, e.trials,
                           {std::to_string(n), fd(e.value), fd(e.std_error),
                            std::to_string(e.trials)},
                           {{"note", "sampled lower estimate of the sup over y"}});
                }
                return s;
            }
            case Quantity::U: {
                auto s = sink({"M", "photon_N", "sigma", "U", "quadrature_points",
                               "refinement_delta"});
                const auto u = per_symbol_info_U(cfg.params);
                s.push("U", 1, u.bits, 0.0, 1,
                       {std::to_string(cfg.params.M), fd(cfg.params.photon_N),
                        fd(cfg.params.sigma()), fd(u.bits), std::to_string(u.points),
                        fd(u.refinement_delta)},
                       {{"quadrature_points", u.points},
                        {"refinement_delta", u.refinement_delta},
                        {"note", "midpoint quadrature with grid-doubling check"}});
                return s;
            }
            case Quantity::seqinfo: {
                auto s = sink({"n", "seq_info", "std_error", "trials"});
                for (std::int64_t n : cfg.sweep.values()) {
                    const auto e = sequence_info(cfg.params, n, mc, cfg.limits);
                    s.push("seqinfo", n, e.value, e.std_error, e.trials,
                           {std::to_string(n), fd(e.value), fd(e.std_error),
                            std::to_string(e.trials)});
                }
                return s;
            }
            case Quantity::bounds_overlay: {
                auto s = sink({"n", "measured_Nk", "measured_se", "bound_theorem2", "bound_hbb",
                               "bound_shannon", "bound_cta", "ab_approx_HE", "measured_HE"});
                const double h_k = cfg.params.key_entropy_bits();
                const double d = cfg.source.redundancy();
                const double u = per_symbol_info_U(cfg.params).bits;
                for (std::int64_t n : cfg.sweep.values()) {
                    const auto batch =
                        equivocation_and_spurious(cfg.params, cfg.source, n, mc, cfg.limits);
                    const auto info = sequence_info(cfg.params, n, mc, cfg.limits);
                    bounds::BoundInputs in;
                    in.h_k = h_k;
                    in.n = static_cast<double>(n);
                    in.log2_alphabet = 1.0;
                    in.redundancy_d = d;
                    in.i_xky = std::max(0.0, info.value);
                    in.u = u;
                    const double t2 = bounds::theorem2_lower_bound(in);
                    const double hbb = bounds::hbb_lower_bound(h_k, in.n, d);
                    const double sh = bounds::shannon_random_cipher_nk(h_k, in.n, d);
                    const double cta = bounds::cta_bound_and_unicity(h_k, in.n, u).bound;
                    const double ab = bounds::ab_equivocation_approx(
                        cfg.params.lfsr.length, in.n, u);
                    s.push("bounds_overlay", n, batch.spurious.value, batch.spurious.std_error,
                           batch.spurious.trials,
                           {std::to_string(n), fd(batch.spurious.value),
                            fd(batch.spurious.std_error), fd(t2), fd(hbb), fd(sh), fd(cta),
                            fd(ab), fd(batch.equivocation.value)},
                           {{"bound_theorem2", t2},
                            {"bound_hbb", hbb},
                            {"bound_shannon", sh},
                            {"bound_cta", cta},
                            {"ab_approx_HE", ab},
                            {"measured_HE", batch.equivocation.value},
                            {"measured_HE_se", batch.equivocation.std_error},
                            {"seq_info", info.value},
                            {"seq_info_se", info.std_error},
                            {"U", u}});
                }
                return s;
            }
            case Quantity::map_attack: {
                auto s = sink({"n", "success", "std_error", "trials"});
                for (std::int64_t n : cfg.sweep.values()) {
                    const auto r = map_attack_success(cfg.params, cfg.source, n, mc, cfg.limits);
                    s.push("map_attack", n, r.success_prob.value, r.success_prob.std_error,
                           r.success_prob.trials,
                           {std::to_string(n), fd(r.success_prob.value),
                            fd(r.success_prob.std_error), std::to_string(r.success_prob.trials)});
                }
                return s;
            }
            case Quantity::unicity: {
                auto s = sink({"n", "success", "std_error", "trials"});
                const auto sweep = unicity_distance(cfg.params, cfg.source, cfg.target_p,
                                                    cfg.sweep.to, mc, cfg.limits);
                for (const auto& [n, e] : sweep.evaluations)
                    s.push("unicity_eval", n, e.value, e.std_error, e.trials,
                           {std::to_string(n), fd(e.value), fd(e.std_error),
                            std::to_string(e.trials)});
                nlohmann::json extra;
                extra["reached"] = sweep.n0.has_value();
                extra["target_p"] = cfg.target_p;
                extra["n_max"] = cfg.sweep.to;
                if (sweep.n0)
                    extra["n0"] = *sweep.n0;
                else
                    extra["n0"] = nullptr;
                out.records.push_back({"unicity", hash, cfg.sweep.to,
                                       sweep.n0 ? static_cast<double>(*sweep.n0) : -1.0, 0.0,
                                       cfg.trials, seed, extra});
                return s;
            }
            case Quantity::majority_vote: {
                auto s = sink({"periods", "success", "std_error", "trials"});
                for (std::int64_t t : cfg.sweep.values()) {
                    const auto r = majority_vote_attack(cfg.params, t, mc, cfg.max_vote_symbols);
                    s.push("majority_vote", t, r.vote_success.value, r.vote_success.std_error,
                           r.vote_success.trials,
                           {std::to_string(t), fd(r.vote_success.value),
                            fd(r.vote_success.std_error), std::to_string(r.vote_success.trials)},
                           {{"symbols_per_period", r.symbols_per_period},
                            {"total_symbols", r.total_symbols}});
                    out.records.push_back(
                        {"majority_vote_joint", hash, t, r.joint_success.value,
                         r.joint_success.std_error, r.joint_success.trials, seed,
                         {{"note", "joint posterior over all observed periods"}}});
                }
                return s;
            }
            case Quantity::identity_check: {
                auto s = sink({"n", "lhs", "lhs_se", "rhs", "rhs_se", "gap", "mutual_info",
                               "mi_se", "trials"});
                for (std::int64_t n : cfg.sweep.values()) {
                    const auto r =
                        equivocation_identity_check(cfg.params, cfg.source, n, mc, cfg.limits);
                    s.push("identity_check", n, r.gap, r.lhs.std_error + r.rhs.std_error,
                           cfg.trials,
                           {std::to_string(n), fd(r.lhs.value), fd(r.lhs.std_error),
                            fd(r.rhs.value), fd(r.rhs.std_error), fd(r.gap),
                            fd(r.mutual_info.value), fd(r.mutual_info.std_error),
                            std::to_string(cfg.trials)},
                           {{"lhs", r.lhs.value},
                            {"rhs", r.rhs.value},
                            {"h_xn", r.h_xn},
                            {"h_k", r.h_k}});
                }
                return s;
            }
        }
        throw validation_error("unhandled quantity");
    }();

    out.csv_text = rows.csv.str();

    namespace fs = std::filesystem;
    const std::string base = std::string(quantity_name(cfg.quantity)) + "_" + hash;
    if (cfg.output.format == "csv" || cfg.output.format == "both") {
        const fs::path p = fs::path(cfg.output.dir) / (base + ".csv");
        report::write_text_atomic(p, out.csv_text);
        out.files_written.push_back(p.string());
    }
    if (cfg.output.format == "json" || cfg.output.format == "both") {
        const fs::path p = fs::path(cfg.output.dir) / (base + ".json");
        report::write_text_atomic(p, report::records_json_text(out.records));
        out.files_written.push_back(p.string());
    }
    return out;
}

// Dry run: resolved caps, enumeration sizes and derived quantities, no
// execution.
inline nlohmann::json verify(const ExperimentConfig& cfg) { return cfg.derived_report(); }

}  // namespace aeta
