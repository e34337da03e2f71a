// aeta-lab: command-line front end for the alpha-eta cryptanalysis workbench.
// Subcommands:
//   run     execute the configured sweep and write CSV/JSON reports
//   verify  validate the config and print resolved caps and derived values
//
// Exit codes: 0 ok, 2 validation, 3 runtime cap, 4 I/O.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "aeta/config.hpp"
#include "aeta/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCap = 3;
constexpr int kExitIo = 4;

int emit_error(const std::string& type, const std::string& message, int code) {
    nlohmann::json err;
    err["error"] = {{"type", type}, {"message", message}, {"exit_code", code}};
    std::cerr << err.dump(2) << std::endl;
    return code;
}

nlohmann::json load_config_json(const std::string& path,
                                const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw aeta::io_error("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw aeta::validation_error("config parse error in '" + path + "': " + e.what());
    }
    for (const auto& o : overrides) aeta::apply_override(j, o);
    return j;
}

int resolve_workers(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("AETA_LAB_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return aeta::resolve_workers(0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aeta-lab: alpha-eta / additive stream cipher cryptanalysis workbench"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    int workers = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    std::string format;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config JSON")->required();
        cmd->add_option("--set", overrides,
                        "dot-path override, e.g. --set sweep.to=12 --set source.kind=uniform");
        cmd->add_option("--workers", workers, "worker threads (env AETA_LAB_WORKERS as fallback)");
        cmd->add_option("--seed", seed, "master seed override")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--out", out_dir, "output directory override");
        cmd->add_option("--format", format, "csv | json | both")
            ->check(CLI::IsMember({"csv", "json", "both"}));
    };

    CLI::App* run_cmd = app.add_subcommand("run", "execute the configured experiment");
    add_common(run_cmd);
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "dry-run: print resolved caps and derived quantities");
    add_common(verify_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        auto j = load_config_json(config_path, overrides);
        auto cfg = aeta::ExperimentConfig::from_json(j);
        if (seed_set) cfg.master_seed = seed;
        if (!out_dir.empty()) cfg.output.dir = out_dir;
        if (!format.empty()) cfg.output.format = format;

        if (verify_cmd->parsed()) {
            const auto report = aeta::verify(cfg);
            std::cout << report.dump(2) << std::endl;
            return report["valid"].get<bool>() ? kExitOk : kExitValidation;
        }

        const int w = resolve_workers(workers);
        const auto outcome = aeta::run(cfg, w);
        nlohmann::json summary;
        summary["params_hash"] = cfg.params_hash();
        summary["quantity"] = aeta::quantity_name(cfg.quantity);
        summary["workers"] = w;
        summary["files"] = outcome.files_written;
        summary["rows"] = outcome.records.size();
        std::cout << summary.dump(2) << std::endl;
        return kExitOk;
    } catch (const aeta::validation_error& e) {
        return emit_error("validation", e.what(), kExitValidation);
    } catch (const aeta::cap_error& e) {
        return emit_error("cap", e.what(), kExitCap);
    } catch (const aeta::quadrature_error& e) {
        return emit_error("quadrature", e.what(), kExitCap);
    } catch (const aeta::io_error& e) {
        return emit_error("io", e.what(), kExitIo);
    } catch (const std::exception& e) {
        return emit_error("internal", e.what(), kExitCap);
    }
}
