// Acceptance suite: runs the project's ten exit criteria and prints one
// PASS/FAIL line per criterion with the measured numbers. Run with no
// arguments for the full suite or with --criterion N for a single one.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aeta/attacks.hpp"
#include "aeta/bounds.hpp"
#include "aeta/config.hpp"
#include "aeta/inference.hpp"
#include "aeta/runner.hpp"

using namespace aeta;

namespace {

const std::vector<std::uint8_t> kKnownBits = {1, 0, 1, 1, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1,
                                              1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1, 1, 0, 0};

int g_workers = 2;

struct Cell {
    int length;
    int m;
    double sigma;
    bool known;
    std::int64_t n;
};

std::vector<Cell> theorem2_grid() {
    std::vector<Cell> cells;
    for (int length : {6, 8})
        for (int m : {4, 8})
            for (double sigma : {1.0, 2.0, 4.0})
                for (bool known : {true, false})
                    for (std::int64_t n = 1; n <= 12; ++n)
                        cells.push_back({length, m, sigma, known, n});
    return cells;
}

std::uint64_t cell_seed(const Cell& c, std::uint64_t salt) {
    std::uint64_t s = salt;
    s = s * 1000003 + static_cast<std::uint64_t>(c.length);
    s = s * 1000003 + static_cast<std::uint64_t>(c.m);
    s = s * 1000003 + static_cast<std::uint64_t>(c.sigma * 8);
    s = s * 1000003 + (c.known ? 1 : 2);
    s = s * 1000003 + static_cast<std::uint64_t>(c.n);
    return s;
}

// Both criteria 1 and 3 walk the same grid with the same seeds; criterion 1
// additionally needs the sequence-information estimate for the bound.
struct GridEval {
    BatchStats batch;
    Estimate info;  // only filled when with_info
    double bound = 0.0;
};

GridEval eval_cell(const Cell& c, bool with_info) {
    const auto params = SystemParams::make_with_sigma(default_lfsr(c.length), c.m, c.sigma,
                                                      NoiseKind::truncated);
    const auto src = c.known ? PlaintextSource::known(kKnownBits) : PlaintextSource::uniform();
    InferenceLimits lim;
    lim.max_joint_symbol_bits = 24;  // the grid runs to n*seg_bits = 24 at M = 8
    GridEval ev;
    ev.batch = equivocation_and_spurious(params, src, c.n,
                                         {10000, cell_seed(c, 17), g_workers, 0}, lim);
    if (with_info) {
        ev.info = sequence_info(params, c.n, {10000, cell_seed(c, 29), g_workers, 0}, lim);
        bounds::BoundInputs in;
        in.h_k = params.key_entropy_bits();
        in.n = static_cast<double>(c.n);
        in.log2_alphabet = 1.0;
        in.redundancy_d = src.redundancy();
        in.i_xky = std::max(0.0, ev.info.value);
        ev.bound = bounds::theorem2_lower_bound(in);
    }
    return ev;
}

std::string cell_str(const Cell& c) {
    std::ostringstream os;
    os << "L=" << c.length << " M=" << c.m << " sigma=" << c.sigma
       << (c.known ? " known" : " uniform") << " n=" << c.n;
    return os.str();
}

bool criterion1(std::string& detail) {
    // Theorem-2 dominance over the full truncated grid, 1e4 trials per cell,
    // with I taken from the sequence-information estimator.
    const auto cells = theorem2_grid();
    int violations = 0;
    double worst_margin = 1e300;
    std::string worst;
    // The information estimate does not depend on the plaintext source, so
    // known/uniform cells at the same (L, M, sigma, n) share it.
    std::map<std::string, Estimate> info_cache;
    for (const auto& c : cells) {
        const auto params = SystemParams::make_with_sigma(default_lfsr(c.length), c.m, c.sigma,
                                                          NoiseKind::truncated);
        InferenceLimits lim;
        lim.max_joint_symbol_bits = 24;
        std::ostringstream key;
        key << c.length << "/" << c.m << "/" << c.sigma << "/" << c.n;
        if (!info_cache.count(key.str())) {
            Cell base = c;
            base.known = true;  // seed choice only
            info_cache[key.str()] =
                sequence_info(params, c.n, {10000, cell_seed(base, 29), g_workers, 0}, lim);
        }
        const auto info = info_cache[key.str()];
        const auto src = c.known ? PlaintextSource::known(kKnownBits)
                                 : PlaintextSource::uniform();
        const auto batch = equivocation_and_spurious(params, src, c.n,
                                                     {10000, cell_seed(c, 17), g_workers, 0}, lim);
        bounds::BoundInputs in;
        in.h_k = params.key_entropy_bits();
        in.n = static_cast<double>(c.n);
        in.log2_alphabet = 1.0;
        in.redundancy_d = src.redundancy();
        in.i_xky = std::max(0.0, info.value);
        const double bound = bounds::theorem2_lower_bound(in);
        const double lhs = batch.spurious.value + 3.0 * batch.spurious.std_error;
        const double margin = lhs - bound;
        if (margin < worst_margin) {
            worst_margin = margin;
            worst = cell_str(c) + " Nk=" + std::to_string(batch.spurious.value) +
                    " bound=" + std::to_string(bound) + " I=" + std::to_string(info.value);
        }
        if (lhs < bound) ++violations;
    }
    std::ostringstream os;
    os << violations << "/" << cells.size() << " cells violated; worst margin " << worst_margin
       << " at [" << worst << "]";
    detail = os.str();
    return violations == 0;
}

bool criterion2(std::string& detail) {
    // Equivocation identity |lhs - rhs| < 0.05 bits at L=4, M=8, n=3 for both
    // sources, 1e5 trials.
    const auto params =
        SystemParams::make_with_sigma(default_lfsr(4), 8, 1.0, NoiseKind::truncated);
    std::ostringstream os;
    bool ok = true;
    for (bool known : {false, true}) {
        const auto src = known ? PlaintextSource::known(kKnownBits) : PlaintextSource::uniform();
        const auto r = equivocation_identity_check(params, src, 3,
                                                   {100000, known ? 811u : 509u, g_workers, 0});
        os << (known ? "known" : "uniform") << ": lhs=" << r.lhs.value << " rhs=" << r.rhs.value
           << " gap=" << r.gap << "  ";
        if (!(std::fabs(r.gap) < 0.05)) ok = false;
    }
    detail = os.str();
    return ok;
}

bool criterion3(std::string& detail) {
    // Proof-chain inequality on every grid cell, same sampled batches as
    // criterion 1.
    const auto cells = theorem2_grid();
    int violations = 0;
    double worst = 1e300;
    std::string worst_cell;
    for (const auto& c : cells) {
        const auto ev = eval_cell(c, false);
        const double rhs = std::log2(ev.batch.spurious.value + 1.0);
        const double margin = rhs - ev.batch.equivocation.value;
        if (margin < worst) {
            worst = margin;
            worst_cell = cell_str(c);
        }
        if (ev.batch.equivocation.value > rhs + 1e-12) ++violations;
    }
    std::ostringstream os;
    os << violations << "/" << cells.size() << " cells violated; smallest slack " << worst
       << " bits at [" << worst_cell << "]";
    detail = os.str();
    return violations == 0;
}

bool criterion4(std::string& detail) {
    // Strictness of I(S^n;Y^n) < nU beyond the dependency distance at
    // L=8, M=8, sigma=2 (n_dep = 4): strict at n=6, equality at n=2.
    const auto params =
        SystemParams::make_with_sigma(default_lfsr(8), 8, 2.0, NoiseKind::truncated);
    const double u = per_symbol_info_U(params).bits;
    const auto i2 = sequence_info(params, 2, {20000, 1301, g_workers, 0});
    const auto i6 = sequence_info(params, 6, {20000, 1303, g_workers, 0});
    const bool equal_below = std::fabs(i2.value / 2.0 - u) <= 3.0 * i2.std_error / 2.0;
    const bool strict_above = i6.value / 6.0 < u - 3.0 * i6.std_error / 6.0;
    std::ostringstream os;
    os << "U=" << u << " I(2)/2=" << i2.value / 2.0 << "+-" << i2.std_error / 2.0
       << " I(6)/6=" << i6.value / 6.0 << "+-" << i6.std_error / 6.0
       << " (n_dep=" << params.dependency().floor_value << ")";
    detail = os.str();
    return equal_below && strict_above;
}

bool criterion5(std::string& detail) {
    // (a) quadrature U within 0.3 bits of 4.6 at M=1024, photon_N=64;
    // (b) U -> log2 M within 1% at sigma = M/2000; (c) U -> 0 within 1% of
    // log2 M at sigma = 50 M. The limit checks run at M=8, where
    // sigma = M/2000 is actually small against the unit point spacing.
    const auto big =
        SystemParams::make(default_lfsr(8), 1024, 64.0, NoiseKind::full_gaussian);
    const auto ua = per_symbol_info_U(big);
    const bool a = std::fabs(ua.bits - 4.6) <= 0.3;

    const int m = 8;
    const auto lo = per_symbol_info_U(
        SystemParams::make_with_sigma(default_lfsr(8), m, m / 2000.0, NoiseKind::full_gaussian));
    const bool b = std::fabs(lo.bits - std::log2(m)) <= 0.01 * std::log2(m);
    const auto hi = per_symbol_info_U(
        SystemParams::make_with_sigma(default_lfsr(8), m, 50.0 * m, NoiseKind::full_gaussian));
    const bool c = std::fabs(hi.bits) <= 0.01 * std::log2(m);

    std::ostringstream os;
    os << "U(M=1024,N=64)=" << ua.bits << " vs 4.6+-0.3 [" << (a ? "ok" : "FAIL")
       << "]; U(M=8,sigma=0.004)=" << lo.bits << " vs 3 [" << (b ? "ok" : "FAIL")
       << "]; U(M=8,sigma=400)=" << hi.bits << " vs 0 [" << (c ? "ok" : "FAIL") << "]";
    detail = os.str();
    return a && b && c;
}

bool criterion6(std::string& detail) {
    // Infinite-unicity behavior.
    std::ostringstream os;
    const auto gauss =
        SystemParams::make_with_sigma(default_lfsr(8), 8, 2.0, NoiseKind::full_gaussian);
    const auto uni = PlaintextSource::uniform();
    // (a) full Gaussian: every sampled y keeps every admissible key.
    const auto nk = avg_spurious(gauss, uni, 6, {10000, 2003, g_workers, 0});
    const bool a = nk.value == 254.0 && nk.std_error == 0.0;
    os << "(a) full-Gaussian Nk=" << nk.value << "+-" << nk.std_error << " ["
       << (a ? "ok" : "FAIL") << "]";

    // (b) truncated known-plaintext: positive average spurious count at every
    // n up to 24.
    const auto trunc =
        SystemParams::make_with_sigma(default_lfsr(8), 8, 2.0, NoiseKind::truncated);
    const auto known = PlaintextSource::known(kKnownBits);
    bool b = true;
    double min_nk = 1e300;
    std::int64_t argmin = 0;
    for (std::int64_t n = 1; n <= 24; ++n) {
        const auto e = avg_spurious(trunc, known, n, {10000, 2100 + static_cast<std::uint64_t>(n),
                                                      g_workers, 0});
        if (e.value < min_nk) {
            min_nk = e.value;
            argmin = n;
        }
        if (!(e.value > 0.0)) b = false;
    }
    os << "; (b) min Nk=" << min_nk << " at n=" << argmin << " [" << (b ? "ok" : "FAIL") << "]";

    // (c) a certainty target is never reached under full Gaussian noise.
    const auto sweep = unicity_distance(gauss, known, 1.0, 24, {400, 2203, g_workers, 0});
    const bool c = !sweep.n0.has_value();
    os << "; (c) p=1.0 " << (sweep.n0 ? "reached n0=" + std::to_string(*sweep.n0) : "not reached")
       << " [" << (c ? "ok" : "FAIL") << "]";
    detail = os.str();
    return a && b && c;
}

bool criterion7(std::string& detail) {
    // ASC breaks exactly at the nondegeneracy distance n = L = 8; alpha-eta
    // does not.
    const auto spec = default_lfsr(8);
    const auto asc_r = asc::map_attack_success(spec, 8, {10000, 2503, g_workers, 0});
    bool asc_exact = asc_r.success_prob.value == 1.0;
    for (auto bit : asc_r.per_trial)
        if (bit != 1) asc_exact = false;

    const auto trunc =
        SystemParams::make_with_sigma(default_lfsr(8), 8, 2.0, NoiseKind::truncated);
    const auto r = map_attack_success(trunc, PlaintextSource::known(kKnownBits), 8,
                                      {10000, 2507, g_workers, 0});
    const bool ae_below = r.success_prob.value < 1.0;
    std::ostringstream os;
    os << "ASC success=" << asc_r.success_prob.value << " [" << (asc_exact ? "ok" : "FAIL")
       << "]; alpha-eta success=" << r.success_prob.value << "+-" << r.success_prob.std_error
       << " [" << (ae_below ? "ok" : "FAIL") << "]";
    detail = os.str();
    return asc_exact && ae_below;
}

bool criterion8(std::string& detail) {
    // Asymptotic majority-vote break at L=8, M=4, sigma=4 (truncated noise,
    // the more informative of the two models here): success at 200 periods
    // above 0.95 and strictly increasing across {1, 25, 200}.
    const auto params =
        SystemParams::make_with_sigma(default_lfsr(8), 4, 4.0, NoiseKind::truncated);
    const auto t1 = majority_vote_attack(params, 1, {400, 2803, g_workers});
    const auto t25 = majority_vote_attack(params, 25, {300, 2807, g_workers});
    const auto t200 = majority_vote_attack(params, 200, {250, 2809, g_workers});
    const auto& s1 = t1.vote_success;
    const auto& s25 = t25.vote_success;
    const auto& s200 = t200.vote_success;
    const bool high = s200.value >= 0.95;
    const bool inc1 = s25.value > s1.value + 2.0 * (s25.std_error + s1.std_error);
    const bool inc2 = s200.value > s25.value + 2.0 * (s200.std_error + s25.std_error);
    std::ostringstream os;
    os << "success(1)=" << s1.value << "+-" << s1.std_error << " success(25)=" << s25.value
       << "+-" << s25.std_error << " success(200)=" << s200.value << "+-" << s200.std_error
       << " [>=0.95: " << (high ? "ok" : "FAIL") << ", increasing: "
       << ((inc1 && inc2) ? "ok" : "FAIL") << "]";
    detail = os.str();
    return high && inc1 && inc2;
}

bool criterion9(std::string& detail) {
    // Posterior equals a direct Bayes brute force over every (key, plaintext)
    // pair for all 15 seeds at L=4, M=8, n <= 3, to 1e-10.
    double worst = 0.0;
    for (NoiseKind kind : {NoiseKind::truncated, NoiseKind::full_gaussian}) {
        const auto params = SystemParams::make_with_sigma(default_lfsr(4), 8, 1.0, kind);
        for (bool known : {true, false}) {
            const auto src =
                known ? PlaintextSource::known(kKnownBits) : PlaintextSource::uniform();
            for (std::uint32_t seed = 1; seed <= 15; ++seed) {
                for (std::int64_t n = 0; n <= 3; ++n) {
                    auto rng = make_trial_rng(3000 + seed, stream::kGeneric,
                                              static_cast<std::uint64_t>(n));
                    auto x = sample_plaintext(src, n, rng);
                    const auto enc = encrypt_seq(params, seed, x, rng);
                    const auto src_for_posterior =
                        known ? PlaintextSource::known(x) : PlaintextSource::uniform();
                    const auto post = key_posterior(params, enc.ciphertext, src_for_posterior);

                    // brute force: every (key, plaintext) pair, linear space
                    std::vector<double> w(15, 0.0);
                    for (std::uint32_t k = 1; k <= 15; ++k) {
                        const auto rk = running_key(params.lfsr, k, params.M, n);
                        const std::uint64_t xs = known ? 1 : (std::uint64_t{1} << n);
                        for (std::uint64_t bits = 0; bits < xs; ++bits) {
                            double prod = known ? 1.0 : std::pow(0.5, static_cast<double>(n));
                            for (std::int64_t i = 0; i < n; ++i) {
                                const int xi = known ? x[static_cast<std::size_t>(i)]
                                                     : static_cast<int>((bits >> i) & 1);
                                prod *= likelihood(
                                    enc.ciphertext.values[static_cast<std::size_t>(i)],
                                    encrypt_symbol(xi, rk.segments[static_cast<std::size_t>(i)],
                                                   params.M),
                                    params.M, params.noise);
                            }
                            w[k - 1] += prod;
                        }
                    }
                    double sum = 0.0;
                    for (double v : w) sum += v;
                    for (std::uint32_t k = 1; k <= 15; ++k)
                        worst = std::max(worst, std::fabs(post.probs[k - 1] - w[k - 1] / sum));
                }
            }
        }
    }
    std::ostringstream os;
    os << "max |posterior - bruteforce| = " << worst;
    detail = os.str();
    return worst < 1e-10;
}

bool criterion10(std::string& detail) {
    // Byte-identical CSV bodies and JSON output for any worker count.
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "aeta_accept_c10";
    fs::remove_all(dir);
    std::ostringstream os;
    bool ok = true;
    int checked = 0;
    for (const char* qty : {"spurious", "map_attack", "majority_vote"}) {
        ExperimentConfig cfg;
        cfg.params = SystemParams::make_with_sigma(default_lfsr(6), 8, 2.0, NoiseKind::truncated);
        cfg.source = PlaintextSource::uniform();
        cfg.quantity = quantity_from_name(qty);
        cfg.sweep.kind = cfg.quantity == Quantity::majority_vote ? SweepRange::Kind::periods
                                                                 : SweepRange::Kind::n;
        cfg.sweep.from = 1;
        cfg.sweep.to = cfg.quantity == Quantity::majority_vote ? 3 : 4;
        cfg.trials = 200;
        cfg.master_seed = 424242;
        cfg.output.dir = (dir / qty).string();
        cfg.output.format = "both";

        std::string body1, body4, json1, json4;
        {
            const auto r = run(cfg, 1);
            body1 = report::Csv::body(r.csv_text);
            json1 = report::records_json_text(r.records);
        }
        {
            const auto r = run(cfg, 4);
            body4 = report::Csv::body(r.csv_text);
            json4 = report::records_json_text(r.records);
        }
        const bool same = body1 == body4 && json1 == json4;
        if (!same) ok = false;
        os << qty << (same ? " ok; " : " DIFFERS; ");
        ++checked;
    }
    fs::remove_all(dir);
    os << checked << " quantities checked across workers {1, 4}";
    detail = os.str();
    return ok;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc)
            g_workers = std::atoi(argv[++i]);
    }
    if (g_workers <= 0) g_workers = resolve_workers(0);

    const std::vector<Criterion> criteria = {
        {1, "theorem-2 dominance on the truncated grid", criterion1},
        {2, "equivocation identity", criterion2},
        {3, "proof-chain inequality H(K|Y) <= log2(Nk+1)", criterion3},
        {4, "strictness of I(S^n;Y^n) beyond n_dep", criterion4},
        {5, "per-symbol information U regime checks", criterion5},
        {6, "infinite-unicity properties", criterion6},
        {7, "ASC vs alpha-eta at the nondegeneracy distance", criterion7},
        {8, "majority-vote asymptotic break", criterion8},
        {9, "posterior vs brute-force Bayes oracle", criterion9},
        {10, "worker-count determinism of reports", criterion10},
    };

    bool all_ok = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d [%s]: %s (%.1fs) - %s\n", c.id, c.name,
                    ok ? "PASS" : "FAIL", secs, detail.c_str());
        std::fflush(stdout);
        if (!ok) all_ok = false;
    }
    return all_ok ? 0 : 1;
}
