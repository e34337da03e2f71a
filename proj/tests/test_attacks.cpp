#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "aeta/attacks.hpp"

using namespace aeta;

namespace {

const std::vector<std::uint8_t> kFixedBits = {1, 0, 1, 1, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1,
                                              1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1, 1, 0, 0};

}  // namespace

TEST_CASE("MAP attack with no data succeeds at the uniform-guess rate") {
    const auto params = SystemParams::make_with_sigma(default_lfsr(4), 8, 1.0,
                                                      NoiseKind::truncated);
    auto r = map_attack_success(params, PlaintextSource::uniform(), 0,
                                {.trials = 4000, .master_seed = 61});
    const double expect = 1.0 / 15.0;
    REQUIRE(std::fabs(r.success_prob.value - expect) <
            4.0 * std::sqrt(expect * (1.0 - expect) / 4000.0));
}

TEST_CASE("MAP success never decreases with more data beyond noise") {
    const auto params = SystemParams::make_with_sigma(default_lfsr(6), 8, 1.0,
                                                      NoiseKind::truncated);
    const auto src = PlaintextSource::known(kFixedBits);
    double prev = 0.0, prev_se = 0.0;
    for (std::int64_t n : {0, 2, 4, 8}) {
        auto r = map_attack_success(params, src, n, {.trials = 1500, .master_seed = 67});
        REQUIRE(r.success_prob.value >= prev - 2.0 * (r.success_prob.std_error + prev_se));
        prev = r.success_prob.value;
        prev_se = r.success_prob.std_error;
    }
}

TEST_CASE("ASC under known plaintext breaks exactly at n = L") {
    const auto spec = default_lfsr(8);
    auto r = asc::map_attack_success(spec, 8, {.trials = 2000, .master_seed = 71});
    REQUIRE(r.success_prob.value == 1.0);
    for (auto bit : r.per_trial) REQUIRE(bit == 1);

    // posterior support is a single key on every trial: zero spurious keys
    auto nk = asc::avg_spurious(spec, 8, {.trials = 2000, .master_seed = 73});
    REQUIRE(nk.value == 0.0);
    REQUIRE(nk.std_error == 0.0);

    // One symbol short, two seeds share every 7-bit prefix, except that the
    // partner of seed 1 is the excluded zero seed. So N_k is 1 for 254 of the
    // 255 seeds and 0 for seed 1, giving an average of 254/255.
    auto r7 = asc::map_attack_success(spec, 7, {.trials = 2000, .master_seed = 79});
    REQUIRE(r7.success_prob.value < 1.0);
    auto nk7 = asc::avg_spurious(spec, 7, {.trials = 500, .master_seed = 79});
    REQUIRE(nk7.value == Catch::Approx(254.0 / 255.0).margin(0.02));
    REQUIRE(nk7.value <= 1.0);

    auto sweep = asc::unicity_distance(spec, 0.999, 32, {.trials = 400, .master_seed = 83});
    REQUIRE(sweep.n0.has_value());
    REQUIRE(*sweep.n0 == 8);
}

TEST_CASE("alpha-eta is not broken with certainty at the nondegeneracy distance") {
    const auto params = SystemParams::make_with_sigma(default_lfsr(8), 8, 2.0,
                                                      NoiseKind::truncated);
    const auto src = PlaintextSource::known(kFixedBits);
    auto r = map_attack_success(params, src, 8, {.trials = 3000, .master_seed = 89});
    REQUIRE(r.success_prob.value < 1.0);
    REQUIRE(r.success_prob.value > 0.0);
}

TEST_CASE("unicity sweep validates the target and reports 'not reached' honestly") {
    const auto params = SystemParams::make_with_sigma(default_lfsr(8), 8, 2.0,
                                                      NoiseKind::full_gaussian);
    const auto src = PlaintextSource::known(kFixedBits);
    REQUIRE_THROWS_AS(
        unicity_distance(params, src, 0.0, 8, {.trials = 10, .master_seed = 1}),
        validation_error);
    REQUIRE_THROWS_AS(
        unicity_distance(params, src, 1.5, 8, {.trials = 10, .master_seed = 1}),
        validation_error);

    auto sweep = unicity_distance(params, src, 1.0, 16, {.trials = 150, .master_seed = 97});
    REQUIRE_FALSE(sweep.n0.has_value());
    REQUIRE_FALSE(sweep.evaluations.empty());
}

TEST_CASE("unicity sweep finds a finite threshold on an easy channel") {
    const auto params = SystemParams::make_with_sigma(default_lfsr(6), 8, 0.5,
                                                      NoiseKind::truncated);
    const auto src = PlaintextSource::known(kFixedBits);
    auto sweep = unicity_distance(params, src, 0.5, 24, {.trials = 400, .master_seed = 101});
    REQUIRE(sweep.n0.has_value());
    REQUIRE(*sweep.n0 >= 1);
    REQUIRE(*sweep.n0 <= 24);
    // stable across seeds within +-1
    auto again = unicity_distance(params, src, 0.5, 24, {.trials = 400, .master_seed = 202});
    REQUIRE(std::llabs(*sweep.n0 - *again.n0) <= 1);
}

TEST_CASE("a single-period vote equals the MAP attack over one period") {
    const auto params = SystemParams::make_with_sigma(default_lfsr(4), 4, 1.0,
                                                      NoiseKind::truncated);
    const std::int64_t per = symbols_per_period(params);
    REQUIRE(per == 15);
    // identical stream tag makes the two runs consume identical samples
    auto vote = majority_vote_attack(params, 1,
                                     {.trials = 300, .master_seed = 103, .stream_tag = 0xbeef});
    auto map = map_attack_success(params, PlaintextSource::uniform(), per,
                                  {.trials = 300, .master_seed = 103, .stream_tag = 0xbeef});
    REQUIRE(vote.vote_success.value == map.success_prob.value);
    REQUIRE(vote.joint_success.value == map.success_prob.value);
}

TEST_CASE("vote success grows with the period count on an informative channel") {
    const auto params = SystemParams::make_with_sigma(default_lfsr(6), 4, 1.0,
                                                      NoiseKind::truncated);
    auto t1 = majority_vote_attack(params, 1, {.trials = 250, .master_seed = 107});
    auto t5 = majority_vote_attack(params, 5, {.trials = 250, .master_seed = 107});
    auto t25 = majority_vote_attack(params, 25, {.trials = 250, .master_seed = 107});
    REQUIRE(t5.vote_success.value >=
            t1.vote_success.value -
                2.0 * (t5.vote_success.std_error + t1.vote_success.std_error));
    REQUIRE(t25.vote_success.value >=
            t1.vote_success.value -
                2.0 * (t25.vote_success.std_error + t1.vote_success.std_error));
    REQUIRE(t25.vote_success.value > t1.vote_success.value);
    // the joint posterior over all periods is at least as strong as the vote
    REQUIRE(t25.joint_success.value >=
            t25.vote_success.value -
                2.0 * (t25.joint_success.std_error + t25.vote_success.std_error));

    REQUIRE_THROWS_AS(majority_vote_attack(params, 0, {.trials = 10, .master_seed = 1}),
                      validation_error);
    REQUIRE_THROWS_AS(
        majority_vote_attack(params, 1, {.trials = 10, .master_seed = 1}, /*max symbols*/ 8),
        cap_error);
}

TEST_CASE("alpha-eta keeps spurious keys where the ASC has none") {
    const int length = 8;
    const auto spec = default_lfsr(length);
    const auto trunc = SystemParams::make_with_sigma(spec, 8, 2.0, NoiseKind::truncated);
    const auto known = PlaintextSource::known(kFixedBits);
    const auto dep = trunc.dependency();
    for (std::int64_t n = 2; n <= 4 * dep.floor_value; n += 2) {
        auto nk = avg_spurious(trunc, known, n, {.trials = 3000, .master_seed = 109});
        REQUIRE(nk.value > 0.0);
    }
    auto asc_nk = asc::avg_spurious(spec, length, {.trials = 500, .master_seed = 109});
    REQUIRE(asc_nk.value == 0.0);
}
