#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sdmlab/errors.hpp"
#include "sdmlab/modulator.hpp"

using namespace sdmlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SampledSignal random_input(std::size_t n, double bound, std::uint32_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<double> v(n);
    for (auto& s : v) s = dist(gen);
    return SampledSignal(std::move(v), Rate(1'000'000));
}

}  // namespace

TEST_CASE("quantize examples", "[quantizer]") {
    const auto two = Quantizer::two_level(1.0);
    const auto three = Quantizer::three_level(1.0);
    CHECK(two.quantize(0.0) == 1.0);
    CHECK(three.quantize(0.2) == 0.0);
    CHECK(three.quantize(0.5) == 1.0);
    CHECK(three.quantize(-0.5) == 0.0);
    CHECK(three.quantize(-0.51) == -1.0);
    CHECK(two.quantize(-1e9) == -1.0);
    CHECK(two.quantize(1e9) == 1.0);
}

TEST_CASE("uniform quantizer levels are symmetric", "[quantizer]") {
    const auto q = Quantizer::uniform(17, 1.0);
    REQUIRE(q.size() == 17);
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(q.levels()[i] == -q.levels()[16 - i]);
    CHECK(q.levels()[8] == 0.0);
    CHECK(q.step() == 0.125);
    CHECK(uniform_error_variance(q) == 0.125 * 0.125 / 12.0);
    CHECK(uniform_error_variance(Quantizer::two_level(1.0)) == 4.0 / 12.0);
}

TEST_CASE("quantizer construction errors", "[quantizer]") {
    CHECK_THROWS_AS(Quantizer(std::vector<double>{1.0}), DomainError);
    CHECK_THROWS_AS(Quantizer(std::vector<double>{1.0, -1.0}), DomainError);
    CHECK_THROWS_AS(Quantizer(std::vector<double>{-1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(Quantizer::uniform(1, 1.0), DomainError);
}

TEST_CASE("quantize is idempotent and stays in the alphabet", "[quantizer][property]") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (const auto& q : {Quantizer::two_level(1.0), Quantizer::three_level(0.5), Quantizer::uniform(9, 2.0)}) {
        for (int i = 0; i < 10'000; ++i) {
            const double u = dist(gen);
            const double y = q.quantize(u);
            CHECK(q.quantize(y) == y);
            CHECK(q.index_of(y).has_value());
        }
    }
}

TEST_CASE("sdm_run zero input gives the alternating limit cycle", "[sdm]") {
    ModulatorSpec spec;
    const auto tr = sdm_run(spec, constant_signal(0.0, Rate(1000), 64));
    for (std::size_t n = 0; n < 64; ++n) CHECK(tr.y.value(n) == (n % 2 == 0 ? 1.0 : -1.0));
}

TEST_CASE("sdm_run full-scale DC is a fixed point", "[sdm]") {
    ModulatorSpec spec;
    const auto tr = sdm_run(spec, constant_signal(1.0, Rate(1000), 256));
    for (std::size_t n = 0; n < 256; ++n) CHECK(tr.y.value(n) == 1.0);
}

TEST_CASE("sdm_run tracks a half-scale DC input", "[sdm]") {
    ModulatorSpec spec;
    const auto tr = sdm_run(spec, constant_signal(0.5, Rate(1000), 1 << 16));
    double mean = 0.0;
    for (double v : tr.y.values()) mean += v;
    mean /= static_cast<double>(tr.y.size());
    CHECK_THAT(mean, WithinAbs(0.5, 0.002));
}

TEST_CASE("first-order identity holds sample by sample", "[sdm][property]") {
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        ModulatorSpec spec;
        spec.quantizer = seed % 2 ? Quantizer::two_level(1.0) : Quantizer::three_level(1.0);
        const auto x = random_input(5000, 0.9, seed);
        const auto tr = sdm_run(spec, x);
        for (std::size_t n = 1; n < x.size(); ++n) {
            const double r = tr.y.value(n) - x[n - 1] - tr.e[n] + tr.e[n - 1];
            REQUIRE(std::abs(r) <= 1e-12);
        }
    }
}

TEST_CASE("second-order identity holds sample by sample", "[sdm][property]") {
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        ModulatorSpec spec;
        spec.order = 2;
        spec.quantizer = Quantizer::uniform(5, 1.0);
        const auto x = random_input(5000, 0.5, seed);
        const auto tr = sdm_run(spec, x);
        for (std::size_t n = 2; n < x.size(); ++n) {
            const double r = tr.y.value(n) - x[n - 1] - tr.e[n] + 2 * tr.e[n - 1] - tr.e[n - 2];
            REQUIRE(std::abs(r) <= 1e-11);
        }
    }
}

TEST_CASE("sdm_run is deterministic", "[sdm][property]") {
    ModulatorSpec spec;
    spec.order = 2;
    spec.quantizer = Quantizer::three_level(1.0);
    const auto x = random_input(4096, 0.4, 9);
    const auto a = sdm_run(spec, x);
    const auto b = sdm_run(spec, x);
    CHECK(a.y == b.y);
    CHECK(a.u == b.u);
    CHECK(a.e == b.e);
}

TEST_CASE("sdm_run honours the initial state", "[sdm]") {
    ModulatorSpec spec;
    spec.initial_state = {-0.3};
    const auto tr = sdm_run(spec, constant_signal(0.0, Rate(1000), 4));
    CHECK(tr.u[0] == -0.3);
    CHECK(tr.y.value(0) == -1.0);
}

TEST_CASE("sdm_run overflow and spec validation", "[sdm]") {
    ModulatorSpec spec;
    spec.overflow_limit = 10.0;
    CHECK_THROWS_AS(sdm_run(spec, constant_signal(3.0, Rate(1000), 100)), OverflowError);

    ModulatorSpec bad;
    bad.order = 3;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad.order = 1;
    bad.initial_state = {0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("ntf_magnitude examples", "[sdm]") {
    CHECK(ntf_magnitude(1, 0.0, 1e6) == 0.0);
    CHECK(ntf_magnitude(2, 0.0, 1e6) == 0.0);
    CHECK_THAT(ntf_magnitude(1, 0.5e6, 1e6), WithinAbs(2.0, 1e-15));
    CHECK_THAT(ntf_magnitude(1, 1e6 / 6, 1e6), WithinAbs(1.0, 1e-15));
    CHECK_THAT(ntf_magnitude(2, 1e6 / 6, 1e6), WithinAbs(1.0, 1e-15));
}

TEST_CASE("inband_noise_power examples", "[sdm]") {
    const double s2 = 1.0 / 12.0;
    CHECK_THAT(inband_noise_power(s2, 0.5e6, 1e6), WithinRel(s2 * std::numbers::pi * std::numbers::pi / 3, 1e-15));
    CHECK_THAT(inband_noise_power(s2, 1e3, 1e6) / inband_noise_power(s2, 0.5e3, 1e6), WithinRel(8.0, 1e-14));
    // (1/12) * (pi^2 / 3) * 8 / 128^3, evaluated independently
    CHECK_THAT(inband_noise_power(s2, 1.0, 128.0), WithinRel(1.04582091448989e-06, 1e-12));
}

TEST_CASE("stable_amplitude_range examples", "[sdm][stability]") {
    ModulatorSpec one;
    const Rate fs(1'000'000);
    StabilityProbe probe;
    probe.horizon = 1'000'000;
    const double r1 = stable_amplitude_range(one, 0.0, fs, probe);
    CHECK_THAT(r1, WithinAbs(1.0, probe.resolution));

    ModulatorSpec two;
    two.order = 2;
    const double r2 = stable_amplitude_range(two, 0.0, fs, probe);
    CHECK(r2 < r1);
    CHECK(r2 > 0.0);
}

TEST_CASE("zero amplitude never diverges", "[sdm][stability]") {
    for (int order : {1, 2}) {
        ModulatorSpec spec;
        spec.order = order;
        const auto tr = sdm_run(spec, constant_signal(0.0, Rate(1000), 100'000));
        double peak = 0.0;
        for (double u : tr.u) peak = std::max(peak, std::abs(u));
        CHECK(peak <= 4.0);
    }
}
