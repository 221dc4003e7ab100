#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "sdmlab/analysis.hpp"
#include "sdmlab/errors.hpp"
#include "sdmlab/interleave.hpp"

using namespace sdmlab;

namespace {

const Rate kHigh(50'000'000);

QuantizedStream stream_of(std::vector<std::uint32_t> idx, const Quantizer& q = Quantizer::uniform(5, 1.0)) {
    return QuantizedStream(std::move(idx), q, kHigh);
}

QuantizedStream random_stream(std::size_t n, std::mt19937_64& gen) {
    const auto q = Quantizer::uniform(5, 1.0);
    std::uniform_int_distribution<std::uint32_t> d(0, 4);
    std::vector<std::uint32_t> idx(n);
    for (auto& i : idx) i = d(gen);
    return QuantizedStream(std::move(idx), q, kHigh);
}

std::vector<std::uint32_t> indices(const QuantizedStream& s) {
    return {s.indices().begin(), s.indices().end()};
}

}  // namespace

TEST_CASE("polyphase_decompose examples", "[interleave]") {
    // a..e as level indices 0..4
    const auto y4 = stream_of({0, 1, 2, 3});
    const auto one = polyphase_decompose(y4, 1);
    REQUIRE(one.paths.size() == 1);
    CHECK(one.paths[0] == QuantizedStream(indices(y4), y4.quantizer(), kHigh));

    const auto two = polyphase_decompose(y4, 2);
    CHECK(indices(two.paths[0]) == std::vector<std::uint32_t>{0, 2});
    CHECK(indices(two.paths[1]) == std::vector<std::uint32_t>{1, 3});
    CHECK(two.f_low == Rate(25'000'000));
    CHECK(two.f_low.times(2) == two.f_high);

    const auto odd = polyphase_decompose(stream_of({0, 1, 2, 3, 4}), 2);
    CHECK(indices(odd.paths[0]) == std::vector<std::uint32_t>{0, 2, 4});
    CHECK(indices(odd.paths[1]) == std::vector<std::uint32_t>{1, 3});

    CHECK_THROWS_AS(polyphase_decompose(y4, 0), DomainError);
}

TEST_CASE("multiplex examples", "[interleave]") {
    const auto q = Quantizer::uniform(5, 1.0);
    const Rate low(25'000'000);
    PolyphaseSet set{{QuantizedStream({0, 2}, q, low), QuantizedStream({1, 3}, q, low)}, 2, kHigh, low};
    CHECK(indices(multiplex(set)) == std::vector<std::uint32_t>{0, 1, 2, 3});
    CHECK(multiplex(set).fs() == kHigh);

    PolyphaseSet empty{{QuantizedStream({}, q, kHigh)}, 1, kHigh, kHigh};
    CHECK(multiplex(empty).empty());
}

TEST_CASE("multiplex rejects inconsistent sets", "[interleave]") {
    const auto q = Quantizer::uniform(5, 1.0);
    const Rate low(25'000'000);
    PolyphaseSet longer_tail{{QuantizedStream({0}, q, low), QuantizedStream({1, 3}, q, low)}, 2, kHigh, low};
    CHECK_THROWS_AS(multiplex(longer_tail), InconsistencyError);
    PolyphaseSet gap{{QuantizedStream({0, 1, 2}, q, low), QuantizedStream({1}, q, low)}, 2, kHigh, low};
    CHECK_THROWS_AS(multiplex(gap), InconsistencyError);
    PolyphaseSet bad_rate{{QuantizedStream({0}, q, kHigh), QuantizedStream({1}, q, kHigh)}, 2, kHigh, low};
    CHECK_THROWS_AS(multiplex(bad_rate), InconsistencyError);
}

TEST_CASE("multiplex inverts polyphase_decompose", "[interleave][property]") {
    std::mt19937_64 gen(42);
    std::uniform_int_distribution<std::size_t> len(0, 1000);
    for (int trial = 0; trial < 200; ++trial) {
        const auto y = random_stream(len(gen), gen);
        for (std::size_t m = 1; m <= 8; ++m) {
            const auto set = polyphase_decompose(y, m);
            std::size_t total = 0;
            for (const auto& p : set.paths) total += p.size();
            REQUIRE(total == y.size());
            REQUIRE(set.f_low.times(m) == set.f_high);
            REQUIRE(multiplex(set) == y);
        }
    }
}

TEST_CASE("ti_sdm_run examples", "[interleave]") {
    ModulatorSpec spec;
    const auto zero = constant_signal(0.0, kHigh, 64);

    const auto single = ti_sdm_run(spec, 1, zero);
    CHECK(single.paths[0] == sdm_run(spec, zero).y);

    const auto two = ti_sdm_run(spec, 2, zero);
    for (std::size_t m = 0; m < 32; ++m) {
        CHECK(two.paths[0].value(m) == 1.0);
        CHECK(two.paths[1].value(m) == -1.0);
    }
}

TEST_CASE("ti_sdm_run multiplexed equals sdm_run", "[interleave][property]") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> amp(-0.9, 0.9);
    for (int trial = 0; trial < 40; ++trial) {
        ModulatorSpec spec;
        spec.order = 1 + trial % 2;
        spec.quantizer = trial % 3 == 0 ? Quantizer::two_level(1.0) : Quantizer::three_level(1.0);
        const double bound = spec.order == 2 ? 0.5 : 0.9;
        std::vector<double> v(2000);
        for (auto& s : v) s = amp(gen) * bound / 0.9;
        const SampledSignal x(v, kHigh);
        REQUIRE(multiplex(ti_sdm_run(spec, 4, x)) == sdm_run(spec, x).y);
    }
}

TEST_CASE("select_path_source modes", "[interleave]") {
    ModulatorSpec spec;
    spec.quantizer = Quantizer::three_level(1.0);
    const auto x = resonator_sine(1e6, kHigh, 0.5, 256);
    const auto set = ti_sdm_run(spec, 2, x);

    const auto ti = select_path_source(PathSource::ti_paths, set);
    REQUIRE(ti.size() == 2);
    CHECK(ti[0] == set.paths[0]);
    CHECK(ti[1] == set.paths[1]);

    const auto mux = select_path_source(PathSource::muxed_high_speed, set);
    REQUIRE(mux.size() == 2);
    CHECK(mux[0] == multiplex(set));
    CHECK(mux[1].fs() == kHigh);
    CHECK(mux[1].size() == 256);
    for (double v : mux[1].values()) CHECK(v == 0.0);
}

TEST_CASE("idle muxed paths get a zero level on two-level alphabets", "[interleave]") {
    ModulatorSpec spec;
    const auto set = ti_sdm_run(spec, 3, constant_signal(0.2, kHigh, 30));
    const auto mux = select_path_source(PathSource::muxed_high_speed, set);
    for (std::size_t k = 1; k < 3; ++k) {
        for (double v : mux[k].values()) CHECK(v == 0.0);
    }
}

TEST_CASE("hold_on_high_rate staggers each path", "[interleave]") {
    const Rate low(25'000'000);
    const SampledSignal p1({1.0, 2.0, 3.0}, low);
    const auto h = hold_on_high_rate(p1, 2, 1, 6);
    CHECK(h.values() == std::vector<double>{0.0, 1.0, 1.0, 2.0, 2.0, 3.0});
    CHECK(h.fs() == Rate(50'000'000));
}

TEST_CASE("both path-source modes reconstruct the same baseband tone", "[interleave]") {
    const std::size_t m_paths = 2;
    const std::size_t n = 1 << 15;
    const Rate f_h(50'000'000);
    // coherent tone: 37 cycles in the analysed 8192-sample block
    const std::size_t tail = 8192;
    const double f0 = 37.0 * f_h.hz() / tail;
    ModulatorSpec spec;
    spec.quantizer = Quantizer::three_level(1.0);
    const auto x = resonator_sine(f0, f_h, 0.5, n);
    const auto set = ti_sdm_run(spec, m_paths, x);
    const auto lpf = design_lowpass(f0 * 4 / f_h.hz(), 513, Window::blackman);

    auto tone_power = [&](const SampledSignal& out) {
        std::vector<double> last(out.values().end() - tail, out.values().end());
        auto spec_out = periodogram(SampledSignal(last, f_h), Window::hann);
        locate_signal(spec_out, f0 * 2, 3);
        double p = 0.0;
        const std::size_t k = *spec_out.signal_bin;
        for (std::size_t i = k - 3; i <= k + 3; ++i) p += spec_out.bins[i];
        return p;
    };

    std::vector<SampledSignal> ti_held;
    const auto ti = select_path_source(PathSource::ti_paths, set);
    for (std::size_t k = 0; k < m_paths; ++k) {
        ti_held.push_back(hold_on_high_rate(ti[k].to_signal(), m_paths, k, n));
    }
    const auto out_ti = sum_paths(ti_held, lpf.scaled(1.0 / m_paths));

    std::vector<SampledSignal> mux_sig;
    for (const auto& s : select_path_source(PathSource::muxed_high_speed, set)) mux_sig.push_back(s.to_signal());
    const auto out_mux = sum_paths(mux_sig, lpf);

    const double diff_db = 10 * std::log10(tone_power(out_ti) / tone_power(out_mux));
    CHECK(std::abs(diff_db) <= 0.5);
}
