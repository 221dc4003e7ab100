#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sdmlab/errors.hpp"
#include "sdmlab/rate.hpp"
#include "sdmlab/signals.hpp"

using namespace sdmlab;
using Catch::Matchers::WithinAbs;

namespace {

SampledSignal random_signal(std::size_t n, std::uint32_t seed, const Rate& fs) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& s : v) s = dist(gen);
    return SampledSignal(std::move(v), fs);
}

double peak_abs(const SampledSignal& s, std::size_t from = 0) {
    double m = 0.0;
    for (std::size_t i = from; i < s.size(); ++i) m = std::max(m, std::abs(s[i]));
    return m;
}

}  // namespace

TEST_CASE("rate arithmetic is exact", "[rate]") {
    const Rate f_ck(100'000'000);
    const Rate f_h = divide_clock(f_ck, 3);
    CHECK(f_h.num() == 100'000'000);
    CHECK(f_h.den() == 3);
    CHECK(f_h.times(3) == f_ck);
    CHECK(f_h.to_string() == "100000000/3");

    const Rate f_l = divide_clock(f_ck, 2).divided_by(4);
    CHECK(f_l == Rate(12'500'000));
    CHECK(f_l.times(4) == Rate(50'000'000));
    CHECK(Rate(6, 4) == Rate(3, 2));

    CHECK_THROWS_AS(Rate(0), DomainError);
    CHECK_THROWS_AS(divide_clock(f_ck, 0), DomainError);
}

TEST_CASE("divide_clock times n_div recovers f_ck for every divider", "[rate]") {
    const Rate f_ck(100'000'000);
    for (std::uint64_t n = 1; n <= 64; ++n) CHECK(divide_clock(f_ck, n).times(n) == f_ck);
}

TEST_CASE("resonator_sine starts at phase zero", "[signals]") {
    const auto s = resonator_sine(1e3, Rate(48'000), 0.7, 4);
    CHECK(s[0] == 0.0);
    CHECK_THAT(s[1], WithinAbs(0.7 * std::sin(2 * std::numbers::pi * 1e3 / 48e3), 1e-15));
    CHECK(s.size() == 4);
    CHECK(s.fs() == Rate(48'000));
}

TEST_CASE("resonator_sine tracks the closed form over 1e5 samples", "[signals]") {
    const Rate fs(1'000'000);
    for (double frac : {1e-4, 0.013, 0.1234, 0.25, 0.3333, 0.49}) {
        const double f0 = frac * fs.hz();
        const auto s = resonator_sine(f0, fs, 1.0, 100'000);
        double err = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            err = std::max(err, std::abs(s[k] - std::sin(2 * std::numbers::pi * frac * k)));
        }
        INFO("f0/fs = " << frac);
        CHECK(err <= 1e-6);
    }
}

TEST_CASE("resonator_sine domain", "[signals]") {
    const auto dc = resonator_sine(0.0, Rate(1000), 1.0, 8);
    for (double v : dc.values()) CHECK(v == 0.0);
    CHECK_THROWS_AS(resonator_sine(500.0, Rate(1000), 1.0, 8), DomainError);
    CHECK_THROWS_AS(resonator_sine(600.0, Rate(1000), 1.0, 8), DomainError);
}

TEST_CASE("design_lowpass has unit DC gain and symmetric taps", "[signals]") {
    const auto f = design_lowpass(0.1, 63, Window::hann);
    double sum = 0.0;
    for (double t : f.taps()) sum += t;
    CHECK_THAT(sum, WithinAbs(1.0, 1e-14));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.taps()[i] == f.taps()[f.size() - 1 - i]);
    CHECK_THAT(f.magnitude_at(0.0), WithinAbs(1.0, 1e-14));
}

TEST_CASE("255-tap Blackman low-pass stopband", "[signals]") {
    const auto f = design_lowpass(0.1, 255, Window::blackman);
    for (double fr = 0.2; fr <= 0.5; fr += 0.005) {
        INFO("f = " << fr);
        CHECK(20 * std::log10(f.magnitude_at(fr)) <= -60.0);
    }
    CHECK_THAT(f.magnitude_at(0.02), WithinAbs(1.0, 1e-3));
}

TEST_CASE("apply_filter examples", "[signals]") {
    const Rate fs(1000);
    const auto x = random_signal(64, 1, fs);

    SECTION("single unit tap is the identity") {
        const auto y = apply_filter(x, FirFilter::identity());
        CHECK(y.values() == x.values());
    }
    SECTION("DC through a unit-DC filter settles to the input value") {
        const auto f = design_lowpass(0.2, 31, Window::hann);
        const auto y = apply_filter(constant_signal(0.37, fs, 200), f);
        for (std::size_t i = 30; i < y.size(); ++i) CHECK_THAT(y[i], WithinAbs(0.37, 1e-12));
    }
    SECTION("impulse response equals the taps") {
        const auto f = design_lowpass(0.2, 15, Window::blackman);
        std::vector<double> imp(32, 0.0);
        imp[0] = 1.0;
        const auto y = apply_filter(SampledSignal(imp, fs), f);
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(y[i] == f.taps()[i]);
        for (std::size_t i = f.size(); i < y.size(); ++i) CHECK(y[i] == 0.0);
    }
}

TEST_CASE("apply_filter is linear", "[signals][property]") {
    const Rate fs(1000);
    const auto f = design_lowpass(0.15, 41, Window::hann);
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> coef(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_signal(256, 100 + trial, fs);
        const auto y = random_signal(256, 200 + trial, fs);
        const double a = coef(gen), b = coef(gen);
        std::vector<double> mix(256);
        for (std::size_t i = 0; i < 256; ++i) mix[i] = a * x[i] + b * y[i];
        const auto lhs = apply_filter(SampledSignal(mix, fs), f);
        const auto fx = apply_filter(x, f);
        const auto fy = apply_filter(y, f);
        for (std::size_t i = 0; i < 256; ++i) CHECK_THAT(lhs[i], WithinAbs(a * fx[i] + b * fy[i], 1e-10));
    }
}

TEST_CASE("apply_filter_circular matches linear convolution in steady state", "[signals]") {
    const Rate fs(1000);
    const auto f = design_lowpass(0.1, 21, Window::hann);
    // one period of a periodic input, then the linear response of two periods
    const auto period = random_signal(128, 3, fs);
    std::vector<double> twice(period.values());
    twice.insert(twice.end(), period.values().begin(), period.values().end());
    const auto lin = apply_filter(SampledSignal(twice, fs), f);
    const auto circ = apply_filter_circular(period, f);
    for (std::size_t i = 0; i < 128; ++i) CHECK_THAT(circ[i], WithinAbs(lin[128 + i], 1e-12));
}

TEST_CASE("sum_paths examples", "[signals]") {
    const Rate fs(1000);
    const auto s = random_signal(128, 11, fs);
    const auto f = design_lowpass(0.2, 25, Window::hann);

    SECTION("one path through the identity filter") {
        const std::vector<SampledSignal> paths{s};
        CHECK(sum_paths(paths, FirFilter::identity()).values() == s.values());
    }
    SECTION("M copies scale the filtered path by M") {
        const std::vector<SampledSignal> paths(4, s);
        const auto y = sum_paths(paths, f);
        const auto ref = apply_filter(s, f);
        for (std::size_t i = 0; i < y.size(); ++i) CHECK_THAT(y[i], WithinAbs(4 * ref[i], 1e-12));
    }
    SECTION("s and -s cancel") {
        std::vector<double> neg(s.values());
        for (auto& v : neg) v = -v;
        const std::vector<SampledSignal> paths{s, SampledSignal(neg, fs)};
        const auto y = sum_paths(paths, f);
        for (double v : y.values()) CHECK(v == 0.0);
    }
    SECTION("mismatched paths are rejected") {
        const std::vector<SampledSignal> bad_len{s, random_signal(127, 1, fs)};
        CHECK_THROWS_AS(sum_paths(bad_len, f), MismatchError);
        const std::vector<SampledSignal> bad_rate{s, random_signal(128, 1, Rate(2000))};
        CHECK_THROWS_AS(sum_paths(bad_rate, f), MismatchError);
        CHECK_THROWS_AS(sum_paths(std::vector<SampledSignal>{}, f), MismatchError);
    }
}

TEST_CASE("decimate examples", "[signals]") {
    const Rate fs(1000);
    const auto x = random_signal(10, 5, fs);

    CHECK(decimate(x, 1, FirFilter::identity()).values() == x.values());

    const auto d = decimate(x, 2, FirFilter::identity());
    CHECK(d.size() == 5);
    CHECK(d.fs() == Rate(500));
    for (std::size_t i = 0; i < 5; ++i) CHECK(d[i] == x[2 * i]);

    CHECK_THROWS_AS(decimate(x, 0, FirFilter::identity()), DomainError);
    CHECK_THROWS_AS(decimate(x, 4, design_lowpass(0.3, 11, Window::hann)), DomainError);
}

TEST_CASE("decimate preserves a low-frequency sine", "[signals]") {
    const Rate fs(1'000'000);
    const std::size_t ratio = 8;
    const double f0 = 3'000.0;
    const auto f = design_lowpass(0.5 / ratio * 0.8, 129, Window::blackman);
    const auto x = resonator_sine(f0, fs, 0.8, 16'384);
    const auto d = decimate(x, ratio, f);
    // the filter's group delay is (taps - 1) / 2 = 64 input samples = 8 output samples
    const auto ref = resonator_sine(f0, fs.divided_by(ratio), 0.8, d.size() + 8);
    for (std::size_t m = 20; m < d.size(); ++m) CHECK_THAT(d[m], WithinAbs(ref[m - 8], 2e-3));
}

TEST_CASE("decimate is linear across band-limited components", "[signals][property]") {
    const Rate fs(1'000'000);
    const auto f = design_lowpass(0.05, 201, Window::blackman);
    const auto a = resonator_sine(5'000, fs, 0.3, 8192);
    const auto b = resonator_sine(17'000, fs, 0.4, 8192);
    std::vector<double> sum(8192);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a[i] + b[i];
    const auto ds = decimate(SampledSignal(sum, fs), 8, f);
    const auto da = decimate(a, 8, f);
    const auto db = decimate(b, 8, f);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK_THAT(ds[i], WithinAbs(da[i] + db[i], 1e-12));
    CHECK(peak_abs(ds, 30) > 0.5);
}

TEST_CASE("window names round-trip", "[signals]") {
    for (auto w : {Window::rectangular, Window::hann, Window::blackman}) {
        CHECK(window_from_string(to_string(w)) == w);
    }
    CHECK_THROWS_AS(window_from_string("kaiser"), DomainError);
}
