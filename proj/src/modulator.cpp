#include "sdmlab/modulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "sdmlab/errors.hpp"

namespace sdmlab {

Quantizer::Quantizer(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.size() < 2) {
        throw DomainError("quantizer needs at least two levels");
    }
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (!std::isfinite(levels_[i])) {
            throw DomainError("quantizer level is not finite");
        }
        if (i > 0 && !(levels_[i] > levels_[i - 1])) {
            throw DomainError("quantizer levels must be strictly increasing");
        }
    }
    const double tol = 1e-12 * std::abs(levels_.back());
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (std::abs(levels_[i] + levels_[levels_.size() - 1 - i]) > tol) {
            throw DomainError("quantizer levels must be symmetric about 0");
        }
    }
}

Quantizer Quantizer::two_level(double delta) { return Quantizer({-delta, delta}); }

Quantizer Quantizer::three_level(double delta) { return Quantizer({-delta, 0.0, delta}); }

Quantizer Quantizer::uniform(std::size_t count, double full_scale) {
    if (count < 2) {
        throw DomainError("uniform quantizer needs at least two levels");
    }
    const auto span = static_cast<double>(count - 1);
    std::vector<double> levels(count);
    for (std::size_t k = 0; k < count; ++k) {
        // integer numerator keeps the set exactly symmetric
        const double num = 2.0 * static_cast<double>(k) - span;
        levels[k] = num * full_scale / span;
    }
    return Quantizer(std::move(levels));
}

std::size_t Quantizer::quantize_index(double u) const noexcept {
    const auto it = std::lower_bound(levels_.begin(), levels_.end(), u);
    if (it == levels_.begin()) {
        return 0;
    }
    if (it == levels_.end()) {
        return levels_.size() - 1;
    }
    const auto j = static_cast<std::size_t>(it - levels_.begin());
    const double mid = 0.5 * (levels_[j - 1] + levels_[j]);
    return u >= mid ? j : j - 1;
}

std::optional<std::size_t> Quantizer::index_of(double value) const noexcept {
    const auto it = std::lower_bound(levels_.begin(), levels_.end(), value);
    if (it == levels_.end() || *it != value) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - levels_.begin());
}

double uniform_error_variance(const Quantizer& q) {
    const double s = q.step();
    return s * s / 12.0;
}

QuantizedStream::QuantizedStream(std::vector<std::uint32_t> indices, Quantizer quantizer, Rate fs)
    : indices_(std::move(indices)), quantizer_(std::move(quantizer)), fs_(fs) {
    for (auto idx : indices_) {
        if (idx >= quantizer_.size()) {
            throw RangeError("stream index outside the quantizer level set");
        }
    }
}

std::vector<double> QuantizedStream::values() const {
    std::vector<double> out(indices_.size());
    const auto lv = quantizer_.levels();
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        out[i] = lv[indices_[i]];
    }
    return out;
}

SampledSignal QuantizedStream::to_signal() const { return SampledSignal(values(), fs_); }

void ModulatorSpec::validate() const {
    if (order != 1 && order != 2) {
        throw DomainError("modulator order must be 1 or 2");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw DomainError("modulator full scale delta must be > 0");
    }
    if (!initial_state.empty() && initial_state.size() != static_cast<std::size_t>(order)) {
        throw DomainError("initial_state must hold one value per integrator");
    }
    if (!(overflow_limit > 0.0)) {
        throw DomainError("overflow limit must be > 0");
    }
}

namespace {

// Integrator state of the order-1/2 loop; outer integrator in [0].
struct LoopState {
    std::array<double, 2> v{0.0, 0.0};
    int order = 1;

    static LoopState from(const ModulatorSpec& spec) {
        LoopState s;
        s.order = spec.order;
        for (std::size_t i = 0; i < spec.initial_state.size(); ++i) {
            s.v[i] = spec.initial_state[i];
        }
        return s;
    }

    // Applies one clock of the recurrence and returns the new quantizer input.
    double advance(double x_prev, double y_prev) noexcept {
        v[0] += x_prev - y_prev;
        if (order == 2) {
            v[1] += v[0] - y_prev;
            return v[1];
        }
        return v[0];
    }

    double quantizer_input() const noexcept { return order == 2 ? v[1] : v[0]; }

    double excursion() const noexcept {
        return order == 2 ? std::max(std::abs(v[0]), std::abs(v[1])) : std::abs(v[0]);
    }
};

}  // namespace

ModulatorTrace sdm_run(const ModulatorSpec& spec, const SampledSignal& x) {
    spec.validate();
    const std::size_t n = x.size();
    const double limit = spec.overflow_limit * spec.delta;
    const auto& q = spec.quantizer;
    const auto levels = q.levels();

    std::vector<std::uint32_t> idx(n);
    std::vector<double> u(n);
    std::vector<double> e(n);

    auto state = LoopState::from(spec);
    double y_prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double uk = (k == 0) ? state.quantizer_input() : state.advance(x[k - 1], y_prev);
        if (state.excursion() > limit) {
            throw OverflowError("modulator integrator overflow at sample " + std::to_string(k));
        }
        const auto i = q.quantize_index(uk);
        idx[k] = static_cast<std::uint32_t>(i);
        u[k] = uk;
        e[k] = levels[i] - uk;
        y_prev = levels[i];
    }
    return ModulatorTrace{QuantizedStream(std::move(idx), q, x.fs()), std::move(u), std::move(e)};
}

double ntf_magnitude(int order, double f, double fs) {
    if (order != 1 && order != 2) {
        throw DomainError("NTF order must be 1 or 2");
    }
    if (!(fs > 0.0) || !(f >= 0.0) || f > fs / 2.0) {
        throw DomainError("NTF frequency must satisfy 0 <= f <= fs/2");
    }
    const double mag = 2.0 * std::sin(std::numbers::pi * f / fs);
    return order == 2 ? mag * mag : mag;
}

double inband_noise_power(double sigma_e2, double f_b, double f_s) {
    if (!(f_s > 0.0) || !(f_b > 0.0) || f_b > f_s / 2.0) {
        throw DomainError("in-band noise needs 0 < f_b <= f_s/2");
    }
    const double r = f_b / f_s;
    return sigma_e2 * (std::numbers::pi * std::numbers::pi / 3.0) * 8.0 * r * r * r;
}

namespace {

bool stays_bounded(const ModulatorSpec& spec, double amplitude, double f0, double fs_hz,
                   const StabilityProbe& probe) {
    const double bound = probe.state_bound * spec.delta;
    const auto& q = spec.quantizer;
    const double w = 2.0 * std::numbers::pi * f0 / fs_hz;
    auto state = LoopState::from(spec);
    double y_prev = q.quantize(state.quantizer_input());
    for (std::size_t k = 1; k < probe.horizon; ++k) {
        const double x_prev =
            f0 == 0.0 ? amplitude : amplitude * std::sin(w * static_cast<double>(k - 1));
        const double uk = state.advance(x_prev, y_prev);
        if (state.excursion() > bound) {
            return false;
        }
        y_prev = q.quantize(uk);
    }
    return true;
}

}  // namespace

double stable_amplitude_range(const ModulatorSpec& spec, double f0, const Rate& fs,
                              const StabilityProbe& probe) {
    spec.validate();
    if (probe.horizon < 10'000) {
        throw DomainError("stability probe horizon must be >= 1e4 samples");
    }
    if (!(probe.resolution > 0.0) || !(probe.state_bound > 0.0)) {
        throw DomainError("stability probe resolution and bound must be > 0");
    }
    const double fs_hz = fs.hz();
    if (!(f0 >= 0.0) || f0 >= fs_hz / 2.0) {
        throw DomainError("probe frequency must satisfy 0 <= f0 < fs/2");
    }

    double lo = 0.0;
    if (!stays_bounded(spec, probe.resolution, f0, fs_hz, probe)) {
        return 0.0;
    }
    double hi = 2.0 * spec.delta;
    while (stays_bounded(spec, hi, f0, fs_hz, probe)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0 * spec.delta) {
            return lo;
        }
    }
    while (hi - lo > probe.resolution) {
        const double mid = 0.5 * (lo + hi);
        if (stays_bounded(spec, mid, f0, fs_hz, probe)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace sdmlab
