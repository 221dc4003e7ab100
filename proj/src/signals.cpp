#include "sdmlab/signals.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sdmlab/errors.hpp"

namespace sdmlab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw DomainError(std::string(what) + " contains a non-finite value");
        }
    }
}

double sinc(double x) {
    if (x == 0.0) {
        return 1.0;
    }
    return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

SampledSignal::SampledSignal(std::vector<double> samples, Rate fs)
    : samples_(std::move(samples)), fs_(fs) {
    require_finite(samples_, "signal");
}

std::string_view to_string(Window w) {
    switch (w) {
        case Window::rectangular: return "rectangular";
        case Window::hann: return "hann";
        case Window::blackman: return "blackman";
    }
    return "rectangular";
}

Window window_from_string(std::string_view name) {
    if (name == "rectangular") return Window::rectangular;
    if (name == "hann") return Window::hann;
    if (name == "blackman") return Window::blackman;
    throw DomainError("unknown window '" + std::string(name) + "'");
}

std::vector<double> window_coefficients(Window w, std::size_t n, bool periodic) {
    std::vector<double> out(n, 1.0);
    if (w == Window::rectangular || n < 2) {
        return out;
    }
    const double denom = periodic ? static_cast<double>(n) : static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double phase = 2.0 * kPi * static_cast<double>(k) / denom;
        if (w == Window::hann) {
            out[k] = 0.5 - 0.5 * std::cos(phase);
        } else {
            out[k] = 0.42 - 0.5 * std::cos(phase) + 0.08 * std::cos(2.0 * phase);
        }
    }
    if (!periodic) {
        // exact mirror so designed filters are exactly linear phase
        for (std::size_t k = 0; k < n / 2; ++k) {
            out[n - 1 - k] = out[k];
        }
    }
    return out;
}

FirFilter::FirFilter(std::vector<double> taps, double cutoff_frac, Window window)
    : taps_(std::move(taps)), cutoff_frac_(cutoff_frac), window_(window) {
    if (taps_.empty()) {
        throw DomainError("filter needs at least one tap");
    }
    require_finite(taps_, "filter");
}

FirFilter FirFilter::identity() { return FirFilter({1.0}); }

FirFilter FirFilter::scaled(double gain) const {
    auto taps = taps_;
    for (double& t : taps) {
        t *= gain;
    }
    return FirFilter(std::move(taps), cutoff_frac_, window_);
}

double FirFilter::magnitude_at(double f) const {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < taps_.size(); ++k) {
        const double phase = -2.0 * kPi * f * static_cast<double>(k);
        re += taps_[k] * std::cos(phase);
        im += taps_[k] * std::sin(phase);
    }
    return std::hypot(re, im);
}

SampledSignal resonator_sine(double f0, const Rate& fs, double amplitude, std::size_t n) {
    const double fs_hz = fs.hz();
    if (!(f0 >= 0.0) || f0 >= fs_hz / 2.0) {
        throw DomainError("resonator frequency must satisfy 0 <= f0 < fs/2");
    }
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw DomainError("resonator amplitude must be finite and >= 0");
    }
    if (n < 2) {
        throw DomainError("resonator needs at least 2 samples");
    }
    const double w = 2.0 * kPi * f0 / fs_hz;
    const double coeff = 2.0 * std::cos(w);
    std::vector<double> s(n);
    s[0] = 0.0;
    s[1] = amplitude * std::sin(w);
    for (std::size_t k = 2; k < n; ++k) {
        s[k] = coeff * s[k - 1] - s[k - 2];
    }
    return SampledSignal(std::move(s), fs);
}

SampledSignal constant_signal(double value, const Rate& fs, std::size_t n) {
    return SampledSignal(std::vector<double>(n, value), fs);
}

FirFilter design_lowpass(double cutoff_frac, std::size_t num_taps, Window window) {
    if (!(cutoff_frac > 0.0 && cutoff_frac < 0.5)) {
        throw DomainError("low-pass cutoff must lie in (0, 0.5) of fs");
    }
    if (num_taps < 3 || num_taps % 2 == 0) {
        throw DomainError("low-pass tap count must be odd and >= 3");
    }
    const auto win = window_coefficients(window, num_taps, false);
    const std::size_t mid = num_taps / 2;
    std::vector<double> taps(num_taps);
    for (std::size_t k = 0; k <= mid; ++k) {
        const double offset = static_cast<double>(k) - static_cast<double>(mid);
        taps[k] = 2.0 * cutoff_frac * sinc(2.0 * cutoff_frac * offset) * win[k];
    }
    double sum = taps[mid];
    for (std::size_t k = 0; k < mid; ++k) {
        sum += 2.0 * taps[k];
    }
    for (std::size_t k = 0; k <= mid; ++k) {
        taps[k] /= sum;
        taps[num_taps - 1 - k] = taps[k];
    }
    return FirFilter(std::move(taps), cutoff_frac, window);
}

SampledSignal apply_filter(const SampledSignal& signal, const FirFilter& filter) {
    const auto x = signal.samples();
    const auto h = filter.taps();
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        const std::size_t reach = std::min(n + 1, h.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < reach; ++j) {
            acc += h[j] * x[n - j];
        }
        y[n] = acc;
    }
    return SampledSignal(std::move(y), signal.fs());
}

SampledSignal apply_filter_circular(const SampledSignal& signal, const FirFilter& filter) {
    const auto x = signal.samples();
    const auto h = filter.taps();
    const std::size_t len = x.size();
    std::vector<double> y(len, 0.0);
    if (len == 0) {
        return SampledSignal(std::move(y), signal.fs());
    }
    for (std::size_t n = 0; n < len; ++n) {
        double acc = 0.0;
        std::size_t idx = n;
        for (std::size_t j = 0; j < h.size(); ++j) {
            acc += h[j] * x[idx];
            idx = (idx == 0) ? len - 1 : idx - 1;
        }
        y[n] = acc;
    }
    return SampledSignal(std::move(y), signal.fs());
}

SampledSignal sum_paths(std::span<const SampledSignal> paths, const FirFilter& filter) {
    if (paths.empty()) {
        throw MismatchError("sum_paths needs at least one path");
    }
    const auto& first = paths.front();
    std::vector<double> total(first.size(), 0.0);
    for (const auto& p : paths) {
        if (p.size() != first.size()) {
            throw MismatchError("sum_paths: path lengths differ");
        }
        if (!(p.fs() == first.fs())) {
            throw MismatchError("sum_paths: path sampling rates differ");
        }
        for (std::size_t i = 0; i < p.size(); ++i) {
            total[i] += p[i];
        }
    }
    return apply_filter(SampledSignal(std::move(total), first.fs()), filter);
}

SampledSignal decimate(const SampledSignal& signal, std::size_t ratio, const FirFilter& filter) {
    if (ratio == 0) {
        throw DomainError("decimation ratio must be >= 1");
    }
    if (filter.cutoff_frac() > 0.5 / static_cast<double>(ratio)) {
        throw DomainError("decimation filter cutoff exceeds the output Nyquist band");
    }
    const auto filtered = apply_filter(signal, filter);
    std::vector<double> out;
    out.reserve((filtered.size() + ratio - 1) / ratio);
    for (std::size_t i = 0; i < filtered.size(); i += ratio) {
        out.push_back(filtered[i]);
    }
    return SampledSignal(std::move(out), signal.fs().divided_by(ratio));
}

}  // namespace sdmlab
