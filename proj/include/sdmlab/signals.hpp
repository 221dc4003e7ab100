#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sdmlab/rate.hpp"

namespace sdmlab {

/// Real-valued samples at an exact sampling rate. Full scale is 1.0.
class SampledSignal {
public:
    SampledSignal(std::vector<double> samples, Rate fs);

    std::span<const double> samples() const noexcept { return samples_; }
    const std::vector<double>& values() const noexcept { return samples_; }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const Rate& fs() const noexcept { return fs_; }
    double fs_hz() const noexcept { return fs_.hz(); }

private:
    std::vector<double> samples_;
    Rate fs_;
};

enum class Window { rectangular, hann, blackman };

std::string_view to_string(Window w);
Window window_from_string(std::string_view name);

// Symmetric taps (denominator n-1) are used for filter design; periodic
// taps (denominator n) for spectral analysis, where a bin-centered tone
// leaks into exactly +-1 (hann) or +-2 (blackman) neighbours.
std::vector<double> window_coefficients(Window w, std::size_t n, bool periodic);

class FirFilter {
public:
    explicit FirFilter(std::vector<double> taps, double cutoff_frac = 0.0,
                       Window window = Window::rectangular);

    /// Single unit tap.
    static FirFilter identity();

    std::span<const double> taps() const noexcept { return taps_; }
    std::size_t size() const noexcept { return taps_.size(); }
    double cutoff_frac() const noexcept { return cutoff_frac_; }
    Window window() const noexcept { return window_; }

    FirFilter scaled(double gain) const;

    /// |H(e^{j2 pi f})| at normalized frequency f = freq / fs.
    double magnitude_at(double f) const;

private:
    std::vector<double> taps_;
    double cutoff_frac_;
    Window window_;
};

/// n samples of amplitude * sin(2 pi f0 k / fs) produced by the two-term
/// resonator recurrence s[k] = 2 cos(w) s[k-1] - s[k-2], seeded at phase 0.
SampledSignal resonator_sine(double f0, const Rate& fs, double amplitude, std::size_t n);

SampledSignal constant_signal(double value, const Rate& fs, std::size_t n);

/// Windowed-sinc linear-phase low-pass, unit DC gain.
FirFilter design_lowpass(double cutoff_frac, std::size_t num_taps, Window window);

/// Causal linear convolution with zero initial history, truncated to the input length.
SampledSignal apply_filter(const SampledSignal& signal, const FirFilter& filter);

/// Convolution with periodic extension of the input (steady-state response
/// of a repetitive capture window). Same length as the input.
SampledSignal apply_filter_circular(const SampledSignal& signal, const FirFilter& filter);

/// Multiple-input single-output low-pass: sample-wise sum, then filter.
SampledSignal sum_paths(std::span<const SampledSignal> paths, const FirFilter& filter);

/// Filter, then keep every ratio-th sample starting at index 0.
SampledSignal decimate(const SampledSignal& signal, std::size_t ratio, const FirFilter& filter);

}  // namespace sdmlab
