#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sdmlab/rate.hpp"
#include "sdmlab/signals.hpp"

namespace sdmlab {

/// Mid-point quantizer over an ordered, zero-symmetric level set.
/// Inputs exactly on a midpoint resolve to the upper level.
class Quantizer {
public:
    explicit Quantizer(std::vector<double> levels);

    static Quantizer two_level(double delta);
    static Quantizer three_level(double delta);
    /// `count` evenly spaced levels spanning [-full_scale, +full_scale].
    static Quantizer uniform(std::size_t count, double full_scale);

    std::size_t quantize_index(double u) const noexcept;
    double quantize(double u) const noexcept { return levels_[quantize_index(u)]; }

    std::optional<std::size_t> index_of(double value) const noexcept;

    std::span<const double> levels() const noexcept { return levels_; }
    std::size_t size() const noexcept { return levels_.size(); }
    double full_scale() const noexcept { return levels_.back(); }
    /// Spacing of adjacent levels (the quantizer LSB).
    double step() const noexcept { return levels_[1] - levels_[0]; }

    friend bool operator==(const Quantizer&, const Quantizer&) = default;

private:
    std::vector<double> levels_;
};

/// Uniform-error model: step^2 / 12.
double uniform_error_variance(const Quantizer& q);

/// Level indices into a quantizer's level set, at an exact rate.
class QuantizedStream {
public:
    QuantizedStream(std::vector<std::uint32_t> indices, Quantizer quantizer, Rate fs);

    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }
    std::uint32_t index(std::size_t i) const noexcept { return indices_[i]; }
    double value(std::size_t i) const noexcept { return quantizer_.levels()[indices_[i]]; }
    std::span<const std::uint32_t> indices() const noexcept { return indices_; }
    const Quantizer& quantizer() const noexcept { return quantizer_; }
    const Rate& fs() const noexcept { return fs_; }

    std::vector<double> values() const;
    SampledSignal to_signal() const;

    friend bool operator==(const QuantizedStream&, const QuantizedStream&) = default;

private:
    std::vector<std::uint32_t> indices_;
    Quantizer quantizer_;
    Rate fs_;
};

struct ModulatorSpec {
    int order = 1;
    Quantizer quantizer = Quantizer::two_level(1.0);
    double delta = 1.0;
    // Integrator values at n = 0; empty means all zero.
    std::vector<double> initial_state{};
    // |integrator| beyond overflow_limit * delta aborts the run.
    double overflow_limit = 1e6;

    void validate() const;
};

/// u is the quantizer input, e[n] = y[n] - u[n].
struct ModulatorTrace {
    QuantizedStream y;
    std::vector<double> u;
    std::vector<double> e;
};

/// Runs the modulator loop over x.
///
/// Order 1 (single delaying accumulator):
///   u[n] = u[n-1] + x[n-1] - y[n-1],  y[n] = Q(u[n])
/// so that y[n] = x[n-1] + e[n] - e[n-1] for every n >= 1.
///
/// Order 2 (delaying accumulator into a non-delaying one, unit feedback):
///   v[n] = v[n-1] + x[n-1] - y[n-1]
///   u[n] = u[n-1] + v[n]   - y[n-1],  y[n] = Q(u[n])
/// so that y[n] = x[n-1] + e[n] - 2e[n-1] + e[n-2] for every n >= 2.
///
/// Throws OverflowError when an integrator exceeds overflow_limit * delta.
ModulatorTrace sdm_run(const ModulatorSpec& spec, const SampledSignal& x);

/// |1 - e^{-j 2 pi f / fs}|^order.
double ntf_magnitude(int order, double f, double fs);

/// sigma_e2 * (pi^2 / 3) * 8 f_b^3 / f_s^3: first-order in-band noise prediction.
double inband_noise_power(double sigma_e2, double f_b, double f_s);

struct StabilityProbe {
    std::size_t horizon = 100'000;
    double resolution = 1e-3;
    // An amplitude counts as stable while every integrator stays within
    // state_bound * delta over the horizon.
    double state_bound = 100.0;
};

/// Largest probe amplitude (DC when f0 == 0, otherwise a sine at f0) for
/// which the loop stays bounded, found by bisection to probe.resolution.
double stable_amplitude_range(const ModulatorSpec& spec, double f0, const Rate& fs,
                              const StabilityProbe& probe = {});

}  // namespace sdmlab
