#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sdmlab/rate.hpp"
#include "sdmlab/signals.hpp"

namespace sdmlab {

/// One-sided power spectrum plus the metrics derived from it.
///
/// periodogram() fills the bins only; compute_metrics() fills the rest.
/// Bin k is the power at k * bin_width Hz. Bins are normalized by the
/// window energy, so their sum equals the windowed time-domain power and a
/// tone's power is the sum over its main lobe.
struct SpectrumMetrics {
    std::vector<double> bins;
    double bin_width = 0.0;
    std::size_t length = 0;
    Window window = Window::rectangular;
    std::optional<std::size_t> signal_bin;

    double f_b = 0.0;
    double signal_power = 0.0;
    double in_band_noise = 0.0;
    double distortion_power = 0.0;
    double snr_db = 0.0;
    double sndr_db = 0.0;
    double sfdr_db = 0.0;
    double thd_db = 0.0;

    double total_power() const;
};

/// Number of bins on each side of a tone treated as part of it: 1 for
/// rectangular (coherent tones), 3 for hann, 4 for blackman.
std::size_t default_exclusion(Window w);

/// Windowed one-sided periodogram. Length must be a power of two >= 64.
SpectrumMetrics periodogram(const SampledSignal& signal, Window window);

/// Bin-wise mean of spectra with identical geometry.
SpectrumMetrics average_spectra(std::span<const SpectrumMetrics> spectra);

/// Marks the largest bin in [1, f_b] (skipping the DC neighbourhood) as the signal bin.
void locate_signal(SpectrumMetrics& spectrum, double f_b, std::size_t exclude);

/// Sum of bins with f <= f_b, minus signal_bin +- exclude when a signal bin is set.
double measure_inband_noise(const SpectrumMetrics& spectrum, double f_b, std::size_t exclude);

/// Locates the signal as the largest bin in [0, f_b] and fills SNR, SNDR,
/// SFDR and THD. Harmonics 2..10 are folded into [0, fs/2] and counted
/// when they land in band. Bins within `exclude` of DC are ignored.
/// Power ratios are floored at 300 dB so that all values stay finite.
SpectrumMetrics compute_metrics(SpectrumMetrics spectrum, double f_b,
                                std::optional<std::size_t> exclude = std::nullopt);

/// Produces the signal to analyse for one (rate, seed) point of a sweep.
using SchemeRunner = std::function<SampledSignal(const Rate& fs, std::uint64_t seed)>;

struct OsrRow {
    std::size_t osr;
    double mean_noise_db;  // 10 log10 of the seed-averaged in-band power
    double std_noise_db;   // spread of the per-seed values, dB
};

struct OsrSweepOptions {
    Window window = Window::hann;
    // remove the tone's main lobe before integrating
    bool has_tone = true;
};

/// Runs `runner` at fs = 2 * f_b * OSR for every OSR and seed and reports
/// the measured in-band noise per OSR.
std::vector<OsrRow> osr_sweep(const SchemeRunner& runner, std::span<const std::size_t> osr_list,
                              const Rate& f_b, std::span<const std::uint64_t> seeds,
                              const OsrSweepOptions& options = {});

/// Pearson correlation at lag 0.
double xcorr_zero_lag(const SampledSignal& a, const SampledSignal& b);

/// Capture chain of a 16-bit, 10 Msps, 5 MHz bandwidth oscilloscope.
struct ScopeModel {
    static constexpr int resolution_bits = 16;
    static constexpr double max_fs = 10e6;
    static constexpr double bandwidth = 5e6;
    // input range is +-full_scale
    double full_scale = 1.0;
};

/// Integer decimation applied by scope_capture: ceil(fs / max_fs), at least 1.
std::size_t scope_decimation(const Rate& fs);

/// Band-limits v to the scope bandwidth (steady-state response over the
/// capture window), resamples to at most 10 Msps and quantizes to 16 bits.
SampledSignal scope_capture(const SampledSignal& v, const ScopeModel& model = {});

/// Anti-alias filter used by scope_capture for an input at `fs`;
/// identity when the input is already inside the bandwidth.
FirFilter scope_filter(const Rate& fs);

}  // namespace sdmlab
