#include "sdmlab/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "sdmlab/errors.hpp"
#include "sdmlab/parallel.hpp"

namespace sdmlab {

namespace {

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

struct PlanDestroy {
    void operator()(fftw_plan_s* p) const noexcept {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

constexpr double kRatioFloor = 1e-30;  // 300 dB

double db_ratio(double num, double den) {
    if (num <= 0.0) {
        return 10.0 * std::log10(kRatioFloor);
    }
    return 10.0 * std::log10(num / std::max(den, num * kRatioFloor));
}

std::size_t last_inband_bin(const SpectrumMetrics& s, double f_b) {
    const double nyquist = s.bin_width * static_cast<double>(s.length) / 2.0;
    if (!(f_b >= 0.0) || f_b > nyquist * (1.0 + 1e-12)) {
        throw DomainError("analysis bandwidth exceeds Nyquist");
    }
    const auto k = static_cast<std::size_t>(std::floor(f_b / s.bin_width * (1.0 + 1e-12)));
    return std::min(k, s.bins.size() - 1);
}

std::size_t lobe_half_width(Window w) {
    switch (w) {
        case Window::rectangular: return 0;
        case Window::hann: return 1;
        case Window::blackman: return 2;
    }
    return 0;
}

}  // namespace

double SpectrumMetrics::total_power() const {
    return std::accumulate(bins.begin(), bins.end(), 0.0);
}

std::size_t default_exclusion(Window w) {
    switch (w) {
        case Window::rectangular: return 1;
        case Window::hann: return 3;
        case Window::blackman: return 4;
    }
    return 1;
}

SpectrumMetrics periodogram(const SampledSignal& signal, Window window) {
    const std::size_t n = signal.size();
    if (n < 64 || !is_power_of_two(n)) {
        throw LengthError("periodogram length must be a power of two >= 64, got " +
                          std::to_string(n));
    }
    const auto w = window_coefficients(window, n, true);
    const double energy = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);

    std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
    std::unique_ptr<fftw_complex, FftwFree> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
    std::unique_ptr<fftw_plan_s, PlanDestroy> plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    for (std::size_t i = 0; i < n; ++i) {
        in.get()[i] = signal[i] * w[i];
    }
    fftw_execute(plan.get());

    SpectrumMetrics s;
    s.length = n;
    s.window = window;
    s.bin_width = signal.fs_hz() / static_cast<double>(n);
    s.bins.resize(n / 2 + 1);
    const double norm = static_cast<double>(n) * energy;
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double re = out.get()[k][0];
        const double im = out.get()[k][1];
        const double scale = (k == 0 || k == n / 2) ? 1.0 : 2.0;
        s.bins[k] = scale * (re * re + im * im) / norm;
    }
    return s;
}

SpectrumMetrics average_spectra(std::span<const SpectrumMetrics> spectra) {
    if (spectra.empty()) {
        throw LengthError("average_spectra needs at least one spectrum");
    }
    SpectrumMetrics avg;
    const auto& first = spectra.front();
    avg.length = first.length;
    avg.window = first.window;
    avg.bin_width = first.bin_width;
    avg.bins.assign(first.bins.size(), 0.0);
    for (const auto& s : spectra) {
        if (s.bins.size() != avg.bins.size() || s.bin_width != avg.bin_width ||
            s.window != avg.window) {
            throw MismatchError("average_spectra: spectra differ in geometry");
        }
        for (std::size_t k = 0; k < avg.bins.size(); ++k) {
            avg.bins[k] += s.bins[k];
        }
    }
    for (double& b : avg.bins) {
        b /= static_cast<double>(spectra.size());
    }
    return avg;
}

void locate_signal(SpectrumMetrics& spectrum, double f_b, std::size_t exclude) {
    const std::size_t kb = last_inband_bin(spectrum, f_b);
    std::size_t best = 0;
    double best_power = -1.0;
    for (std::size_t k = std::min(exclude + 1, kb); k <= kb; ++k) {
        if (spectrum.bins[k] > best_power) {
            best_power = spectrum.bins[k];
            best = k;
        }
    }
    spectrum.signal_bin = best;
}

double measure_inband_noise(const SpectrumMetrics& spectrum, double f_b, std::size_t exclude) {
    const std::size_t kb = last_inband_bin(spectrum, f_b);
    double total = 0.0;
    for (std::size_t k = 0; k <= kb; ++k) {
        if (spectrum.signal_bin) {
            const std::size_t s = *spectrum.signal_bin;
            const std::size_t lo = s >= exclude ? s - exclude : 0;
            if (k >= lo && k <= s + exclude) {
                continue;
            }
        }
        total += spectrum.bins[k];
    }
    return total;
}

SpectrumMetrics compute_metrics(SpectrumMetrics s, double f_b, std::optional<std::size_t> exclude) {
    const std::size_t ex = exclude.value_or(default_exclusion(s.window));
    const std::size_t kb = last_inband_bin(s, f_b);

    std::size_t sig = 0;
    for (std::size_t k = 1; k <= kb; ++k) {
        if (s.bins[k] > s.bins[sig]) {
            sig = k;
        }
    }
    if (sig == 0 || s.bins[sig] <= 0.0) {
        throw DegenerateError("no in-band signal: largest bin is at DC");
    }

    enum class Owner : unsigned char { noise, dc, signal, harmonic };
    std::vector<Owner> owner(kb + 1, Owner::noise);
    for (std::size_t k = 0; k <= kb; ++k) {
        const std::size_t d = k > sig ? k - sig : sig - k;
        if (d <= ex) {
            owner[k] = Owner::signal;
        } else if (k <= ex) {
            owner[k] = Owner::dc;
        }
    }
    const std::size_t len = s.length;
    for (std::size_t h = 2; h <= 10; ++h) {
        std::size_t hb = (h * sig) % len;
        if (hb > len / 2) {
            hb = len - hb;
        }
        if (hb > kb) {
            continue;
        }
        const std::size_t lo = hb >= ex ? hb - ex : 0;
        for (std::size_t k = lo; k <= std::min(hb + ex, kb); ++k) {
            if (owner[k] == Owner::noise) {
                owner[k] = Owner::harmonic;
            }
        }
    }

    double signal = 0.0;
    double distortion = 0.0;
    double noise = 0.0;
    for (std::size_t k = 0; k <= kb; ++k) {
        switch (owner[k]) {
            case Owner::signal: signal += s.bins[k]; break;
            case Owner::harmonic: distortion += s.bins[k]; break;
            case Owner::noise: noise += s.bins[k]; break;
            case Owner::dc: break;
        }
    }

    // largest spur: peak bin outside the signal and DC regions, with its main lobe
    std::optional<std::size_t> spur_peak;
    for (std::size_t k = 0; k <= kb; ++k) {
        if (owner[k] == Owner::signal || owner[k] == Owner::dc) {
            continue;
        }
        if (!spur_peak || s.bins[k] > s.bins[*spur_peak]) {
            spur_peak = k;
        }
    }
    double spur = 0.0;
    if (spur_peak) {
        const std::size_t lobe = lobe_half_width(s.window);
        const std::size_t p = *spur_peak;
        for (std::size_t k = p >= lobe ? p - lobe : 0; k <= std::min(p + lobe, kb); ++k) {
            if (owner[k] == Owner::noise || owner[k] == Owner::harmonic) {
                spur += s.bins[k];
            }
        }
    }

    s.signal_bin = sig;
    s.f_b = f_b;
    s.signal_power = signal;
    s.in_band_noise = noise;
    s.distortion_power = distortion;
    s.snr_db = db_ratio(signal, noise);
    s.sndr_db = db_ratio(signal, noise + distortion);
    s.sfdr_db = db_ratio(signal, spur);
    s.thd_db = -db_ratio(signal, distortion);
    return s;
}

std::vector<OsrRow> osr_sweep(const SchemeRunner& runner, std::span<const std::size_t> osr_list,
                              const Rate& f_b, std::span<const std::uint64_t> seeds,
                              const OsrSweepOptions& options) {
    if (seeds.empty()) {
        throw DomainError("OSR sweep needs at least one seed");
    }
    for (auto osr : osr_list) {
        if (osr < 4) {
            throw DomainError("OSR must be >= 4");
        }
    }
    const std::size_t n_seeds = seeds.size();
    std::vector<double> power(osr_list.size() * n_seeds, 0.0);
    parallel_for(power.size(), [&](std::size_t job) {
        const std::size_t oi = job / n_seeds;
        const std::size_t si = job % n_seeds;
        const Rate fs = f_b.times(2 * osr_list[oi]);
        const auto sig = runner(fs, seeds[si]);
        auto spec = periodogram(sig, options.window);
        const std::size_t ex = default_exclusion(options.window);
        if (options.has_tone) {
            locate_signal(spec, f_b.hz(), ex);
        }
        power[job] = measure_inband_noise(spec, f_b.hz(), ex);
    });

    std::vector<OsrRow> rows;
    rows.reserve(osr_list.size());
    for (std::size_t oi = 0; oi < osr_list.size(); ++oi) {
        double mean_power = 0.0;
        double mean_db = 0.0;
        for (std::size_t si = 0; si < n_seeds; ++si) {
            mean_power += power[oi * n_seeds + si];
            mean_db += 10.0 * std::log10(power[oi * n_seeds + si]);
        }
        mean_power /= static_cast<double>(n_seeds);
        mean_db /= static_cast<double>(n_seeds);
        double var = 0.0;
        for (std::size_t si = 0; si < n_seeds; ++si) {
            const double d = 10.0 * std::log10(power[oi * n_seeds + si]) - mean_db;
            var += d * d;
        }
        const double std_db = n_seeds > 1 ? std::sqrt(var / static_cast<double>(n_seeds - 1)) : 0.0;
        rows.push_back(OsrRow{osr_list[oi], 10.0 * std::log10(mean_power), std_db});
    }
    return rows;
}

double xcorr_zero_lag(const SampledSignal& a, const SampledSignal& b) {
    if (a.size() != b.size()) {
        throw MismatchError("xcorr_zero_lag: lengths differ");
    }
    if (a.size() < 2) {
        throw LengthError("xcorr_zero_lag needs at least two samples");
    }
    const auto n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.values().begin(), a.values().end(), 0.0) / n;
    const double mb = std::accumulate(b.values().begin(), b.values().end(), 0.0) / n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw DegenerateError("xcorr_zero_lag: constant input");
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::size_t scope_decimation(const Rate& fs) {
    // ceil(num / (den * max_fs)) in integers
    const auto limit = static_cast<std::int64_t>(ScopeModel::max_fs);
    const std::int64_t d = fs.den() * limit;
    const auto r = static_cast<std::size_t>((fs.num() + d - 1) / d);
    return std::max<std::size_t>(r, 1);
}

FirFilter scope_filter(const Rate& fs) {
    const double fs_hz = fs.hz();
    const std::size_t r = scope_decimation(fs);
    const double edge = std::min(ScopeModel::bandwidth, 0.5 * fs_hz / static_cast<double>(r));
    const double cutoff = edge / fs_hz;
    if (cutoff >= 0.5) {
        return FirFilter::identity();
    }
    // blackman main lobe spans 6/N cycles/sample; aim for ~1 MHz transition
    const auto half = static_cast<std::size_t>(std::ceil(3.0 * fs_hz / 1e6));
    return design_lowpass(cutoff, 2 * std::max<std::size_t>(half, 8) + 1, Window::blackman);
}

SampledSignal scope_capture(const SampledSignal& v, const ScopeModel& model) {
    if (!(model.full_scale > 0.0)) {
        throw DomainError("scope full scale must be > 0");
    }
    const std::size_t r = scope_decimation(v.fs());
    const auto filtered = apply_filter_circular(v, scope_filter(v.fs()));

    const double step = 2.0 * model.full_scale / std::ldexp(1.0, ScopeModel::resolution_bits);
    const double max_code = std::ldexp(1.0, ScopeModel::resolution_bits - 1) - 1.0;
    const double min_code = -std::ldexp(1.0, ScopeModel::resolution_bits - 1);
    std::vector<double> out;
    out.reserve((filtered.size() + r - 1) / r);
    for (std::size_t i = 0; i < filtered.size(); i += r) {
        const double code = std::clamp(std::round(filtered[i] / step), min_code, max_code);
        out.push_back(code * step);
    }
    return SampledSignal(std::move(out), v.fs().divided_by(r));
}

}  // namespace sdmlab
