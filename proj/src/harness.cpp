#include "sdmlab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "sdmlab/csv.hpp"
#include "sdmlab/errors.hpp"
#include "sdmlab/parallel.hpp"
#include "sdmlab/random.hpp"

namespace sdmlab {

namespace {

const std::vector<SchemeInfo> kSchemes = {
    {Scheme::single_fast_dac, "single_fast_dac",
     "Nyquist-rate multi-level DAC at f_H, thermometer elements, no noise shaping"},
    {Scheme::sdm_1, "sdm_1", "first-order two-level sigma-delta modulator, ideal 1-bit DAC"},
    {Scheme::sdm_2, "sdm_2", "second-order two-level sigma-delta modulator, ideal 1-bit DAC"},
    {Scheme::ti_sdm, "ti_sdm",
     "first-order two-level modulator split into M polyphase paths, one DAC per path"},
    {Scheme::sdm_dem_thermo, "sdm_dem_thermo",
     "first-order multi-level modulator, mismatched unit elements, thermometer selection"},
    {Scheme::sdm_dem_random, "sdm_dem_random",
     "first-order multi-level modulator, mismatched unit elements, random selection"},
    {Scheme::sdm_dem_dwa, "sdm_dem_dwa",
     "first-order multi-level modulator, mismatched unit elements, data-weighted averaging"},
};

// Seed streams of one run.
constexpr std::uint64_t kStreamInitialState = 0;
constexpr std::uint64_t kStreamMismatch = 1;
constexpr std::uint64_t kStreamSelection = 2;

bool is_dem(Scheme s) {
    return s == Scheme::sdm_dem_thermo || s == Scheme::sdm_dem_random || s == Scheme::sdm_dem_dwa;
}

bool uses_element_array(Scheme s) { return is_dem(s) || s == Scheme::single_fast_dac; }

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
    std::string out;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(seeds[i]);
    }
    return out;
}

std::string_view to_string(PathSource p) {
    return p == PathSource::ti_paths ? "ti_paths" : "muxed_high_speed";
}

std::string_view to_string(InitialState s) { return s == InitialState::zero ? "zero" : "random"; }

bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

Quantizer scheme_quantizer(const ExperimentConfig& c) {
    if (uses_element_array(c.scheme)) {
        return Quantizer::uniform(2 * c.n_elements + 1, 1.0);
    }
    return Quantizer::two_level(1.0);
}

template <typename Fn>
auto stage(std::string_view name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(std::string(name), e.what());
    }
}

}  // namespace

const std::vector<SchemeInfo>& list_schemes() { return kSchemes; }

std::string_view to_string(Scheme s) {
    for (const auto& info : kSchemes) {
        if (info.id == s) {
            return info.name;
        }
    }
    return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
    for (const auto& info : kSchemes) {
        if (info.name == name) {
            return info.id;
        }
    }
    throw DomainError("unknown scheme '" + std::string(name) + "'");
}

ConfigError::ConfigError(std::string field, std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + field + ": " + message
                                  : field + ": " + message),
      field_(std::move(field)),
      line_(line) {}

StageError::StageError(std::string stage, const std::string& message)
    : std::runtime_error("stage '" + stage + "': " + message), stage_(std::move(stage)) {}

void ExperimentConfig::validate() const {
    if (f_ck <= 0) {
        throw ConfigError("f_ck", 0, "master clock must be > 0 Hz");
    }
    if (n_div == 0) {
        throw ConfigError("n_div", 0, "clock divider must be >= 1");
    }
    if (m_paths == 0 || m_paths > 64) {
        throw ConfigError("m_paths", 0, "path count must be in [1, 64]");
    }
    if (!f_b && osr < 4) {
        throw ConfigError("osr", 0, "OSR must be >= 4");
    }
    if (f_b && !(*f_b > 0.0 && std::isfinite(*f_b))) {
        throw ConfigError("f_b", 0, "bandwidth must be > 0 Hz");
    }
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw ConfigError("amplitude", 0, "amplitude must be finite and >= 0");
    }
    if (f0 && !(*f0 > 0.0 && std::isfinite(*f0))) {
        throw ConfigError("f0", 0, "tone frequency must be > 0 Hz");
    }
    if (!is_power_of_two(n_samples) || n_samples < 64) {
        throw ConfigError("n_samples", 0, "not a power of two (>= 64 required)");
    }
    if (!(sigma_mm >= 0.0) || !std::isfinite(sigma_mm)) {
        throw ConfigError("sigma_mm", 0, "mismatch sigma must be >= 0");
    }
    if (n_elements == 0 || n_elements > 4096) {
        throw ConfigError("n_elements", 0, "element count must be in [1, 4096]");
    }
    if (lpf_taps != 0 && (lpf_taps < 3 || lpf_taps % 2 == 0)) {
        throw ConfigError("lpf_taps", 0, "LPF length must be odd and >= 3 (or 0 for auto)");
    }
}

DerivedPlan derive_plan(const ExperimentConfig& c) {
    c.validate();
    const Rate f_high = divide_clock(Rate(c.f_ck), c.n_div);
    const Rate f_low = f_high.divided_by(c.m_paths);

    Rate f_b = f_high.divided_by(2 * c.osr);
    if (c.f_b) {
        const double hz = *c.f_b;
        if (hz == std::floor(hz) && hz < 9e15) {
            f_b = Rate(static_cast<std::int64_t>(hz));
        } else {
            f_b = Rate(static_cast<std::int64_t>(std::llround(hz * 1e6)), 1'000'000);
        }
    }
    if (f_b.hz() > f_high.hz() / 2.0) {
        throw ConfigError("f_b", 0, "bandwidth exceeds f_H / 2");
    }

    const std::size_t r = scope_decimation(f_high);
    const Rate f_capture = f_high.divided_by(r);
    if (f_b.hz() > f_capture.hz() / 2.0) {
        throw ConfigError(c.f_b ? "f_b" : "osr", 0,
                          "bandwidth " + shortest(f_b.hz()) + " Hz exceeds the capture Nyquist " +
                              shortest(f_capture.hz() / 2.0) + " Hz");
    }

    const double bin = f_capture.hz() / static_cast<double>(c.n_samples);
    const auto last_bin = static_cast<std::size_t>(std::floor(f_b.hz() / bin * (1.0 + 1e-12)));
    const std::size_t min_bin = default_exclusion(c.window) + 1;
    const double want = c.f0.value_or(f_b.hz() / 4.0);
    auto k = static_cast<std::size_t>(std::llround(want / bin));
    if (k % 2 == 0) {
        k = (k == 0) ? 1 : k - 1;  // odd bins are coprime with the power-of-two capture length
    }
    while (k < min_bin) {
        k += 2;
    }
    if (k > last_bin) {
        throw ConfigError(c.f0 ? "f0" : "n_samples", 0,
                          "no coherent tone bin inside the band (tone bin " + std::to_string(k) +
                              ", band edge bin " + std::to_string(last_bin) + ")");
    }

    std::size_t taps = c.lpf_taps;
    if (taps == 0) {
        const auto osr_eff =
            static_cast<std::size_t>(std::llround(f_high.hz() / (2.0 * f_b.hz())));
        taps = 12 * std::max<std::size_t>(osr_eff, 1) + 1;
    }
    const std::size_t block = r * c.m_paths;
    const std::size_t warmup = ((taps - 1 + block - 1) / block) * block;

    DerivedPlan plan{f_high,
                     f_low,
                     f_b,
                     f_capture,
                     r,
                     k,
                     static_cast<double>(k) * bin,
                     taps,
                     warmup,
                     warmup + r * c.n_samples};
    return plan;
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig c;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(line), line_no, "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("<empty>", line_no, "missing key");
        }
        if (seen.contains(key)) {
            throw ConfigError(key, line_no, "duplicate key (first on line " +
                                                std::to_string(seen[key]) + ")");
        }
        seen[key] = line_no;

        auto fail = [&](const std::string& msg) -> ConfigError { return ConfigError(key, line_no, msg); };
        auto as_double = [&]() {
            try {
                return parse_double(value);
            } catch (const std::invalid_argument&) {
                throw fail("expected a number, got '" + std::string(value) + "'");
            }
        };
        auto as_uint = [&]() -> std::uint64_t {
            const double v = as_double();
            if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15) {
                throw fail("expected a non-negative integer, got '" + std::string(value) + "'");
            }
            return static_cast<std::uint64_t>(v);
        };
        auto as_optional = [&]() -> std::optional<double> {
            if (value == "auto") {
                return std::nullopt;
            }
            return as_double();
        };

        try {
            if (key == "scheme") {
                c.scheme = scheme_from_string(value);
            } else if (key == "f_ck") {
                c.f_ck = static_cast<std::int64_t>(as_uint());
            } else if (key == "n_div") {
                c.n_div = as_uint();
            } else if (key == "m_paths") {
                c.m_paths = as_uint();
            } else if (key == "osr") {
                c.osr = as_uint();
            } else if (key == "f_b") {
                c.f_b = as_optional();
            } else if (key == "amplitude") {
                c.amplitude = as_double();
            } else if (key == "f0") {
                c.f0 = as_optional();
            } else if (key == "n_samples") {
                c.n_samples = as_uint();
            } else if (key == "sigma_mm") {
                c.sigma_mm = as_double();
            } else if (key == "n_elements") {
                c.n_elements = as_uint();
            } else if (key == "seeds") {
                c.seeds.clear();
                if (!value.empty()) {
                    for (const auto& item : split(value, ',')) {
                        const auto t = trim(item);
                        std::uint64_t s = 0;
                        const auto res = std::from_chars(t.data(), t.data() + t.size(), s);
                        if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
                            throw fail("bad seed '" + std::string(t) + "'");
                        }
                        c.seeds.push_back(s);
                    }
                }
            } else if (key == "path_source") {
                if (value == "ti_paths") {
                    c.path_source = PathSource::ti_paths;
                } else if (value == "muxed_high_speed") {
                    c.path_source = PathSource::muxed_high_speed;
                } else {
                    throw fail("expected ti_paths or muxed_high_speed");
                }
            } else if (key == "initial_state") {
                if (value == "zero") {
                    c.initial_state = InitialState::zero;
                } else if (value == "random") {
                    c.initial_state = InitialState::random;
                } else {
                    throw fail("expected zero or random");
                }
            } else if (key == "window") {
                c.window = window_from_string(value);
            } else if (key == "lpf_taps") {
                c.lpf_taps = as_uint();
            } else if (key == "out_dir") {
                c.out_dir = std::string(value);
            } else {
                throw fail("unknown key");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw fail(e.what());
        }
    }

    try {
        derive_plan(c);
    } catch (const ConfigError& e) {
        const auto it = seen.find(e.field());
        const std::size_t line = it == seen.end() ? 0 : it->second;
        const std::string msg = e.what();
        const auto colon = msg.find(": ");
        throw ConfigError(e.field(), line, colon == std::string::npos ? msg : msg.substr(colon + 2));
    } catch (const std::exception& e) {
        throw ConfigError("config", 0, e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::size_t code_elements(const ExperimentConfig& c) {
    return uses_element_array(c.scheme) ? c.n_elements : 1;
}

namespace {

SampledSignal stimulus(const ExperimentConfig& c, const DerivedPlan& plan) {
    if (c.amplitude == 0.0) {
        return constant_signal(0.0, plan.f_high, plan.total);
    }
    return resonator_sine(plan.f0, plan.f_high, c.amplitude, plan.total);
}

ModulatorSpec modulator_spec(const ExperimentConfig& c, std::uint64_t seed) {
    ModulatorSpec spec;
    spec.order = c.scheme == Scheme::sdm_2 ? 2 : 1;
    spec.quantizer = scheme_quantizer(c);
    spec.delta = 1.0;
    if (c.initial_state == InitialState::random) {
        Rng rng(derive_seed(seed, kStreamInitialState));
        spec.initial_state.resize(static_cast<std::size_t>(spec.order));
        for (double& v : spec.initial_state) {
            v = rng.uniform01() - 0.5;
        }
    }
    return spec;
}

QuantizedStream modulate(const ExperimentConfig& c, const SampledSignal& x, std::uint64_t seed) {
    if (c.scheme == Scheme::single_fast_dac) {
        const auto q = scheme_quantizer(c);
        std::vector<std::uint32_t> idx(x.size());
        for (std::size_t n = 0; n < x.size(); ++n) {
            idx[n] = static_cast<std::uint32_t>(q.quantize_index(x[n]));
        }
        return QuantizedStream(std::move(idx), q, x.fs());
    }
    return sdm_run(modulator_spec(c, seed), x).y;
}

Strategy strategy_of(Scheme s) {
    switch (s) {
        case Scheme::sdm_dem_random: return Strategy::random;
        case Scheme::sdm_dem_dwa: return Strategy::dwa;
        default: return Strategy::thermometer;
    }
}

}  // namespace

QuantizedStream scheme_stream(const ExperimentConfig& c, std::uint64_t seed) {
    const auto plan = derive_plan(c);
    const auto x = stage("generator", [&] { return stimulus(c, plan); });
    if (c.scheme == Scheme::ti_sdm) {
        return stage("modulator", [&] {
            return multiplex(ti_sdm_run(modulator_spec(c, seed), c.m_paths, x));
        });
    }
    return stage("modulator", [&] { return modulate(c, x, seed); });
}

SampledSignal reconstruct(const ExperimentConfig& c, std::uint64_t seed) {
    const auto plan = derive_plan(c);
    const auto x = stage("generator", [&] { return stimulus(c, plan); });
    const auto lpf = stage("lpf", [&] {
        const double cutoff = std::min(0.45, 2.0 * plan.f_b.hz() / plan.f_high.hz());
        return design_lowpass(cutoff, plan.lpf_taps, Window::blackman);
    });

    std::vector<SampledSignal> paths;
    FirFilter summing = lpf;
    if (c.scheme == Scheme::ti_sdm) {
        const auto set =
            stage("modulator", [&] { return ti_sdm_run(modulator_spec(c, seed), c.m_paths, x); });
        const auto sources = select_path_source(c.path_source, set);
        stage("dac", [&] {
            const auto array = ElementArray::ideal(1, 1.0);
            for (std::size_t k = 0; k < sources.size(); ++k) {
                auto v = dac_convert(sources[k], array, Strategy::thermometer, 0).v;
                if (c.path_source == PathSource::ti_paths) {
                    paths.push_back(hold_on_high_rate(v, c.m_paths, k, plan.total));
                } else {
                    paths.push_back(std::move(v));
                }
            }
            return 0;
        });
        if (c.path_source == PathSource::ti_paths) {
            // M held paths add up to M times the signal
            summing = lpf.scaled(1.0 / static_cast<double>(c.m_paths));
        }
    } else {
        const auto stream = stage("modulator", [&] { return modulate(c, x, seed); });
        paths.push_back(stage("dac", [&] {
            if (uses_element_array(c.scheme)) {
                const auto array = draw_mismatch(c.n_elements, c.sigma_mm,
                                                 derive_seed(seed, kStreamMismatch),
                                                 1.0 / static_cast<double>(c.n_elements));
                return dac_convert(stream, array, strategy_of(c.scheme),
                                   derive_seed(seed, kStreamSelection))
                    .v;
            }
            return dac_convert(stream, ElementArray::ideal(1, 1.0), Strategy::thermometer, 0).v;
        }));
    }

    const auto summed = stage("lpf", [&] { return sum_paths(paths, summing); });
    const auto& all = summed.values();
    return SampledSignal(std::vector<double>(all.begin() + static_cast<std::ptrdiff_t>(plan.warmup),
                                             all.end()),
                         plan.f_high);
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& c) {
    const auto plan = derive_plan(c);
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("scheme", std::string(to_string(c.scheme)));
    e.emplace_back("f_ck", std::to_string(c.f_ck));
    e.emplace_back("n_div", std::to_string(c.n_div));
    e.emplace_back("m_paths", std::to_string(c.m_paths));
    e.emplace_back("osr", std::to_string(c.osr));
    e.emplace_back("f_b", c.f_b ? shortest(*c.f_b) : "auto");
    e.emplace_back("amplitude", shortest(c.amplitude));
    e.emplace_back("f0", c.f0 ? shortest(*c.f0) : "auto");
    e.emplace_back("n_samples", std::to_string(c.n_samples));
    e.emplace_back("sigma_mm", shortest(c.sigma_mm));
    e.emplace_back("n_elements", std::to_string(c.n_elements));
    e.emplace_back("seeds", join_seeds(c.seeds));
    e.emplace_back("path_source", std::string(to_string(c.path_source)));
    e.emplace_back("initial_state", std::string(to_string(c.initial_state)));
    e.emplace_back("window", std::string(to_string(c.window)));
    e.emplace_back("lpf_taps", std::to_string(c.lpf_taps));
    e.emplace_back("derived.f_high", plan.f_high.to_string());
    e.emplace_back("derived.f_low", plan.f_low.to_string());
    e.emplace_back("derived.f_b", plan.f_b.to_string());
    e.emplace_back("derived.f_capture", plan.f_capture.to_string());
    e.emplace_back("derived.scope_ratio", std::to_string(plan.scope_ratio));
    e.emplace_back("derived.tone_bin", std::to_string(plan.tone_bin));
    e.emplace_back("derived.f0", shortest(plan.f0));
    e.emplace_back("derived.lpf_taps", std::to_string(plan.lpf_taps));
    e.emplace_back("derived.warmup", std::to_string(plan.warmup));
    e.emplace_back("derived.total_samples", std::to_string(plan.total));
    e.emplace_back("derived.quantizer_levels", std::to_string(scheme_quantizer(c).size()));
    return e;
}

namespace {

MetricStats stats_of(const std::vector<double>& v) {
    if (v.empty()) {
        return {std::nan(""), std::nan("")};
    }
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) {
        var += (x - mean) * (x - mean);
    }
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    return {mean, sd};
}

double power_db(double p) { return 10.0 * std::log10(std::max(p, 1e-30)); }

}  // namespace

RunRecord run_experiment(const ExperimentConfig& c) {
    const auto plan = derive_plan(c);
    RunRecord rec;
    rec.echo = config_echo(c);
    rec.version = std::string(kVersion);
    rec.prng = std::string(Rng::identifier());
    rec.seeds.resize(c.seeds.size());

    parallel_for(c.seeds.size(), [&](std::size_t i) {
        const std::uint64_t seed = c.seeds[i];
        const auto analog = reconstruct(c, seed);
        const auto captured = stage("scope", [&] { return scope_capture(analog); });
        rec.seeds[i] = stage("analysis", [&] {
            SeedResult r{seed, c.amplitude > 0.0, periodogram(captured, c.window), 0.0};
            // full-scale sine power is 1/2
            r.inband_power_dbfs = power_db(measure_inband_noise(r.metrics, plan.f_b.hz(), 0) / 0.5);
            if (r.has_signal) {
                r.metrics = compute_metrics(std::move(r.metrics), plan.f_b.hz());
            } else {
                r.metrics.f_b = plan.f_b.hz();
                r.metrics.snr_db = r.metrics.sndr_db = r.metrics.sfdr_db = r.metrics.thd_db =
                    std::nan("");
                r.metrics.in_band_noise = measure_inband_noise(r.metrics, plan.f_b.hz(), 0);
            }
            return r;
        });
    });

    std::vector<double> snr, sndr, sfdr, thd, noise, dbfs;
    for (const auto& r : rec.seeds) {
        dbfs.push_back(r.inband_power_dbfs);
        noise.push_back(power_db(r.metrics.in_band_noise));
        if (r.has_signal) {
            snr.push_back(r.metrics.snr_db);
            sndr.push_back(r.metrics.sndr_db);
            sfdr.push_back(r.metrics.sfdr_db);
            thd.push_back(r.metrics.thd_db);
        }
    }
    rec.snr_db = stats_of(snr);
    rec.sndr_db = stats_of(sndr);
    rec.sfdr_db = stats_of(sfdr);
    rec.thd_db = stats_of(thd);
    rec.inband_noise_db = stats_of(noise);
    rec.inband_power_dbfs = stats_of(dbfs);
    return rec;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + p.string());
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& p) {
    out.flush();
    if (!out) {
        throw IoError("write failed for " + p.string());
    }
}

}  // namespace

CsvFiles export_csv(const RunRecord& record, const std::filesystem::path& dir) {
    CsvFiles files{dir / "metrics.csv", dir / "spectrum.csv"};

    auto m = open_out(files.metrics);
    m << kMetricsHeader << '\n';
    for (const auto& r : record.seeds) {
        m << r.seed << ',' << format_fixed(r.metrics.snr_db) << ',' << format_fixed(r.metrics.sndr_db)
          << ',' << format_fixed(r.metrics.sfdr_db) << ',' << format_fixed(r.metrics.thd_db) << ','
          << format_fixed(power_db(r.metrics.in_band_noise)) << ','
          << format_fixed(r.inband_power_dbfs) << ','
          << (r.metrics.signal_bin ? std::to_string(*r.metrics.signal_bin) : std::string("nan"))
          << '\n';
    }
    if (!record.seeds.empty()) {
        const auto row = [&](std::string_view label, auto pick) {
            m << label << ',' << format_fixed(pick(record.snr_db)) << ','
              << format_fixed(pick(record.sndr_db)) << ',' << format_fixed(pick(record.sfdr_db)) << ','
              << format_fixed(pick(record.thd_db)) << ',' << format_fixed(pick(record.inband_noise_db))
              << ',' << format_fixed(pick(record.inband_power_dbfs)) << ",nan\n";
        };
        row("mean", [](const MetricStats& s) { return s.mean; });
        row("std", [](const MetricStats& s) { return s.std; });
    }
    finish(m, files.metrics);

    auto s = open_out(files.spectrum);
    s << kSpectrumHeader << '\n';
    if (!record.seeds.empty()) {
        std::vector<SpectrumMetrics> spectra;
        spectra.reserve(record.seeds.size());
        for (const auto& r : record.seeds) {
            spectra.push_back(r.metrics);
        }
        const auto avg = average_spectra(spectra);
        for (std::size_t k = 0; k < avg.bins.size(); ++k) {
            s << format_fixed(static_cast<double>(k) * avg.bin_width) << ','
              << format_fixed(power_db(avg.bins[k])) << '\n';
        }
    }
    finish(s, files.spectrum);
    return files;
}

std::filesystem::path export_run_metadata(const RunRecord& record, const std::filesystem::path& dir) {
    const auto path = dir / "run.txt";
    auto out = open_out(path);
    out << "version = " << record.version << '\n';
    out << "prng = " << record.prng << '\n';
    for (const auto& [k, v] : record.echo) {
        out << k << " = " << v << '\n';
    }
    finish(out, path);
    return path;
}

std::vector<std::filesystem::path> export_golden_vectors(const ExperimentConfig& c,
                                                         const RunRecord& record,
                                                         const std::filesystem::path& path) {
    const auto plan = derive_plan(c);
    std::uint64_t seed = 0;
    if (!record.seeds.empty()) {
        seed = record.seeds.front().seed;
    } else if (!c.seeds.empty()) {
        seed = c.seeds.front();
    }
    const auto stream = scheme_stream(c, seed);
    const std::size_t n_el = code_elements(c);
    const auto& q = stream.quantizer();
    std::vector<int> level_code(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        level_code[i] = code_of(q.levels()[i], q, n_el);
    }

    std::vector<std::filesystem::path> written;
    const auto write = [&](const std::filesystem::path& p, const QuantizedStream& s,
                           std::string_view path_label) {
        auto out = open_out(p);
        out << "# sdm_lab golden vectors v1 scheme=" << to_string(c.scheme)
            << " f_H=" << plan.f_high.to_string() << " M=" << c.m_paths << " path=" << path_label
            << " rate=" << s.fs().to_string() << " seed=" << seed << " samples=" << s.size()
            << " elements=" << n_el << '\n';
        for (std::size_t n = 0; n < s.size(); ++n) {
            out << level_code[s.index(n)] << '\n';
        }
        finish(out, p);
        written.push_back(p);
    };

    write(path, stream, "all");
    if (c.m_paths > 1) {
        const auto set = polyphase_decompose(stream, c.m_paths);
        for (std::size_t k = 0; k < set.paths.size(); ++k) {
            auto p = path;
            p.replace_filename(path.stem().string() + ".path" + std::to_string(k) +
                               path.extension().string());
            write(p, set.paths[k], std::to_string(k));
        }
    }
    return written;
}

}  // namespace sdmlab
