#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdmlab/analysis.hpp"
#include "sdmlab/dem.hpp"
#include "sdmlab/interleave.hpp"
#include "sdmlab/modulator.hpp"
#include "sdmlab/rate.hpp"
#include "sdmlab/signals.hpp"

namespace sdmlab {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Scheme {
    single_fast_dac,
    sdm_1,
    sdm_2,
    ti_sdm,
    sdm_dem_thermo,
    sdm_dem_random,
    sdm_dem_dwa,
};

struct SchemeInfo {
    Scheme id;
    std::string_view name;
    std::string_view description;
};

/// Every scheme, in a fixed order.
const std::vector<SchemeInfo>& list_schemes();
std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

enum class InitialState { zero, random };

struct ExperimentConfig {
    Scheme scheme = Scheme::sdm_1;
    std::int64_t f_ck = 100'000'000;  // Hz
    std::uint64_t n_div = 2;
    std::uint64_t m_paths = 1;
    // bandwidth: OSR, or an explicit f_b in Hz (f_b wins when set)
    std::uint64_t osr = 64;
    std::optional<double> f_b;
    double amplitude = 0.5;
    // requested tone; snapped to an odd capture bin. Unset: about f_b / 4
    std::optional<double> f0;
    std::uint64_t n_samples = 16384;
    double sigma_mm = 0.01;
    std::uint64_t n_elements = 8;
    std::vector<std::uint64_t> seeds{1};
    PathSource path_source = PathSource::ti_paths;
    InitialState initial_state = InitialState::zero;
    Window window = Window::hann;
    // reconstruction LPF length; 0 picks 12 * OSR + 1
    std::uint64_t lpf_taps = 0;
    std::string out_dir = ".";

    void validate() const;
};

/// Parse or validation failure in a config document.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, std::size_t line, const std::string& message);
    const std::string& field() const noexcept { return field_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string field_;
    std::size_t line_;
};

/// Runtime failure inside run_experiment, tagged with the pipeline stage.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message);
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Flat `key = value` document, `#` starts a comment. Keys are the
/// ExperimentConfig field names; `seeds` takes a comma-separated list.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Rates and lengths implied by a config. Every rate is an exact fraction
/// of f_ck.
struct DerivedPlan {
    Rate f_high;
    Rate f_low;
    Rate f_b;
    Rate f_capture;
    std::size_t scope_ratio;
    std::size_t tone_bin;  // capture-spectrum bin of the test tone
    double f0;             // actual tone frequency, Hz
    std::size_t lpf_taps;
    std::size_t warmup;    // high-rate samples discarded before capture
    std::size_t total;     // high-rate samples simulated
};

DerivedPlan derive_plan(const ExperimentConfig& config);

/// The quantized stream the scheme drives its DAC(s) with, full length
/// (warm-up included). For ti_sdm this is the multiplexed stream.
QuantizedStream scheme_stream(const ExperimentConfig& config, std::uint64_t seed);

/// Elements per DAC path used for the signed code mapping (1 for two-level schemes).
std::size_t code_elements(const ExperimentConfig& config);

/// Reconstructed analog output at f_H after the summing LPF, warm-up removed.
SampledSignal reconstruct(const ExperimentConfig& config, std::uint64_t seed);

struct SeedResult {
    std::uint64_t seed;
    bool has_signal;
    SpectrumMetrics metrics;
    // in-band power of the capture relative to a full-scale sine, dB
    double inband_power_dbfs;
};

struct MetricStats {
    double mean;
    double std;
};

struct RunRecord {
    std::vector<std::pair<std::string, std::string>> echo;
    std::vector<SeedResult> seeds;
    MetricStats snr_db{0.0, 0.0};
    MetricStats sndr_db{0.0, 0.0};
    MetricStats sfdr_db{0.0, 0.0};
    MetricStats thd_db{0.0, 0.0};
    MetricStats inband_noise_db{0.0, 0.0};
    MetricStats inband_power_dbfs{0.0, 0.0};
    std::string version;
    std::string prng;
};

/// Config echo: every field plus the derived plan, as key/value text.
std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& config);

/// generator -> modulator / TI -> DAC(s) -> summing LPF -> scope -> analysis,
/// once per seed. Seeds run in parallel; results are in seed order.
RunRecord run_experiment(const ExperimentConfig& config);

struct CsvFiles {
    std::filesystem::path metrics;
    std::filesystem::path spectrum;
};

inline constexpr std::string_view kMetricsHeader =
    "seed,snr_db,sndr_db,sfdr_db,thd_db,inband_noise_db,inband_power_dbfs,signal_bin";
inline constexpr std::string_view kSpectrumHeader = "frequency_hz,power_db";

/// Writes metrics.csv (one row per seed, then `mean` and `std` rows) and
/// spectrum.csv (seed-averaged capture spectrum) into `dir`.
CsvFiles export_csv(const RunRecord& record, const std::filesystem::path& dir);

/// Writes run.txt: version, PRNG identifier and the config echo.
std::filesystem::path export_run_metadata(const RunRecord& record, const std::filesystem::path& dir);

/// One signed integer per sample after a `#` header line. For M > 1 also
/// writes `<stem>.path<k><ext>` holding the polyphase components.
/// Returns every file written, single-stream file first.
std::vector<std::filesystem::path> export_golden_vectors(const ExperimentConfig& config,
                                                         const RunRecord& record,
                                                         const std::filesystem::path& path);

}  // namespace sdmlab
