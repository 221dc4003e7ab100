// sdm_lab: command-line front end for the DAC comparison testbed.
//
//   sdm_lab schemes
//   sdm_lab run --config exp.cfg --out results/ [--seeds 1,2,3]
//   sdm_lab sweep --config exp.cfg --osr 32,64,128 --out results/
//   sdm_lab export-vectors --config exp.cfg --out vectors/stream.txt
//
// Exit codes: 0 success, 2 config or usage error, 3 runtime error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sdmlab/csv.hpp"
#include "sdmlab/errors.hpp"
#include "sdmlab/harness.hpp"

namespace fs = std::filesystem;
using namespace sdmlab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

ExperimentConfig load(const std::string& path, const std::vector<std::uint64_t>& seeds,
                      bool seeds_given) {
    auto config = path.empty() ? parse_config("") : load_config(path);
    if (seeds_given) {
        config.seeds = seeds;
    }
    config.validate();
    return config;
}

void print_summary(const RunRecord& rec) {
    std::cout << "seeds: " << rec.seeds.size() << '\n';
    std::cout << "SNR   " << format_fixed(rec.snr_db.mean, 2) << " dB (std "
              << format_fixed(rec.snr_db.std, 2) << ")\n";
    std::cout << "SNDR  " << format_fixed(rec.sndr_db.mean, 2) << " dB\n";
    std::cout << "SFDR  " << format_fixed(rec.sfdr_db.mean, 2) << " dB\n";
    std::cout << "THD   " << format_fixed(rec.thd_db.mean, 2) << " dB\n";
    std::cout << "in-band power " << format_fixed(rec.inband_power_dbfs.mean, 2) << " dBFS\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sigma-delta / DEM / time-interleaved DAC simulation testbed"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::vector<std::uint64_t> seeds;
    std::vector<std::uint64_t> osr_list;
    std::optional<std::uint64_t> vector_seed;

    auto* schemes = app.add_subcommand("schemes", "List the available DAC schemes");

    auto* run = app.add_subcommand("run", "Run one experiment and write metrics/spectrum CSV");
    run->add_option("--config", config_path, "Config file (key = value)")->check(CLI::ExistingFile);
    run->add_option("--out", out, "Output directory (default: config out_dir)");
    run->add_option("--seeds", seeds, "Comma-separated seeds (overrides config)")->delimiter(',');

    auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over several OSR values");
    sweep->add_option("--config", config_path, "Config file (key = value)")->check(CLI::ExistingFile);
    sweep->add_option("--osr", osr_list, "Comma-separated OSR list")->delimiter(',')->required();
    sweep->add_option("--out", out, "Output directory (default: config out_dir)");
    sweep->add_option("--seeds", seeds, "Comma-separated seeds (overrides config)")->delimiter(',');

    auto* vectors = app.add_subcommand("export-vectors", "Write golden-vector text files");
    vectors->add_option("--config", config_path, "Config file (key = value)")->check(CLI::ExistingFile);
    vectors->add_option("--out", out, "Output file for the single-stream vectors")->required();
    vectors->add_option("--seed", vector_seed, "Seed (default: first config seed)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (schemes->parsed()) {
            for (const auto& s : list_schemes()) {
                std::cout << s.name << "\t" << s.description << '\n';
            }
            return 0;
        }

        const bool seeds_given = (run->parsed() && run->count("--seeds") > 0) ||
                                 (sweep->parsed() && sweep->count("--seeds") > 0);
        auto config = load(config_path, seeds, seeds_given);
        const fs::path out_dir = out.empty() ? fs::path(config.out_dir) : fs::path(out);

        if (run->parsed()) {
            const auto rec = run_experiment(config);
            const auto files = export_csv(rec, out_dir);
            export_run_metadata(rec, out_dir);
            print_summary(rec);
            std::cout << "wrote " << files.metrics.string() << " and " << files.spectrum.string()
                      << '\n';
            return 0;
        }

        if (sweep->parsed()) {
            fs::create_directories(out_dir);
            const auto path = out_dir / "sweep.csv";
            std::ofstream csv(path, std::ios::binary | std::ios::trunc);
            if (!csv) {
                throw IoError("cannot write " + path.string());
            }
            csv << "osr,f_b_hz,snr_db_mean,sndr_db_mean,sfdr_db_mean,inband_noise_db_mean,"
                   "inband_noise_db_std\n";
            for (auto osr : osr_list) {
                auto c = config;
                c.osr = osr;
                c.f_b.reset();
                const auto plan = derive_plan(c);
                const auto rec = run_experiment(c);
                csv << osr << ',' << format_fixed(plan.f_b.hz()) << ','
                    << format_fixed(rec.snr_db.mean) << ',' << format_fixed(rec.sndr_db.mean) << ','
                    << format_fixed(rec.sfdr_db.mean) << ','
                    << format_fixed(rec.inband_noise_db.mean) << ','
                    << format_fixed(rec.inband_noise_db.std) << '\n';
                std::cout << "OSR " << osr << ": in-band noise "
                          << format_fixed(rec.inband_noise_db.mean, 2) << " dB, SNDR "
                          << format_fixed(rec.sndr_db.mean, 2) << " dB\n";
            }
            std::cout << "wrote " << path.string() << '\n';
            return 0;
        }

        if (vectors->parsed()) {
            if (vector_seed) {
                config.seeds = {*vector_seed};
            }
            RunRecord rec;
            for (const auto& p : export_golden_vectors(config, rec, out)) {
                std::cout << "wrote " << p.string() << '\n';
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
