#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpmtrain/chansim.hpp"
#include "cpmtrain/gcp.hpp"

namespace cpmtrain {

/// Sequences of the reference experiments, embedded verbatim. The
/// complementary pairs are self-checked against gcp_defect on first use.
const GcpPair& builtin_gcp1();
const GcpPair& builtin_gcp2();
const ZqSequence& builtin_gsm();
const ZqSequence& builtin_hp();
bool is_builtin(const std::string& name);

struct ExperimentConfig {
    std::string experiment;      // gcp | autocorr | mse | ber
    std::string source = "gcp1"; // builtin name, random, or file:<path>
    bool uncoded = false;        // autocorr: bypass differential encoding
    std::optional<GbfSpec> custom_spec;  // gcp: explicit construction parameters

    double bt = 0.3;
    int pulse_len = 3;
    int tail_z = 3;
    int oversampling = 8;
    int paths = 16;
    double snr_min = 0.0;
    double snr_max = 25.0;
    double snr_step = 5.0;
    int trials = 1000;
    int payload_len = 256;
    std::uint64_t seed = 1;
    std::string out;

    CpmConfig cpm() const;
    std::vector<double> snr_grid() const;
};

/// Line-oriented `key = value` text with '#' comments.
ExperimentConfig parse_config_file(const std::string& path);
void apply_key_value(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Exit statuses used by run(): 0 success, 1 runtime failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

/// Execute one experiment: write its CSV artifact (when the experiment
/// produces one) and print a summary to `out`.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

struct VerifyReport {
    std::string name;
    std::vector<std::string> sequences;  // display form
    std::size_t length = 0;
    bool is_pair = false;
    double defect = 0.0;          // pairs: complementary defect
    double peak_sidelobe = 0.0;   // singles: max |AACF| off-peak of the bipolar form
};

/// Self-test of a builtin, per the startup-check contract.
VerifyReport verify_builtin(const std::string& name);

/// Training burst for a named source ("gcp1", "gcp2", "gsm", "hp").
TrainingBurst builtin_burst(const std::string& name, const CpmConfig& config, int z,
                            TrainingEncoding encoding);

/// The seven-waveform estimation comparison set: differential and uncoded
/// variants of the pairs, the GSM and HP sequences, plus per-trial random
/// training.
std::vector<MseSource> standard_mse_sources(const CpmConfig& config, int z);

void write_mse_csv(const MseReport& report, std::ostream& os);
void write_ber_csv(const std::vector<double>& snr_grid,
                   const std::vector<std::pair<std::string, BerReport>>& schemes,
                   std::ostream& os);

/// Minimal CSV reader for the round-trip contract: header row plus numeric
/// rows, returned column-major keyed by header name.
std::map<std::string, std::vector<double>> read_csv_columns(std::istream& is);

}  // namespace cpmtrain
