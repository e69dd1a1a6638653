#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cpmtrain/burst.hpp"
#include "cpmtrain/common.hpp"

namespace cpmtrain {

/// Symbol-spaced multipath taps.
struct ChannelTaps {
    std::vector<cdouble> taps;
    double spacing = 1.0;

    std::size_t paths() const { return taps.size(); }
    double power() const;
};

/// P independent zero-mean complex Gaussian taps with E|h_i|^2 = 1/P.
ChannelTaps draw_channel(int p, std::uint64_t seed);

/// y[k] = sum_i h_i x[k - i Q] + w[k] with circularly symmetric complex
/// Gaussian noise of per-sample variance 10^(-snr_db/10). Pass +infinity
/// to disable the noise. Output carries (P-1) Q extra trailing samples.
ComplexWaveform propagate(const ComplexWaveform& x, const ChannelTaps& taps,
                          double snr_db, std::uint64_t seed);

struct LsDiagnostics {
    double largest_singular = 0.0;
    double smallest_singular = 0.0;
    double condition_number = 0.0;
    bool rank_deficient = false;  // smallest < 1e-10 * largest
};

struct LsResult {
    ChannelTaps taps;
    LsDiagnostics diag;
};

/// Least-squares channel estimator for a fixed training burst. Column i of
/// the regression matrix is the clean transmitted waveform delayed by i
/// symbols, restricted to the second-half observation windows (both blocks
/// stacked for a pair burst). Rank-deficient systems fall back to the
/// pseudo-inverse and are flagged in the diagnostics.
class LsEstimator {
  public:
    LsEstimator(const TrainingBurst& burst, int p);
    ~LsEstimator();
    LsEstimator(LsEstimator&&) noexcept;
    LsEstimator& operator=(LsEstimator&&) noexcept;

    LsResult estimate(const ComplexWaveform& received) const;
    const LsDiagnostics& diagnostics() const;
    /// Mean squared column norm of the regression matrix.
    double reference_column_energy() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

LsResult ls_estimate(const ComplexWaveform& received, const TrainingBurst& burst, int p);

/// Estimation-variance floor P sigma_w^2 / ref_energy for an ideal training
/// waveform whose delayed copies are orthogonal with per-copy energy
/// ref_energy.
double crlb(int p, double snr_db, double ref_energy);

/// One labeled entry of an MSE sweep. `regenerate`, when set, draws a fresh
/// burst per trial (random training); otherwise `fixed` is used throughout.
struct MseSource {
    std::string label;
    std::optional<TrainingBurst> fixed;
    std::function<TrainingBurst(std::uint64_t)> regenerate;
};

struct MseReport {
    std::vector<double> snr_grid;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> mse;  // [label][snr], total over taps
    std::vector<double> crlb_curve;
    int trials = 0;
    int paths = 0;
    std::uint64_t seed = 0;
    double ref_energy = 0.0;
    std::vector<long long> rank_deficient_counts;  // per label

    double db_from_crlb(std::size_t label_idx, std::size_t snr_idx) const;
};

/// Monte Carlo LS-MSE comparison. All bursts are rescaled to a common
/// transmit energy first; every source faces the same channel draws.
MseReport mse_sweep(const std::vector<MseSource>& sources, const std::vector<double>& snr_grid,
                    int trials, std::uint64_t seed, int p);

enum class CsiMode { perfect, estimated };

struct BerReport {
    std::vector<double> snr_grid;
    std::vector<double> ber;
    long long bits_simulated = 0;
    std::uint64_t seed = 0;
    CsiMode csi = CsiMode::perfect;

    /// SNR at which the curve crosses the given rate (log-linear
    /// interpolation); NaN when it never does.
    double snr_at(double target_ber) const;
};

/// Uncoded BER of differential GMSK over the multipath channel: training
/// burst, then one cyclic-prefixed payload block per trial, detected by
/// c0 matched filtering, per-bin MMSE frequency-domain equalization and
/// differential decoding. Payload bits, channels and noise depend only on
/// (seed, snr index, trial), so curves for different bursts are directly
/// comparable.
BerReport scfde_ber(const TrainingBurst& burst, int payload_len,
                    const std::vector<double>& snr_grid, int trials, std::uint64_t seed,
                    CsiMode csi_mode);

namespace rng {

/// SplitMix64; also used to derive independent substreams from a master
/// seed so that reports are reproducible bit for bit.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double uniform01();          // (0, 1]
    double normal();             // standard normal, Box-Muller
    cdouble complex_gaussian();  // E|z|^2 = 1
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b);

}  // namespace rng

}  // namespace cpmtrain
