#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "cpmtrain/common.hpp"
#include "cpmtrain/cpm.hpp"
#include "cpmtrain/gcp.hpp"
#include "cpmtrain/laurent.hpp"

namespace cpmtrain {

enum class TrainingEncoding { differential, uncoded };

/// Symbol indices of the burst sections. tail_d/id_start are -1 for a
/// single-sequence burst.
struct BurstBoundaries {
    int tail_c = 0;
    int ic_start = 0;
    int tail_d = -1;
    int id_start = -1;
};

/// Assembled training burst [tail | I_C (2N) | tail | I_D (2N)], or the
/// single-sequence layout [tail | I_C (2N)].
struct TrainingBurst {
    ComplexWaveform waveform;
    CpmSymbols symbols;
    int n_len = 0;
    int z_len = 0;
    BurstBoundaries boundaries;
    ZqSequence c;
    std::optional<ZqSequence> d;
    TrainingEncoding encoding = TrainingEncoding::differential;
    CpmConfig config;
    /// Phase left over at the start of each training section, in units of
    /// pi/h.den. Zero whenever the tail parity permits; correlations and
    /// estimation are invariant to these constant per-section rotations.
    std::vector<long long> tail_residual_units;

    bool has_pair() const { return d.has_value(); }
    int total_symbols() const { return static_cast<int>(symbols.size()); }
};

TrainingBurst build_burst(const ZqSequence& c, const std::optional<ZqSequence>& d,
                          const CpmConfig& config, int z,
                          TrainingEncoding encoding = TrainingEncoding::differential);

/// The four correlation windows of a pair burst (two for a singleburst):
/// S1/S2 are the first and second N-symbol halves of each training block.
struct BurstSegments {
    ComplexWaveform s1c, s2c;
    std::optional<ComplexWaveform> s1d, s2d;
};
BurstSegments segments(const TrainingBurst& burst);

/// Periodic cross-correlation phi(tau) = sum_t s2(t) s1*((t+tau) mod NT) dt
/// with s1 extended cyclically; lags are re-centered to [-NT/2, NT/2).
CorrelationProfile periodic_xcorr(const ComplexWaveform& s1, const ComplexWaveform& s2);

/// Sum of the per-block segment correlations, normalized by its tau = 0
/// magnitude. A single-sequence burst yields its lone correlation with the
/// single_sequence flag set.
CorrelationProfile sum_correlation(const TrainingBurst& burst);

/// Same quantity computed on the dominant-pulse model: one period of
/// alpha(t) = sum_n gamma_n c0(t - nT) is synthesized cyclically from the
/// first N pseudo-symbols of each training block. For a complementary
/// pair the sidelobes cancel exactly here.
CorrelationProfile sum_correlation_alpha(const TrainingBurst& burst);

/// max |value| over (L+1)T < |tau| <= (N-L-1)T.
double sidelobe_peak(const CorrelationProfile& profile, int l, int n);

/// One row per grid lag: `lag_over_T,magnitude`.
void write_profile_csv(const CorrelationProfile& profile, std::ostream& os);

}  // namespace cpmtrain
