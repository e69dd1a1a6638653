#pragma once

#include <span>
#include <vector>

#include "cpmtrain/common.hpp"
#include "cpmtrain/cpm.hpp"

namespace cpmtrain {

/// The 2^{L-1} PAM pulses of the binary-CPM decomposition. Pulse p is
/// c_p(t) = s0(t) * prod_i s0(t + (i + L a_{p,i}) T) with a_{p,i} the
/// binary digits of p; c_0 is the dominant pulse with support [0, (L+1)T].
struct LaurentPulseSet {
    CpmConfig config;
    std::vector<SampledPulse> pulses;
    std::vector<std::vector<int>> digits;  // digits[p] = (a_{p,1}, ..., a_{p,L-1})

    std::size_t count() const { return pulses.size(); }
};

/// Correlation magnitudes over a continuous lag grid (multiples of the
/// sample period). `normalization` records the divisor already applied;
/// 1.0 means raw values.
struct CorrelationProfile {
    std::vector<double> lags;
    std::vector<cdouble> values;
    double normalization = 1.0;
    double symbol_period = 1.0;
    bool single_sequence = false;

    std::size_t size() const { return values.size(); }
};

/// Base pulse s0 on [0, 2LT]:
///   sin(2 pi h q(t)) / sin(pi h) on [0, LT],
///   sin(pi h - 2 pi h q(t - LT)) / sin(pi h) on [LT, 2LT].
SampledPulse s0_pulse(const CpmConfig& config);

LaurentPulseSet laurent_pulses(const CpmConfig& config);

/// Overlap-add of the selected pulses over symbol stream `stream`,
/// with coefficients exp(j pi h A_{p,n}); out-of-range symbol indices
/// contribute nothing. Produces stream.size() * Q samples from t = 0.
ComplexWaveform pam_waveform(const LaurentPulseSet& set, std::span<const int> stream,
                             std::span<const std::size_t> pulse_subset);

/// Full PAM reconstruction of the CPM signal. The identity holds for a
/// modulator with active prehistory, so the comparison reference is
/// modulate(i, config, pam_reference_state(config)).
ComplexWaveform laurent_exact(const CpmSymbols& i, const CpmConfig& config);

/// Dominant-pulse approximation alpha(t) = sum_n gamma_n c0(t - nT) of the
/// same reference signal.
ComplexWaveform laurent_approx(const CpmSymbols& i, const CpmConfig& config);

/// Zero phase, correlative memory filled with +1 symbols. The PAM
/// representation is exact from the first output sample against this
/// state; a cold (empty-memory) start breaks the pulse regrouping on the
/// first L-1 intervals.
ModulatorState pam_reference_state(const CpmConfig& config);

/// Fraction of the pulse-set energy carried by c0.
double c0_energy_fraction(const CpmConfig& config);

/// AACF of the dominant pulse on the oversampled lag grid; zero for
/// |tau| > (L+1)T. Values are raw (normalization = 1).
CorrelationProfile c0_aacf(const CpmConfig& config);

}  // namespace cpmtrain
