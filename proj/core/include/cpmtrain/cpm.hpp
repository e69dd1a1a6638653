#pragma once

#include <vector>

#include "cpmtrain/common.hpp"

namespace cpmtrain {

/// Binary CPM configuration. The training construction fixes h = 1/2 and
/// M = 2; validate() enforces both.
struct CpmConfig {
    Rational h{1, 2};
    int m_ary = 2;
    int pulse_len_l = 3;     // frequency pulse length L, in symbols
    double bt = 0.3;         // GMSK bandwidth-time product
    int oversampling_q = 8;  // samples per symbol
    double symbol_period = 1.0;

    double sample_period() const { return symbol_period / oversampling_q; }
    void validate() const;
};

/// Uniformly sampled real pulse starting at start_time.
struct SampledPulse {
    std::vector<double> samples;
    double sample_period = 0.0;
    double start_time = 0.0;

    std::size_t size() const { return samples.size(); }
    /// Trapezoidal integral over the sampled support.
    double integral() const;
};

struct ComplexWaveform {
    std::vector<cdouble> samples;
    double sample_period = 0.0;
    double start_time = 0.0;

    std::size_t size() const { return samples.size(); }
    /// sum |x|^2 * sample_period
    double energy() const;
};

/// Modulator memory: accumulated phase of fully shifted symbols plus the
/// last L-1 symbols (most recent first). Correlative entries may be 0,
/// meaning the slot predates the transmission and contributes no phase.
///
/// The phase is carried both as a double and on the exact grid
/// pi * phase_units / h.den (+ phase_extra), so that state composition is
/// bit-exact and h = 1/2 states land exactly on multiples of pi/2.
struct ModulatorState {
    double phase_state = 0.0;
    std::vector<int> correlative_state;
    long long phase_units = 0;
    double phase_extra = 0.0;

    static ModulatorState zero(const CpmConfig& config);
    static ModulatorState from_phase(double theta, std::vector<int> correlative,
                                     const CpmConfig& config);
};

/// Gaussian tail probability Q(t).
double gaussian_q(double t);

/// GMSK frequency pulse with the configured BT, shifted to [0, LT],
/// truncated there and renormalized so the trapezoidal integral is 1/2.
SampledPulse gmsk_frequency_pulse(const CpmConfig& config);

/// Phase-shaping pulse q(t): running integral of g, q(0) = 0, q(LT) = 1/2.
SampledPulse phase_shaping(const SampledPulse& g);

/// Phase-accumulation synthesis of exp(j phi(t; I)) from the given state.
/// Output has |I| * oversampling_q samples.
ComplexWaveform modulate(const CpmSymbols& i, const CpmConfig& config,
                         const ModulatorState& initial);

/// State after consuming the symbols: phase advanced by pi h per fully
/// shifted symbol, correlative memory replaced by the last L-1 symbols.
ModulatorState phase_state_after(const CpmSymbols& i, const CpmConfig& config,
                                 const ModulatorState& initial);

/// Z symbols driving the accumulated phase state (once every tail symbol
/// has fully shifted) to 0 mod 2pi. Exhaustive search; among patterns that
/// reach zero the one with the fewest extra 2pi wraps and then the
/// lexicographically smallest (-1 < +1) is returned. Throws
/// TailUnreachableError when parity makes zero unreachable.
CpmSymbols tail_bits(const ModulatorState& state, int z, const CpmConfig& config);

/// Relaxation of tail_bits used for burst assembly: when the zero residue
/// is unreachable (odd/even parity mismatch), settle for the pattern that
/// leaves the smallest residual magnitude. residual_units reports the
/// leftover phase in units of pi/h.den (0 when zero was reachable).
struct TailChoice {
    CpmSymbols symbols;
    long long residual_units = 0;
};
TailChoice tail_bits_nearest(const ModulatorState& state, int z, const CpmConfig& config);

}  // namespace cpmtrain
