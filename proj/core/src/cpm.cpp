#include "cpmtrain/cpm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cpmtrain {

namespace {

constexpr double kPi = std::numbers::pi;

long long wrap_units(long long units, int den) {
    const long long period = 2LL * den;
    long long r = units % period;
    if (r < 0) r += period;
    return r;
}

double grid_phase(long long units, double extra, int den) {
    return kPi * static_cast<double>(units) / den + extra;
}

// Chronological symbol stream seen by the modulator: the correlative
// memory (oldest first) followed by the new symbols.
std::vector<int> chronological_stream(const CpmSymbols& i, const CpmConfig& config,
                                      const ModulatorState& initial) {
    const std::size_t mem = static_cast<std::size_t>(config.pulse_len_l - 1);
    if (initial.correlative_state.size() != mem)
        throw std::invalid_argument("cpm: correlative state must hold L-1 symbols");
    std::vector<int> stream;
    stream.reserve(mem + i.size());
    for (std::size_t m = mem; m-- > 0;) {
        int s = initial.correlative_state[m];
        if (s < -1 || s > 1) throw std::invalid_argument("cpm: correlative entry outside {-1,0,+1}");
        stream.push_back(s);
    }
    for (int s : i.values) {
        if (s != -1 && s != 1) throw std::invalid_argument("cpm: symbol outside {-1,+1}");
        stream.push_back(s);
    }
    return stream;
}

}  // namespace

void CpmConfig::validate() const {
    if (!(h == Rational{1, 2}))
        throw std::invalid_argument("cpm: modulation index fixed to h = 1/2");
    if (m_ary != 2) throw std::invalid_argument("cpm: binary modulation only");
    if (pulse_len_l < 1) throw std::invalid_argument("cpm: pulse length L must be >= 1");
    if (oversampling_q < 4) throw std::invalid_argument("cpm: oversampling must be >= 4");
    if (!(bt > 0.0)) throw std::invalid_argument("cpm: BT must be positive");
    if (!(symbol_period > 0.0)) throw std::invalid_argument("cpm: symbol period must be positive");
}

double SampledPulse::integral() const {
    if (samples.size() < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k)
        acc += 0.5 * (samples[k] + samples[k + 1]);
    return acc * sample_period;
}

double ComplexWaveform::energy() const {
    double acc = 0.0;
    for (const cdouble& s : samples) acc += std::norm(s);
    return acc * sample_period;
}

ModulatorState ModulatorState::zero(const CpmConfig& config) {
    config.validate();
    ModulatorState st;
    st.correlative_state.assign(static_cast<std::size_t>(config.pulse_len_l - 1), 0);
    return st;
}

ModulatorState ModulatorState::from_phase(double theta, std::vector<int> correlative,
                                          const CpmConfig& config) {
    config.validate();
    ModulatorState st;
    st.correlative_state = std::move(correlative);
    st.phase_units = wrap_units(std::llround(theta * config.h.den / kPi), config.h.den);
    st.phase_extra = theta - kPi * static_cast<double>(st.phase_units) / config.h.den;
    st.phase_state = grid_phase(st.phase_units, st.phase_extra, config.h.den);
    return st;
}

double gaussian_q(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

SampledPulse gmsk_frequency_pulse(const CpmConfig& config) {
    config.validate();
    const double t_sym = config.symbol_period;
    const int samples_n = config.pulse_len_l * config.oversampling_q + 1;
    const double delta = config.sample_period();
    const double sigma = std::sqrt(std::numbers::ln2) / (2.0 * kPi * config.bt);
    const double center = 0.5 * config.pulse_len_l * t_sym;

    SampledPulse g;
    g.sample_period = delta;
    g.samples.resize(static_cast<std::size_t>(samples_n));
    for (int k = 0; k < samples_n; ++k) {
        const double tau = (k * delta - center) / t_sym;
        g.samples[static_cast<std::size_t>(k)] =
            (gaussian_q((tau + 0.5) / sigma) - gaussian_q((tau - 0.5) / sigma)) / (2.0 * t_sym);
    }
    const double scale = 0.5 / g.integral();
    for (double& v : g.samples) v *= scale;
    return g;
}

SampledPulse phase_shaping(const SampledPulse& g) {
    if (g.samples.size() < 2) throw std::invalid_argument("cpm: frequency pulse too short");
    if (std::abs(g.integral() - 0.5) > 1e-9)
        throw std::invalid_argument("cpm: frequency pulse is not normalized to integral 1/2");
    SampledPulse q;
    q.sample_period = g.sample_period;
    q.start_time = g.start_time;
    q.samples.resize(g.samples.size());
    q.samples[0] = 0.0;
    for (std::size_t k = 1; k < g.samples.size(); ++k)
        q.samples[k] = q.samples[k - 1] +
                       0.5 * (g.samples[k - 1] + g.samples[k]) * g.sample_period;
    // The accumulated value differs from 1/2 only by rounding; pin it so a
    // fully shifted symbol contributes exactly pi h.
    q.samples.back() = 0.5;
    return q;
}

ComplexWaveform modulate(const CpmSymbols& i, const CpmConfig& config,
                         const ModulatorState& initial) {
    config.validate();
    const int l = config.pulse_len_l;
    const int q_ovs = config.oversampling_q;
    const auto stream = chronological_stream(i, config, initial);
    const SampledPulse q = phase_shaping(gmsk_frequency_pulse(config));

    ComplexWaveform out;
    out.sample_period = config.sample_period();
    out.samples.resize(i.size() * static_cast<std::size_t>(q_ovs));

    const double two_pi_h = 2.0 * kPi * config.h.value();
    long long acc = initial.phase_units;
    std::size_t w = 0;
    for (std::size_t n = 0; n < i.size(); ++n) {
        const double theta = grid_phase(acc, initial.phase_extra, config.h.den);
        for (int s = 0; s < q_ovs; ++s) {
            double ramp = 0.0;
            for (int m = 0; m < l; ++m) {
                const int sym = stream[n + static_cast<std::size_t>(m)];
                if (sym == 0) continue;
                // stream[n + m] is m slots older than the current symbol.
                ramp += sym * q.samples[static_cast<std::size_t>((l - 1 - m) * q_ovs + s)];
            }
            out.samples[w++] = std::polar(1.0, theta + two_pi_h * ramp);
        }
        acc = wrap_units(acc + config.h.num * stream[n], config.h.den);
    }
    return out;
}

ModulatorState phase_state_after(const CpmSymbols& i, const CpmConfig& config,
                                 const ModulatorState& initial) {
    config.validate();
    const auto stream = chronological_stream(i, config, initial);
    const std::size_t mem = static_cast<std::size_t>(config.pulse_len_l - 1);

    long long acc = initial.phase_units;
    for (std::size_t n = 0; n < i.size(); ++n)
        acc = wrap_units(acc + config.h.num * stream[n], config.h.den);

    ModulatorState next;
    next.phase_units = acc;
    next.phase_extra = initial.phase_extra;
    next.phase_state = grid_phase(acc, initial.phase_extra, config.h.den);
    next.correlative_state.assign(mem, 0);
    for (std::size_t m = 0; m < mem; ++m)
        next.correlative_state[m] = stream[stream.size() - 1 - m];
    return next;
}

namespace {

// Phase (in grid units) once every pending symbol of the state has fully
// shifted into the phase accumulator.
long long eventual_units(const ModulatorState& state, const CpmConfig& config) {
    long long acc = state.phase_units;
    for (int s : state.correlative_state) acc += config.h.num * s;
    return wrap_units(acc, config.h.den);
}

struct TailSearchResult {
    bool found = false;
    CpmSymbols symbols;
    long long residual = 0;
};

// Enumerates the 2^z patterns in lexicographic order (-1 < +1) and keeps
// the best under: smallest |residual|, then fewest 2pi wraps, then first
// seen (= lexicographically smallest).
TailSearchResult tail_search(const ModulatorState& state, int z, const CpmConfig& config) {
    if (z < 1) throw std::invalid_argument("cpm: tail length must be >= 1");
    if (z > 24) throw std::invalid_argument("cpm: tail search limited to z <= 24");
    if (std::abs(state.phase_extra) > 1e-9)
        throw std::invalid_argument("cpm: phase state is off the h-grid, tails cannot cancel it");

    const int den = config.h.den;
    const long long period = 2LL * den;
    const long long k0 = eventual_units(state, config);
    // Symmetric representative of the starting residue, for the wrap count.
    const long long k_sym = (k0 > den) ? k0 - period : k0;

    TailSearchResult best;
    long long best_res = 0, best_excursion = 0;
    for (std::uint32_t bits = 0; bits < (1u << z); ++bits) {
        long long sum = 0;
        for (int m = 0; m < z; ++m) sum += ((bits >> (z - 1 - m)) & 1u) ? 1 : -1;
        long long total = wrap_units(k0 + config.h.num * sum, den);
        long long res = (total > den) ? total - period : total;  // in (-den, den]
        long long excursion = std::abs(k_sym + config.h.num * sum);
        if (!best.found || std::abs(res) < std::abs(best_res) ||
            (std::abs(res) == std::abs(best_res) && excursion < best_excursion)) {
            best.found = true;
            best_res = res;
            best_excursion = excursion;
            best.symbols.values.assign(static_cast<std::size_t>(z), 0);
            for (int m = 0; m < z; ++m)
                best.symbols.values[static_cast<std::size_t>(m)] =
                    ((bits >> (z - 1 - m)) & 1u) ? 1 : -1;
        }
    }
    best.residual = best_res;
    return best;
}

}  // namespace

CpmSymbols tail_bits(const ModulatorState& state, int z, const CpmConfig& config) {
    config.validate();
    auto result = tail_search(state, z, config);
    if (result.residual != 0)
        throw TailUnreachableError(
            "cpm: no tail pattern of length " + std::to_string(z) +
            " cancels the phase residue (parity obstruction)");
    return result.symbols;
}

TailChoice tail_bits_nearest(const ModulatorState& state, int z, const CpmConfig& config) {
    config.validate();
    auto result = tail_search(state, z, config);
    return {std::move(result.symbols), result.residual};
}

}  // namespace cpmtrain
