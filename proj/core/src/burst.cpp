#include "cpmtrain/burst.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cpmtrain {

namespace {

CpmSymbols uncoded_symbols(const ZqSequence& c) {
    c.validate();
    if (c.modulus != 2) throw std::invalid_argument("burst: training sequences must be binary");
    CpmSymbols out;
    out.values.reserve(2 * c.size());
    for (int rep = 0; rep < 2; ++rep)
        for (int v : c.values) out.values.push_back(2 * v - 1);
    return out;
}

CpmSymbols training_symbols(const ZqSequence& c, TrainingEncoding encoding) {
    return encoding == TrainingEncoding::differential ? diff_encode(c) : uncoded_symbols(c);
}

void append(CpmSymbols& dst, const CpmSymbols& src) {
    dst.values.insert(dst.values.end(), src.values.begin(), src.values.end());
}

ComplexWaveform slice(const ComplexWaveform& w, std::size_t first_sample, std::size_t count) {
    if (first_sample + count > w.size()) throw std::invalid_argument("burst: malformed boundaries");
    ComplexWaveform out;
    out.sample_period = w.sample_period;
    out.start_time = w.start_time + static_cast<double>(first_sample) * w.sample_period;
    out.samples.assign(w.samples.begin() + static_cast<std::ptrdiff_t>(first_sample),
                       w.samples.begin() + static_cast<std::ptrdiff_t>(first_sample + count));
    return out;
}

}  // namespace

TrainingBurst build_burst(const ZqSequence& c, const std::optional<ZqSequence>& d,
                          const CpmConfig& config, int z, TrainingEncoding encoding) {
    config.validate();
    c.validate();
    const int n = static_cast<int>(c.size());
    if (n % 4 != 0)
        throw std::invalid_argument("burst: training length must be divisible by 4");
    if (n <= config.pulse_len_l + 1)
        throw std::invalid_argument("burst: training length must exceed L+1");
    if (d && static_cast<int>(d->size()) != n)
        throw std::invalid_argument("burst: pair sequences differ in length");
    if (z < 1) throw std::invalid_argument("burst: tail length must be >= 1");

    TrainingBurst burst;
    burst.n_len = n;
    burst.z_len = z;
    burst.c = c;
    burst.d = d;
    burst.encoding = encoding;
    burst.config = config;

    ModulatorState state = ModulatorState::zero(config);
    CpmSymbols all;

    TailChoice tail_c = tail_bits_nearest(state, z, config);
    burst.tail_residual_units.push_back(tail_c.residual_units);
    burst.boundaries.tail_c = 0;
    append(all, tail_c.symbols);
    state = phase_state_after(tail_c.symbols, config, state);

    burst.boundaries.ic_start = z;
    CpmSymbols train_c = training_symbols(c, encoding);
    append(all, train_c);
    state = phase_state_after(train_c, config, state);

    if (d) {
        burst.boundaries.tail_d = 2 * n + z;
        TailChoice tail_d = tail_bits_nearest(state, z, config);
        burst.tail_residual_units.push_back(tail_d.residual_units);
        append(all, tail_d.symbols);
        state = phase_state_after(tail_d.symbols, config, state);

        burst.boundaries.id_start = 2 * n + 2 * z;
        CpmSymbols train_d = training_symbols(*d, encoding);
        append(all, train_d);
    }

    burst.symbols = std::move(all);
    burst.waveform = modulate(burst.symbols, config, ModulatorState::zero(config));
    return burst;
}

BurstSegments segments(const TrainingBurst& burst) {
    const std::size_t q = static_cast<std::size_t>(burst.config.oversampling_q);
    const std::size_t nq = static_cast<std::size_t>(burst.n_len) * q;
    const std::size_t ic = static_cast<std::size_t>(burst.boundaries.ic_start) * q;

    BurstSegments seg;
    seg.s1c = slice(burst.waveform, ic, nq);
    seg.s2c = slice(burst.waveform, ic + nq, nq);
    if (burst.has_pair()) {
        const std::size_t id = static_cast<std::size_t>(burst.boundaries.id_start) * q;
        seg.s1d = slice(burst.waveform, id, nq);
        seg.s2d = slice(burst.waveform, id + nq, nq);
    }
    return seg;
}

CorrelationProfile periodic_xcorr(const ComplexWaveform& s1, const ComplexWaveform& s2) {
    if (s1.size() != s2.size() || s1.empty())
        throw std::invalid_argument("burst: correlation windows must match in length");
    const int n = static_cast<int>(s1.size());
    std::vector<cdouble> phi(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        cdouble acc = 0.0;
        for (int t = 0; t < n; ++t)
            acc += s2.samples[static_cast<std::size_t>(t)] *
                   std::conj(s1.samples[static_cast<std::size_t>((t + k) % n)]);
        phi[static_cast<std::size_t>(k)] = acc * s1.sample_period;
    }

    CorrelationProfile out;
    out.symbol_period = 1.0;  // callers overwrite
    out.lags.resize(static_cast<std::size_t>(n));
    out.values.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int centered = j - n / 2;
        out.lags[static_cast<std::size_t>(j)] = centered * s1.sample_period;
        out.values[static_cast<std::size_t>(j)] =
            phi[static_cast<std::size_t>((centered + n) % n)];
    }
    return out;
}

namespace {

CorrelationProfile normalize_profile(CorrelationProfile p) {
    double at_zero = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        if (p.lags[j] == 0.0) at_zero = std::abs(p.values[j]);
    if (at_zero <= 0.0) throw std::invalid_argument("burst: degenerate correlation profile");
    for (cdouble& v : p.values) v /= at_zero;
    p.normalization = at_zero;
    return p;
}

CorrelationProfile combine(CorrelationProfile a, const CorrelationProfile* b,
                           const TrainingBurst& burst) {
    if (b) {
        for (std::size_t j = 0; j < a.size(); ++j) a.values[j] += b->values[j];
    }
    a.single_sequence = (b == nullptr);
    a.symbol_period = burst.config.symbol_period;
    return normalize_profile(std::move(a));
}

}  // namespace

CorrelationProfile sum_correlation(const TrainingBurst& burst) {
    BurstSegments seg = segments(burst);
    CorrelationProfile pc = periodic_xcorr(seg.s1c, seg.s2c);
    if (!burst.has_pair()) return combine(std::move(pc), nullptr, burst);
    CorrelationProfile pd = periodic_xcorr(*seg.s1d, *seg.s2d);
    return combine(std::move(pc), &pd, burst);
}

namespace {

// One period of the dominant-pulse model, synthesized cyclically from the
// first N pseudo-symbols of a training block.
ComplexWaveform alpha_period(const ZqSequence& seq, const TrainingBurst& burst,
                             const SampledPulse& c0) {
    const int n = burst.n_len;
    const int q = burst.config.oversampling_q;
    PseudoSymbols gamma = pseudo_symbols(training_symbols(seq, burst.encoding));

    ComplexWaveform w;
    w.sample_period = burst.config.sample_period();
    w.samples.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(q), cdouble{0.0});
    const std::size_t period = w.samples.size();
    for (int sym = 0; sym < n; ++sym) {
        const cdouble g = gamma.values[static_cast<std::size_t>(sym)].to_complex();
        for (std::size_t k = 0; k < c0.samples.size(); ++k)
            w.samples[(static_cast<std::size_t>(sym) * q + k) % period] += g * c0.samples[k];
    }
    return w;
}

}  // namespace

CorrelationProfile sum_correlation_alpha(const TrainingBurst& burst) {
    LaurentPulseSet set = laurent_pulses(burst.config);
    const SampledPulse& c0 = set.pulses[0];

    ComplexWaveform wc = alpha_period(burst.c, burst, c0);
    CorrelationProfile pc = periodic_xcorr(wc, wc);
    if (!burst.has_pair()) return combine(std::move(pc), nullptr, burst);

    ComplexWaveform wd = alpha_period(*burst.d, burst, c0);
    CorrelationProfile pd = periodic_xcorr(wd, wd);
    return combine(std::move(pc), &pd, burst);
}

double sidelobe_peak(const CorrelationProfile& profile, int l, int n) {
    if (n <= 2 * l + 2)
        throw std::invalid_argument("burst: sidelobe region is empty for N <= 2L+2");
    const double t_sym = profile.symbol_period;
    const double lo = (l + 1) * t_sym;
    const double hi = (n - l - 1) * t_sym;
    double peak = 0.0;
    bool seen = false;
    for (std::size_t j = 0; j < profile.size(); ++j) {
        const double a = std::abs(profile.lags[j]);
        if (a > lo && a <= hi + 1e-12) {
            peak = std::max(peak, std::abs(profile.values[j]));
            seen = true;
        }
    }
    if (!seen) throw std::invalid_argument("burst: sidelobe region is empty");
    return peak;
}

void write_profile_csv(const CorrelationProfile& profile, std::ostream& os) {
    os << "lag_over_T,magnitude\n";
    char line[64];
    for (std::size_t j = 0; j < profile.size(); ++j) {
        std::snprintf(line, sizeof line, "%.10g,%.10g\n",
                      profile.lags[j] / profile.symbol_period, std::abs(profile.values[j]));
        os << line;
    }
}

}  // namespace cpmtrain
