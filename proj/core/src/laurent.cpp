#include "cpmtrain/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cpmtrain {

namespace {

constexpr double kPi = std::numbers::pi;

double s0_at(const SampledPulse& s0, long long index) {
    if (index < 0 || index >= static_cast<long long>(s0.samples.size())) return 0.0;
    return s0.samples[static_cast<std::size_t>(index)];
}

}  // namespace

SampledPulse s0_pulse(const CpmConfig& config) {
    config.validate();
    const double h = config.h.value();
    const double denom = std::sin(kPi * h);
    if (std::abs(denom) < 1e-12)
        throw std::invalid_argument("laurent: s0 undefined for integer modulation index");

    const SampledPulse q = phase_shaping(gmsk_frequency_pulse(config));
    const int lq = config.pulse_len_l * config.oversampling_q;
    SampledPulse s0;
    s0.sample_period = config.sample_period();
    s0.samples.resize(static_cast<std::size_t>(2 * lq + 1));
    for (int k = 0; k <= lq; ++k)
        s0.samples[static_cast<std::size_t>(k)] =
            std::sin(2.0 * kPi * h * q.samples[static_cast<std::size_t>(k)]) / denom;
    for (int k = lq; k <= 2 * lq; ++k)
        s0.samples[static_cast<std::size_t>(k)] =
            std::sin(kPi * h - 2.0 * kPi * h * q.samples[static_cast<std::size_t>(k - lq)]) / denom;
    return s0;
}

LaurentPulseSet laurent_pulses(const CpmConfig& config) {
    config.validate();
    const int l = config.pulse_len_l;
    const int q_ovs = config.oversampling_q;
    const SampledPulse s0 = s0_pulse(config);

    LaurentPulseSet set;
    set.config = config;
    const std::size_t count = std::size_t{1} << (l - 1);
    set.pulses.resize(count);
    set.digits.resize(count);
    for (std::size_t p = 0; p < count; ++p) {
        std::vector<int> a(static_cast<std::size_t>(l - 1));
        for (int m = 1; m < l; ++m) a[static_cast<std::size_t>(m - 1)] = (p >> (m - 1)) & 1u;

        // Support endpoint T * min_i [L(2 - a_i) - i]; for L = 1 the product
        // is empty and c0 = s0 with support (L+1)T = 2T.
        int support_symbols = l + 1;
        for (int m = 1; m < l; ++m)
            support_symbols =
                std::min(support_symbols, l * (2 - a[static_cast<std::size_t>(m - 1)]) - m);

        SampledPulse cp;
        cp.sample_period = s0.sample_period;
        cp.samples.resize(static_cast<std::size_t>(support_symbols * q_ovs + 1));
        for (std::size_t k = 0; k < cp.samples.size(); ++k) {
            double v = s0.samples[k];
            for (int m = 1; m < l; ++m) {
                const long long shift =
                    static_cast<long long>(m + l * a[static_cast<std::size_t>(m - 1)]) * q_ovs;
                v *= s0_at(s0, static_cast<long long>(k) + shift);
            }
            cp.samples[k] = v;
        }
        set.pulses[p] = std::move(cp);
        set.digits[p] = std::move(a);
    }
    return set;
}

ComplexWaveform pam_waveform(const LaurentPulseSet& set, std::span<const int> stream,
                             std::span<const std::size_t> pulse_subset) {
    const CpmConfig& config = set.config;
    const int l = config.pulse_len_l;
    const int q_ovs = config.oversampling_q;
    const long long n_sym = static_cast<long long>(stream.size());
    const double pi_h = kPi * config.h.value();

    ComplexWaveform out;
    out.sample_period = config.sample_period();
    out.samples.assign(stream.size() * static_cast<std::size_t>(q_ovs), cdouble{0.0, 0.0});

    // Running prefix sums of the stream; index n-m below may fall before the
    // start of the stream, in which case the symbol contributes nothing.
    std::vector<long long> prefix(stream.size() + 1, 0);
    for (std::size_t m = 0; m < stream.size(); ++m) prefix[m + 1] = prefix[m] + stream[m];

    for (long long n = -(l + 1); n < n_sym; ++n) {
        const long long cumsum = (n < 0) ? 0 : prefix[static_cast<std::size_t>(n + 1)];
        for (std::size_t p : pulse_subset) {
            long long a_pn = cumsum;
            for (int m = 1; m < l; ++m) {
                const long long idx = n - m;
                if (idx >= 0 && set.digits[p][static_cast<std::size_t>(m - 1)])
                    a_pn -= stream[static_cast<std::size_t>(idx)];
            }
            const cdouble coeff = std::polar(1.0, pi_h * static_cast<double>(a_pn));
            const SampledPulse& cp = set.pulses[p];
            const long long base = n * q_ovs;
            const long long lo = std::max<long long>(0, -base);
            const long long hi = std::min<long long>(static_cast<long long>(cp.samples.size()),
                                                     static_cast<long long>(out.samples.size()) - base);
            for (long long k = lo; k < hi; ++k)
                out.samples[static_cast<std::size_t>(base + k)] +=
                    coeff * cp.samples[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

namespace {

ComplexWaveform pam_window(const CpmSymbols& i, const CpmConfig& config, bool c0_only) {
    config.validate();
    const int l = config.pulse_len_l;
    const int q_ovs = config.oversampling_q;

    // Prefix the stream with +1 symbols so every output interval sees a
    // full complement of L active factors.
    std::vector<int> stream(static_cast<std::size_t>(l - 1), 1);
    for (int s : i.values) {
        if (s != -1 && s != 1) throw std::invalid_argument("laurent: symbol outside {-1,+1}");
        stream.push_back(s);
    }

    LaurentPulseSet set = laurent_pulses(config);
    std::vector<std::size_t> subset;
    if (c0_only) subset = {0};
    else for (std::size_t p = 0; p < set.count(); ++p) subset.push_back(p);

    ComplexWaveform full = pam_waveform(set, stream, subset);
    ComplexWaveform out;
    out.sample_period = full.sample_period;
    const std::size_t skip = static_cast<std::size_t>((l - 1) * q_ovs);
    out.samples.assign(full.samples.begin() + static_cast<std::ptrdiff_t>(skip),
                       full.samples.end());
    return out;
}

}  // namespace

ComplexWaveform laurent_exact(const CpmSymbols& i, const CpmConfig& config) {
    return pam_window(i, config, /*c0_only=*/false);
}

ComplexWaveform laurent_approx(const CpmSymbols& i, const CpmConfig& config) {
    return pam_window(i, config, /*c0_only=*/true);
}

ModulatorState pam_reference_state(const CpmConfig& config) {
    config.validate();
    ModulatorState st = ModulatorState::zero(config);
    std::fill(st.correlative_state.begin(), st.correlative_state.end(), 1);
    return st;
}

double c0_energy_fraction(const CpmConfig& config) {
    LaurentPulseSet set = laurent_pulses(config);
    double total = 0.0, dominant = 0.0;
    for (std::size_t p = 0; p < set.count(); ++p) {
        double e = 0.0;
        for (double v : set.pulses[p].samples) e += v * v;
        e *= set.pulses[p].sample_period;
        total += e;
        if (p == 0) dominant = e;
    }
    return dominant / total;
}

CorrelationProfile c0_aacf(const CpmConfig& config) {
    LaurentPulseSet set = laurent_pulses(config);
    const SampledPulse& c0 = set.pulses[0];
    const int len = static_cast<int>(c0.samples.size());

    CorrelationProfile out;
    out.symbol_period = config.symbol_period;
    out.lags.resize(static_cast<std::size_t>(2 * len - 1));
    out.values.resize(static_cast<std::size_t>(2 * len - 1));
    for (int k = -(len - 1); k <= len - 1; ++k) {
        double acc = 0.0;
        const int ak = std::abs(k);
        for (int m = 0; m + ak < len; ++m)
            acc += c0.samples[static_cast<std::size_t>(m)] *
                   c0.samples[static_cast<std::size_t>(m + ak)];
        out.lags[static_cast<std::size_t>(k + len - 1)] = k * c0.sample_period;
        out.values[static_cast<std::size_t>(k + len - 1)] = acc * c0.sample_period;
    }
    return out;
}

}  // namespace cpmtrain
