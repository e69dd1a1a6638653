#include "cpmtrain/chansim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <unsupported/Eigen/FFT>

namespace cpmtrain {

namespace rng {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
    // (0, 1]: never 0, so the Box-Muller log is safe.
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
}

double SplitMix64::normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cdouble SplitMix64::complex_gaussian() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-std::log(u1));
    return {r * std::cos(2.0 * std::numbers::pi * u2),
            r * std::sin(2.0 * std::numbers::pi * u2)};
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(a ^ (0x632be59bd9b4e019ULL + (b << 1)));
    g.next();
    return g.next() ^ b;
}

}  // namespace rng

double ChannelTaps::power() const {
    double acc = 0.0;
    for (const cdouble& h : taps) acc += std::norm(h);
    return acc;
}

ChannelTaps draw_channel(int p, std::uint64_t seed) {
    if (p < 1) throw std::invalid_argument("chansim: need at least one path");
    rng::SplitMix64 gen(rng::mix(seed, 0x16afdc0fb5c1e36bULL));
    ChannelTaps ch;
    ch.taps.resize(static_cast<std::size_t>(p));
    const double scale = std::sqrt(1.0 / p);
    for (auto& h : ch.taps) h = scale * gen.complex_gaussian();
    return ch;
}

ComplexWaveform propagate(const ComplexWaveform& x, const ChannelTaps& taps,
                          double snr_db, std::uint64_t seed) {
    if (taps.taps.empty()) throw std::invalid_argument("chansim: empty channel");
    // Symbol-spaced taps arrive Q samples apart on the oversampled grid.
    const auto q = static_cast<std::size_t>(std::llround(taps.spacing / x.sample_period));
    const std::size_t p = taps.paths();
    ComplexWaveform y;
    y.sample_period = x.sample_period;
    y.start_time = x.start_time;
    y.samples.assign(x.size() + (p - 1) * q, cdouble{0.0});
    for (std::size_t i = 0; i < p; ++i) {
        const cdouble h = taps.taps[i];
        if (h == cdouble{0.0}) continue;
        const std::size_t off = i * q;
        for (std::size_t k = 0; k < x.size(); ++k) y.samples[k + off] += h * x.samples[k];
    }
    if (std::isfinite(snr_db)) {
        const double sigma = std::pow(10.0, -snr_db / 20.0);
        rng::SplitMix64 gen(rng::mix(seed, 0x7b1f0c8a2d94e3c5ULL));
        for (auto& s : y.samples) s += sigma * gen.complex_gaussian();
    }
    return y;
}

namespace {

struct WindowSet {
    std::vector<std::size_t> rows;  // received sample indices
};

WindowSet observation_windows(const TrainingBurst& burst) {
    const std::size_t q = static_cast<std::size_t>(burst.config.oversampling_q);
    const std::size_t nq = static_cast<std::size_t>(burst.n_len) * q;
    WindowSet w;
    auto add = [&](std::size_t start) {
        for (std::size_t k = 0; k < nq; ++k) w.rows.push_back(start + k);
    };
    add(static_cast<std::size_t>(burst.boundaries.ic_start) * q + nq);  // second C half
    if (burst.has_pair())
        add(static_cast<std::size_t>(burst.boundaries.id_start) * q + nq);  // second D half
    return w;
}

}  // namespace

struct LsEstimator::Impl {
    Eigen::MatrixXcd thin_u;   // R x P
    Eigen::MatrixXcd v;        // P x P
    Eigen::VectorXd inv_sing;  // truncated reciprocal singular values
    WindowSet windows;
    LsDiagnostics diag;
    double column_energy = 0.0;
    int p = 0;
    std::size_t min_received = 0;
};

LsEstimator::LsEstimator(const TrainingBurst& burst, int p) : impl_(new Impl) {
    if (p < 1) throw std::invalid_argument("chansim: need at least one tap to estimate");
    impl_->p = p;
    impl_->windows = observation_windows(burst);
    const std::size_t q = static_cast<std::size_t>(burst.config.oversampling_q);
    const std::size_t r = impl_->windows.rows.size();

    Eigen::MatrixXcd a(r, p);
    for (std::size_t row = 0; row < r; ++row) {
        const std::size_t t = impl_->windows.rows[row];
        for (int i = 0; i < p; ++i) {
            const std::size_t delay = static_cast<std::size_t>(i) * q;
            a(static_cast<Eigen::Index>(row), i) =
                (t >= delay && t - delay < burst.waveform.size())
                    ? burst.waveform.samples[t - delay]
                    : cdouble{0.0};
        }
    }
    impl_->column_energy = a.squaredNorm() / p;
    impl_->min_received = *std::max_element(impl_->windows.rows.begin(), impl_->windows.rows.end()) + 1;

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    impl_->diag.largest_singular = s(0);
    impl_->diag.smallest_singular = s(s.size() - 1);
    impl_->diag.condition_number =
        (s(s.size() - 1) > 0.0) ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
    const double cutoff = 1e-10 * s(0);
    impl_->diag.rank_deficient = s(s.size() - 1) < cutoff;
    impl_->inv_sing.resize(s.size());
    for (Eigen::Index k = 0; k < s.size(); ++k)
        impl_->inv_sing(k) = (s(k) < cutoff) ? 0.0 : 1.0 / s(k);
    impl_->thin_u = svd.matrixU();
    impl_->v = svd.matrixV();
}

LsEstimator::~LsEstimator() = default;
LsEstimator::LsEstimator(LsEstimator&&) noexcept = default;
LsEstimator& LsEstimator::operator=(LsEstimator&&) noexcept = default;

LsResult LsEstimator::estimate(const ComplexWaveform& received) const {
    if (received.size() < impl_->min_received)
        throw std::invalid_argument("chansim: received waveform does not cover the training windows");
    const std::size_t r = impl_->windows.rows.size();
    Eigen::VectorXcd y(r);
    for (std::size_t row = 0; row < r; ++row)
        y(static_cast<Eigen::Index>(row)) = received.samples[impl_->windows.rows[row]];

    Eigen::VectorXcd coeffs = impl_->thin_u.adjoint() * y;
    coeffs.array() *= impl_->inv_sing.array();
    Eigen::VectorXcd h = impl_->v * coeffs;

    LsResult out;
    out.diag = impl_->diag;
    out.taps.taps.assign(h.data(), h.data() + h.size());
    return out;
}

const LsDiagnostics& LsEstimator::diagnostics() const { return impl_->diag; }
double LsEstimator::reference_column_energy() const { return impl_->column_energy; }

LsResult ls_estimate(const ComplexWaveform& received, const TrainingBurst& burst, int p) {
    return LsEstimator(burst, p).estimate(received);
}

double crlb(int p, double snr_db, double ref_energy) {
    if (p < 1 || !(ref_energy > 0.0)) throw std::invalid_argument("chansim: bad CRLB arguments");
    if (!std::isfinite(snr_db)) return 0.0;
    const double sigma2 = std::pow(10.0, -snr_db / 10.0);
    return p * sigma2 / ref_energy;
}

double MseReport::db_from_crlb(std::size_t label_idx, std::size_t snr_idx) const {
    return 10.0 * std::log10(mse[label_idx][snr_idx] / crlb_curve[snr_idx]);
}

namespace {

TrainingBurst scaled_burst(TrainingBurst burst, double amp) {
    for (auto& s : burst.waveform.samples) s *= amp;
    return burst;
}

double tap_error(const ChannelTaps& est, const ChannelTaps& truth) {
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.paths(); ++i) acc += std::norm(est.taps[i] - truth.taps[i]);
    return acc;
}

}  // namespace

MseReport mse_sweep(const std::vector<MseSource>& sources, const std::vector<double>& snr_grid,
                    int trials, std::uint64_t seed, int p) {
    if (sources.empty() || snr_grid.empty() || trials < 1)
        throw std::invalid_argument("chansim: empty MSE sweep");

    // Common transmit energy: the longest burst template sets the budget.
    std::vector<TrainingBurst> templates;
    for (const auto& src : sources)
        templates.push_back(src.regenerate ? src.regenerate(rng::mix(seed, 0)) : *src.fixed);
    std::size_t max_len = 0;
    for (const auto& b : templates) max_len = std::max(max_len, b.waveform.size());

    MseReport report;
    report.snr_grid = snr_grid;
    report.trials = trials;
    report.paths = p;
    report.seed = seed;
    report.mse.assign(sources.size(), std::vector<double>(snr_grid.size(), 0.0));
    report.rank_deficient_counts.assign(sources.size(), 0);

    for (std::size_t si = 0; si < sources.size(); ++si) {
        const MseSource& src = sources[si];
        report.labels.push_back(src.label);
        const double amp = std::sqrt(static_cast<double>(max_len) /
                                     static_cast<double>(templates[si].waveform.size()));

        std::optional<LsEstimator> fixed_est;
        std::optional<TrainingBurst> fixed_burst;
        if (!src.regenerate) {
            fixed_burst = scaled_burst(templates[si], amp);
            fixed_est.emplace(*fixed_burst, p);
            if (si == 0) report.ref_energy = fixed_est->reference_column_energy();
        }

        for (std::size_t gi = 0; gi < snr_grid.size(); ++gi) {
            double acc = 0.0;
            for (int trial = 0; trial < trials; ++trial) {
                const std::uint64_t base = 0x100000ULL * gi + static_cast<std::uint64_t>(trial);
                // Channel draws depend only on (seed, snr, trial): every
                // source faces the same fading realizations.
                const std::uint64_t chan_seed = rng::mix(seed, base);
                const std::uint64_t noise_seed = rng::mix(rng::mix(seed, 0xabcd0000ULL + si), base);

                const TrainingBurst* burst = fixed_burst ? &*fixed_burst : nullptr;
                const LsEstimator* est = fixed_est ? &*fixed_est : nullptr;
                std::optional<TrainingBurst> regen;
                std::optional<LsEstimator> regen_est;
                if (src.regenerate) {
                    const std::uint64_t seq_seed = rng::mix(rng::mix(seed, 0x7a9e0000ULL + si), base);
                    regen = scaled_burst(src.regenerate(seq_seed), amp);
                    regen_est.emplace(*regen, p);
                    burst = &*regen;
                    est = &*regen_est;
                }

                ChannelTaps truth = draw_channel(p, chan_seed);
                ComplexWaveform received = propagate(burst->waveform, truth, snr_grid[gi], noise_seed);
                LsResult result = est->estimate(received);
                if (result.diag.rank_deficient) ++report.rank_deficient_counts[si];
                acc += tap_error(result.taps, truth);
            }
            report.mse[si][gi] = acc / trials;
        }

        if (si == 0 && src.regenerate) {
            LsEstimator probe(scaled_burst(templates[si], amp), p);
            report.ref_energy = probe.reference_column_energy();
        }
    }

    report.crlb_curve.resize(snr_grid.size());
    for (std::size_t gi = 0; gi < snr_grid.size(); ++gi)
        report.crlb_curve[gi] = crlb(p, snr_grid[gi], report.ref_energy);
    return report;
}

double BerReport::snr_at(double target_ber) const {
    for (std::size_t i = 1; i < snr_grid.size(); ++i) {
        const double b0 = ber[i - 1], b1 = ber[i];
        if (b0 >= target_ber && b1 < target_ber && b1 > 0.0) {
            const double l0 = std::log10(b0), l1 = std::log10(b1), lt = std::log10(target_ber);
            return snr_grid[i - 1] + (snr_grid[i] - snr_grid[i - 1]) * (l0 - lt) / (l0 - l1);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

namespace {

struct FdePlan {
    int block = 0;       // FFT size, even
    int cp = 0;          // cyclic prefix, >= P-1+2L
    int pad = 0;         // symbols appended after the block
    int mf_shift = 0;    // c0 half-span used to causalize the matched filter
};

// Sampled c0 AACF at symbol lags, normalized so lag 0 is 1.
std::vector<double> c0_symbol_acf(const CpmConfig& config, int l) {
    CorrelationProfile rho = c0_aacf(config);
    const int q = config.oversampling_q;
    std::vector<double> acf(static_cast<std::size_t>(2 * l + 1), 0.0);
    const int mid = static_cast<int>(rho.size()) / 2;
    const double r0 = rho.values[static_cast<std::size_t>(mid)].real();
    for (int k = -l; k <= l; ++k)
        acf[static_cast<std::size_t>(k + l)] =
            rho.values[static_cast<std::size_t>(mid + k * q)].real() / r0;
    return acf;
}

}  // namespace

BerReport scfde_ber(const TrainingBurst& burst, int payload_len,
                    const std::vector<double>& snr_grid, int trials, std::uint64_t seed,
                    CsiMode csi_mode) {
    const CpmConfig& config = burst.config;
    const int l = config.pulse_len_l;
    const int q = config.oversampling_q;
    const int p = 16;  // uniform-profile multipath of the estimation experiment

    FdePlan plan;
    plan.block = payload_len;
    plan.cp = p - 1 + 2 * l + 2;
    plan.pad = l + 2;
    if (plan.block < plan.cp || plan.block % 2 != 0)
        throw std::invalid_argument("chansim: payload must be even and at least one FDE block");

    LaurentPulseSet set = laurent_pulses(config);
    const SampledPulse& c0 = set.pulses[0];
    double rho0 = 0.0;
    for (double v : c0.samples) rho0 += v * v;
    const std::vector<double> acf = c0_symbol_acf(config, l);

    const std::optional<LsEstimator> estimator =
        (csi_mode == CsiMode::estimated) ? std::optional<LsEstimator>(LsEstimator(burst, p))
                                         : std::nullopt;

    const ModulatorState burst_end =
        phase_state_after(burst.symbols, config, ModulatorState::zero(config));

    BerReport report;
    report.snr_grid = snr_grid;
    report.seed = seed;
    report.csi = csi_mode;
    report.ber.assign(snr_grid.size(), 0.0);

    Eigen::FFT<double> fft;
    const int nb = plan.block;

    for (std::size_t gi = 0; gi < snr_grid.size(); ++gi) {
        long long errors = 0, bits = 0;
        for (int trial = 0; trial < trials; ++trial) {
            // Payload, channel and noise depend only on (seed, snr, trial):
            // BER curves of different bursts are directly comparable.
            const std::uint64_t base = 0x100000ULL * gi + static_cast<std::uint64_t>(trial);
            rng::SplitMix64 bitgen(rng::mix(rng::mix(seed, 0xb17b17ULL), base));

            // Differential pseudo-symbol chain; absolute rotation fixed
            // below so the entry transition is realizable.
            std::vector<int> u(static_cast<std::size_t>(nb), 0);  // bits, u[0] unused
            std::vector<long long> expo(static_cast<std::size_t>(nb), 0);
            for (int m = 1; m < nb; ++m) {
                u[static_cast<std::size_t>(m)] = (bitgen.next() >> 40) & 1u;
                expo[static_cast<std::size_t>(m)] =
                    expo[static_cast<std::size_t>(m - 1)] + (u[static_cast<std::size_t>(m)] ? 1 : -1);
            }

            // Transmitted pseudo-symbol exponents: CP then block.
            std::vector<long long> tx_expo;
            tx_expo.reserve(static_cast<std::size_t>(plan.cp + nb + plan.pad));
            for (int m = nb - plan.cp; m < nb; ++m) tx_expo.push_back(expo[static_cast<std::size_t>(m)]);
            for (int m = 0; m < nb; ++m) tx_expo.push_back(expo[static_cast<std::size_t>(m)]);
            // Entry transition parity: rotate the whole chain if needed.
            const long long k_end = burst_end.phase_units;  // units of pi/2
            if (((tx_expo.front() - k_end) & 1LL) == 0)
                for (auto& e : tx_expo) e += 1;
            for (int m = 0; m < plan.pad; ++m) tx_expo.push_back(tx_expo.back() + 1);

            CpmSymbols payload;
            payload.values.reserve(tx_expo.size());
            long long prev = k_end;
            for (long long e : tx_expo) {
                const long long d = e - prev;
                if (((d % 2) + 2) % 2 != 1)
                    throw std::logic_error("chansim: non-unit pseudo-symbol transition");
                payload.values.push_back((((d % 4) + 4) % 4 == 1) ? 1 : -1);
                prev = e;
            }

            ComplexWaveform frame = burst.waveform;
            ComplexWaveform tail = modulate(payload, config, burst_end);
            frame.samples.insert(frame.samples.end(), tail.samples.begin(), tail.samples.end());

            const std::uint64_t chan_seed = rng::mix(rng::mix(seed, 0xc4a2ULL), base);
            const std::uint64_t noise_seed = rng::mix(rng::mix(seed, 0x90153ULL), base);
            ChannelTaps truth = draw_channel(p, chan_seed);
            ComplexWaveform received = propagate(frame, truth, snr_grid[gi], noise_seed);

            const ChannelTaps* taps = &truth;
            LsResult est;
            if (estimator) {
                est = estimator->estimate(received);
                taps = &est.taps;
            }

            // Effective symbol-spaced channel after the matched filter.
            std::vector<cdouble> heff(static_cast<std::size_t>(nb), cdouble{0.0});
            for (int i = 0; i < p; ++i)
                for (int k = -l; k <= l; ++k) {
                    const int m = ((i + k) % nb + nb) % nb;
                    heff[static_cast<std::size_t>(m)] +=
                        taps->taps[static_cast<std::size_t>(i)] * acf[static_cast<std::size_t>(k + l)];
                }

            // Matched filter at the block symbol positions.
            const std::size_t block_first =
                burst.waveform.size() + static_cast<std::size_t>(plan.cp) * q;
            std::vector<cdouble> z(static_cast<std::size_t>(nb), cdouble{0.0});
            for (int m = 0; m < nb; ++m) {
                const std::size_t start = block_first + static_cast<std::size_t>(m) * q;
                cdouble acc = 0.0;
                for (std::size_t k = 0; k < c0.samples.size(); ++k)
                    acc += received.samples[start + k] * c0.samples[k];
                z[static_cast<std::size_t>(m)] = acc / rho0;
            }

            std::vector<cdouble> zf, hf;
            fft.fwd(zf, z);
            fft.fwd(hf, heff);
            const double sigma2 = std::isfinite(snr_grid[gi])
                                      ? std::pow(10.0, -snr_grid[gi] / 10.0) / rho0
                                      : 0.0;
            std::vector<cdouble> gf(static_cast<std::size_t>(nb));
            for (int b = 0; b < nb; ++b) {
                const cdouble h = hf[static_cast<std::size_t>(b)];
                gf[static_cast<std::size_t>(b)] = std::conj(h) / (std::norm(h) + sigma2);
            }
            for (int b = 0; b < nb; ++b) zf[static_cast<std::size_t>(b)] *= gf[static_cast<std::size_t>(b)];
            std::vector<cdouble> gamma_hat;
            fft.inv(gamma_hat, zf);

            for (int m = 1; m < nb; ++m) {
                const double im = std::imag(gamma_hat[static_cast<std::size_t>(m)] *
                                            std::conj(gamma_hat[static_cast<std::size_t>(m - 1)]));
                const int detected = im > 0.0 ? 1 : 0;
                errors += (detected != u[static_cast<std::size_t>(m)]);
                ++bits;
            }
        }
        report.ber[gi] = static_cast<double>(errors) / static_cast<double>(bits);
        report.bits_simulated += bits;
    }
    return report;
}

}  // namespace cpmtrain
