#include "cpmtrain/gcp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cpmtrain {

namespace {

int mod_q(long long v, int q) {
    long long r = v % q;
    if (r < 0) r += q;
    return static_cast<int>(r);
}

int bit_of(std::size_t index, int var) {
    // Variable x_k reads bit k-1; i_1 is the least significant bit.
    return static_cast<int>((index >> (var - 1)) & 1u);
}

}  // namespace

void ZqSequence::validate() const {
    if (modulus < 2) throw std::invalid_argument("gcp: sequence modulus must be >= 2");
    for (int v : values)
        if (v < 0 || v >= modulus)
            throw std::invalid_argument("gcp: sequence value outside [0, q)");
}

void GbfSpec::validate() const {
    if (q < 2 || q % 2 != 0) throw std::invalid_argument("gcp: q must be a positive even integer");
    if (nu < 1) throw std::invalid_argument("gcp: nu must be positive");
    if (static_cast<int>(perm.size()) != nu)
        throw std::invalid_argument("gcp: permutation must have nu entries");
    std::vector<bool> seen(nu + 1, false);
    for (int p : perm) {
        if (p < 1 || p > nu || seen[p])
            throw std::invalid_argument("gcp: perm is not a bijection on {1..nu}");
        seen[p] = true;
    }
    if (static_cast<int>(linear_coeffs.size()) != nu)
        throw std::invalid_argument("gcp: need nu linear coefficients");
}

cdouble CorrelationSeq::at(int lag) const {
    if (lag < min_lag || lag > max_lag()) return {0.0, 0.0};
    return values[static_cast<std::size_t>(lag - min_lag)];
}

std::vector<cdouble> PseudoSymbols::to_complex() const {
    std::vector<cdouble> out(values.size());
    for (std::size_t n = 0; n < values.size(); ++n) out[n] = values[n].to_complex();
    return out;
}

ZqSequence boolean_sequence(const std::vector<GbfTerm>& terms, int nu, int q) {
    if (q < 2 || q % 2 != 0) throw std::invalid_argument("gcp: q must be a positive even integer");
    if (nu < 1 || nu > 30) throw std::invalid_argument("gcp: nu out of range");
    for (const GbfTerm& t : terms)
        for (int v : t.vars)
            if (v < 1 || v > nu)
                throw std::invalid_argument("gcp: monomial variable index outside [1, nu]");

    const std::size_t n = std::size_t{1} << nu;
    ZqSequence seq;
    seq.modulus = q;
    seq.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        long long acc = 0;
        for (const GbfTerm& t : terms) {
            int prod = 1;
            for (int v : t.vars) prod &= bit_of(i, v);
            if (prod) acc += t.coeff;
        }
        seq.values[i] = mod_q(acc, q);
    }
    return seq;
}

namespace {

std::vector<GbfTerm> davis_jedwab_terms(const GbfSpec& spec) {
    std::vector<GbfTerm> terms;
    for (int k = 1; k < spec.nu; ++k)
        terms.push_back({spec.q / 2, {spec.perm[k - 1], spec.perm[k]}});
    for (int k = 1; k <= spec.nu; ++k)
        terms.push_back({spec.linear_coeffs[k - 1], {k}});
    terms.push_back({spec.const_term, {}});
    return terms;
}

}  // namespace

GcpPair davis_jedwab_pair(const GbfSpec& spec) {
    spec.validate();
    auto terms = davis_jedwab_terms(spec);
    GcpPair pair;
    pair.a = boolean_sequence(terms, spec.nu, spec.q);
    terms.push_back({spec.q / 2, {spec.perm[0]}});
    terms.push_back({spec.pair_offset, {}});
    pair.b = boolean_sequence(terms, spec.nu, spec.q);
    pair.origin = spec;
    return pair;
}

CorrelationSeq aacf(std::span<const cdouble> x) {
    if (x.empty()) throw std::invalid_argument("gcp: aacf of empty sequence");
    const int n = static_cast<int>(x.size());
    CorrelationSeq out;
    out.kind = CorrelationKind::aperiodic;
    out.min_lag = -(n - 1);
    out.values.assign(static_cast<std::size_t>(2 * n - 1), 0.0);
    for (int k = 0; k < n; ++k) {
        cdouble acc = 0.0;
        for (int m = 0; m + k < n; ++m) acc += x[m] * std::conj(x[m + k]);
        out.values[static_cast<std::size_t>(n - 1 + k)] = acc;
        out.values[static_cast<std::size_t>(n - 1 - k)] = std::conj(acc);
    }
    return out;
}

CorrelationSeq pacf(std::span<const cdouble> x) {
    if (x.empty()) throw std::invalid_argument("gcp: pacf of empty sequence");
    const int n = static_cast<int>(x.size());
    CorrelationSeq out;
    out.kind = CorrelationKind::periodic;
    out.min_lag = 0;
    out.values.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        cdouble acc = 0.0;
        for (int m = 0; m < n; ++m) acc += x[m] * std::conj(x[(m + k) % n]);
        out.values[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

std::vector<GaussInt> aacf_exact(std::span<const GaussInt> x) {
    if (x.empty()) throw std::invalid_argument("gcp: aacf of empty sequence");
    const std::size_t n = x.size();
    std::vector<GaussInt> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        GaussInt acc;
        for (std::size_t m = 0; m + k < n; ++m) acc = acc + x[m] * x[m + k].conj();
        out[k] = acc;
    }
    return out;
}

std::vector<cdouble> unit_circle(const ZqSequence& s) {
    s.validate();
    std::vector<cdouble> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        double phase = 2.0 * std::numbers::pi * s.values[i] / s.modulus;
        out[i] = {std::cos(phase), std::sin(phase)};
    }
    return out;
}

std::vector<GaussInt> unit_circle_exact(const ZqSequence& s) {
    s.validate();
    if (s.modulus != 2 && s.modulus != 4)
        throw std::invalid_argument("gcp: exact unit-circle map needs q in {2, 4}");
    const int step = 4 / s.modulus;  // quarter turns per unit value
    std::vector<GaussInt> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = gauss_unit(step * s.values[i]);
    return out;
}

double gcp_defect(const GcpPair& pair) {
    if (pair.a.size() != pair.b.size())
        throw std::invalid_argument("gcp: pair sequences differ in length");
    if (pair.a.modulus != pair.b.modulus)
        throw std::invalid_argument("gcp: pair sequences differ in modulus");

    if (pair.a.modulus == 2 || pair.a.modulus == 4) {
        auto ra = aacf_exact(unit_circle_exact(pair.a));
        auto rb = aacf_exact(unit_circle_exact(pair.b));
        long long worst = 0;
        for (std::size_t k = 1; k < ra.size(); ++k)
            worst = std::max(worst, (ra[k] + rb[k]).norm2());
        return worst == 0 ? 0.0 : std::sqrt(static_cast<double>(worst));
    }

    auto ra = aacf(unit_circle(pair.a));
    auto rb = aacf(unit_circle(pair.b));
    double worst = 0.0;
    for (int k = 1; k <= ra.max_lag(); ++k)
        worst = std::max(worst, std::abs(ra.at(k) + rb.at(k)));
    return worst;
}

double pair_energy(const GcpPair& pair) {
    return static_cast<double>(pair.a.size() + pair.b.size());
}

CpmSymbols diff_encode(const ZqSequence& c) {
    c.validate();
    if (c.modulus != 2) throw std::invalid_argument("gcp: diff_encode needs a binary sequence");
    if (c.values.empty()) throw std::invalid_argument("gcp: diff_encode of empty sequence");
    const std::size_t n = c.size();
    CpmSymbols out;
    out.values.resize(2 * n);
    int prev = 2 * 1 - 1;  // boundary bit fixed to 1
    for (std::size_t m = 0; m < 2 * n; ++m) {
        int cur = 2 * c.values[m % n] - 1;
        out.values[m] = cur * prev;
        prev = cur;
    }
    return out;
}

PseudoSymbols pseudo_symbols(const CpmSymbols& i, Rational h) {
    if (!(h == Rational{1, 2}))
        throw std::invalid_argument("gcp: pseudo_symbols supports h = 1/2 only");
    PseudoSymbols out;
    out.values.resize(i.size());
    long long running = 0;
    for (std::size_t n = 0; n < i.size(); ++n) {
        int s = i.values[n];
        if (s != 1 && s != -1)
            throw std::invalid_argument("gcp: modulator symbol outside {-1, +1}");
        running += s;
        out.values[n] = gauss_unit(running);
    }
    return out;
}

PseudoSymbols pseudo_symbols_closed(const ZqSequence& c) {
    c.validate();
    if (c.modulus != 2) throw std::invalid_argument("gcp: closed form needs a binary sequence");
    const long long n = static_cast<long long>(c.size());
    PseudoSymbols out;
    out.values.resize(2 * c.size());
    for (long long m = 0; m < 2 * n; ++m) {
        long long base = (m < n) ? m : m - n;
        long long e = base + 3 + 2 * c.values[static_cast<std::size_t>(base)];
        if (m >= n) e += n;
        out.values[static_cast<std::size_t>(m)] = gauss_unit(e);
    }
    return out;
}

GcpPair quaternary_lift(const GbfSpec& spec) {
    spec.validate();
    if (spec.q != 2) throw std::invalid_argument("gcp: quaternary lift starts from q = 2");
    if (spec.nu < 2) throw std::invalid_argument("gcp: quaternary lift needs nu >= 2");

    // Doubling the binary form and adding the quarter-turn ramp
    // j^{n+3} = j^{x_1 + 2 x_2 + 3} folds into another Davis-Jedwab form
    // over Z_4 with the same permutation.
    GbfSpec lifted;
    lifted.q = 4;
    lifted.nu = spec.nu;
    lifted.perm = spec.perm;
    lifted.linear_coeffs.resize(spec.nu);
    for (int k = 1; k <= spec.nu; ++k) {
        int c4 = 2 * spec.linear_coeffs[k - 1];
        if (k == 1) c4 += 1;
        if (k == 2) c4 += 2;
        lifted.linear_coeffs[k - 1] = mod_q(c4, 4);
    }
    lifted.const_term = mod_q(2 * spec.const_term + 3, 4);
    lifted.pair_offset = mod_q(2 * spec.pair_offset, 4);
    return davis_jedwab_pair(lifted);
}

std::string format_sequence(const ZqSequence& s) {
    s.validate();
    std::string out;
    out.reserve(s.size());
    if (s.modulus == 2) {
        for (int v : s.values) out.push_back(v == 0 ? '+' : '-');
    } else {
        if (s.modulus > 10)
            throw std::invalid_argument("gcp: digit display supports q <= 10");
        for (int v : s.values) out.push_back(static_cast<char>('0' + v));
    }
    return out;
}

ZqSequence parse_sequence(std::string_view text, int modulus) {
    ZqSequence out;
    out.modulus = modulus;
    out.values.reserve(text.size());
    for (char ch : text) {
        if (modulus == 2) {
            if (ch == '+') out.values.push_back(0);
            else if (ch == '-') out.values.push_back(1);
            else throw std::invalid_argument("gcp: binary sequence text must use '+'/'-'");
        } else {
            if (ch < '0' || ch >= '0' + modulus)
                throw std::invalid_argument("gcp: sequence digit outside alphabet");
            out.values.push_back(ch - '0');
        }
    }
    if (out.values.empty()) throw std::invalid_argument("gcp: empty sequence text");
    return out;
}

}  // namespace cpmtrain
