#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpmtrain/common.hpp"

namespace cpmtrain {

/// Sequence over Z_q (q even). Text form uses '+'/'-' when q = 2 and the
/// digits 0..q-1 otherwise.
struct ZqSequence {
    int modulus = 2;
    std::vector<int> values;

    std::size_t size() const { return values.size(); }
    void validate() const;
};

/// One monomial coeff * x_{vars[0]} * x_{vars[1]} * ... with variable
/// indices in 1..nu. An empty variable list is a constant term.
struct GbfTerm {
    int coeff = 0;
    std::vector<int> vars;
};

/// Parameters of a Davis-Jedwab generalized Boolean function
///   f = (q/2) * sum_k x_{perm[k]} x_{perm[k+1]} + sum_k c_k x_k + c,
/// whose paired sequence is f + (q/2) x_{perm[1]} + c' * 1.
struct GbfSpec {
    int q = 2;
    int nu = 1;
    std::vector<int> perm;           // permutation of {1..nu}
    std::vector<int> linear_coeffs;  // c_k, one per variable
    int const_term = 0;              // c
    int pair_offset = 0;             // c'

    void validate() const;
};

struct GcpPair {
    ZqSequence a;
    ZqSequence b;
    std::optional<GbfSpec> origin;
};

enum class CorrelationKind { aperiodic, periodic };

/// Correlation values on integer lags. Aperiodic sequences cover
/// [-(N-1), N-1]; periodic ones cover [0, N-1].
struct CorrelationSeq {
    CorrelationKind kind = CorrelationKind::aperiodic;
    int min_lag = 0;
    std::vector<cdouble> values;

    cdouble at(int lag) const;
    int max_lag() const { return min_lag + static_cast<int>(values.size()) - 1; }
};

/// Unit-magnitude pseudo-symbols. With h = 1/2 every value is one of
/// {1, j, -1, -j} and is stored exactly.
struct PseudoSymbols {
    std::vector<GaussInt> values;

    std::size_t size() const { return values.size(); }
    std::vector<cdouble> to_complex() const;
};

/// Evaluate a sum of monomials as a length-2^nu sequence over Z_q.
/// Index i decomposes into bits (i_1, ..., i_nu) with i_1 least significant.
ZqSequence boolean_sequence(const std::vector<GbfTerm>& terms, int nu, int q);

/// The two sequences of the Davis-Jedwab construction.
GcpPair davis_jedwab_pair(const GbfSpec& spec);

/// Aperiodic autocorrelation rho(k) = sum_n x_n x*_{n+k}.
CorrelationSeq aacf(std::span<const cdouble> x);

/// Periodic autocorrelation phi(k) = sum_n x_n x*_{(n+k) mod N}.
CorrelationSeq pacf(std::span<const cdouble> x);

/// Exact aperiodic autocorrelation of a Gaussian-integer sequence,
/// lags 0..N-1.
std::vector<GaussInt> aacf_exact(std::span<const GaussInt> x);

/// Map Z_q values onto the unit circle, exp(j 2 pi v / q).
std::vector<cdouble> unit_circle(const ZqSequence& s);

/// Same map restricted to q in {2, 4}, where the image lies in Z[j].
std::vector<GaussInt> unit_circle_exact(const ZqSequence& s);

/// max_{k != 0} |rho_a(k) + rho_b(k)| over the unit-circle images.
/// Exactly 0 certifies a Golay complementary pair; integer arithmetic is
/// used for q in {2, 4}.
double gcp_defect(const GcpPair& pair);

/// The excluded k = 0 term, i.e. the combined pair energy 2N.
double pair_energy(const GcpPair& pair);

/// Differential encoding of a binary sequence C: the doubled block
/// [C, C] is mapped to I_m = (2C~_m - 1)(2C~_{m-1} - 1) with C~_{-1} = 1.
CpmSymbols diff_encode(const ZqSequence& c);

/// Pseudo-symbols gamma_n = exp(j pi h sum_{m<=n} I_m). Only h = 1/2 is
/// supported; the values then stay on the quarter-turn grid.
PseudoSymbols pseudo_symbols(const CpmSymbols& i, Rational h = {1, 2});

/// Closed form of the pseudo-symbols of diff_encode(C):
///   gamma_n = j^{n+3} (-1)^{C_n}            for 0 <= n < N,
///   gamma_n = j^{n-N+3} (-1)^{C_{n-N}} j^N  for N <= n < 2N.
/// The two halves coincide exactly when N = 0 mod 4.
PseudoSymbols pseudo_symbols_closed(const ZqSequence& c);

/// Lift a binary Davis-Jedwab spec to the quaternary pair whose unit-circle
/// image equals the first-half pseudo-symbols of the encoded sequences.
GcpPair quaternary_lift(const GbfSpec& spec);

std::string format_sequence(const ZqSequence& s);
ZqSequence parse_sequence(std::string_view text, int modulus);

}  // namespace cpmtrain
