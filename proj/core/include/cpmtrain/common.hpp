#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpmtrain {

using cdouble = std::complex<double>;

/// Rational modulation index h = num/den.
struct Rational {
    int num = 1;
    int den = 2;

    double value() const { return static_cast<double>(num) / den; }
    bool operator==(const Rational&) const = default;
};

/// Gaussian integer a + b*j. Correlation sums over {1, j, -1, -j} and
/// over bipolar values stay in Z[j], so zero-sidelobe claims can be
/// certified with integer arithmetic instead of floating point.
struct GaussInt {
    long long re = 0;
    long long im = 0;

    bool operator==(const GaussInt&) const = default;

    GaussInt operator+(const GaussInt& o) const { return {re + o.re, im + o.im}; }
    GaussInt operator-(const GaussInt& o) const { return {re - o.re, im - o.im}; }
    GaussInt operator*(const GaussInt& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussInt conj() const { return {re, -im}; }
    long long norm2() const { return re * re + im * im; }
    bool is_zero() const { return re == 0 && im == 0; }
    cdouble to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

/// j^e for integer e (any sign).
inline GaussInt gauss_unit(long long e) {
    switch (((e % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
    }
}

/// Modulator symbols, binary alphabet {-1, +1}.
struct CpmSymbols {
    std::vector<int> values;

    std::size_t size() const { return values.size(); }
};

/// Raised when no tail pattern of the requested length can cancel the
/// accumulated phase residue (parity obstruction).
struct TailUnreachableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cpmtrain
