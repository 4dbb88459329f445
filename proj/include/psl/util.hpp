#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace psl {

// Kahan-compensated accumulator.  The character/Gauss-sum code adds up to
// ~10^6 unit-modulus terms and expects exact-zero assertions at 1e-9*q, so
// plain summation is not good enough.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

struct KahanComplex {
    KahanSum re, im;

    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

// frac(a * n) for integer n up to ~2^62, accurate to a few ulp even when
// a*n is ~1e12 and a naive product would lose 4-5 digits of the fractional
// part.  Splits the product with an FMA so the rounding error of each part
// is recovered before reduction mod 1.
inline double frac_mul(double a, std::int64_t n) {
    double nd = static_cast<double>(n);
    double hi = a * nd;
    double lo = std::fma(a, nd, -hi);  // exact residual of the product
    double f = std::fmod(hi, 1.0) + std::fmod(lo, 1.0);
    f = std::fmod(f, 1.0);
    if (f < 0.0) f += 1.0;
    return f;
}

// e(x) = exp(2*pi*i*x)
inline std::complex<double> unit_e(double x) {
    double t = 2.0 * M_PI * x;
    return {std::cos(t), std::sin(t)};
}

// e(a*n) with the reduced-argument product above.
inline std::complex<double> unit_e_mul(double a, std::int64_t n) {
    return unit_e(frac_mul(a, n));
}

inline std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
    __int128 r = 1, x = b % m;
    if (x < 0) x += m;
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

// Legendre symbol (a/p) for odd prime p.
inline int legendre(std::int64_t a, std::int64_t p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    std::int64_t r = powmod(a, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

// Number-of-divisors function for small arguments.
inline std::int64_t tau(std::int64_t n) {
    std::int64_t cnt = 1;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            cnt *= e + 1;
        }
    }
    if (n > 1) cnt *= 2;
    return cnt;
}

// Halton low-discrepancy sequence, one value per (index, base).
inline double halton(std::uint64_t index, unsigned base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

}  // namespace psl
