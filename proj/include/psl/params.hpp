#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace psl {

// Global sieve parameters.  Everything downstream (arc dissection, sieve
// decomposition thresholds, exponent regions) is derived from the triple
// (sigma, epsilon, P):
//
//   N = P^2,  L = log P,  Q = P^(2*sigma - 3*eps),  omega = Q * P^(eps - 2),
//   Z = P^(1-6*sigma),  Y = P^(1-5*sigma),  V = P^(2*sigma),  W = P^(1-4*sigma),
//   I = [P/3, 2P/3).
//
// The admissible window 1/7 <= sigma <= 3/20 is exactly where the threshold
// chain Z <= Y <= V <= W < sqrt(P) holds, together with Z^2 > P^sigma and
// Z^3 >= V, which the decomposition machinery relies on.
struct SieveParams {
    double sigma = 0.0;
    double epsilon = 0.0;
    std::int64_t P = 0;

    std::int64_t N = 0;       // P^2
    double L = 0.0;           // log P
    double Q = 0.0;           // major-arc denominator cap
    double omega = 0.0;       // major-arc half-width scale
    double Z = 0.0, Y = 0.0, V = 0.0, W = 0.0;
    double sqrtP = 0.0;
    std::int64_t interval_lo = 0;  // ceil(P/3)
    std::int64_t interval_hi = 0;  // floor(2P/3)

    bool in_interval(std::int64_t m) const {
        return m >= interval_lo && m < interval_hi;
    }
    double p_sigma() const { return std::pow(static_cast<double>(P), sigma); }
};

class ParamDomainError : public std::domain_error {
  public:
    explicit ParamDomainError(const std::string& what) : std::domain_error(what) {}
};

SieveParams derive_params(double sigma, double epsilon, std::int64_t P);

// Membership predicates for the admissible residue classes.
// A3: n = 3 (mod 24) and n != 0 (mod 5).   A4: n = 4 (mod 24).
bool in_A3(std::int64_t n);
bool in_A4(std::int64_t n);

}  // namespace psl
