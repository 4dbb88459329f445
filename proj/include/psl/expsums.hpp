#pragma once

// Exponential sums over square arguments: f(alpha) = sum rho(m) e(alpha m^2),
// the theta cutoff and its truncated sum g, major/minor arc dissection via
// continued-fraction approximation, the major-arc model for the prime weight,
// and exact circle-integral oracles through convolution on the square axis.

#include "psl/decomposition.hpp"
#include "psl/params.hpp"
#include "psl/sieve.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace psl {

// A real weight on an increasing integer support with cached L1 mass.
struct ExpWeight {
    std::vector<std::int64_t> support;
    std::vector<double> values;
    double l1 = 0.0;
};

// Validates: support strictly increasing and positive, values finite.
ExpWeight make_weight(std::vector<std::int64_t> support,
                      std::vector<double> values);

// rho_j weight on I from a term list (one eval_weight call per m).
ExpWeight rho_weight(const SieveParams& sp,
                     const std::vector<DecompositionTerm>& terms,
                     const FactorTable& ft);

// The prime-indicator weight rho_1 on I.
ExpWeight prime_indicator_weight(const SieveParams& sp, const PrimeTable& pt);

// f(alpha) by direct compensated summation.
std::complex<double> eval_f(const ExpWeight& w, double alpha);

// Minimal-denominator rational approximation through continued-fraction
// convergents: the smallest q <= qmax with |q alpha - a| <= tol (strict <
// when strict is set).  Any fraction this close is a convergent because
// tol * qmax < 1/(2 qmax) at the parameters in use.
struct RationalApprox {
    bool found = false;
    std::int64_t q = 0, a = 0;
    double err = 0.0;
};
RationalApprox best_approx(double alpha, double qmax, double tol, bool strict);

// 1 unless there exist a, q with |q alpha - a| < omega, (a, q) = 1, q <= Q,
// and gcd(m, q) >= P^sigma, in which case 0.
int theta(std::int64_t m, double alpha, const SieveParams& sp);

// g(alpha) = sum rho(m) theta(m, alpha) e(alpha m^2).
std::complex<double> eval_g(const ExpWeight& w, double alpha,
                            const SieveParams& sp);

struct ArcLabel {
    bool major = false;
    std::int64_t q = 0, a = 0;  // gcd(a, q) = 1, 1 <= a <= q <= Q when major
    double beta = 0.0;          // alpha - a/q
};

// Dissection of the shifted unit interval [omega, 1 + omega): Major with the
// unique admissible (q, a) or Minor.  Throws std::domain_error outside the
// interval; asserts the disjointness condition 2 Q omega < 1/Q.
ArcLabel classify_arc(double alpha, const SieveParams& sp);

// Major-arc model for the prime weight: S(chi0, a)/phi(q) * sum_{m in I}
// (log m)^{-1} e((alpha - a/q) m^2).  Throws if gcd(a, q) != 1.
std::complex<double> f1_star(double alpha, std::int64_t q, std::int64_t a,
                             const SieveParams& sp);

// Exact weighted representation counts r(n) = sum over m1^2+m2^2+m3^2 = n of
// rhoA(m1) rhoB(m2) rhoC(m3) for n = 0..Nmax; equals the circle integral
// against e(-alpha n) by orthogonality.
std::vector<double> convolution_counts(const ExpWeight& A, const ExpWeight& B,
                                       const ExpWeight& C, std::int64_t Nmax);

// Exact fourth moment: integral over [0,1) of |f|^4 = sum_s c(s)^2 with
// c(s) = sum_{m1^2 + m2^2 = s} rho(m1) rho(m2).
double hua_moment(const ExpWeight& w);

// Exact second moment via the square axis; equals sum rho(m)^2 (Parseval).
double second_moment(const ExpWeight& w);

// Fourth moment of g estimated by arc-partition quadrature: per-arc composite
// Simpson on the major arcs plus Monte Carlo on the minor set; error combines
// the refinement defect and 3 standard errors.
struct GMoment {
    double value = 0.0;
    double error = 0.0;
};
GMoment g_fourth_moment(const ExpWeight& w, const SieveParams& sp,
                        std::int64_t minor_samples, std::uint64_t seed);

// Total length of the major arcs: sum over q <= Q of phi(q) * 2 omega / q.
double major_arc_measure(const SieveParams& sp);

struct MeasureEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};
MeasureEstimate major_arc_measure_mc(const SieveParams& sp,
                                     std::int64_t samples, std::uint64_t seed);

// Minor-arc magnitude survey: max and quantiles of |f(alpha)| * P^{sigma-1-2 eps}
// over uniformly sampled Minor alpha.
struct SurveyStats {
    std::int64_t samples = 0;
    double max = 0.0, q50 = 0.0, q90 = 0.0, q99 = 0.0;
};
SurveyStats minor_survey(const ExpWeight& w, const SieveParams& sp,
                         std::int64_t sample_count, std::uint64_t seed);

}  // namespace psl
