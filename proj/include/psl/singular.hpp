#pragma once

#include "psl/characters.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace psl {

// Local factor table for one modulus q.  Holds S(chi0, a) =
// sum_{(h,q)=1} e_q(a h^2) for every unit a, from which
//
//   s(q, n) = phi(q)^{-3} sum_{(a,q)=1} S(chi0,a)^3 e_q(-a n)
//
// is one O(q) pass per n.  The sum is real (a <-> q-a symmetry); a residual
// imaginary part above 1e-9 * q is a hard error, since it can only come from
// a character/indexing bug, not rounding.
class LocalFactorTable {
  public:
    explicit LocalFactorTable(std::int64_t q);

    std::int64_t modulus() const { return q_; }
    std::int64_t phi() const { return phi_; }
    std::complex<double> S(std::int64_t a) const;  // S(chi0, a), any a
    double s(std::int64_t n) const;

  private:
    std::int64_t q_;
    std::int64_t phi_;
    std::vector<char> unit_;                  // gcd(a, q) == 1
    std::vector<std::complex<double>> root_;  // e_q(k)
    std::vector<std::complex<double>> S_;     // S(chi0, a), all residues a
};

// Definitional evaluation of s(q, n) by direct summation.
double s_qn(std::int64_t q, std::int64_t n);

// Closed-form fast path: multiplicative over prime powers, with
// s(p, n) for odd p expressed through Legendre symbols and the quadratic
// Gauss sum g_p (g_p^2 = (-1|p) p), and the vanishing cases p^2 | q (p odd)
// and 16 | q short-circuited.  Must agree with s_qn; never trusted alone.
double s_qn_closed(std::int64_t q, std::int64_t n);

// gamma(p, n) from s(p, n) = (-n|p) p^2/(p-1)^3 + gamma(p, n), p odd prime
// not dividing n.  When p | n the decomposition does not apply and the raw
// local factor is returned with decomposed = false.
struct GammaResult {
    double value;
    bool decomposed;  // true: value = gamma(p,n); false: value = s(p,n)
};
GammaResult gamma_pn(std::int64_t p, std::int64_t n);

// Truncated series sum_{q <= Qcap} s(q, n).  The fast path visits only
// admissible q (odd square-free part, 2-part in {1,2,4,8}) and uses the
// closed form; full = true forces definitional summation over every q,
// used to validate the skipping for Qcap <= 500.
double S3_truncated(std::int64_t n, double Qcap, bool full = false);

// Truncated Euler product 8 prod_{3 <= p <= Qcap} (1 + s(p, n)) over primes,
// or 0 when n is not admissible for three squares.
double Pi_product(std::int64_t n, double Qcap);

// Normalized complete sum
//   B(q, b; chi1, chi2, chi3)
//     = phi(q)^{-3} sum_{(a,q)=1} S(chi1,a b1) S(chi2,a b2) S(chi3,a b3)
//                                 e_q(-a b4)
// with S(chi, c) = sum_h conj(chi)(h) e_q(c h^2).  With gauss_expansion the
// quadratic sums are expanded as S(chi, c) = sum_{psi^2 = chi0} tau_c(conj(chi) psi)
// over the 2-torsion characters psi; both paths agree to 1e-8.
std::complex<double> B_sum(const CharacterGroup& g, const BVector& b,
                           const DirichletCharacter& chi1,
                           const DirichletCharacter& chi2,
                           const DirichletCharacter& chi3,
                           bool gauss_expansion = false);

// Pointwise comparison of the truncated series against the Euler product
// over admissible n in [n_lo, n_hi].  Descriptive: the agreement claim is
// an almost-all statement, so the report carries quantiles and a count of
// n exceeding the threshold rather than a pass verdict.
struct SeriesComparisonRow {
    std::int64_t n;
    double S3;
    double Pi;
    double diff;
};
struct SeriesComparisonReport {
    double Qcap;
    double threshold;
    std::vector<SeriesComparisonRow> rows;  // admissible n only, ascending
    double median_diff;
    double max_diff;
    std::int64_t exceed_count;
};
SeriesComparisonReport compare_series(std::int64_t n_lo, std::int64_t n_hi,
                                      double Qcap, double threshold);

}  // namespace psl
