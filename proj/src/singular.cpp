#include "psl/singular.hpp"

#include "psl/params.hpp"
#include "psl/util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psl {

namespace {

// Prime factorization of small q by trial division: (p, e) pairs, ascending.
std::vector<std::pair<std::int64_t, int>> trial_factor(std::int64_t q) {
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= q; p += (p == 2 ? 1 : 2))
        if (q % p == 0) {
            int e = 0;
            while (q % p == 0) { q /= p; ++e; }
            out.emplace_back(p, e);
        }
    if (q > 1) out.emplace_back(q, 1);
    return out;
}

// s(p, n) for odd prime p in closed form.  Writing g for the quadratic
// Gauss sum mod p (g^2 = (-1|p) p) and expanding S(chi0, a) = (a|p) g - 1:
//
//   s(p,n) = [ (-n|p) g^2 (g^2 + 3) - (3 g^2 + 1) c_p(n) ] / (p-1)^3,
//
// with the Ramanujan sum c_p(n) = p-1 if p | n, -1 otherwise, and the
// (-n|p) term absent when p | n.
double s_odd_prime(std::int64_t p, std::int64_t n) {
    double g2 = static_cast<double>(legendre(p - 1, p)) * static_cast<double>(p);
    double phi3 = std::pow(static_cast<double>(p - 1), 3.0);
    std::int64_t nr = n % p;
    if (nr < 0) nr += p;
    if (nr == 0) return -(3.0 * g2 + 1.0) * static_cast<double>(p - 1) / phi3;
    double chi_mn = static_cast<double>(legendre(p - nr, p));
    return (chi_mn * g2 * (g2 + 3.0) + (3.0 * g2 + 1.0)) / phi3;
}

bool is_odd_prime(std::int64_t p) {
    if (p < 3 || p % 2 == 0) return false;
    for (std::int64_t d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

LocalFactorTable::LocalFactorTable(std::int64_t q) : q_(q) {
    if (q < 1) throw std::invalid_argument("LocalFactorTable: q must be >= 1");
    unit_.assign(static_cast<std::size_t>(q), 0);
    root_.resize(static_cast<std::size_t>(q));
    S_.assign(static_cast<std::size_t>(q), {0.0, 0.0});
    phi_ = 0;
    std::vector<std::int32_t> sq_count(static_cast<std::size_t>(q), 0);
    for (std::int64_t a = 0; a < q; ++a) {
        root_[static_cast<std::size_t>(a)] =
            unit_e(static_cast<double>(a) / static_cast<double>(q));
        if (gcd64(a == 0 ? q : a, q) == 1) {
            unit_[static_cast<std::size_t>(a)] = 1;
            ++phi_;
            ++sq_count[static_cast<std::size_t>(a * a % q)];
        }
    }
    for (std::int64_t a = 0; a < q; ++a) {
        if (!unit_[static_cast<std::size_t>(a)]) continue;
        KahanComplex acc;
        for (std::int64_t r = 0; r < q; ++r)
            if (sq_count[static_cast<std::size_t>(r)] != 0)
                acc.add(static_cast<double>(sq_count[static_cast<std::size_t>(r)]) *
                        root_[static_cast<std::size_t>(a * r % q)]);
        S_[static_cast<std::size_t>(a)] = acc.value();
    }
}

std::complex<double> LocalFactorTable::S(std::int64_t a) const {
    a %= q_;
    if (a < 0) a += q_;
    if (unit_[static_cast<std::size_t>(a)]) return S_[static_cast<std::size_t>(a)];
    // Non-unit shift: fall back to direct summation over units.
    KahanComplex acc;
    for (std::int64_t h = 0; h < q_; ++h)
        if (unit_[static_cast<std::size_t>(h)])
            acc.add(root_[static_cast<std::size_t>(a * (h * h % q_) % q_)]);
    return acc.value();
}

double LocalFactorTable::s(std::int64_t n) const {
    if (q_ == 1) return 1.0;
    std::int64_t nr = n % q_;
    if (nr < 0) nr += q_;
    KahanComplex acc;
    for (std::int64_t a = 0; a < q_; ++a) {
        if (!unit_[static_cast<std::size_t>(a)]) continue;
        std::complex<double> Sa = S_[static_cast<std::size_t>(a)];
        acc.add(Sa * Sa * Sa * root_[static_cast<std::size_t>((q_ - a * nr % q_) % q_)]);
    }
    double phi3 = static_cast<double>(phi_) * static_cast<double>(phi_) *
                  static_cast<double>(phi_);
    std::complex<double> v = acc.value() / phi3;
    if (std::abs(v.imag()) > 1e-9 * static_cast<double>(q_))
        throw std::runtime_error("LocalFactorTable: local factor not real");
    return v.real();
}

double s_qn(std::int64_t q, std::int64_t n) { return LocalFactorTable(q).s(n); }

double s_qn_closed(std::int64_t q, std::int64_t n) {
    double out = 1.0;
    for (auto [p, e] : trial_factor(q)) {
        if (p == 2) {
            if (e >= 4) return 0.0;
            std::int64_t pe = std::int64_t{1} << e;
            out *= LocalFactorTable(pe).s(n);
        } else {
            if (e >= 2) return 0.0;
            out *= s_odd_prime(p, n);
        }
    }
    return out;
}

GammaResult gamma_pn(std::int64_t p, std::int64_t n) {
    if (!is_odd_prime(p))
        throw std::invalid_argument("gamma_pn: p must be an odd prime");
    std::int64_t nr = n % p;
    if (nr < 0) nr += p;
    double s = s_odd_prime(p, n);
    if (nr == 0) return {s, false};
    double main_term = static_cast<double>(legendre(p - nr, p)) *
                       static_cast<double>(p) * static_cast<double>(p) /
                       std::pow(static_cast<double>(p - 1), 3.0);
    return {s - main_term, true};
}

double S3_truncated(std::int64_t n, double Qcap, bool full) {
    if (Qcap < 1.0) throw std::invalid_argument("S3_truncated: Qcap must be >= 1");
    std::int64_t qmax = static_cast<std::int64_t>(Qcap);
    KahanSum acc;
    for (std::int64_t q = 1; q <= qmax; ++q) {
        if (full) {
            acc.add(LocalFactorTable(q).s(n));
            continue;
        }
        auto fac = trial_factor(q);
        bool admissible = true;
        double prod = 1.0;
        for (auto [p, e] : fac) {
            if ((p == 2 && e >= 4) || (p != 2 && e >= 2)) { admissible = false; break; }
            prod *= p == 2 ? LocalFactorTable(std::int64_t{1} << e).s(n)
                           : s_odd_prime(p, n);
        }
        if (admissible) acc.add(prod);
    }
    return acc.value();
}

double Pi_product(std::int64_t n, double Qcap) {
    if (Qcap < 3.0) throw std::invalid_argument("Pi_product: Qcap must be >= 3");
    if (!in_A3(n)) return 0.0;
    std::int64_t pmax = static_cast<std::int64_t>(Qcap);
    std::vector<char> comp(static_cast<std::size_t>(pmax + 1), 0);
    double out = 8.0;
    for (std::int64_t p = 2; p <= pmax; ++p) {
        if (comp[static_cast<std::size_t>(p)]) continue;
        for (std::int64_t m = p * p; m <= pmax; m += p) comp[static_cast<std::size_t>(m)] = 1;
        if (p >= 3) out *= 1.0 + s_odd_prime(p, n);
    }
    return out;
}

namespace {

// S(chi, c) = sum_h conj(chi)(h) e_q(c h^2) through the Gauss-sum expansion
//   S(chi, c) = sum_{eta: eta^2 = conj(chi)} tau_c(eta).
// The sum is empty exactly when conj(chi) is nontrivial on the 2-torsion,
// in which case S vanishes as well, so the identity holds unconditionally.
std::complex<double> quad_gauss_expanded(const CharacterGroup& g,
                                         const DirichletCharacter& chi,
                                         std::int64_t c) {
    std::complex<double> out = 0.0;
    for (const DirichletCharacter& eta : g.square_roots(chi.conj()))
        out += gauss_tau(eta, c);
    return out;
}

}  // namespace

std::complex<double> B_sum(const CharacterGroup& g, const BVector& b,
                           const DirichletCharacter& chi1,
                           const DirichletCharacter& chi2,
                           const DirichletCharacter& chi3,
                           bool gauss_expansion) {
    if (chi1.group != &g || chi2.group != &g || chi3.group != &g)
        throw std::invalid_argument("B_sum: characters must share the modulus");
    std::int64_t q = g.modulus();
    auto S = [&](const DirichletCharacter& chi, std::int64_t c) {
        return gauss_expansion ? quad_gauss_expanded(g, chi, c) : quad_gauss(chi, c);
    };
    auto red = [q](std::int64_t x) {
        x %= q;
        return x < 0 ? x + q : x;
    };
    KahanComplex acc;
    for (std::int64_t a = 1; a <= q; ++a) {
        if (gcd64(a, q) != 1) continue;
        std::complex<double> term = S(chi1, red(a * red(b.b1))) *
                                    S(chi2, red(a * red(b.b2))) *
                                    S(chi3, red(a * red(b.b3)));
        acc.add(term * unit_e(static_cast<double>(red(-a * red(b.b4))) /
                              static_cast<double>(q)));
    }
    double phi3 = std::pow(static_cast<double>(g.phi()), 3.0);
    return acc.value() / phi3;
}

SeriesComparisonReport compare_series(std::int64_t n_lo, std::int64_t n_hi,
                                      double Qcap, double threshold) {
    if (n_lo > n_hi) throw std::invalid_argument("compare_series: empty range");
    SeriesComparisonReport rep;
    rep.Qcap = Qcap;
    rep.threshold = threshold;
    rep.exceed_count = 0;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        if (!in_A3(n)) continue;
        double S3 = S3_truncated(n, Qcap);
        double Pi = Pi_product(n, Qcap);
        double diff = std::abs(S3 - Pi);
        rep.rows.push_back({n, S3, Pi, diff});
        if (diff > threshold) ++rep.exceed_count;
    }
    rep.median_diff = 0.0;
    rep.max_diff = 0.0;
    if (!rep.rows.empty()) {
        std::vector<double> diffs;
        diffs.reserve(rep.rows.size());
        for (const auto& r : rep.rows) diffs.push_back(r.diff);
        std::nth_element(diffs.begin(), diffs.begin() + diffs.size() / 2, diffs.end());
        rep.median_diff = diffs[diffs.size() / 2];
        rep.max_diff = *std::max_element(diffs.begin(), diffs.end());
    }
    return rep;
}

}  // namespace psl
