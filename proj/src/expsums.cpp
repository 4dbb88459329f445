#include "psl/expsums.hpp"

#include "psl/util.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <stdexcept>

namespace psl {

ExpWeight make_weight(std::vector<std::int64_t> support,
                      std::vector<double> values) {
    if (support.size() != values.size())
        throw std::invalid_argument("make_weight: support/value size mismatch");
    ExpWeight w;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] < 1 || (i > 0 && support[i] <= support[i - 1]))
            throw std::invalid_argument(
                "make_weight: support must be positive and strictly increasing");
        if (!std::isfinite(values[i]))
            throw std::invalid_argument("make_weight: non-finite value");
        w.l1 += std::abs(values[i]);
    }
    w.support = std::move(support);
    w.values = std::move(values);
    return w;
}

ExpWeight rho_weight(const SieveParams& sp,
                     const std::vector<DecompositionTerm>& terms,
                     const FactorTable& ft) {
    std::vector<std::int64_t> support;
    std::vector<double> values;
    for (std::int64_t m = sp.interval_lo; m < sp.interval_hi; ++m) {
        std::int64_t v = eval_weight(terms, m, ft, sp);
        if (v != 0) {
            support.push_back(m);
            values.push_back(static_cast<double>(v));
        }
    }
    return make_weight(std::move(support), std::move(values));
}

ExpWeight prime_indicator_weight(const SieveParams& sp, const PrimeTable& pt) {
    std::vector<std::int64_t> support;
    for (std::int64_t m : pt.primes_in(sp.interval_lo, sp.interval_hi - 1))
        support.push_back(m);
    std::vector<double> values(support.size(), 1.0);
    return make_weight(std::move(support), std::move(values));
}

std::complex<double> eval_f(const ExpWeight& w, double alpha) {
    KahanComplex acc;
    for (std::size_t i = 0; i < w.support.size(); ++i)
        acc.add(w.values[i] * unit_e_mul(alpha, w.support[i] * w.support[i]));
    return acc.value();
}

RationalApprox best_approx(double alpha, double qmax, double tol, bool strict) {
    RationalApprox out;
    // Convergent recurrences h_k = a_k h_{k-1} + h_{k-2}, same for k.
    std::int64_t h1 = 1, h2 = 0, k1 = 0, k2 = 1;
    double x = alpha;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(x);
        if (fl > 4e18) break;
        std::int64_t ai = static_cast<std::int64_t>(fl);
        std::int64_t h = ai * h1 + h2;
        std::int64_t k = ai * k1 + k2;
        if (static_cast<double>(k) > qmax) break;
        double err = std::abs(static_cast<double>(k) * alpha -
                              static_cast<double>(h));
        if (strict ? err < tol : err <= tol) {
            out.found = true;
            out.q = k;
            out.a = h;
            out.err = err;
            return out;
        }
        h2 = h1; h1 = h;
        k2 = k1; k1 = k;
        double frac = x - fl;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    return out;
}

namespace {

void check_disjointness(const SieveParams& sp) {
    // At most one admissible (q, a) per alpha: 2 Q omega < 1/Q.
    assert(2.0 * sp.Q * sp.omega < 1.0 / sp.Q);
    (void)sp;
}

}  // namespace

int theta(std::int64_t m, double alpha, const SieveParams& sp) {
    check_disjointness(sp);
    RationalApprox r = best_approx(alpha, sp.Q, sp.omega, /*strict=*/true);
    if (!r.found) return 1;
    return static_cast<double>(gcd64(m, r.q)) >= sp.p_sigma() ? 0 : 1;
}

std::complex<double> eval_g(const ExpWeight& w, double alpha,
                            const SieveParams& sp) {
    check_disjointness(sp);
    RationalApprox r = best_approx(alpha, sp.Q, sp.omega, /*strict=*/true);
    if (!r.found) return eval_f(w, alpha);  // theta = 1 everywhere
    const double ps = sp.p_sigma();
    KahanComplex acc;
    for (std::size_t i = 0; i < w.support.size(); ++i) {
        if (static_cast<double>(gcd64(w.support[i], r.q)) >= ps) continue;
        acc.add(w.values[i] * unit_e_mul(alpha, w.support[i] * w.support[i]));
    }
    return acc.value();
}

ArcLabel classify_arc(double alpha, const SieveParams& sp) {
    check_disjointness(sp);
    if (alpha < sp.omega || alpha >= 1.0 + sp.omega)
        throw std::domain_error("classify_arc: alpha outside [omega, 1 + omega)");
    RationalApprox r = best_approx(alpha, sp.Q, sp.omega, /*strict=*/false);
    ArcLabel out;
    if (r.found && r.a >= 1 && r.a <= r.q) {
        out.major = true;
        out.q = r.q;
        out.a = r.a;
        out.beta = alpha - static_cast<double>(r.a) / static_cast<double>(r.q);
    }
    return out;
}

std::complex<double> f1_star(double alpha, std::int64_t q, std::int64_t a,
                             const SieveParams& sp) {
    if (q < 1 || gcd64(a, q) != 1)
        throw std::invalid_argument("f1_star: need gcd(a, q) = 1, q >= 1");
    // S(chi0, a) = sum over units h mod q of e_q(a h^2).
    KahanComplex Sacc;
    std::int64_t phi = 0;
    for (std::int64_t h = 1; h <= q; ++h) {
        if (gcd64(h, q) != 1) continue;
        ++phi;
        Sacc.add(unit_e(static_cast<double>(a % q * (h * h % q) % q) /
                        static_cast<double>(q)));
    }
    const double beta = alpha - static_cast<double>(a) / static_cast<double>(q);
    KahanComplex sum;
    for (std::int64_t m = sp.interval_lo; m < sp.interval_hi; ++m)
        sum.add(unit_e_mul(beta, m * m) / std::log(static_cast<double>(m)));
    return Sacc.value() / static_cast<double>(phi) * sum.value();
}

namespace {

// Sparse square-axis pair spectrum: sorted (s, weight) with s = m1^2 + m2^2.
std::vector<std::pair<std::int64_t, double>> pair_spectrum(const ExpWeight& A,
                                                           const ExpWeight& B,
                                                           std::int64_t cap) {
    if (A.support.size() * B.support.size() > 300'000'000ull)
        throw std::length_error("pair spectrum: capacity exceeded");
    std::vector<std::pair<std::int64_t, double>> pairs;
    pairs.reserve(A.support.size() * B.support.size());
    for (std::size_t i = 0; i < A.support.size(); ++i) {
        std::int64_t s1 = A.support[i] * A.support[i];
        if (s1 > cap) break;
        for (std::size_t j = 0; j < B.support.size(); ++j) {
            std::int64_t s = s1 + B.support[j] * B.support[j];
            if (s > cap) break;
            pairs.emplace_back(s, A.values[i] * B.values[j]);
        }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    // Merge equal s.
    std::size_t out = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (out > 0 && pairs[out - 1].first == pairs[i].first)
            pairs[out - 1].second += pairs[i].second;
        else
            pairs[out++] = pairs[i];
    }
    pairs.resize(out);
    return pairs;
}

}  // namespace

std::vector<double> convolution_counts(const ExpWeight& A, const ExpWeight& B,
                                       const ExpWeight& C, std::int64_t Nmax) {
    if (Nmax < 0) throw std::invalid_argument("convolution_counts: Nmax < 0");
    auto ab = pair_spectrum(A, B, Nmax);
    std::vector<double> r(static_cast<std::size_t>(Nmax) + 1, 0.0);
    for (const auto& [s, wgt] : ab)
        for (std::size_t k = 0; k < C.support.size(); ++k) {
            std::int64_t n = s + C.support[k] * C.support[k];
            if (n > Nmax) break;
            r[static_cast<std::size_t>(n)] += wgt * C.values[k];
        }
    return r;
}

double hua_moment(const ExpWeight& w) {
    std::int64_t mmax = w.support.empty() ? 0 : w.support.back();
    auto c = pair_spectrum(w, w, 2 * mmax * mmax);
    KahanSum acc;
    for (const auto& [s, wgt] : c) acc.add(wgt * wgt);
    return acc.value();
}

double second_moment(const ExpWeight& w) {
    // c(s) over the single-square axis, then sum of c(s)^2.  The squares are
    // distinct so this equals sum rho(m)^2, but it is computed through the
    // spectrum route so the Parseval test genuinely cross-checks it.
    std::vector<std::pair<std::int64_t, double>> c;
    c.reserve(w.support.size());
    for (std::size_t i = 0; i < w.support.size(); ++i)
        c.emplace_back(w.support[i] * w.support[i], w.values[i]);
    std::sort(c.begin(), c.end());
    KahanSum acc;
    for (std::size_t i = 0; i < c.size();) {
        double tot = 0.0;
        std::size_t j = i;
        while (j < c.size() && c[j].first == c[i].first) tot += c[j++].second;
        acc.add(tot * tot);
        i = j;
    }
    return acc.value();
}

namespace {

double abs4(std::complex<double> z) {
    double a = std::norm(z);
    return a * a;
}

}  // namespace

GMoment g_fourth_moment(const ExpWeight& w, const SieveParams& sp,
                        std::int64_t minor_samples, std::uint64_t seed) {
    check_disjointness(sp);
    GMoment out;
    // Major arcs: composite Simpson per arc, refined once for an error gauge.
    const std::int64_t qmax = static_cast<std::int64_t>(sp.Q);
    double major_total = 0.0, major_err = 0.0, major_len = 0.0;
    auto simpson = [&](double lo, double hi, int panels) {
        double h = (hi - lo) / (2.0 * panels);
        double acc = abs4(eval_g(w, lo, sp)) + abs4(eval_g(w, hi, sp));
        for (int i = 1; i < 2 * panels; ++i)
            acc += abs4(eval_g(w, lo + h * i, sp)) * (i % 2 ? 4.0 : 2.0);
        return acc * h / 3.0;
    };
    for (std::int64_t q = 1; q <= qmax; ++q)
        for (std::int64_t a = 1; a <= q; ++a) {
            if (gcd64(a, q) != 1) continue;
            double center = static_cast<double>(a) / static_cast<double>(q);
            double half = sp.omega / static_cast<double>(q);
            double coarse = simpson(center - half, center + half, 16);
            double fine = simpson(center - half, center + half, 32);
            major_total += fine;
            major_err += std::abs(fine - coarse);
            major_len += 2.0 * half;
        }
    // Minor set: Monte Carlo (g = f there, but evaluated through eval_g).
    double minor_len = 1.0 - major_len;
    double mean = 0.0, m2 = 0.0;
    std::int64_t kept = 0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(sp.omega, 1.0 + sp.omega);
    for (std::int64_t i = 0; i < minor_samples; ++i) {
        double alpha = unif(rng);
        if (classify_arc(alpha, sp).major) continue;
        double v = abs4(eval_g(w, alpha, sp));
        ++kept;
        double d = v - mean;
        mean += d / static_cast<double>(kept);
        m2 += d * (v - mean);
    }
    double se = 0.0;
    if (kept > 1)
        se = std::sqrt(m2 / static_cast<double>(kept - 1) /
                       static_cast<double>(kept)) *
             minor_len;
    out.value = major_total + mean * minor_len;
    out.error = major_err + 3.0 * se;
    return out;
}

double major_arc_measure(const SieveParams& sp) {
    const std::int64_t qmax = static_cast<std::int64_t>(sp.Q);
    KahanSum acc;
    for (std::int64_t q = 1; q <= qmax; ++q) {
        std::int64_t phi = 0;
        for (std::int64_t a = 1; a <= q; ++a)
            if (gcd64(a, q) == 1) ++phi;
        acc.add(static_cast<double>(phi) * 2.0 * sp.omega /
                static_cast<double>(q));
    }
    return acc.value();
}

MeasureEstimate major_arc_measure_mc(const SieveParams& sp,
                                     std::int64_t samples,
                                     std::uint64_t seed) {
    // Plain uniform hit counting over the shifted interval; the arcs are tiny
    // so the caller should budget enough samples for a few hundred hits.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(sp.omega, 1.0 + sp.omega);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < samples; ++i)
        if (classify_arc(unif(rng), sp).major) ++hits;
    double p = static_cast<double>(hits) / static_cast<double>(samples);
    MeasureEstimate out;
    out.estimate = p;
    out.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return out;
}

SurveyStats minor_survey(const ExpWeight& w, const SieveParams& sp,
                         std::int64_t sample_count, std::uint64_t seed) {
    SurveyStats out;
    if (sample_count <= 0) return out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(sp.omega, 1.0 + sp.omega);
    const double scale = std::pow(static_cast<double>(sp.P),
                                  sp.sigma - 1.0 - 2.0 * sp.epsilon);
    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(sample_count));
    while (static_cast<std::int64_t>(ratios.size()) < sample_count) {
        double alpha = unif(rng);
        if (classify_arc(alpha, sp).major) continue;
        ratios.push_back(std::abs(eval_f(w, alpha)) * scale);
    }
    std::sort(ratios.begin(), ratios.end());
    out.samples = sample_count;
    out.max = ratios.back();
    auto quant = [&](double p) {
        std::size_t i = static_cast<std::size_t>(p * (ratios.size() - 1));
        return ratios[i];
    };
    out.q50 = quant(0.50);
    out.q90 = quant(0.90);
    out.q99 = quant(0.99);
    return out;
}

}  // namespace psl
