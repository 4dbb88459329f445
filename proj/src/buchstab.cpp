#include "psl/buchstab.hpp"

#include "psl/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace psl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

BuchstabSolver::BuchstabSolver(double h, double u_max) : h_(h), u_max_(u_max) {
    if (!(h > 0.0 && h <= 1e-2))
        throw std::invalid_argument("BuchstabSolver: step must be in (0, 1e-2]");
    if (u_max < 3.0) throw std::invalid_argument("BuchstabSolver: u_max must be >= 3");
    // Steps per unit; the delayed argument u - 1 then lands on the grid.
    auto per_unit = static_cast<std::int64_t>(std::llround(1.0 / h));
    if (std::abs(per_unit * h - 1.0) > 1e-12)
        throw std::invalid_argument("BuchstabSolver: step must divide 1");
    auto K = static_cast<std::int64_t>(std::ceil((u_max - 1.0) / h - 1e-9));
    F_.assign(static_cast<std::size_t>(K + 1), 1.0);  // F = u w(u) = 1 on [1, 2]
    // March F'(u) = w(u - 1) = F(u - 1)/(u - 1) with the trapezoid rule.
    auto g = [&](std::int64_t k) {
        double um1 = 1.0 + static_cast<double>(k - per_unit) * h;
        return F_[static_cast<std::size_t>(k - per_unit)] / um1;
    };
    for (std::int64_t k = per_unit + 1; k <= K; ++k)
        F_[static_cast<std::size_t>(k)] =
            F_[static_cast<std::size_t>(k - 1)] + h / 2.0 * (g(k - 1) + g(k));
}

double BuchstabSolver::w(double u) const {
    if (!(u > 1.0)) throw std::domain_error("BuchstabSolver: w undefined for u <= 1");
    if (u > u_max_) throw std::domain_error("BuchstabSolver: u above u_max");
    if (u <= 2.0) return 1.0 / u;
    double t = (u - 1.0) / h_;
    auto k = static_cast<std::size_t>(t);
    if (k + 1 >= F_.size()) return F_.back() / u;
    double frac = t - static_cast<double>(k);
    double F = F_[k] * (1.0 - frac) + F_[k + 1] * frac;
    return F / u;
}

bool region_contains(const ExponentRegion& r, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != r.dim)
        throw std::invalid_argument("region_contains: dimension mismatch");
    for (int i = 0; i < r.dim; ++i)
        if (x[static_cast<std::size_t>(i)] < r.box_lo[static_cast<std::size_t>(i)] ||
            x[static_cast<std::size_t>(i)] > r.box_hi[static_cast<std::size_t>(i)])
            return false;
    if (r.descending)
        for (int i = 1; i < r.dim; ++i)
            if (!(x[static_cast<std::size_t>(i)] < x[static_cast<std::size_t>(i - 1)]))
                return false;
    for (const WindowConstraint& wc : r.windows) {
        double s = 0.0;
        for (int i = 0; i < r.dim; ++i)
            if (wc.mask >> i & 1u) s += x[static_cast<std::size_t>(i)];
        bool inside = wc.lo <= s && s <= wc.hi;
        if (inside != wc.keep_inside) return false;
    }
    return true;
}

namespace {

using Interval = std::pair<double, double>;

// Admissible interval union for variable `level` given x[0..level-1]:
// box and ordering bounds, then every window whose highest variable is
// `level` (all other members already fixed) clips or cuts the range.
std::vector<Interval> admissible_intervals(const ExponentRegion& r, int level,
                                           const std::array<double, 4>& x) {
    double lo = r.box_lo[static_cast<std::size_t>(level)];
    double hi = r.box_hi[static_cast<std::size_t>(level)];
    if (r.descending && level > 0) hi = std::min(hi, x[static_cast<std::size_t>(level - 1)]);
    std::vector<Interval> cuts;
    for (const WindowConstraint& wc : r.windows) {
        if (!(wc.mask >> level & 1u) || wc.mask >> (level + 1) != 0u) continue;
        double s = 0.0;
        for (int j = 0; j < level; ++j)
            if (wc.mask >> j & 1u) s += x[static_cast<std::size_t>(j)];
        if (wc.keep_inside) {
            lo = std::max(lo, wc.lo - s);
            hi = std::min(hi, wc.hi - s);
        } else {
            cuts.emplace_back(wc.lo - s, wc.hi - s);
        }
    }
    if (!(lo < hi)) return {};
    std::sort(cuts.begin(), cuts.end());
    std::vector<Interval> out;
    double cur = lo;
    for (const auto& [a, b] : cuts) {
        if (b <= cur) continue;
        if (a >= hi) break;
        if (a > cur) out.emplace_back(cur, std::min(a, hi));
        cur = std::max(cur, b);
        if (cur >= hi) break;
    }
    if (cur < hi) out.emplace_back(cur, hi);
    return out;
}

double integrand_value(const ExponentRegion& r, IntegrandId id,
                       const BuchstabSolver& solver, const std::array<double, 4>& x) {
    if (id == IntegrandId::kReciprocalCofactor) {
        double c = 1.0 - x[0] - x[1];
        if (c <= 0.0) return 0.0;
        return 1.0 / (x[0] * x[1] * c);
    }
    double s = 0.0;
    for (int i = 0; i < r.dim; ++i) s += x[static_cast<std::size_t>(i)];
    double last = x[static_cast<std::size_t>(r.dim - 1)];
    double u = (1.0 - s) / last;
    double denom = last * last;
    for (int i = 0; i + 1 < r.dim; ++i) denom *= x[static_cast<std::size_t>(i)];
    return solver.w_extended(u) / denom;
}

// For the Buchstab-weighted integrand the innermost variable crosses the
// kinks of w (u integral, including the jump at u = 1) at t = (1-s)/(k+1);
// split the panels there so each piece is smooth.
std::vector<Interval> split_at_kinks(std::vector<Interval> ivs, IntegrandId id,
                                     double s_fixed_plus_none, double u_max) {
    if (id != IntegrandId::kBuchstabLastVar) return ivs;
    double rem = 1.0 - s_fixed_plus_none;
    if (rem <= 0.0) return ivs;
    std::vector<double> bps;
    for (int k = 0; k <= static_cast<int>(u_max) + 1; ++k)
        bps.push_back(rem / static_cast<double>(k + 1));
    std::vector<Interval> out;
    for (const auto& [a, b] : ivs) {
        double cur = a;
        std::vector<double> inside;
        for (double t : bps)
            if (t > a + 1e-15 && t < b - 1e-15) inside.push_back(t);
        std::sort(inside.begin(), inside.end());
        for (double t : inside) {
            out.emplace_back(cur, t);
            cur = t;
        }
        out.emplace_back(cur, b);
    }
    return out;
}

// 24-point Gauss-Legendre rule on [-1, 1], nodes by Newton iteration.
struct GaussRule {
    std::array<double, 24> x{}, w{};
};
const GaussRule& gl24() {
    static const GaussRule rule = [] {
        GaussRule g;
        const int n = 24;
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(n) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            g.x[static_cast<std::size_t>(i)] = t;
            g.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        return g;
    }();
    return rule;
}

// Shared state for the nested adaptive pass.
struct NestedAdaptive {
    const ExponentRegion& r;
    IntegrandId id;
    const BuchstabSolver& solver;
    const QuadratureOptions& opt;
    std::array<double, 4> x{};
    long long evals = 0;
    double err_acc = 0.0;
    bool ok = true;
    std::array<double, 4> level_tol{};

    NestedAdaptive(const ExponentRegion& r_, IntegrandId id_,
                   const BuchstabSolver& solver_, const QuadratureOptions& opt_)
        : r(r_), id(id_), solver(solver_), opt(opt_) {
        for (int i = 0; i < r.dim; ++i)
            level_tol[static_cast<std::size_t>(i)] = opt.tol * std::pow(0.3, i);
    }

    double f_at(int level, double t) {
        x[static_cast<std::size_t>(level)] = t;
        if (level == r.dim - 1) {
            ++evals;
            return integrand_value(r, id, solver, x);
        }
        return level_integral(level + 1);
    }

    double level_integral(int level) {
        std::vector<Interval> ivs = admissible_intervals(r, level, x);
        if (ivs.empty()) return 0.0;
        if (level == r.dim - 1) {
            double s = 0.0;
            for (int j = 0; j < level; ++j) s += x[static_cast<std::size_t>(j)];
            ivs = split_at_kinks(std::move(ivs), id, s, solver.u_max());
        }
        double total_len = 0.0;
        for (const auto& [a, b] : ivs) total_len += b - a;
        double tol = level_tol[static_cast<std::size_t>(level)];
        KahanSum acc;
        for (const auto& [a, b] : ivs) {
            double t = tol * std::max((b - a) / total_len, 1e-3);
            acc.add(adaptive_simpson(level, a, b, t));
        }
        return acc.value();
    }

    double adaptive_simpson(int level, double a, double b, double tol) {
        double m = 0.5 * (a + b);
        double fa = f_at(level, a), fm = f_at(level, m), fb = f_at(level, b);
        double S = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return simpson_rec(level, a, fa, m, fm, b, fb, S, tol, 20);
    }

    double simpson_rec(int level, double a, double fa, double m, double fm, double b,
                       double fb, double S, double tol, int depth) {
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = f_at(level, lm), frm = f_at(level, rm);
        double Sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        double Sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        double d = Sl + Sr - S;
        if (depth <= 0 || std::abs(d) <= 15.0 * tol || evals > opt.eval_budget) {
            if (evals > opt.eval_budget && std::abs(d) > 15.0 * tol) ok = false;
            err_acc += std::abs(d) / 15.0;
            return Sl + Sr + d / 15.0;
        }
        return simpson_rec(level, a, fa, lm, flm, m, fm, Sl, tol / 2.0, depth - 1) +
               simpson_rec(level, m, fm, rm, frm, b, fb, Sr, tol / 2.0, depth - 1);
    }
};

// Gauss-Legendre integral of the innermost variable over the admissible
// panels given x[0..d-2]; exact treatment of the indicator, smooth panels.
double innermost_gl(const ExponentRegion& r, IntegrandId id,
                    const BuchstabSolver& solver, std::array<double, 4>& x) {
    int level = r.dim - 1;
    std::vector<Interval> ivs = admissible_intervals(r, level, x);
    if (ivs.empty()) return 0.0;
    double s = 0.0;
    for (int j = 0; j < level; ++j) s += x[static_cast<std::size_t>(j)];
    ivs = split_at_kinks(std::move(ivs), id, s, solver.u_max());
    const GaussRule& g = gl24();
    KahanSum acc;
    for (const auto& [a, b] : ivs) {
        double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            x[static_cast<std::size_t>(level)] = mid + half * g.x[i];
            acc.add(half * g.w[i] * integrand_value(r, id, solver, x));
        }
    }
    return acc.value();
}

// Quasi-random pass: Halton points (with random shifts for the error
// estimate) drive the outer variables, sampled conditionally inside their
// admissible interval unions with the union length as weight; the innermost
// variable is integrated exactly by Gauss-Legendre.
std::pair<double, double> qmc_integral(const ExponentRegion& r, IntegrandId id,
                                       const BuchstabSolver& solver,
                                       const QuadratureOptions& opt) {
    std::array<double, 4> x{};
    if (r.dim == 1) return {innermost_gl(r, id, solver, x), 0.0};
    static constexpr std::array<std::uint32_t, 3> kBases{2, 3, 5};
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> estimates;
    for (int shift = 0; shift < opt.qmc_shifts; ++shift) {
        std::array<double, 3> offset{};
        for (int j = 0; j + 1 < r.dim; ++j) offset[static_cast<std::size_t>(j)] = unif(rng);
        KahanSum acc;
        for (int k = 1; k <= opt.qmc_points; ++k) {
            double weight = 1.0;
            bool feasible = true;
            for (int level = 0; level + 1 < r.dim; ++level) {
                std::vector<Interval> ivs = admissible_intervals(r, level, x);
                double len = 0.0;
                for (const auto& [a, b] : ivs) len += b - a;
                if (len <= 0.0) { feasible = false; break; }
                double u = halton(static_cast<std::uint64_t>(k),
                                  kBases[static_cast<std::size_t>(level)]) +
                           offset[static_cast<std::size_t>(level)];
                u -= std::floor(u);
                double t = u * len;
                for (const auto& [a, b] : ivs) {
                    if (t <= b - a) { x[static_cast<std::size_t>(level)] = a + t; break; }
                    t -= b - a;
                }
                weight *= len;
            }
            acc.add(feasible ? weight * innermost_gl(r, id, solver, x) : 0.0);
        }
        estimates.push_back(acc.value() / static_cast<double>(opt.qmc_points));
    }
    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= static_cast<double>(estimates.size());
    double var = 0.0;
    for (double e : estimates) var += (e - mean) * (e - mean);
    var /= std::max<double>(1.0, static_cast<double>(estimates.size() - 1));
    double se = std::sqrt(var / static_cast<double>(estimates.size()));
    return {mean, se};
}

}  // namespace

IntegralResult integrate(const ExponentRegion& r, IntegrandId id,
                         const BuchstabSolver& solver, const QuadratureOptions& opt) {
    if (r.dim < 1 || r.dim > 4)
        throw std::invalid_argument("integrate: region dimension must be 1..4");
    if (id == IntegrandId::kReciprocalCofactor && r.dim != 2)
        throw std::invalid_argument("integrate: reciprocal-cofactor integrand is 2-d");
    NestedAdaptive nested(r, id, solver, opt);
    IntegralResult out;
    out.adaptive = nested.level_integral(0);
    out.converged = nested.ok;
    auto [qmc, se] = qmc_integral(r, id, solver, opt);
    out.qmc = qmc;
    out.error = nested.err_acc + 3.0 * se;
    return out;
}

ExponentRegion gap1_region(double sigma) {
    ExponentRegion r;
    r.dim = 1;
    r.box_lo[0] = 1.0 - 5.0 * sigma;
    r.box_hi[0] = 2.0 * sigma;
    return r;
}

ExponentRegion gap2_region(double sigma) {
    ExponentRegion r;
    r.dim = 1;
    r.box_lo[0] = 1.0 - 4.0 * sigma;
    r.box_hi[0] = 0.5;
    return r;
}

ExponentRegion region_a(double sigma) {
    double z = 1.0 - 6.0 * sigma, y = 1.0 - 5.0 * sigma;
    double v = 2.0 * sigma, w = 1.0 - 4.0 * sigma;
    ExponentRegion r;
    r.dim = 3;
    r.box_lo = {z, z, z, 0.0};
    r.box_hi = {y, y, y, 0.0};
    r.descending = true;
    for (unsigned mask : {3u, 5u, 6u, 7u}) r.windows.push_back({mask, v, w, false});
    return r;
}

ExponentRegion sigma2_region(double sigma) {
    double z = 1.0 - 6.0 * sigma, y = 1.0 - 5.0 * sigma;
    double v = 2.0 * sigma, w = 1.0 - 4.0 * sigma;
    ExponentRegion r;
    r.dim = 2;
    r.box_lo = {z, z, 0.0, 0.0};
    r.box_hi = {v, v, 0.0, 0.0};
    r.descending = true;
    r.windows.push_back({2u, y, kInf, true});  // smaller exponent above y
    r.windows.push_back({3u, w, kInf, true});  // product above W
    return r;
}

ExponentRegion sigma3_region(double sigma) {
    double z = 1.0 - 6.0 * sigma, y = 1.0 - 5.0 * sigma;
    double v = 2.0 * sigma, w = 1.0 - 4.0 * sigma;
    ExponentRegion r;
    r.dim = 3;
    r.box_lo = {z, z, z, 0.0};
    r.box_hi = {v, y, y, 0.0};
    r.descending = true;
    r.windows.push_back({3u, w, kInf, true});  // pq > W
    r.windows.push_back({5u, w, kInf, true});  // pr > W
    r.windows.push_back({6u, y, kInf, true});  // qr > Y
    // The slice with V <= qr <= W is salvaged by grouping q*r into a single
    // factor (the same device as for p*r in the neighbouring case), so only
    // the remainder is actually discarded.
    r.windows.push_back({6u, v, w, false});
    return r;
}

ExponentRegion sigma4_region(double sigma) {
    double z = 1.0 - 6.0 * sigma;
    double v = 2.0 * sigma, w = 1.0 - 4.0 * sigma;
    ExponentRegion r;
    r.dim = 4;
    r.box_lo = {z, z, z, z};
    r.box_hi = {v, v, v, v};
    r.descending = true;
    r.windows.push_back({3u, -kInf, v, true});  // pq < V
    r.windows.push_back({7u, w, kInf, true});   // pqr > W
    // No grouping of the four primes multiplies into [V, W].
    for (unsigned mask = 1; mask <= 15u; ++mask)
        r.windows.push_back({mask, v, w, false});
    return r;
}

C2Breakdown c2_constant(double sigma, const BuchstabSolver& solver,
                        const QuadratureOptions& opt) {
    C2Breakdown out;
    out.gap1 = integrate(gap1_region(sigma), IntegrandId::kBuchstabLastVar, solver, opt);
    out.gap2 = integrate(gap2_region(sigma), IntegrandId::kBuchstabLastVar, solver, opt);
    out.region_a = integrate(region_a(sigma), IntegrandId::kBuchstabLastVar, solver, opt);
    out.total = 1.0 + out.gap1.value() + out.gap2.value() + out.region_a.value();
    return out;
}

C4Breakdown c4_constant(double sigma, const BuchstabSolver& solver,
                        const QuadratureOptions& opt) {
    C4Breakdown out;
    out.psi3 = integrate(gap2_region(sigma), IntegrandId::kBuchstabLastVar, solver, opt);
    out.sigma3 = integrate(sigma3_region(sigma), IntegrandId::kBuchstabLastVar, solver, opt);
    out.total = out.psi3.value() + out.sigma3.value();
    return out;
}

Rho5Losses rho5_losses(double sigma, const BuchstabSolver& solver,
                       const QuadratureOptions& opt) {
    Rho5Losses out;
    out.sigma2 =
        integrate(sigma2_region(sigma), IntegrandId::kReciprocalCofactor, solver, opt);
    out.sigma4 =
        integrate(sigma4_region(sigma), IntegrandId::kBuchstabLastVar, solver, opt);
    return out;
}

MarginReport margin(double sigma, const BuchstabSolver& solver,
                    const QuadratureOptions& opt) {
    MarginReport rep;
    rep.sigma = sigma;
    rep.c2 = c2_constant(sigma, solver, opt);
    rep.c4 = c4_constant(sigma, solver, opt);
    rep.losses = rho5_losses(sigma, solver, opt);
    double loss = rep.losses.sigma2.value() + rep.losses.sigma4.value();
    rep.margin = (1.0 + rep.c4.total - loss) - rep.c2.total * rep.c4.total;
    return rep;
}

}  // namespace psl

