#include "psl/decomposition.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace psl {

namespace {

// Exponent of a threshold as a multiple of log P.
double thresh_exponent(Thresh t, double sigma) {
    switch (t) {
        case Thresh::kZ: return 1.0 - 6.0 * sigma;
        case Thresh::kY: return 1.0 - 5.0 * sigma;
        case Thresh::kV: return 2.0 * sigma;
        case Thresh::kW: return 1.0 - 4.0 * sigma;
        case Thresh::kSqrtP: return 0.5;
        case Thresh::kPrev: break;
    }
    throw std::invalid_argument("thresh_exponent: kPrev has no fixed value");
}

const char* thresh_name(Thresh t) {
    switch (t) {
        case Thresh::kZ: return "Z";
        case Thresh::kY: return "Y";
        case Thresh::kV: return "V";
        case Thresh::kW: return "W";
        case Thresh::kSqrtP: return "sqrtP";
        case Thresh::kPrev: return "prev";
    }
    return "?";
}

const char* cmp_name(Cmp c) {
    switch (c) {
        case Cmp::kLess: return "<";
        case Cmp::kLessEq: return "<=";
        case Cmp::kGreater: return ">";
        case Cmp::kGreaterEq: return ">=";
    }
    return "?";
}

VarSpec var(char name, Thresh lo, bool lo_inc, Thresh hi, bool hi_inc) {
    return {name, {lo, lo_inc}, {hi, hi_inc}};
}

// Shorthand variable factories for the recurring patterns.
VarSpec var_zv(char name) { return var(name, Thresh::kZ, true, Thresh::kV, false); }
VarSpec var_prev(char name) { return var(name, Thresh::kZ, true, Thresh::kPrev, false); }

std::string mask_names(unsigned mask, const std::vector<VarSpec>& vars) {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (mask >> i & 1u) out.push_back(vars[i].name);
    return out;
}

}  // namespace

double thresh_value(Thresh t, const SieveParams& sp) {
    switch (t) {
        case Thresh::kZ: return sp.Z;
        case Thresh::kY: return sp.Y;
        case Thresh::kV: return sp.V;
        case Thresh::kW: return sp.W;
        case Thresh::kSqrtP: return sp.sqrtP;
        case Thresh::kPrev: break;
    }
    throw std::invalid_argument("thresh_value: kPrev has no fixed value");
}

std::vector<DecompositionTerm> rho1_terms(const SieveParams&) {
    DecompositionTerm t;
    t.sign = +1;
    t.cutoff = Cutoff::kSqrtP;
    t.cls = TermClass::kEstimable;  // the target weight itself, not certified
    t.label = "rho1";
    t.derivation = "prime indicator: psi(m, sqrt(P)) on I";
    return {t};
}

std::vector<DecompositionTerm> build_upper(const SieveParams&) {
    std::vector<DecompositionTerm> out;

    DecompositionTerm psi1;
    psi1.sign = +1;
    psi1.cutoff = Cutoff::kZ;
    psi1.label = "psi1";
    psi1.derivation = "rough count psi(m, Z): start of the upper-bound chain";
    out.push_back(psi1);

    DecompositionTerm psi3;
    psi3.sign = -1;
    psi3.vars = {var('p', Thresh::kV, true, Thresh::kW, false)};
    psi3.cutoff = Cutoff::kLastVar;
    psi3.label = "psi3";
    psi3.derivation = "subtracted band V <= p < W kept whole (groupable as p itself)";
    out.push_back(psi3);

    DecompositionTerm psi4;
    psi4.sign = -1;
    psi4.vars = {var('p', Thresh::kZ, true, Thresh::kY, false)};
    psi4.cutoff = Cutoff::kZ;
    psi4.label = "psi4";
    psi4.derivation = "first expansion of the Z <= p < Y band: psi(m/p, Z) piece";
    out.push_back(psi4);

    DecompositionTerm psi5a;
    psi5a.sign = +1;
    psi5a.vars = {var('p', Thresh::kZ, true, Thresh::kY, false), var_prev('q')};
    psi5a.cutoff = Cutoff::kZ;
    psi5a.label = "psi5a";
    psi5a.derivation = "second expansion, cofactor piece psi(m/pq, Z), Z <= q < p < Y";
    out.push_back(psi5a);

    DecompositionTerm psi5b;
    psi5b.sign = -1;
    psi5b.vars = {var('p', Thresh::kZ, true, Thresh::kY, false), var_prev('q'),
                  var_prev('r')};
    psi5b.cutoff = Cutoff::kLastVar;
    psi5b.group = {GroupKind::kAnyIn, {3u, 5u, 6u, 7u}};
    psi5b.label = "psi5b_grouped";
    psi5b.derivation =
        "triple sum Z <= r < q < p < Y: kept where some pair or the triple "
        "product lands in [V, W]; the remainder (no grouping possible) is "
        "discarded, which only raises the bound since the term is subtracted";
    out.push_back(psi5b);

    return out;
}

LowerTerms build_lower(const SieveParams& sp) {
    // Sigma4's second split relies on every triple product p q r (all >= Z)
    // exceeding V; this is the Z^3 >= V part of the parameter window.
    if (3.0 * (1.0 - 6.0 * sp.sigma) < 2.0 * sp.sigma - 1e-9)
        throw std::logic_error("build_lower: Z^3 >= V fails for these parameters");

    LowerTerms out;
    const unsigned kPQ = 3u, kPR = 5u, kQR = 6u, kPQR = 7u;

    // ---- rho3: the estimable part ----------------------------------------
    {
        DecompositionTerm t;
        t.sign = +1;
        t.cutoff = Cutoff::kZ;
        t.label = "base";
        t.derivation = "rough count psi(m, Z): start of the exact chain";
        out.rho3.push_back(t);
    }
    {
        DecompositionTerm t;  // Psi2: V <= p <= W
        t.sign = -1;
        t.vars = {var('p', Thresh::kV, true, Thresh::kW, true)};
        t.cutoff = Cutoff::kLastVar;
        t.label = "Psi2";
        t.derivation = "middle band V <= p <= W, groupable as p itself";
        out.rho3.push_back(t);
    }
    {
        DecompositionTerm t;  // Psi4: Z <= p < V, cofactor piece
        t.sign = -1;
        t.vars = {var_zv('p')};
        t.cutoff = Cutoff::kZ;
        t.label = "Psi4";
        t.derivation = "expansion of the Z <= p < V band: psi(m/p, Z) piece";
        out.rho3.push_back(t);
    }
    {
        DecompositionTerm t;  // Sigma1: V <= pq <= W
        t.sign = +1;
        t.vars = {var_zv('p'), var_prev('q')};
        t.constraints = {{kPQ, Cmp::kGreaterEq, Thresh::kV},
                         {kPQ, Cmp::kLessEq, Thresh::kW}};
        t.cutoff = Cutoff::kLastVar;
        t.label = "Sigma1";
        t.derivation = "pair band V <= pq <= W, groupable as the product pq";
        out.rho3.push_back(t);
    }
    // The Sigma3 family: pq > W with the smaller factor q <= Y.
    const std::vector<ProductConstraint> sigma3_base = {
        {kPQ, Cmp::kGreater, Thresh::kW}, {2u, Cmp::kLessEq, Thresh::kY}};
    {
        DecompositionTerm t;  // T1: cofactor piece of the Sigma3 expansion
        t.sign = +1;
        t.vars = {var_zv('p'), var_prev('q')};
        t.constraints = sigma3_base;
        t.cutoff = Cutoff::kZ;
        t.label = "T1";
        t.derivation = "Sigma3 expansion, psi(m/pq, Z) piece (p short, q medium)";
        out.rho3.push_back(t);
    }
    {
        DecompositionTerm t;  // T2a: V <= pr <= W
        t.sign = -1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r')};
        t.constraints = sigma3_base;
        t.constraints.push_back({kPR, Cmp::kGreaterEq, Thresh::kV});
        t.constraints.push_back({kPR, Cmp::kLessEq, Thresh::kW});
        t.cutoff = Cutoff::kLastVar;
        t.label = "T2a";
        t.derivation = "Sigma3 triple, first case: pr grouped into [V, W]";
        out.rho3.push_back(t);
    }
    {
        DecompositionTerm t;  // T2b kept slice: pr > W but V <= qr <= W
        t.sign = -1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r')};
        t.constraints = sigma3_base;
        t.constraints.push_back({kPR, Cmp::kGreater, Thresh::kW});
        t.constraints.push_back({kQR, Cmp::kGreaterEq, Thresh::kV});
        t.constraints.push_back({kQR, Cmp::kLessEq, Thresh::kW});
        t.cutoff = Cutoff::kLastVar;
        t.label = "T2b_grouped";
        t.derivation =
            "Sigma3 triple, second case, salvaged slice: qr grouped into [V, W]";
        out.rho3.push_back(t);
    }
    // Third case qr < Y (with pr outside [V, W]): one more exact expansion.
    const std::vector<ProductConstraint> t2c_base = {
        {kPQ, Cmp::kGreater, Thresh::kW},
        {2u, Cmp::kLessEq, Thresh::kY},
        {kQR, Cmp::kLess, Thresh::kY}};
    {
        DecompositionTerm t;  // U1: cofactor piece
        t.sign = -1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r')};
        t.constraints = t2c_base;
        t.group = {GroupKind::kNoneIn, {kPR}};
        t.cutoff = Cutoff::kZ;
        t.label = "U1";
        t.derivation =
            "Sigma3 triple, third case (qr < Y), psi(m/pqr, Z) piece: p short, "
            "qr medium";
        out.rho3.push_back(t);
    }
    {
        DecompositionTerm t;  // U2: qr < Y forces V <= qrs <= W
        t.sign = +1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r'), var_prev('s')};
        t.constraints = t2c_base;
        t.group = {GroupKind::kNoneIn, {kPR}};
        t.cutoff = Cutoff::kLastVar;
        t.label = "U2";
        t.derivation =
            "Sigma3 triple, third case expanded once more: qr < Y and s < r "
            "force the product qrs into [V, W]";
        out.rho3.push_back(t);
    }
    // The Sigma4 family: pq < V.
    {
        DecompositionTerm t;  // V1: cofactor piece
        t.sign = +1;
        t.vars = {var_zv('p'), var_prev('q')};
        t.constraints = {{kPQ, Cmp::kLess, Thresh::kV}};
        t.cutoff = Cutoff::kZ;
        t.label = "V1";
        t.derivation = "Sigma4 expansion, psi(m/pq, Z) piece (pq short)";
        out.rho3.push_back(t);
    }
    {
        DecompositionTerm t;  // V2a: V <= pqr <= W
        t.sign = -1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r')};
        t.constraints = {{kPQ, Cmp::kLess, Thresh::kV},
                         {kPQR, Cmp::kGreaterEq, Thresh::kV},
                         {kPQR, Cmp::kLessEq, Thresh::kW}};
        t.cutoff = Cutoff::kLastVar;
        t.label = "V2a";
        t.derivation = "Sigma4 triple: pqr grouped into [V, W]";
        out.rho3.push_back(t);
    }
    const std::vector<ProductConstraint> sigma4_deep = {
        {kPQ, Cmp::kLess, Thresh::kV}, {kPQR, Cmp::kGreater, Thresh::kW}};
    {
        DecompositionTerm t;  // X1: cofactor piece of the pqr > W expansion
        t.sign = -1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r')};
        t.constraints = sigma4_deep;
        t.cutoff = Cutoff::kZ;
        t.label = "X1";
        t.derivation =
            "Sigma4 triple with pqr > W expanded once more: psi(m/pqr, Z) "
            "piece (pq short, r medium); pqr < V cannot occur since pqr > Z^3 "
            ">= V";
        out.rho3.push_back(t);
    }
    // All subsets of {p, q, r, s} with at least two elements.
    std::vector<unsigned> four_var_groups;
    for (unsigned mask = 3; mask < 16; ++mask)
        if (__builtin_popcount(mask) >= 2) four_var_groups.push_back(mask);
    {
        DecompositionTerm t;  // X2 kept part: some subset product in [V, W]
        t.sign = +1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r'), var_prev('s')};
        t.constraints = sigma4_deep;
        t.group = {GroupKind::kAnyIn, four_var_groups};
        t.cutoff = Cutoff::kLastVar;
        t.label = "X2_grouped";
        t.derivation =
            "Sigma4 quadruple: kept where some subset product lands in [V, W]";
        out.rho3.push_back(t);
    }

    // ---- rho4: positive discards of negative-signed pieces ----------------
    {
        DecompositionTerm t;  // Psi3: W < p < sqrt(P)
        t.sign = +1;
        t.vars = {var('p', Thresh::kW, false, Thresh::kSqrtP, false)};
        t.cutoff = Cutoff::kLastVar;
        t.cls = TermClass::kDiscardRho4;
        t.label = "Psi3";
        t.derivation = "long band W < p < sqrt(P): no grouping available";
        out.rho4.push_back(t);
    }
    {
        DecompositionTerm t;  // T2b rest: pr > W, qr > Y, qr outside [V, W]
        t.sign = +1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r')};
        t.constraints = sigma3_base;
        t.constraints.push_back({kPR, Cmp::kGreater, Thresh::kW});
        t.constraints.push_back({kQR, Cmp::kGreater, Thresh::kY});
        t.group = {GroupKind::kNoneIn, {kQR}};
        t.cutoff = Cutoff::kLastVar;
        t.cls = TermClass::kDiscardRho4;
        t.label = "T2b_rest";
        t.derivation =
            "Sigma3 triple, second case remainder: pr > W, qr > Y, and qr "
            "misses [V, W] as well";
        out.rho4.push_back(t);
    }
    {
        DecompositionTerm t;  // T2d residual, low side: pr < V with qr >= Y
        t.sign = +1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r')};
        t.constraints = sigma3_base;
        t.constraints.push_back({kPR, Cmp::kLess, Thresh::kV});
        t.constraints.push_back({kQR, Cmp::kGreaterEq, Thresh::kY});
        t.cutoff = Cutoff::kLastVar;
        t.cls = TermClass::kDiscardRho4;
        t.label = "T2d_low";
        t.derivation =
            "residual completing the Sigma3 case split exactly: pr < V, qr >= Y";
        out.rho4.push_back(t);
    }
    {
        DecompositionTerm t;  // T2d residual, boundary: pr > W with qr = Y
        t.sign = +1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r')};
        t.constraints = sigma3_base;
        t.constraints.push_back({kPR, Cmp::kGreater, Thresh::kW});
        t.constraints.push_back({kQR, Cmp::kGreaterEq, Thresh::kY});
        t.constraints.push_back({kQR, Cmp::kLessEq, Thresh::kY});
        t.cutoff = Cutoff::kLastVar;
        t.cls = TermClass::kDiscardRho4;
        t.label = "T2d_boundary";
        t.derivation =
            "residual boundary case qr = Y (empty when Y is not an integer "
            "product of two primes >= Z)";
        out.rho4.push_back(t);
    }

    // ---- rho5: positive discards of positive-signed pieces ----------------
    {
        DecompositionTerm t;  // Sigma2: pq > W with q > Y
        t.sign = +1;
        t.vars = {var_zv('p'), var_prev('q')};
        t.constraints = {{kPQ, Cmp::kGreater, Thresh::kW},
                         {2u, Cmp::kGreater, Thresh::kY}};
        t.cutoff = Cutoff::kLastVar;
        t.cls = TermClass::kDiscardRho5;
        t.label = "Sigma2";
        t.derivation = "pair band pq > W, q > Y: discarded whole";
        out.rho5.push_back(t);
    }
    {
        DecompositionTerm t;  // X2 rest: no subset product lands in [V, W]
        t.sign = +1;
        t.vars = {var_zv('p'), var_prev('q'), var_prev('r'), var_prev('s')};
        t.constraints = sigma4_deep;
        t.group = {GroupKind::kNoneIn, four_var_groups};
        t.cutoff = Cutoff::kLastVar;
        t.cls = TermClass::kDiscardRho5;
        t.label = "X2_rest";
        t.derivation = "Sigma4 quadruple remainder: no subset product in [V, W]";
        out.rho5.push_back(t);
    }

    for (const DecompositionTerm& t : out.rho3) {
        Classification c = hyp_v_classify(t, sp);
        if (c.kind == EstimableKind::kNotEstimable)
            throw std::logic_error("build_lower: rho3 term '" + t.label +
                                   "' failed the estimability check");
    }
    return out;
}

std::int64_t eval_weight(const std::vector<DecompositionTerm>& terms,
                         std::int64_t m, const FactorTable& ft,
                         const SieveParams& sp) {
    if (!sp.in_interval(m))
        throw std::out_of_range("eval_weight: m outside the interval I");

    // Distinct prime divisors, descending, and the fully divided cofactor info.
    std::vector<std::int64_t> primes;
    for (std::int64_t p : ft.factorize(m))
        if (primes.empty() || primes.back() != p) primes.push_back(p);
    std::sort(primes.begin(), primes.end(), std::greater<>());

    std::int64_t total = 0;
    std::vector<std::int64_t> pick;
    for (const DecompositionTerm& t : terms) {
        const std::size_t k = t.vars.size();
        std::int64_t count = 0;
        pick.clear();

        auto cofactor_ok = [&]() {
            std::int64_t cof = m;
            for (std::int64_t p : pick) cof /= p;
            double cut = sp.Z;
            if (t.cutoff == Cutoff::kLastVar)
                cut = static_cast<double>(pick.back());
            else if (t.cutoff == Cutoff::kSqrtP)
                cut = sp.sqrtP;
            return psi_rough(cof, cut, ft);
        };
        auto tuple_ok = [&]() {
            for (const ProductConstraint& c : t.constraints) {
                double prod = 1.0;
                for (std::size_t i = 0; i < k; ++i)
                    if (c.mask >> i & 1u) prod *= static_cast<double>(pick[i]);
                double ref = thresh_value(c.ref, sp);
                bool ok = c.cmp == Cmp::kLess      ? prod < ref
                          : c.cmp == Cmp::kLessEq  ? prod <= ref
                          : c.cmp == Cmp::kGreater ? prod > ref
                                                   : prod >= ref;
                if (!ok) return false;
            }
            if (t.group.kind != GroupKind::kNone) {
                bool any = false;
                for (unsigned mask : t.group.masks) {
                    double prod = 1.0;
                    for (std::size_t i = 0; i < k; ++i)
                        if (mask >> i & 1u) prod *= static_cast<double>(pick[i]);
                    if (prod >= sp.V && prod <= sp.W) { any = true; break; }
                }
                if (t.group.kind == GroupKind::kAnyIn ? !any : any) return false;
            }
            return true;
        };

        auto recurse = [&](auto&& self, std::size_t level, std::size_t from) -> void {
            if (level == k) {
                if (tuple_ok() && cofactor_ok()) ++count;
                return;
            }
            const VarSpec& v = t.vars[level];
            for (std::size_t i = from; i < primes.size(); ++i) {
                double p = static_cast<double>(primes[i]);
                if (v.lo.ref != Thresh::kPrev) {
                    double lo = thresh_value(v.lo.ref, sp);
                    if (v.lo.inclusive ? p < lo : p <= lo) break;  // descending
                }
                bool hi_ok = true;
                if (v.hi.ref == Thresh::kPrev) {
                    // Strictly below the previous variable: automatic since the
                    // enumeration walks the descending list past it.
                    hi_ok = v.hi.inclusive || level == 0 ||
                            primes[i] < pick[level - 1];
                } else {
                    double hi = thresh_value(v.hi.ref, sp);
                    hi_ok = v.hi.inclusive ? p <= hi : p < hi;
                }
                if (!hi_ok) continue;
                pick.push_back(primes[i]);
                self(self, level + 1, i + 1);
                pick.pop_back();
            }
        };
        if (k == 0) {
            if (cofactor_ok()) count = 1;
        } else {
            recurse(recurse, 0, 0);
        }
        total += t.sign * count;
    }
    return total;
}

namespace {

// Closed exponent polytope of a term: halfspaces a . x <= b over the
// variables' exponents (as multiples of log P).
struct Polytope {
    std::size_t dim = 0;
    std::vector<std::array<double, 4>> a;
    std::vector<double> b;

    void add(const std::array<double, 4>& row, double rhs) {
        a.push_back(row);
        b.push_back(rhs);
    }
};

Polytope term_polytope(const DecompositionTerm& t, double sigma) {
    Polytope poly;
    poly.dim = t.vars.size();
    for (std::size_t i = 0; i < poly.dim; ++i) {
        std::array<double, 4> row{};
        if (t.vars[i].lo.ref != Thresh::kPrev) {
            row.fill(0.0);
            row[i] = -1.0;
            poly.add(row, -thresh_exponent(t.vars[i].lo.ref, sigma));
        }
        if (t.vars[i].hi.ref != Thresh::kPrev) {
            row.fill(0.0);
            row[i] = 1.0;
            poly.add(row, thresh_exponent(t.vars[i].hi.ref, sigma));
        }
        if (i > 0) {  // descending ordering x_i <= x_{i-1}
            row.fill(0.0);
            row[i] = 1.0;
            row[i - 1] = -1.0;
            poly.add(row, 0.0);
        }
    }
    for (const ProductConstraint& c : t.constraints) {
        std::array<double, 4> row{};
        double sgn = (c.cmp == Cmp::kLess || c.cmp == Cmp::kLessEq) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < poly.dim; ++i)
            row[i] = (c.mask >> i & 1u) ? sgn : 0.0;
        poly.add(row, sgn * thresh_exponent(c.ref, sigma));
    }
    // Group rules are per-tuple filters, not polytope constraints; omitting
    // them only enlarges the region, so estimability conclusions stay valid.
    return poly;
}

// Range of sum_{i in mask} x_i over the polytope by vertex enumeration: every
// vertex is the intersection of dim constraint hyperplanes, and the polytope
// is bounded (box constraints present), so extremes occur at vertices.
LinearRange polytope_range(const Polytope& poly, unsigned mask) {
    LinearRange out;
    const std::size_t d = poly.dim;
    if (d == 0) {
        out.min = out.max = 0.0;
        return out;
    }
    bool found = false;
    const std::size_t n = poly.a.size();
    if (n < d) {
        out.empty = true;
        return out;
    }
    // Enumerate d-subsets of the n halfspaces.
    std::vector<std::size_t> comb(d);
    for (std::size_t i = 0; i < d; ++i) comb[i] = i;
    auto advance = [&]() {
        std::size_t i = d;
        while (i-- > 0) {
            if (comb[i] + (d - i) < n + 0) {
                ++comb[i];
                for (std::size_t j = i + 1; j < d; ++j) comb[j] = comb[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    do {
        // Solve the d x d system by Gaussian elimination with partial pivot.
        double M[4][5];
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) M[r][c] = poly.a[comb[r]][c];
            M[r][d] = poly.b[comb[r]];
        }
        bool singular = false;
        for (std::size_t c = 0; c < d; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < d; ++r)
                if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
            if (std::abs(M[piv][c]) < 1e-12) { singular = true; break; }
            if (piv != c)
                for (std::size_t j = 0; j <= d; ++j) std::swap(M[c][j], M[piv][j]);
            for (std::size_t r = 0; r < d; ++r) {
                if (r == c) continue;
                double f = M[r][c] / M[c][c];
                for (std::size_t j = c; j <= d; ++j) M[r][j] -= f * M[c][j];
            }
        }
        if (singular) continue;
        std::array<double, 4> x{};
        for (std::size_t c = 0; c < d; ++c) x[c] = M[c][d] / M[c][c];
        bool feasible = true;
        for (std::size_t r = 0; r < n; ++r) {
            double lhs = 0.0;
            for (std::size_t c = 0; c < d; ++c) lhs += poly.a[r][c] * x[c];
            if (lhs > poly.b[r] + 1e-9) { feasible = false; break; }
        }
        if (!feasible) continue;
        double val = 0.0;
        for (std::size_t c = 0; c < d; ++c)
            if (mask >> c & 1u) val += x[c];
        if (!found) {
            out.min = out.max = val;
            found = true;
        } else {
            out.min = std::min(out.min, val);
            out.max = std::max(out.max, val);
        }
    } while (advance());
    out.empty = !found;
    return out;
}

}  // namespace

LinearRange exponent_range(const DecompositionTerm& term, unsigned mask,
                           const SieveParams& sp) {
    return polytope_range(term_polytope(term, sp.sigma), mask);
}

Classification hyp_v_classify(const DecompositionTerm& term,
                              const SieveParams& sp) {
    Classification out;
    const double v = 2.0 * sp.sigma;
    const double y = 1.0 - 5.0 * sp.sigma;
    const double w = 1.0 - 4.0 * sp.sigma;
    const std::size_t d = term.vars.size();
    const double tol = 1e-9;

    Polytope poly = term_polytope(term, sp.sigma);
    if (d > 0 && polytope_range(poly, 1u).empty) {
        out.kind = EstimableKind::kTypeII;
        out.description = "empty exponent region (vacuously estimable)";
        return out;
    }

    if (term.group.kind == GroupKind::kAnyIn) {
        out.kind = EstimableKind::kTypeIIByRule;
        out.description =
            "each kept tuple carries its own subset product in [V, W] by the "
            "grouping rule";
        return out;
    }

    // Type II: a fixed subset whose product always lies in [V, W].
    for (unsigned mask = 1; mask < (1u << d); ++mask) {
        LinearRange r = polytope_range(poly, mask);
        if (!r.empty && r.min >= v - tol && r.max <= w + tol) {
            out.kind = EstimableKind::kTypeII;
            out.witness_mask = mask;
            out.description =
                "product " + mask_names(mask, term.vars) + " always in [V, W]";
            return out;
        }
    }

    // Type I: cutoff Z with a bipartition into a factor of size <= P^{2 sigma}
    // and a factor of size <= P^{1 - 5 sigma}.
    if (term.cutoff == Cutoff::kZ) {
        for (unsigned g1 = 0; g1 < (1u << d); ++g1) {
            unsigned g2 = ((1u << d) - 1u) & ~g1;
            LinearRange r1 = polytope_range(poly, g1);
            LinearRange r2 = polytope_range(poly, g2);
            if (!r1.empty && !r2.empty && r1.max <= v + tol && r2.max <= y + tol) {
                out.kind = EstimableKind::kTypeI;
                out.group1_mask = g1;
                out.group2_mask = g2;
                out.description = "short factor " + mask_names(g1, term.vars) +
                                  " (<= P^{2 sigma}), medium factor " +
                                  mask_names(g2, term.vars) +
                                  " (<= P^{1 - 5 sigma}), rough cofactor at Z";
                return out;
            }
        }
    }

    out.kind = EstimableKind::kNotEstimable;
    out.description = "no grouping certificate found";
    return out;
}

DensityReport density_report(const SieveParams& sp, const FactorTable& ft,
                             const BuchstabSolver& solver) {
    if (sp.Z < 2.0)
        throw std::invalid_argument("density_report: P too small (Z < 2)");
    DensityReport rep;
    rep.params = sp;

    auto rho1 = rho1_terms(sp);
    auto rho2 = build_upper(sp);
    LowerTerms low = build_lower(sp);

    std::array<double, 5> sums{};
    for (std::int64_t m = sp.interval_lo; m < sp.interval_hi; ++m) {
        sums[0] += static_cast<double>(eval_weight(rho1, m, ft, sp));
        sums[1] += static_cast<double>(eval_weight(rho2, m, ft, sp));
        sums[2] += static_cast<double>(eval_weight(low.rho3, m, ft, sp));
        sums[3] += static_cast<double>(eval_weight(low.rho4, m, ft, sp));
        sums[4] += static_cast<double>(eval_weight(low.rho5, m, ft, sp));
    }
    const double scale =
        sp.L / static_cast<double>(sp.interval_hi - sp.interval_lo);

    C2Breakdown c2 = c2_constant(sp.sigma, solver);
    C4Breakdown c4 = c4_constant(sp.sigma, solver);
    Rho5Losses losses = rho5_losses(sp.sigma, solver);
    const double C5 = losses.sigma2.value() + losses.sigma4.value();
    const std::array<double, 5> predicted = {
        1.0, c2.total, 1.0 + c4.total - C5, c4.total, C5};
    const std::array<const char*, 5> names = {"rho1", "rho2", "rho3", "rho4",
                                              "rho5"};
    for (std::size_t j = 0; j < 5; ++j) {
        DensityRow row;
        row.name = names[j];
        row.measured = sums[j] * scale;
        row.predicted = predicted[j];
        row.rel_dev = predicted[j] != 0.0
                          ? (row.measured - predicted[j]) / predicted[j]
                          : 0.0;
        rep.rows.push_back(row);
    }
    return rep;
}

std::string terms_to_json(const std::vector<DecompositionTerm>& terms,
                          const SieveParams& sp) {
    nlohmann::json arr = nlohmann::json::array();
    for (const DecompositionTerm& t : terms) {
        nlohmann::json jt;
        jt["label"] = t.label;
        jt["sign"] = t.sign;
        jt["derivation"] = t.derivation;
        nlohmann::json vars = nlohmann::json::array();
        for (const VarSpec& v : t.vars) {
            vars.push_back({{"name", std::string(1, v.name)},
                            {"lo", {{"ref", thresh_name(v.lo.ref)},
                                    {"inclusive", v.lo.inclusive}}},
                            {"hi", {{"ref", thresh_name(v.hi.ref)},
                                    {"inclusive", v.hi.inclusive}}}});
        }
        jt["vars"] = vars;
        nlohmann::json cons = nlohmann::json::array();
        for (const ProductConstraint& c : t.constraints)
            cons.push_back({{"product", mask_names(c.mask, t.vars)},
                            {"cmp", cmp_name(c.cmp)},
                            {"ref", thresh_name(c.ref)}});
        jt["constraints"] = cons;
        if (t.group.kind != GroupKind::kNone) {
            nlohmann::json masks = nlohmann::json::array();
            for (unsigned m : t.group.masks) masks.push_back(mask_names(m, t.vars));
            jt["group_rule"] = {
                {"kind", t.group.kind == GroupKind::kAnyIn ? "any_in_VW"
                                                           : "none_in_VW"},
                {"products", masks}};
        }
        jt["cutoff"] = t.cutoff == Cutoff::kZ        ? "Z"
                       : t.cutoff == Cutoff::kLastVar ? "last_var"
                                                      : "sqrtP";
        jt["class"] = t.cls == TermClass::kEstimable     ? "estimable"
                      : t.cls == TermClass::kDiscardRho4 ? "discard_to_rho4"
                                                         : "discard_to_rho5";
        Classification c = hyp_v_classify(t, sp);
        jt["certificate"] = c.description;
        arr.push_back(jt);
    }
    return arr.dump(2);
}

}  // namespace psl
