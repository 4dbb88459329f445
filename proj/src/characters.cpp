#include "psl/characters.hpp"

#include "psl/util.hpp"

#include <cassert>
#include <stdexcept>

namespace psl {

namespace {

struct PrimePower {
    std::int64_t p;
    int e;
    std::int64_t pe;
};

std::vector<PrimePower> factor_prime_powers(std::int64_t q) {
    std::vector<PrimePower> out;
    for (std::int64_t p = 2; p * p <= q; ++p) {
        if (q % p == 0) {
            PrimePower pp{p, 0, 1};
            while (q % p == 0) { q /= p; ++pp.e; pp.pe *= p; }
            out.push_back(pp);
        }
    }
    if (q > 1) out.push_back({q, 1, q});
    return out;
}

// Primitive root modulo p^e, p odd.
std::int64_t primitive_root(std::int64_t p, int e, std::int64_t pe) {
    std::int64_t phi_p = p - 1;
    std::vector<std::int64_t> qs;
    std::int64_t t = phi_p;
    for (std::int64_t d = 2; d * d <= t; ++d)
        if (t % d == 0) { qs.push_back(d); while (t % d == 0) t /= d; }
    if (t > 1) qs.push_back(t);
    std::int64_t g = 2;
    for (;; ++g) {
        bool ok = true;
        for (std::int64_t f : qs)
            if (powmod(g, phi_p / f, p) == 1) { ok = false; break; }
        if (ok) break;
    }
    if (e > 1 && powmod(g, phi_p, p * p) == 1) g += p;
    return g % pe;
}

bool is_prime_small(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

CharacterGroup::CharacterGroup(std::int64_t q) : q_(q) {
    if (q < 1) throw std::invalid_argument("CharacterGroup: modulus must be >= 1");
    if (q > 1'000'000)
        throw std::invalid_argument("CharacterGroup: modulus above 10^6 not supported");
    phi_ = 1;
    for (const PrimePower& pp : factor_prime_powers(q)) {
        if (pp.p == 2) {
            phi_ *= pp.pe / 2;
            if (pp.e == 1) continue;  // trivial unit group
            if (pp.e == 2) {
                comps_.push_back({4, 3, 2});
                std::vector<std::int32_t> tab(4, -1);
                tab[1] = 0;
                tab[3] = 1;
                dlog_.push_back(std::move(tab));
            } else {
                // (Z/2^e)^* = <-1> x <5>
                std::int64_t half = pp.pe / 4;  // order of 5
                comps_.push_back({pp.pe, pp.pe - 1, 2});
                comps_.push_back({pp.pe, 5, half});
                std::vector<std::int32_t> tab_sign(static_cast<std::size_t>(pp.pe), -1);
                std::vector<std::int32_t> tab_five(static_cast<std::size_t>(pp.pe), -1);
                std::int64_t v = 1;
                for (std::int64_t f = 0; f < half; ++f) {
                    tab_sign[static_cast<std::size_t>(v)] = 0;
                    tab_five[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(f);
                    std::int64_t w = pp.pe - v;  // -v
                    tab_sign[static_cast<std::size_t>(w)] = 1;
                    tab_five[static_cast<std::size_t>(w)] = static_cast<std::int32_t>(f);
                    v = v * 5 % pp.pe;
                }
                dlog_.push_back(std::move(tab_sign));
                dlog_.push_back(std::move(tab_five));
            }
        } else {
            std::int64_t ord = pp.pe / pp.p * (pp.p - 1);
            phi_ *= ord;
            std::int64_t g = primitive_root(pp.p, pp.e, pp.pe);
            comps_.push_back({pp.pe, g, ord});
            std::vector<std::int32_t> tab(static_cast<std::size_t>(pp.pe), -1);
            std::int64_t v = 1;
            for (std::int64_t k = 0; k < ord; ++k) {
                tab[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(k);
                v = v * g % pp.pe;
            }
            dlog_.push_back(std::move(tab));
        }
    }
}

std::int64_t CharacterGroup::dlog(std::size_t i, std::int64_t m) const {
    std::int64_t pe = comps_[i].prime_power;
    std::int32_t d = dlog_[i][static_cast<std::size_t>(m % pe)];
    assert(d >= 0);
    return d;
}

DirichletCharacter CharacterGroup::principal() const {
    DirichletCharacter chi;
    chi.group = this;
    chi.exps.assign(comps_.size(), 0);
    return chi;
}

std::vector<DirichletCharacter> CharacterGroup::all_characters() const {
    std::vector<DirichletCharacter> out;
    out.push_back(principal());
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        std::size_t n = out.size();
        for (std::int64_t e = 1; e < comps_[i].order; ++e)
            for (std::size_t k = 0; k < n; ++k) {
                DirichletCharacter chi = out[k];
                chi.exps[i] = e;
                out.push_back(std::move(chi));
            }
    }
    assert(static_cast<std::int64_t>(out.size()) == phi_);
    return out;
}

std::vector<DirichletCharacter> CharacterGroup::square_roots(
    const DirichletCharacter& chi) const {
    std::vector<std::vector<std::int64_t>> per_comp(comps_.size());
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        std::int64_t ord = comps_[i].order;
        std::int64_t e = chi.exps[i];
        if (ord % 2 == 1) {
            per_comp[i].push_back(e * ((ord + 1) / 2) % ord);
        } else if (e % 2 == 0) {
            per_comp[i].push_back(e / 2);
            per_comp[i].push_back(e / 2 + ord / 2);
        } else {
            return {};  // no solution in this component
        }
    }
    std::vector<DirichletCharacter> out;
    DirichletCharacter cur;
    cur.group = this;
    cur.exps.assign(comps_.size(), 0);
    std::vector<std::size_t> idx(comps_.size(), 0);
    for (;;) {
        for (std::size_t i = 0; i < comps_.size(); ++i) cur.exps[i] = per_comp[i][idx[i]];
        out.push_back(cur);
        std::size_t i = 0;
        for (; i < comps_.size(); ++i) {
            if (++idx[i] < per_comp[i].size()) break;
            idx[i] = 0;
        }
        if (i == comps_.size()) break;
    }
    return out;
}

std::int64_t DirichletCharacter::modulus() const { return group->modulus(); }

bool DirichletCharacter::is_principal() const {
    for (std::int64_t e : exps)
        if (e != 0) return false;
    return true;
}

std::int64_t DirichletCharacter::conductor() const {
    const auto& comps = group->components();
    std::int64_t cond = 1;
    std::int64_t two_part = 1;  // contribution from the 2-adic components
    for (std::size_t i = 0; i < comps.size(); ++i) {
        std::int64_t ord = comps[i].order;
        std::int64_t char_ord = ord / gcd64(exps[i], ord);  // gcd(0, ord) = ord
        if (char_ord == 1) continue;
        if (comps[i].prime_power % 2 == 0) {
            // Sign component (order 2, generator -1, or the modulus-4 case):
            // nontrivial means conductor at least 4.  <5> component of order
            // 2^s forces conductor 2^(s+2).  The 2-part is the max of both.
            bool is_sign = comps[i].generator == comps[i].prime_power - 1;
            std::int64_t c = is_sign ? 4 : 4 * char_ord;
            two_part = std::max(two_part, c);
        } else {
            // Odd p^a: character order p^k * u with u | p-1 means the
            // character factors through (Z/p^(k+1))^* and no smaller power.
            std::int64_t pp = comps[i].prime_power;
            std::int64_t p = pp;
            for (std::int64_t d = 3; d * d <= pp; d += 2)
                if (pp % d == 0) { p = d; break; }
            std::int64_t c = p, t = char_ord;
            while (t % p == 0) { t /= p; c *= p; }
            cond *= c;
        }
    }
    return cond * two_part;
}

std::complex<double> DirichletCharacter::operator()(std::int64_t m) const {
    std::int64_t q = group->modulus();
    m %= q;
    if (m < 0) m += q;
    if (q == 1) return {1.0, 0.0};
    if (gcd64(m, q) != 1) return {0.0, 0.0};
    double angle = 0.0;
    const auto& comps = group->components();
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (exps[i] == 0) continue;
        std::int64_t d = group->dlog(i, m);
        angle += static_cast<double>(exps[i] * d % comps[i].order) /
                 static_cast<double>(comps[i].order);
    }
    return unit_e(angle);
}

DirichletCharacter DirichletCharacter::conj() const {
    DirichletCharacter out = *this;
    const auto& comps = group->components();
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (out.exps[i] != 0) out.exps[i] = comps[i].order - out.exps[i];
    return out;
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& other) const {
    assert(group == other.group);
    DirichletCharacter out = *this;
    const auto& comps = group->components();
    for (std::size_t i = 0; i < comps.size(); ++i)
        out.exps[i] = (out.exps[i] + other.exps[i]) % comps[i].order;
    return out;
}

std::vector<DirichletCharacter> characters_mod(const CharacterGroup& g) {
    return g.all_characters();
}

std::complex<double> gauss_tau(const DirichletCharacter& chi, std::int64_t a) {
    std::int64_t q = chi.modulus();
    KahanComplex acc;
    for (std::int64_t h = 1; h <= q; ++h) {
        std::complex<double> c = chi(h);
        if (c == std::complex<double>{0.0, 0.0}) continue;
        acc.add(c * unit_e(static_cast<double>(a % q * h % q) / static_cast<double>(q)));
    }
    return acc.value();
}

std::complex<double> quad_gauss(const DirichletCharacter& chi, std::int64_t a) {
    std::int64_t q = chi.modulus();
    DirichletCharacter cc = chi.conj();
    std::int64_t ar = a % q;
    if (ar < 0) ar += q;
    KahanComplex acc;
    for (std::int64_t h = 1; h <= q; ++h) {
        std::complex<double> c = cc(h);
        if (c == std::complex<double>{0.0, 0.0}) continue;
        std::int64_t hh = h % q * (h % q) % q;
        acc.add(c * unit_e(static_cast<double>(ar * hh % q) / static_cast<double>(q)));
    }
    return acc.value();
}

BVector BVector::two_primes(std::int64_t p1, std::int64_t p2, std::int64_t n) {
    if (p1 == p2 || p1 % 2 == 0 || p2 % 2 == 0 || !is_prime_small(p1) ||
        !is_prime_small(p2))
        throw std::invalid_argument("BVector: need distinct odd primes");
    return {1, p1 * p1, p2 * p2, n};
}

}  // namespace psl
