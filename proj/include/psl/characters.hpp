#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace psl {

// One cyclic component of the unit group mod q.  For an odd prime power
// p^a the group is cyclic generated by a primitive root; for 2^a (a >= 3)
// there are two components, <-1> of order 2 and <5> of order 2^(a-2).
struct UnitComponent {
    std::int64_t prime_power;  // p^a this component belongs to
    std::int64_t generator;    // generator modulo prime_power
    std::int64_t order;
};

class CharacterGroup;

// A Dirichlet character mod q, stored as exponents against the fixed
// generator decomposition held by its CharacterGroup.  chi(m) =
// e(sum_i exps[i] * dlog_i(m) / order_i); chi(m) = 0 when gcd(m, q) > 1.
struct DirichletCharacter {
    const CharacterGroup* group = nullptr;
    std::vector<std::int64_t> exps;  // exps[i] in [0, order_i)

    std::int64_t modulus() const;
    bool is_principal() const;
    std::int64_t conductor() const;
    std::complex<double> operator()(std::int64_t m) const;

    DirichletCharacter conj() const;
    DirichletCharacter operator*(const DirichletCharacter& other) const;
    bool operator==(const DirichletCharacter& other) const {
        return exps == other.exps;
    }
};

// The character group mod q with precomputed discrete logs per component.
class CharacterGroup {
  public:
    explicit CharacterGroup(std::int64_t q);

    std::int64_t modulus() const { return q_; }
    std::int64_t phi() const { return phi_; }
    const std::vector<UnitComponent>& components() const { return comps_; }

    DirichletCharacter principal() const;
    std::vector<DirichletCharacter> all_characters() const;

    // Discrete log of m against component i (m must be a unit mod q).
    std::int64_t dlog(std::size_t i, std::int64_t m) const;

    // All xi with xi^2 == chi, solved componentwise from 2x = e (mod order).
    std::vector<DirichletCharacter> square_roots(const DirichletCharacter& chi) const;

  private:
    friend struct DirichletCharacter;
    std::int64_t q_;
    std::int64_t phi_;
    std::vector<UnitComponent> comps_;
    // dlog_[i][m % prime_power] or -1 for non-units.
    std::vector<std::vector<std::int32_t>> dlog_;
};

std::vector<DirichletCharacter> characters_mod(const CharacterGroup& g);

// tau_a(chi) = sum_{h=1}^{q} chi(h) e_q(a h)
std::complex<double> gauss_tau(const DirichletCharacter& chi, std::int64_t a);

// S(chi, a) = sum_{h=1}^{q} conj(chi)(h) e_q(a h^2)
std::complex<double> quad_gauss(const DirichletCharacter& chi, std::int64_t a);

// The three b-vector shapes used by the complete sums B(q, b; chi1..3):
// (1,1,1,n), (1, p1^2, p2^2, n) with distinct odd primes, (1, p^2, p^2, n).
struct BVector {
    std::int64_t b1, b2, b3, b4;

    static BVector ones(std::int64_t n) { return {1, 1, 1, n}; }
    static BVector two_primes(std::int64_t p1, std::int64_t p2, std::int64_t n);
    static BVector repeated_prime(std::int64_t p, std::int64_t n) {
        return {1, p * p, p * p, n};
    }
};

}  // namespace psl
