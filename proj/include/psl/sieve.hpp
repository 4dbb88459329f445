#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace psl {

// Bit-packed primality table, Eratosthenes with odd-only segmented fill so
// the E3 scans at limit = 1e8 stay inside commodity memory.
class PrimeTable {
  public:
    explicit PrimeTable(std::int64_t limit);

    std::int64_t limit() const { return limit_; }
    bool is_prime(std::int64_t m) const {
        if (m < 2 || m > limit_) return false;
        return bits_[static_cast<std::size_t>(m >> 6)] >> (m & 63) & 1;
    }
    // All primes in [lo, hi].
    std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) const;

  private:
    std::int64_t limit_;
    std::vector<std::uint64_t> bits_;
};

// Smallest-prime-factor table; spf[1] = 1 sentinel.
class FactorTable {
  public:
    explicit FactorTable(std::int64_t limit);

    std::int64_t limit() const { return limit_; }
    std::int64_t spf(std::int64_t m) const {
        check_range(m);
        return spf_[static_cast<std::size_t>(m)];
    }
    // Prime factors with multiplicity, ascending.  factorize(1) = {}.
    std::vector<std::int64_t> factorize(std::int64_t m) const;

  private:
    void check_range(std::int64_t m) const {
        if (m < 1 || m > limit_)
            throw std::out_of_range("FactorTable: argument outside table range");
    }
    std::int64_t limit_;
    std::vector<std::uint32_t> spf_;
};

// psi(m, z): 1 iff every prime factor of m is >= z (so psi(1, z) = 1).
bool psi_rough(std::int64_t m, double z, const FactorTable& ft);

// Smooth dual: 1 iff every prime factor of m is <= z.
bool psi_smooth(std::int64_t m, double z, const FactorTable& ft);

}  // namespace psl
