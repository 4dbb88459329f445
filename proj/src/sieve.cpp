#include "psl/sieve.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace psl {

namespace {

std::string cache_path(const char* kind, std::int64_t limit) {
    const char* dir = std::getenv("PSL_CACHE_DIR");
    if (!dir || !*dir) return {};
    return std::string(dir) + "/" + kind + "_" + std::to_string(limit) + ".bin";
}

bool load_cache(const std::string& path, void* data, std::size_t bytes) {
    if (path.empty()) return false;
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return false;
    bool ok = std::fread(data, 1, bytes, f) == bytes;
    std::fclose(f);
    return ok;
}

void store_cache(const std::string& path, const void* data, std::size_t bytes) {
    if (path.empty()) return;
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) return;
    std::fwrite(data, 1, bytes, f);
    std::fclose(f);
}

}  // namespace

PrimeTable::PrimeTable(std::int64_t limit) : limit_(limit) {
    if (limit < 2) throw std::invalid_argument("PrimeTable: limit must be >= 2");
    std::size_t words = static_cast<std::size_t>(limit / 64 + 1);
    bits_.assign(words, 0);

    std::string cp = cache_path("primes", limit);
    std::size_t bytes = words * sizeof(std::uint64_t);
    if (load_cache(cp, bits_.data(), bytes)) return;

    auto set_bit = [&](std::int64_t m) {
        bits_[static_cast<std::size_t>(m >> 6)] |= std::uint64_t{1} << (m & 63);
    };
    set_bit(2);
    for (std::int64_t m = 3; m <= limit; m += 2) set_bit(m);
    auto clear_bit = [&](std::int64_t m) {
        bits_[static_cast<std::size_t>(m >> 6)] &= ~(std::uint64_t{1} << (m & 63));
    };
    clear_bit(1);
    // Segmented strike-out keeps the working set cache-resident at 1e8.
    constexpr std::int64_t kSeg = 1 << 21;
    std::int64_t root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(limit)));
    std::vector<std::int64_t> small;
    for (std::int64_t p = 3; p <= root; p += 2) {
        bool prime = true;
        for (std::int64_t q : small) {
            if (q * q > p) break;
            if (p % q == 0) { prime = false; break; }
        }
        if (prime) small.push_back(p);
    }
    for (std::int64_t lo = 9; lo <= limit; lo += kSeg) {
        std::int64_t hi = std::min(limit, lo + kSeg - 1);
        for (std::int64_t p : small) {
            std::int64_t start = std::max(p * p, (lo + p - 1) / p * p);
            if (start % 2 == 0) start += p;
            for (std::int64_t m = start; m <= hi; m += 2 * p) clear_bit(m);
        }
    }
    store_cache(cp, bits_.data(), bytes);
}

std::vector<std::int64_t> PrimeTable::primes_in(std::int64_t lo, std::int64_t hi) const {
    std::vector<std::int64_t> out;
    for (std::int64_t m = std::max<std::int64_t>(lo, 2); m <= std::min(hi, limit_); ++m)
        if (is_prime(m)) out.push_back(m);
    return out;
}

FactorTable::FactorTable(std::int64_t limit) : limit_(limit) {
    if (limit < 2) throw std::invalid_argument("FactorTable: limit must be >= 2");
    if (limit > std::int64_t{1} << 32)
        throw std::length_error("FactorTable: limit exceeds 32-bit spf capacity");
    spf_.assign(static_cast<std::size_t>(limit + 1), 0);
    spf_[1] = 1;
    for (std::int64_t p = 2; p <= limit; ++p) {
        if (spf_[static_cast<std::size_t>(p)] != 0) continue;
        for (std::int64_t m = p; m <= limit; m += p)
            if (spf_[static_cast<std::size_t>(m)] == 0)
                spf_[static_cast<std::size_t>(m)] = static_cast<std::uint32_t>(p);
    }
}

std::vector<std::int64_t> FactorTable::factorize(std::int64_t m) const {
    check_range(m);
    std::vector<std::int64_t> out;
    while (m > 1) {
        std::int64_t p = spf_[static_cast<std::size_t>(m)];
        out.push_back(p);
        m /= p;
    }
    return out;
}

bool psi_rough(std::int64_t m, double z, const FactorTable& ft) {
    if (m < 1 || m > ft.limit())
        throw std::out_of_range("psi_rough: argument outside table range");
    while (m > 1) {
        std::int64_t p = ft.spf(m);
        if (static_cast<double>(p) < z) return false;
        m /= p;
    }
    return true;
}

bool psi_smooth(std::int64_t m, double z, const FactorTable& ft) {
    if (m < 1 || m > ft.limit())
        throw std::out_of_range("psi_smooth: argument outside table range");
    while (m > 1) {
        std::int64_t p = ft.spf(m);
        if (static_cast<double>(p) > z) return false;
        m /= p;
    }
    return true;
}

}  // namespace psl
