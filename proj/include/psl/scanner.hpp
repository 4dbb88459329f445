#pragma once

// Representation counting for sums of three and four prime squares: a
// meet-in-the-middle two-square table, exceptional-set scans over the
// admissible residue classes, and weighted-count ratios against the
// local-density prediction (pi/4) * Pi(n, Qcap) * sqrt(n).

#include "psl/sieve.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace psl {

// Ordered counts of prime pairs (p1, p2) with p1^2 + p2^2 = value, exact for
// every value <= limit.  Counters saturate at 255 and spill into a 32-bit
// overflow map, so exactness is preserved.
class TwoSquareTable {
  public:
    TwoSquareTable(std::int64_t limit, const PrimeTable& pt);

    std::int64_t limit() const { return limit_; }
    std::uint32_t at(std::int64_t value) const {
        if (value < 0 || value > limit_)
            throw std::out_of_range("TwoSquareTable: value outside table");
        std::uint8_t c = counts_[static_cast<std::size_t>(value)];
        if (c < 255) return c;
        return overflow_.at(value);
    }

  private:
    std::int64_t limit_;
    std::vector<std::uint8_t> counts_;
    std::unordered_map<std::int64_t, std::uint32_t> overflow_;
};

// Log-weighted variant: w[value] = sum over pairs of log(p1) log(p2).
class WeightedTwoSquareTable {
  public:
    WeightedTwoSquareTable(std::int64_t limit, const PrimeTable& pt);

    std::int64_t limit() const { return limit_; }
    double at(std::int64_t value) const {
        if (value < 0 || value > limit_)
            throw std::out_of_range("WeightedTwoSquareTable: value outside table");
        return w_[static_cast<std::size_t>(value)];
    }

  private:
    std::int64_t limit_;
    std::vector<double> w_;
};

// Ordered representation counts r3 / r4 and the log-weighted r3.
std::int64_t count_r3(std::int64_t n, const TwoSquareTable& t,
                      const PrimeTable& pt);
std::int64_t count_r4(std::int64_t n, const TwoSquareTable& t,
                      const PrimeTable& pt);
double weighted_r3(std::int64_t n, const WeightedTwoSquareTable& t,
                   const PrimeTable& pt);

struct ScanRecord {
    std::int64_t n = 0;
    std::int64_t r3 = 0;
    double r3_log = 0.0;
    double pi_nQ = 0.0;
    double ratio = 0.0;  // defined only when pi_nQ > 0
};

// All n in A3 (resp. A4) up to Nmax with no representation.  A checkpoint
// JSON {Nmax, last_n, exceptions_so_far} is rewritten every `chunk` candidates
// when a path is given; the returned list is deterministic and independent of
// the chunk size.
std::vector<std::int64_t> scan_E3(std::int64_t Nmax, std::int64_t chunk = 100'000,
                                  const std::string& checkpoint_path = "");
std::vector<std::int64_t> scan_E4(std::int64_t Nmax, std::int64_t chunk = 100'000,
                                  const std::string& checkpoint_path = "");

// ratio = weighted_r3(n) / ((pi/4) * Pi(n, Qcap) * sqrt(n)); requires n in A3.
// Pi <= 0 on an admissible n would contradict positivity and throws.
ScanRecord asymptotic_ratio(std::int64_t n, double Qcap,
                            const WeightedTwoSquareTable& wt,
                            const TwoSquareTable& t, const PrimeTable& pt);

}  // namespace psl
