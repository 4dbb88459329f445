#include "psl/scanner.hpp"

#include "psl/params.hpp"
#include "psl/singular.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace psl {

namespace {

std::vector<std::int64_t> primes_to_sqrt(std::int64_t limit,
                                         const PrimeTable& pt) {
    std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(limit)));
    while (r * r > limit) --r;
    while ((r + 1) * (r + 1) <= limit) ++r;
    if (r > pt.limit())
        throw std::out_of_range("two-square build: prime table too small");
    return pt.primes_in(2, r);
}

}  // namespace

TwoSquareTable::TwoSquareTable(std::int64_t limit, const PrimeTable& pt)
    : limit_(limit), counts_(static_cast<std::size_t>(limit) + 1, 0) {
    auto primes = primes_to_sqrt(limit, pt);
    for (std::int64_t p : primes) {
        std::int64_t p2 = p * p;
        for (std::int64_t q : primes) {
            std::int64_t v = p2 + q * q;
            if (v > limit_) break;
            std::uint8_t& c = counts_[static_cast<std::size_t>(v)];
            if (c == 255) {
                ++overflow_[v];
            } else if (c == 254) {
                c = 255;
                overflow_[v] = 255;
            } else {
                ++c;
            }
        }
    }
}

WeightedTwoSquareTable::WeightedTwoSquareTable(std::int64_t limit,
                                               const PrimeTable& pt)
    : limit_(limit), w_(static_cast<std::size_t>(limit) + 1, 0.0) {
    auto primes = primes_to_sqrt(limit, pt);
    for (std::int64_t p : primes) {
        std::int64_t p2 = p * p;
        double lp = std::log(static_cast<double>(p));
        for (std::int64_t q : primes) {
            std::int64_t v = p2 + q * q;
            if (v > limit_) break;
            w_[static_cast<std::size_t>(v)] +=
                lp * std::log(static_cast<double>(q));
        }
    }
}

std::int64_t count_r3(std::int64_t n, const TwoSquareTable& t,
                      const PrimeTable& pt) {
    if (n < 0 || n > t.limit())
        throw std::out_of_range("count_r3: n outside table");
    std::int64_t total = 0;
    for (std::int64_t p : primes_to_sqrt(n, pt))
        total += t.at(n - p * p);
    return total;
}

std::int64_t count_r4(std::int64_t n, const TwoSquareTable& t,
                      const PrimeTable& pt) {
    if (n < 0 || n > t.limit())
        throw std::out_of_range("count_r4: n outside table");
    std::int64_t total = 0;
    for (std::int64_t p : primes_to_sqrt(n, pt))
        total += count_r3(n - p * p, t, pt);
    return total;
}

double weighted_r3(std::int64_t n, const WeightedTwoSquareTable& t,
                   const PrimeTable& pt) {
    if (n < 0 || n > t.limit())
        throw std::out_of_range("weighted_r3: n outside table");
    double total = 0.0;
    for (std::int64_t p : primes_to_sqrt(n, pt))
        total += std::log(static_cast<double>(p)) * t.at(n - p * p);
    return total;
}

namespace {

void write_checkpoint(const std::string& path, std::int64_t Nmax,
                      std::int64_t last_n,
                      const std::vector<std::int64_t>& exceptions) {
    if (path.empty()) return;
    nlohmann::json j;
    j["Nmax"] = Nmax;
    j["last_n"] = last_n;
    j["exceptions_so_far"] = exceptions;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
    out << j.dump() << '\n';
    if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

template <typename Member>
std::vector<std::int64_t> scan_class(std::int64_t Nmax, std::int64_t chunk,
                                     const std::string& checkpoint_path,
                                     Member in_class, bool four) {
    if (Nmax < 1) throw std::invalid_argument("scan: Nmax must be >= 1");
    PrimeTable pt(static_cast<std::int64_t>(std::sqrt(static_cast<double>(Nmax))) + 2);
    TwoSquareTable two(Nmax, pt);
    std::vector<std::int64_t> exceptions;
    std::int64_t since_checkpoint = 0;
    for (std::int64_t n = 1; n <= Nmax; ++n) {
        if (!in_class(n)) continue;
        bool represented = false;
        if (!four) {
            represented = count_r3(n, two, pt) > 0;
        } else {
            // Existence only: early-exit over the outermost prime square.
            for (std::int64_t p : primes_to_sqrt(n, pt))
                if (count_r3(n - p * p, two, pt) > 0) {
                    represented = true;
                    break;
                }
        }
        if (!represented) exceptions.push_back(n);
        if (++since_checkpoint >= chunk) {
            write_checkpoint(checkpoint_path, Nmax, n, exceptions);
            since_checkpoint = 0;
        }
    }
    write_checkpoint(checkpoint_path, Nmax, Nmax, exceptions);
    return exceptions;
}

}  // namespace

std::vector<std::int64_t> scan_E3(std::int64_t Nmax, std::int64_t chunk,
                                  const std::string& checkpoint_path) {
    return scan_class(Nmax, chunk, checkpoint_path, in_A3, /*four=*/false);
}

std::vector<std::int64_t> scan_E4(std::int64_t Nmax, std::int64_t chunk,
                                  const std::string& checkpoint_path) {
    return scan_class(Nmax, chunk, checkpoint_path, in_A4, /*four=*/true);
}

ScanRecord asymptotic_ratio(std::int64_t n, double Qcap,
                            const WeightedTwoSquareTable& wt,
                            const TwoSquareTable& t, const PrimeTable& pt) {
    if (!in_A3(n))
        throw std::invalid_argument("asymptotic_ratio: n not in A3");
    ScanRecord rec;
    rec.n = n;
    rec.r3 = count_r3(n, t, pt);
    rec.r3_log = weighted_r3(n, wt, pt);
    rec.pi_nQ = Pi_product(n, Qcap);
    if (rec.pi_nQ <= 0.0)
        throw std::runtime_error(
            "asymptotic_ratio: nonpositive local-density product on an "
            "admissible n");
    rec.ratio = rec.r3_log /
                (M_PI / 4.0 * rec.pi_nQ * std::sqrt(static_cast<double>(n)));
    return rec;
}

}  // namespace psl
