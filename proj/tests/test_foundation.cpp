// Foundation checks: parameter derivation and its domain guards, the
// bit-packed prime table against a brute-force oracle, smallest-prime-factor
// factorization, and the rough/smooth indicators psi(m, z).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "psl/params.hpp"
#include "psl/sieve.hpp"
#include "psl/util.hpp"

#include <cmath>

using namespace psl;

namespace {

bool brute_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

TEST_CASE("parameter derivation at sigma = 3/20") {
    SieveParams sp = derive_params(0.15, 0.01, 10'000);
    CHECK(sp.N == 100'000'000);
    CHECK(sp.L == doctest::Approx(std::log(1e4)).epsilon(1e-12));
    CHECK(sp.Z == doctest::Approx(std::pow(1e4, 0.1)).epsilon(1e-12));
    CHECK(sp.Y == doctest::Approx(std::pow(1e4, 0.25)).epsilon(1e-12));
    CHECK(sp.V == doctest::Approx(std::pow(1e4, 0.3)).epsilon(1e-12));
    CHECK(sp.W == doctest::Approx(std::pow(1e4, 0.4)).epsilon(1e-12));
    CHECK(sp.Q == doctest::Approx(std::pow(1e4, 0.27)).epsilon(1e-12));
    CHECK(sp.omega == doctest::Approx(sp.Q * std::pow(1e4, -1.99)).epsilon(1e-12));
    CHECK(sp.Z < sp.Y);
    CHECK(sp.Y < sp.V);
    CHECK(sp.V < sp.W);
    CHECK(sp.W < sp.sqrtP);
    CHECK(sp.omega * sp.Q < 1.0);
}

TEST_CASE("parameter domain violations throw with the violated bound named") {
    CHECK_THROWS_AS(derive_params(0.10, 0.01, 10'000), ParamDomainError);
    CHECK_THROWS_AS(derive_params(0.16, 0.01, 10'000), ParamDomainError);
    CHECK_THROWS_AS(derive_params(0.15, 0.00, 10'000), ParamDomainError);
    CHECK_THROWS_AS(derive_params(0.15, 0.05, 10'000), ParamDomainError);
    CHECK_THROWS_AS(derive_params(0.15, 0.01, 999), ParamDomainError);
    CHECK_THROWS_WITH(derive_params(0.15, 0.01, 999),
                      doctest::Contains("P below 1000"));
    // The boundary sigma values are admissible.
    CHECK_NOTHROW(derive_params(1.0 / 7.0, 0.01, 10'000));
    CHECK_NOTHROW(derive_params(3.0 / 20.0, 0.02, 10'000));
}

TEST_CASE("interval membership is lo <= m < hi with thirds of P") {
    SieveParams sp = derive_params(0.15, 0.01, 10'000);
    CHECK(sp.interval_lo == 3'334);  // ceil(P/3)
    CHECK(sp.interval_hi == 6'666);  // floor(2P/3)
    CHECK(sp.in_interval(3'334));
    CHECK(sp.in_interval(6'665));
    CHECK_FALSE(sp.in_interval(3'333));
    CHECK_FALSE(sp.in_interval(6'666));
    SieveParams sp3 = derive_params(0.15, 0.01, 9'999);  // P divisible by 3
    CHECK(sp3.interval_lo == 3'333);
    CHECK(sp3.interval_hi == 6'666);
}

TEST_CASE("admissible residue classes for three and four squares") {
    CHECK(in_A3(27));   // 27 = 3 mod 24, not divisible by 5
    CHECK(in_A3(51));
    CHECK_FALSE(in_A3(75));  // 3 mod 24 but 5 | 75
    CHECK_FALSE(in_A3(4));
    CHECK(in_A4(4));
    CHECK(in_A4(28));
    CHECK_FALSE(in_A4(3));
    int count3 = 0;
    for (int n = 1; n <= 240; ++n) count3 += in_A3(n) ? 1 : 0;
    CHECK(count3 == 8);  // 10 residues 3 mod 24 in [1,240], minus 75 and 195
}

TEST_CASE("prime table matches trial division up to 10^4") {
    PrimeTable pt(10'000);
    for (std::int64_t n = 0; n <= 10'000; ++n) CHECK(pt.is_prime(n) == brute_prime(n));
    CHECK(pt.primes_in(1, 30) ==
          std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(pt.primes_in(9'973, 10'000) == std::vector<std::int64_t>{9'973});
}

TEST_CASE("prime counting checkpoints") {
    PrimeTable pt(1'000'000);
    std::int64_t count = 0;
    for (std::int64_t n = 2; n <= 1'000'000; ++n) count += pt.is_prime(n) ? 1 : 0;
    CHECK(count == 78'498);
}

TEST_CASE("factor table and psi indicators") {
    FactorTable ft(10'000);
    CHECK(ft.factorize(1).empty());
    CHECK(ft.factorize(9'999) == std::vector<std::int64_t>{3, 3, 11, 101});
    CHECK(ft.factorize(1'024) == std::vector<std::int64_t>(10, 2));
    CHECK(ft.spf(9'973) == 9'973);
    // psi(m, z) = 1 iff all prime factors are >= z.
    CHECK(psi_rough(1, 100.0, ft));
    CHECK(psi_rough(101 * 97, 97.0, ft));
    CHECK_FALSE(psi_rough(101 * 97, 98.0, ft));
    CHECK(psi_smooth(2 * 3 * 5, 5.0, ft));
    CHECK_FALSE(psi_smooth(2 * 3 * 7, 5.0, ft));
    CHECK_THROWS_AS(psi_rough(10'001, 2.0, ft), std::out_of_range);
}

TEST_CASE("reduced-argument product keeps 1e-12 accuracy at n ~ 1e8") {
    // Oracle: exact rational arithmetic for a = p/q with modest q.
    const std::int64_t aq = 97'003;
    const std::int64_t ap = 31'415;
    double a = static_cast<double>(ap) / static_cast<double>(aq);
    for (std::int64_t n : {std::int64_t{1}, std::int64_t{12'345},
                           std::int64_t{99'999'989}, std::int64_t{100'000'000}}) {
        // frac(a n) for the rounded double a differs from the rational value
        // by at most |a_double - p/q| * n; account for that explicitly.
        long double exact =
            static_cast<long double>(ap % aq * static_cast<__int128>(n) % aq) / aq;
        long double drift =
            std::abs(static_cast<long double>(a) - static_cast<long double>(ap) / aq) *
            static_cast<long double>(n);
        double got = frac_mul(a, n);
        long double diff = std::abs(static_cast<long double>(got) - exact);
        diff = std::min(diff, 1.0L - diff);  // wrap-around at 0/1
        CHECK(static_cast<double>(diff) <= static_cast<double>(drift) + 1e-12);
    }
}
