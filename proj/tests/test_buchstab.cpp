// Buchstab solver against its analytic segments, region membership against
// hand-computed exponent tuples, and the sieve-constant integrals against
// closed forms and claimed bounds.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "psl/buchstab.hpp"

#include <cmath>

using namespace psl;

namespace {

const BuchstabSolver& solver() {
    static BuchstabSolver s;  // h = 1e-5, u_max = 10
    return s;
}

}  // namespace

TEST_CASE("w on the analytic segments") {
    CHECK(solver().w(1.5) == 2.0 / 3.0);  // exact: stored closed form
    CHECK(solver().w(2.0) == 0.5);
    // u w(u) = 1 + ln(u - 1) on (2, 3].
    for (double u : {2.1, 2.345, 2.71, 2.999, 3.0})
        CHECK(solver().w(u) == doctest::Approx((1.0 + std::log(u - 1.0)) / u).epsilon(1e-8));
    CHECK(solver().w(3.0) == doctest::Approx((1.0 + std::log(2.0)) / 3.0).epsilon(1e-8));
    CHECK_THROWS_AS(solver().w(1.0), std::domain_error);
    CHECK_THROWS_AS(solver().w(0.5), std::domain_error);
    CHECK_THROWS_AS(solver().w(11.0), std::domain_error);
    CHECK(solver().w_extended(0.7) == 0.0);
}

TEST_CASE("w stays in (0, 1) and approaches e^{-gamma}") {
    for (double u = 1.01; u <= 9.99; u += 0.037) {
        double v = solver().w(u);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    // Known limit value e^{-gamma} = 0.5614594836...
    CHECK(solver().w(9.5) == doctest::Approx(0.5614594836).epsilon(1e-6));
}

TEST_CASE("grid halving moves w(7) by less than 1e-6") {
    BuchstabSolver coarse(1e-5, 8.0), fine(5e-6, 8.0);
    CHECK(std::abs(coarse.w(7.0) - fine.w(7.0)) < 1e-6);
}

TEST_CASE("region membership examples at sigma = 3/20") {
    ExponentRegion A = region_a(0.15);
    // Triple sum 0.335 inside the excluded window [0.3, 0.4].
    CHECK_FALSE(region_contains(A, {0.12, 0.11, 0.105}));
    // Pair sum 0.35 inside the window.
    CHECK_FALSE(region_contains(A, {0.24, 0.23, 0.11}));
    // Triple sum 0.345 inside the window.
    CHECK_FALSE(region_contains(A, {0.12, 0.115, 0.11}));
    // Box violation: last variable below 1 - 6*sigma.
    CHECK_FALSE(region_contains(A, {0.12, 0.115, 0.06}));
    // A genuine member: pairs 0.47, 0.46, 0.45 and triple 0.69 all avoid
    // [0.3, 0.4], each variable inside (0.1, 0.25), strictly descending.
    CHECK(region_contains(A, {0.24, 0.23, 0.22}));
    // Triple sum 0.375 inside the window: excluded even though all pairs
    // stay below 0.3.
    CHECK_FALSE(region_contains(A, {0.145, 0.125, 0.105}));
    // Member with pairs below 0.3 and triple above 0.4.
    CHECK(region_contains(A, {0.14, 0.135, 0.13}));
    CHECK_THROWS_AS(region_contains(A, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("sigma2 region reduces to the textbook box at sigma = 3/20") {
    ExponentRegion r = sigma2_region(0.15);
    CHECK(region_contains(r, {0.29, 0.26}));
    CHECK_FALSE(region_contains(r, {0.26, 0.29}));   // ordering violated
    CHECK_FALSE(region_contains(r, {0.29, 0.24}));   // beta below Y = 0.25
    CHECK_FALSE(region_contains(r, {0.31, 0.26}));   // alpha above V = 0.30
}

TEST_CASE("sigma3 region membership") {
    ExponentRegion r = sigma3_region(0.15);
    // alpha+beta = 0.53 > 0.4, alpha+gamma = 0.50 > 0.4, beta+gamma = 0.47
    // > 0.25, all boxes hold.
    CHECK(region_contains(r, {0.29, 0.24, 0.21}));
    CHECK_FALSE(region_contains(r, {0.29, 0.26, 0.21}));  // beta above Y
    CHECK_FALSE(region_contains(r, {0.21, 0.12, 0.11}));  // alpha+gamma < W
    // beta+gamma = 0.35 in [V, W] = [0.3, 0.4]: that slice is regrouped as a
    // single factor instead of discarded.
    CHECK_FALSE(region_contains(r, {0.29, 0.2, 0.15}));
}

TEST_CASE("sigma4 region excludes grouped subsets") {
    ExponentRegion r = sigma4_region(0.15);
    // 0.145+0.14 = 0.285 < 0.3, top three 0.425 > 0.4, and every subset sum
    // avoids [0.3, 0.4]: singles < 0.3; pairs <= 0.285 or ... check the
    // largest: 0.145+0.14+0.14... choose values so 4-sums land above 0.4.
    CHECK(region_contains(r, {0.145, 0.14, 0.14, 0.135}) ==
          false);  // descending violated (equal entries)
    CHECK(region_contains(r, {0.148, 0.144, 0.14, 0.136}));
    // A pair inside [0.3, 0.4] kills membership.
    CHECK_FALSE(region_contains(r, {0.2, 0.15, 0.14, 0.13}));
}

TEST_CASE("gap2 integral is log(3/2) at sigma = 3/20") {
    IntegralResult r =
        integrate(gap2_region(0.15), IntegrandId::kBuchstabLastVar, solver());
    CHECK(r.adaptive == doctest::Approx(std::log(1.5)).epsilon(1e-6));
    CHECK(r.qmc == doctest::Approx(std::log(1.5)).epsilon(1e-6));
    CHECK(std::abs(r.adaptive - r.qmc) <= std::max(1e-5, r.error));
}

TEST_CASE("empty regions integrate to zero") {
    // gap1 at sigma = 1/7 is the empty interval [2/7, 2/7].
    IntegralResult r =
        integrate(gap1_region(1.0 / 7.0), IntegrandId::kBuchstabLastVar, solver());
    CHECK(r.adaptive == 0.0);
    CHECK(r.qmc == 0.0);
}

TEST_CASE("loss integrals match the claimed bounds at sigma = 3/20") {
    Rho5Losses l = rho5_losses(0.15, solver());
    CHECK(l.sigma2.value() > 0.0);
    CHECK(l.sigma2.value() < 0.037);
    CHECK(l.sigma4.value() >= 0.0);
    CHECK(l.sigma4.value() < 0.0006);
    CHECK(std::abs(l.sigma2.adaptive - l.sigma2.qmc) <=
          std::max(1e-5, l.sigma2.error));
    CHECK(std::abs(l.sigma4.adaptive - l.sigma4.qmc) <=
          std::max(1e-5, l.sigma4.error));
}

TEST_CASE("constant breakdowns are assembled consistently") {
    C2Breakdown c2 = c2_constant(0.15, solver());
    CHECK(c2.total == doctest::Approx(1.0 + c2.gap1.value() + c2.gap2.value() +
                                      c2.region_a.value()));
    CHECK(c2.total >= 1.0 + std::log(1.5) - 1e-6);  // sanity floor
    C4Breakdown c4 = c4_constant(0.15, solver());
    CHECK(c4.psi3.value() == doctest::Approx(std::log(1.5)).epsilon(1e-6));
    CHECK(c4.sigma3.value() >= 0.0);
    CHECK(c4.sigma3.value() < 0.08);
    MarginReport m = margin(0.15, solver());
    double loss = m.losses.sigma2.value() + m.losses.sigma4.value();
    CHECK(m.margin ==
          doctest::Approx((1.0 + m.c4.total - loss) - m.c2.total * m.c4.total));
}
