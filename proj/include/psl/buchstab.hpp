#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace psl {

// Numerical Buchstab function w(u): w(u) = 1/u on (1,2] and
// (u w(u))' = w(u-1) for u > 2.  The solver marches F(u) = u w(u) on a
// uniform grid with a trapezoidal update; the delayed argument u - 1 lands
// exactly on the grid because the step divides 1.
class BuchstabSolver {
  public:
    explicit BuchstabSolver(double h = 1e-5, double u_max = 10.0);

    double step() const { return h_; }
    double u_max() const { return u_max_; }

    // w(u); exact 1/u on (1,2], interpolated from the marched grid above.
    // Throws std::domain_error outside (1, u_max].
    double w(double u) const;

    // Region-integrand convention: w extended by 0 for u <= 1 (the
    // underlying counts are empty there, so the weight vanishes).
    double w_extended(double u) const { return u <= 1.0 ? 0.0 : w(u); }

  private:
    double h_, u_max_;
    std::vector<double> F_;  // F(1 + k h) = u w(u)
};

// A subset-sum window constraint on exponent variables: the sum over the
// masked variables must lie inside [lo, hi] (keep_inside) or avoid it.
struct WindowConstraint {
    unsigned mask;  // bit i = variable i
    double lo, hi;  // closed interval; +-infinity for half-lines
    bool keep_inside;
};

// A region of exponent vectors (alpha_i = log p_i / log P): a box, an
// optional strict descending order x0 > x1 > ..., and window constraints.
struct ExponentRegion {
    int dim = 0;  // <= 4
    std::array<double, 4> box_lo{}, box_hi{};
    bool descending = false;
    std::vector<WindowConstraint> windows;
};

// Exact membership predicate; throws std::invalid_argument on dimension
// mismatch.
bool region_contains(const ExponentRegion& r, const std::vector<double>& x);

// Fixed catalogue of integrands over a d-dimensional region:
//   kBuchstabLastVar:    w((1 - sum x)/x_last) / (x_0 ... x_{d-2} x_last^2)
//   kReciprocalCofactor: 1 / (x_0 x_1 (1 - x_0 - x_1)), d = 2
enum class IntegrandId { kBuchstabLastVar, kReciprocalCofactor };

struct QuadratureOptions {
    double tol = 1e-7;        // adaptive-subdivision tolerance per integral
    int qmc_points = 1 << 15; // low-discrepancy points per shift
    int qmc_shifts = 8;       // randomized shifts for the error estimate
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    long long eval_budget = 40'000'000;  // integrand evaluations, adaptive path
};

struct IntegralResult {
    double adaptive = 0.0;  // nested adaptive subdivision value
    double qmc = 0.0;       // quasi-random sampling value
    double error = 0.0;     // combined error estimate
    bool converged = true;  // adaptive path stayed within budget
    double value() const { return adaptive; }
};

// Integrates the catalogue integrand over the region by two methods:
// nested adaptive subdivision with exact per-level admissible intervals,
// and randomized-shift quasi-random sampling of the outer variables with
// Gauss-Legendre integration of the innermost variable.
IntegralResult integrate(const ExponentRegion& r, IntegrandId id,
                         const BuchstabSolver& solver,
                         const QuadratureOptions& opt = {});

// Region builders, all in exponent coordinates with
// z = 1-6s, y = 1-5s, v = 2s, w = 1-4s for sigma = s.
ExponentRegion gap1_region(double sigma);    // alpha in [1-5s, 2s]
ExponentRegion gap2_region(double sigma);    // alpha in [1-4s, 1/2]
ExponentRegion region_a(double sigma);       // 3 vars, pair/triple sums avoid [2s, 1-4s]
ExponentRegion sigma2_region(double sigma);  // 2 vars, beta > y, alpha+beta > w
ExponentRegion sigma3_region(double sigma);  // 3 vars, alpha+beta > w, alpha+gamma > w, beta+gamma > y
ExponentRegion sigma4_region(double sigma);  // 4 vars, sum of top two < v, top three > w, no subset-sum in [v, w]

struct C2Breakdown {
    IntegralResult gap1, gap2, region_a;
    double total;  // 1 + gap1 + gap2 + region_a
};
struct C4Breakdown {
    IntegralResult psi3, sigma3;
    double total;  // psi3 + sigma3
};
struct Rho5Losses {
    IntegralResult sigma2, sigma4;
};
struct MarginReport {
    double sigma;
    C2Breakdown c2;
    C4Breakdown c4;
    Rho5Losses losses;
    double margin;  // (1 + C4 - losses) - C2 * C4
};

C2Breakdown c2_constant(double sigma, const BuchstabSolver& solver,
                        const QuadratureOptions& opt = {});
C4Breakdown c4_constant(double sigma, const BuchstabSolver& solver,
                        const QuadratureOptions& opt = {});
Rho5Losses rho5_losses(double sigma, const BuchstabSolver& solver,
                       const QuadratureOptions& opt = {});
MarginReport margin(double sigma, const BuchstabSolver& solver,
                    const QuadratureOptions& opt = {});

}  // namespace psl
