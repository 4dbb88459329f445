#include "psl/params.hpp"

#include <cassert>
#include <cmath>

namespace psl {

SieveParams derive_params(double sigma, double epsilon, std::int64_t P) {
    if (!(sigma >= 1.0 / 7.0))
        throw ParamDomainError("sigma below 1/7 (need 1/7 <= sigma <= 3/20)");
    if (!(sigma <= 3.0 / 20.0))
        throw ParamDomainError("sigma exceeds 3/20 (need 1/7 <= sigma <= 3/20)");
    if (!(epsilon > 0.0 && epsilon <= 0.02))
        throw ParamDomainError("epsilon outside (0, 0.02]");
    if (P < 1000)
        throw ParamDomainError("P below 1000");

    SieveParams sp;
    sp.sigma = sigma;
    sp.epsilon = epsilon;
    sp.P = P;
    sp.N = P * P;
    double Pd = static_cast<double>(P);
    sp.L = std::log(Pd);
    sp.Q = std::pow(Pd, 2.0 * sigma - 3.0 * epsilon);
    sp.omega = sp.Q * std::pow(Pd, -2.0 + epsilon);
    sp.Z = std::pow(Pd, 1.0 - 6.0 * sigma);
    sp.Y = std::pow(Pd, 1.0 - 5.0 * sigma);
    sp.V = std::pow(Pd, 2.0 * sigma);
    sp.W = std::pow(Pd, 1.0 - 4.0 * sigma);
    sp.sqrtP = std::sqrt(Pd);
    sp.interval_lo = (P + 2) / 3;
    sp.interval_hi = 2 * P / 3;

    // Structural invariants; these follow from the domain checks above and
    // are relied upon by the decomposition and arc modules.
    assert(sp.Z <= sp.Y && sp.Y <= sp.V + 1e-9 && sp.V <= sp.W && sp.W < sp.sqrtP);
    assert(sp.Z * sp.Z > sp.p_sigma());
    assert(sp.Z * sp.Z * sp.Z >= sp.V * (1.0 - 1e-12));
    assert(sp.omega * sp.Q < 1.0);
    return sp;
}

bool in_A3(std::int64_t n) { return n % 24 == 3 && n % 5 != 0; }

bool in_A4(std::int64_t n) { return n % 24 == 4; }

}  // namespace psl
