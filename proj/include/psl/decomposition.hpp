#pragma once

// Combinatorial sieve weights rho_1 .. rho_5 on the interval I, realized as
// explicit term lists: each term is a signed sum over descending tuples of
// prime divisors of m subject to threshold bounds, product constraints, and
// an optional grouping rule, with the cofactor required rough at a cutoff.
// The lists are data, produced once by build_upper / build_lower, so the
// pointwise identities (rho2 >= rho1, rho3 - rho4 + rho5 = rho1) falsify any
// transcription error in the tree.

#include "psl/buchstab.hpp"
#include "psl/params.hpp"
#include "psl/sieve.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace psl {

// Threshold expressions a variable bound or product constraint may refer to.
enum class Thresh { kZ, kY, kV, kW, kSqrtP, kPrev };

double thresh_value(Thresh t, const SieveParams& sp);  // kPrev not allowed

struct VarBound {
    Thresh ref;
    bool inclusive;  // lower bound: >= vs >; upper bound: <= vs <
};

// One prime variable; variables are listed in descending order (p > q > ...),
// which the evaluator enforces independently of the declared bounds.
struct VarSpec {
    char name;
    VarBound lo, hi;
};

enum class Cmp { kLess, kLessEq, kGreater, kGreaterEq };

// Product of the masked subset of variables compared against a threshold,
// e.g. "pq > W" = {mask: p|q, kGreater, kW}.  Bit i of mask = variable i.
struct ProductConstraint {
    unsigned mask;
    Cmp cmp;
    Thresh ref;
};

// Per-tuple grouping filter against the window [V, W]: keep the tuple iff
// some masked product lies in [V, W] (kAnyIn) or none does (kNoneIn).
enum class GroupKind { kNone, kAnyIn, kNoneIn };

struct GroupRule {
    GroupKind kind = GroupKind::kNone;
    std::vector<unsigned> masks;
};

enum class Cutoff { kZ, kLastVar, kSqrtP };

enum class TermClass { kEstimable, kDiscardRho4, kDiscardRho5 };

// How an ESTIMABLE term is certified (the hypothesis-(v) witness).
enum class EstimableKind {
    kNotEstimable,
    kTypeII,        // a fixed variable subset's product always lies in [V, W]
    kTypeIIByRule,  // per-tuple: the kAnyIn rule supplies the subset
    kTypeI,         // cutoff Z and a bipartition with sums <= 2*sigma, <= 1-5*sigma
};

struct Classification {
    EstimableKind kind = EstimableKind::kNotEstimable;
    unsigned witness_mask = 0;    // kTypeII: the subset whose product is grouped
    unsigned group1_mask = 0;     // kTypeI: variables with total exponent <= 2*sigma
    unsigned group2_mask = 0;     // kTypeI: variables with total exponent <= 1-5*sigma
    std::string description;
};

struct DecompositionTerm {
    int sign = +1;
    std::vector<VarSpec> vars;
    std::vector<ProductConstraint> constraints;
    GroupRule group;
    Cutoff cutoff = Cutoff::kZ;
    TermClass cls = TermClass::kEstimable;
    std::string label;       // short name used in dumps and reports
    std::string derivation;  // which identity application produced the term
};

// rho1 itself: the single term psi(m, sqrt(P)) (prime indicator on I).
std::vector<DecompositionTerm> rho1_terms(const SieveParams& sp);

// Upper-bound weight rho2 >= rho1 (only negative-signed terms discarded).
std::vector<DecompositionTerm> build_upper(const SieveParams& sp);

struct LowerTerms {
    std::vector<DecompositionTerm> rho3, rho4, rho5;
};

// Exact bookkeeping: rho3 - rho4 + rho5 = rho1 identically; every rho4/rho5
// term is positive-signed; every rho3 term passes the hyp-(v) classifier
// (throws std::logic_error otherwise -- a transcription bug).
LowerTerms build_lower(const SieveParams& sp);

// Signed tuple count for one m in I.  Throws std::out_of_range off I.
std::int64_t eval_weight(const std::vector<DecompositionTerm>& terms,
                         std::int64_t m, const FactorTable& ft,
                         const SieveParams& sp);

// Decide whether every tuple in the term's exponent region admits a
// hypothesis-(v) grouping: a product in [V, W] (type II) or, for cutoff Z,
// a bipartition into a short factor (<= P^{2 sigma}) and a medium factor
// (<= P^{1-5 sigma}) absorbed by the rough cofactor machinery (type I).
Classification hyp_v_classify(const DecompositionTerm& term,
                              const SieveParams& sp);

// Linear programming helper exposed for tests: range of sum_{i in mask} x_i
// over the term's (closed) exponent polytope.  empty = infeasible region.
struct LinearRange {
    bool empty = false;
    double min = 0.0, max = 0.0;
};
LinearRange exponent_range(const DecompositionTerm& term, unsigned mask,
                           const SieveParams& sp);

struct DensityRow {
    std::string name;
    double measured = 0.0;   // mean of rho_j(m) * 3 log P over I (per unit density)
    double predicted = 0.0;  // buchstab-module constant C_j
    double rel_dev = 0.0;
};

struct DensityReport {
    SieveParams params;
    std::vector<DensityRow> rows;
};

// Measures the finite-P densities of rho_1 .. rho_5 against the predicted
// constants C_1 = 1, C_2, C_3 = 1 + C_4 - C_5, C_4, C_5.  Descriptive: the
// convergence is logarithmic, so no tolerance is attached.
DensityReport density_report(const SieveParams& sp, const FactorTable& ft,
                             const BuchstabSolver& solver);

// JSON dump of a term list (labels, bounds, constraints, classification).
std::string terms_to_json(const std::vector<DecompositionTerm>& terms,
                          const SieveParams& sp);

}  // namespace psl
