// Command-line surface over the whole library.  Subcommands:
//   constants  sieve-constant integrals, bound checks, margin (JSON)
//   singular   truncated-series vs Euler-product comparison (CSV)
//   decompose  term-tree dump (JSON) + pointwise identity suite
//   arcs       arc classification and major-arc model sweep (CSV)
//   survey     minor-arc magnitude survey (JSON)
//   scan       E3/E4 exceptional-set scan (CSV)
//   ratio      weighted-count ratio against the local-density prediction (CSV)
// Exit codes: 0 success, 1 validation/usage error, 2 computation fine but a
// recorded reference value is flagged, 3 internal consistency failure.
#include "CLI11.hpp"
#include "json.hpp"

#include "psl/buchstab.hpp"
#include "psl/decomposition.hpp"
#include "psl/expsums.hpp"
#include "psl/params.hpp"
#include "psl/scanner.hpp"
#include "psl/sieve.hpp"
#include "psl/singular.hpp"
#include "psl/util.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFlag = 2;
constexpr int kExitInternal = 3;

// Output sink: file if --out given, else stdout.
struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::trunc);
            if (!file) throw std::runtime_error("cannot open output: " + path);
            os = &file;
        }
    }
    std::ostream& out() { return *os; }
};

int run_constants(double sigma, const std::string& out_path) {
    psl::BuchstabSolver solver;
    psl::MarginReport m = psl::margin(sigma, solver);
    nlohmann::json j;
    j["sigma"] = sigma;
    j["c2"] = {{"gap1", m.c2.gap1.value()},
               {"gap2", m.c2.gap2.value()},
               {"region_a", m.c2.region_a.value()},
               {"total", m.c2.total}};
    j["c4"] = {{"psi3", m.c4.psi3.value()},
               {"sigma3", m.c4.sigma3.value()},
               {"total", m.c4.total}};
    j["losses"] = {{"sigma2", m.losses.sigma2.value()},
                   {"sigma4", m.losses.sigma4.value()}};
    j["margin"] = m.margin;
    bool near = std::abs(sigma - 0.15) < 1e-12;
    nlohmann::json flags;
    flags["gap2_log32"] =
        std::abs(m.c4.psi3.value() - std::log(1.5)) < 1e-6 ? "PASS" : "FAIL";
    flags["sigma2_lt_0.037"] = m.losses.sigma2.value() < 0.037 ? "PASS" : "FAIL";
    flags["sigma3_lt_0.08"] = m.c4.sigma3.value() < 0.08 ? "PASS" : "FAIL";
    flags["sigma4_lt_0.0006"] =
        m.losses.sigma4.value() < 0.0006 ? "PASS" : "FAIL";
    bool c2_flag = false, margin_flag = false;
    if (near) {
        c2_flag = std::abs(m.c2.total - 1.74) > 0.01;
        margin_flag = std::abs(m.margin - 0.5974) > 0.001;
        flags["c2_vs_1.74"] = c2_flag ? "FLAG" : "PASS";
        flags["margin_vs_0.5974"] = margin_flag ? "FLAG" : "PASS";
    }
    j["pass_flags"] = flags;
    Sink sink(out_path);
    sink.out() << j.dump(2) << '\n';
    for (auto& [k, v] : flags.items())
        if (v == "FAIL") return kExitInternal;
    return (c2_flag || margin_flag) ? kExitFlag : kExitOk;
}

int run_singular(std::int64_t n_lo, std::int64_t n_hi, double qcap,
                 const std::string& out_path) {
    psl::SeriesComparisonReport rep = psl::compare_series(n_lo, n_hi, qcap, 1.0);
    Sink sink(out_path);
    sink.out() << "n,S3,Pi,diff\n";
    char buf[128];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%lld,%.12g,%.12g,%.12g\n",
                      static_cast<long long>(r.n), r.S3, r.Pi, r.diff);
        sink.out() << buf;
    }
    std::snprintf(buf, sizeof buf, "# median_diff=%.12g max_diff=%.12g\n",
                  rep.median_diff, rep.max_diff);
    sink.out() << buf;
    return kExitOk;
}

int run_decompose(double sigma, double eps, std::int64_t P,
                  const std::string& out_path, bool skip_identities) {
    psl::SieveParams sp = psl::derive_params(sigma, eps, P);
    auto rho2 = psl::build_upper(sp);
    psl::LowerTerms low = psl::build_lower(sp);
    nlohmann::json j;
    j["params"] = {{"sigma", sigma}, {"epsilon", eps}, {"P", P}};
    j["rho2"] = nlohmann::json::parse(psl::terms_to_json(rho2, sp));
    j["rho3"] = nlohmann::json::parse(psl::terms_to_json(low.rho3, sp));
    j["rho4"] = nlohmann::json::parse(psl::terms_to_json(low.rho4, sp));
    j["rho5"] = nlohmann::json::parse(psl::terms_to_json(low.rho5, sp));
    std::int64_t violations = 0;
    if (!skip_identities) {
        psl::FactorTable ft(P);
        auto rho1 = psl::rho1_terms(sp);
        for (std::int64_t m = sp.interval_lo; m < sp.interval_hi; ++m) {
            std::int64_t r1 = psl::eval_weight(rho1, m, ft, sp);
            std::int64_t r2 = psl::eval_weight(rho2, m, ft, sp);
            std::int64_t r3 = psl::eval_weight(low.rho3, m, ft, sp);
            std::int64_t r4 = psl::eval_weight(low.rho4, m, ft, sp);
            std::int64_t r5 = psl::eval_weight(low.rho5, m, ft, sp);
            if (r2 < r1 || r3 - r4 + r5 != r1 || r4 < 0 || r5 < 0) ++violations;
        }
        j["identity_suite"] = {{"checked", sp.interval_hi - sp.interval_lo},
                               {"violations", violations}};
    }
    Sink sink(out_path);
    sink.out() << j.dump(2) << '\n';
    return violations == 0 ? kExitOk : kExitInternal;
}

int run_arcs(double sigma, double eps, std::int64_t P, double alpha,
             std::int64_t grid, const std::string& out_path) {
    psl::SieveParams sp = psl::derive_params(sigma, eps, P);
    psl::PrimeTable pt(P);
    psl::ExpWeight rho1 = psl::prime_indicator_weight(sp, pt);
    Sink sink(out_path);
    sink.out() << "alpha,kind,q,a,abs_f1,abs_f1_star\n";
    auto emit = [&](double a) {
        psl::ArcLabel lab = psl::classify_arc(a, sp);
        double f1 = std::abs(psl::eval_f(rho1, a));
        char buf[160];
        if (lab.major) {
            double star = std::abs(psl::f1_star(a, lab.q, lab.a, sp));
            std::snprintf(buf, sizeof buf, "%.17g,major,%lld,%lld,%.12g,%.12g\n",
                          a, static_cast<long long>(lab.q),
                          static_cast<long long>(lab.a), f1, star);
        } else {
            std::snprintf(buf, sizeof buf, "%.17g,minor,,,%.12g,\n", a, f1);
        }
        sink.out() << buf;
    };
    if (grid > 0) {
        for (std::int64_t i = 0; i < grid; ++i)
            emit(sp.omega + (static_cast<double>(i) + 0.5) / static_cast<double>(grid));
    } else {
        emit(alpha);
    }
    return kExitOk;
}

int run_survey(double sigma, double eps, std::int64_t P, std::int64_t samples,
               std::uint64_t seed, const std::string& out_path) {
    psl::SieveParams sp = psl::derive_params(sigma, eps, P);
    psl::PrimeTable pt(P);
    psl::ExpWeight rho1 = psl::prime_indicator_weight(sp, pt);
    psl::SurveyStats st = psl::minor_survey(rho1, sp, samples, seed);
    nlohmann::json j;
    j["samples"] = st.samples;
    j["seed"] = seed;
    j["scaled_abs_f"] = {
        {"max", st.max}, {"q50", st.q50}, {"q90", st.q90}, {"q99", st.q99}};
    Sink sink(out_path);
    sink.out() << j.dump(2) << '\n';
    return kExitOk;
}

int run_scan(std::int64_t nmax, bool four, std::int64_t chunk,
             const std::string& checkpoint, const std::string& out_path) {
    auto exceptions = four ? psl::scan_E4(nmax, chunk, checkpoint)
                           : psl::scan_E3(nmax, chunk, checkpoint);
    Sink sink(out_path);
    sink.out() << "n\n";
    for (std::int64_t n : exceptions) sink.out() << n << '\n';
    sink.out() << "# count=" << exceptions.size() << '\n';
    return kExitOk;
}

int run_ratio(std::int64_t n_lo, std::int64_t n_hi, double qcap,
              const std::string& out_path) {
    psl::PrimeTable pt(
        static_cast<std::int64_t>(std::sqrt(static_cast<double>(n_hi))) + 2);
    psl::TwoSquareTable t(n_hi, pt);
    psl::WeightedTwoSquareTable wt(n_hi, pt);
    Sink sink(out_path);
    sink.out() << "n,r3,r3_log,Pi,ratio\n";
    std::vector<double> ratios;
    char buf[160];
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        if (!psl::in_A3(n)) continue;
        psl::ScanRecord r = psl::asymptotic_ratio(n, qcap, wt, t, pt);
        std::snprintf(buf, sizeof buf, "%lld,%lld,%.12g,%.12g,%.12g\n",
                      static_cast<long long>(r.n), static_cast<long long>(r.r3),
                      r.r3_log, r.pi_nQ, r.ratio);
        sink.out() << buf;
        ratios.push_back(r.ratio);
    }
    if (!ratios.empty()) {
        std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2,
                         ratios.end());
        std::snprintf(buf, sizeof buf, "# median_ratio=%.12g count=%zu\n",
                      ratios[ratios.size() / 2], ratios.size());
        sink.out() << buf;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale laboratory for sums of prime squares"};
    app.require_subcommand(1);
    int threads = 0;  // accepted for interface stability; all code paths are
                      // deterministic and currently single-threaded
    app.add_option("--threads", threads, "worker thread cap (results identical)");

    double sigma = 0.15, eps = 0.01, alpha = 1.0, qcap = 1000.0;
    std::int64_t P = 10'000, nmax = 10'000, n_lo = 1, grid = 0,
                 samples = 1'000, chunk = 100'000;
    std::uint64_t seed = 1;
    bool four = false, skip_identities = false;
    std::string out_path, checkpoint;

    auto* c = app.add_subcommand("constants", "sieve-constant integrals");
    c->add_option("--sigma", sigma)->check(CLI::Range(1.0 / 7.0, 0.15));
    c->add_option("--out", out_path);

    auto* s = app.add_subcommand("singular", "series vs product comparison");
    s->add_option("--n-lo", n_lo)->check(CLI::PositiveNumber);
    s->add_option("--n-hi", nmax)->check(CLI::PositiveNumber);
    s->add_option("--qcap", qcap)->check(CLI::PositiveNumber);
    s->add_option("--out", out_path);

    auto* d = app.add_subcommand("decompose", "term tree + identity suite");
    d->add_option("--sigma", sigma);
    d->add_option("--eps", eps);
    d->add_option("--P", P)->check(CLI::Range(std::int64_t{1000},
                                              std::int64_t{10'000'000}));
    d->add_flag("--terms-only", skip_identities, "skip the identity suite");
    d->add_option("--out", out_path);

    auto* a = app.add_subcommand("arcs", "classify alpha or sweep a grid");
    a->add_option("--sigma", sigma);
    a->add_option("--eps", eps);
    a->add_option("--P", P);
    a->add_option("--alpha", alpha);
    a->add_option("--grid", grid, "emit this many grid points instead");
    a->add_option("--out", out_path);

    auto* sv = app.add_subcommand("survey", "minor-arc magnitude survey");
    sv->add_option("--sigma", sigma);
    sv->add_option("--eps", eps);
    sv->add_option("--P", P);
    sv->add_option("--samples", samples);
    sv->add_option("--seed", seed);
    sv->add_option("--out", out_path);

    auto* sc = app.add_subcommand("scan", "exceptional-set scan");
    sc->add_option("--nmax", nmax)->check(CLI::Range(std::int64_t{1},
                                                     std::int64_t{100'000'000}));
    sc->add_flag("--four", four, "four squares instead of three");
    sc->add_option("--chunk", chunk);
    sc->add_option("--checkpoint", checkpoint);
    sc->add_option("--out", out_path);

    auto* r = app.add_subcommand("ratio", "weighted-count ratio report");
    r->add_option("--n-lo", n_lo);
    r->add_option("--n-hi", nmax);
    r->add_option("--qcap", qcap);
    r->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (c->parsed()) return run_constants(sigma, out_path);
        if (s->parsed()) return run_singular(n_lo, nmax, qcap, out_path);
        if (d->parsed())
            return run_decompose(sigma, eps, P, out_path, skip_identities);
        if (a->parsed()) return run_arcs(sigma, eps, P, alpha, grid, out_path);
        if (sv->parsed())
            return run_survey(sigma, eps, P, samples, seed, out_path);
        if (sc->parsed())
            return run_scan(nmax, four, chunk, checkpoint, out_path);
        if (r->parsed()) return run_ratio(n_lo, nmax, qcap, out_path);
    } catch (const psl::ParamDomainError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
