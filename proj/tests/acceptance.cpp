// Acceptance suite: one pass/fail line per criterion, nonzero exit if
// anything fails. Criterion 8 (the racing harness) is wall-clock
// sensitive; pass --skip-racer to leave it out, e.g. on loaded CI.

#include <cmath>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "cpcsim/monte_carlo.hpp"
#include "cpcsim/order_stats.hpp"
#include "cpcsim/racer.hpp"

using namespace cpcsim;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << id << "] " << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << '\n';
    if (!ok) ++failures;
}

bool within_rel(double got, double want, double tol) {
    return std::abs(got - want) <= tol * std::abs(want);
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void criterion1_linear_speedup() {
    bool ok = true;
    std::string detail;
    for (std::int64_t n = 1; n <= 1000; ++n) {
        const double s = speedup(MinQuery{Exponential{1.0}, n});
        if (!within_rel(s, static_cast<double>(n), 1e-12)) {
            ok = false;
            detail = "n=" + std::to_string(n) + " gave " + num(s);
            break;
        }
    }
    report(1, "exponential speedup is exactly n for n=1..1000", ok, detail);
}

void criterion2_cv_table() {
    auto round2 = [](double x) { return std::round(x * 100.0) / 100.0; };
    struct Row {
        Distribution d;
        double want;
    };
    const std::vector<Row> rows = {{Erlang{10, 1.0}, 0.32},
                                   {Exponential{1.0}, 1.00},
                                   {Hyperexponential{5, 1.0}, 1.51},
                                   {Hyperexponential{10, 1.0}, 1.62}};
    bool ok = true;
    std::string detail;
    for (const auto& row : rows) {
        const double got = round2(cv(row.d));
        if (got != row.want) {
            ok = false;
            detail = to_string(row.d) + " cv " + num(got) + " != " + num(row.want);
        }
    }
    report(2, "CVs of Erlang-10 / M / H2(5) / H2(10) round to 0.32 / 1.00 / 1.51 / 1.62", ok,
           detail);
}

void criterion3_hyper_anchors() {
    struct Case {
        double a;
        double paper;
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : {Case{5.0, 275.71}, Case{10.0, 521.15}}) {
        Distribution d = Hyperexponential{c.a, 1.0};
        const double analytic = speedup(MinQuery{d, 100});
        SimConfig cfg{100000, d, 100, 20250823, DenominatorMode::AnalyticMean};
        auto r = simulate(cfg);
        const bool mc_in_band = within_rel(r.speedup_estimate, c.paper, 0.05);
        const bool analytic_in_band = within_rel(analytic, c.paper, 0.05);
        const bool mutual =
            std::abs(analytic - r.speedup_estimate) <= 4.0 * r.speedup_stderr;
        if (!(mc_in_band && analytic_in_band && mutual)) {
            ok = false;
            detail = "a=" + num(c.a) + " mc=" + num(r.speedup_estimate) +
                     " analytic=" + num(analytic) + " want " + num(c.paper);
        }
    }
    report(3, "hyperexponential n=100 anchors 275.71 / 521.15 within 5%, MC and analytic agree",
           ok, detail);
}

void criterion4_erlang_anchors() {
    bool ok = true;
    std::string detail;
    struct Case {
        int k;
        double paper;
    };
    for (const auto& c : {Case{3, 7.68}, Case{2, 15.14}}) {
        Distribution d = Erlang{c.k, 1.0};
        const double analytic = speedup(MinQuery{d, 100});
        if (!within_rel(analytic, c.paper, 0.03)) {
            ok = false;
            detail = "k=" + std::to_string(c.k) + " analytic " + num(analytic);
        }
        SimConfig cfg{100000, d, 100, 42, DenominatorMode::AnalyticMean};
        auto r = simulate(cfg);
        if (std::abs(analytic - r.speedup_estimate) > 4.0 * r.speedup_stderr) {
            ok = false;
            detail = "k=" + std::to_string(c.k) + " mc " + num(r.speedup_estimate) +
                     " vs analytic " + num(analytic);
        }
    }
    std::vector<int> ks;
    for (int k = 2; k <= 100; ++k) ks.push_back(k);
    auto pts = sweep_erlang_k(ks, 1.0, 100);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].analytic_speedup >= pts[i - 1].analytic_speedup) {
            ok = false;
            detail = "not monotone at k=" + std::to_string(ks[i]);
        }
    }
    if (pts.back().analytic_speedup >= 2.0) {
        ok = false;
        detail = "k=100 speedup " + num(pts.back().analytic_speedup) + " not < 2";
    }
    report(4, "Erlang n=100 anchors 7.68 / 15.14 within 3%; k sweep monotone, tail < 2", ok,
           detail);
}

void criterion5_cv_inversion() {
    struct Case {
        double cv;
        double paper;
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : {Case{1.59, 426.08}, Case{1.70, 1798.56}, Case{1.72, 4975.12}}) {
        const double a = hyper_a_for_cv(c.cv);
        const double s = speedup(MinQuery{Hyperexponential{a, 1.0}, 100});
        if (!within_rel(s, c.paper, 0.10)) {
            ok = false;
            detail = "cv=" + num(c.cv) + " a=" + num(a) + " speedup " + num(s) + " vs " +
                     num(c.paper);
        }
    }
    report(5, "CV-inverted hyperexponential anchors 426.08 / 1798.56 / 4975.12 within 10%", ok,
           detail);
}

void criterion6_uniform_vs_erlang() {
    bool ok = true;
    std::string detail;
    for (std::int64_t n = 1; n <= 100; ++n) {
        const double s = speedup(MinQuery{Uniform{0.0, 2.0}, n});
        if (!within_rel(s, (static_cast<double>(n) + 1.0) / 2.0, 1e-12)) {
            ok = false;
            detail = "uniform speedup at n=" + std::to_string(n) + " is " + num(s);
            break;
        }
        if (n >= 2 && s <= speedup(MinQuery{Erlang{3, 1.0}, n})) {
            ok = false;
            detail = "uniform does not beat Erlang-3 at n=" + std::to_string(n);
            break;
        }
    }
    const double s100 = speedup(MinQuery{Uniform{0.0, 2.0}, 100});
    if (s100 != 50.5 && !within_rel(s100, 50.5, 1e-12)) {
        ok = false;
        detail = "n=100 gave " + num(s100);
    }
    report(6, "uniform(0,2) speedup is (n+1)/2 exactly and beats Erlang-3 for n >= 2", ok,
           detail);
}

void criterion7_property_suite() {
    bool ok = true;
    std::string detail;

    // sampler KS at alpha ~ 0.001
    const std::vector<Distribution> builtins = {Exponential{1.0}, Erlang{2, 1.0},
                                                Erlang{10, 1.0}, Hyperexponential{5, 1.0},
                                                Hyperexponential{10, 1.0}, Uniform{0.0, 2.0}};
    const std::size_t nks = 100000;
    std::uint64_t seed = 31337;
    for (const auto& d : builtins) {
        Rng rng(seed++);
        std::vector<double> xs(nks);
        for (auto& x : xs) x = sample(d, rng);
        std::sort(xs.begin(), xs.end());
        double stat = 0.0;
        for (std::size_t i = 0; i < nks; ++i) {
            const double f = cdf(d, xs[i]);
            stat = std::max(stat, std::abs(f - static_cast<double>(i) / nks));
            stat = std::max(stat, std::abs(f - static_cast<double>(i + 1) / nks));
        }
        if (stat >= 1.95 / std::sqrt(static_cast<double>(nks))) {
            ok = false;
            detail = "KS fail for " + to_string(d) + ": " + num(stat);
        }
    }

    // pdf integrates to 1 (trapezoid oracle on a support-aligned grid)
    for (const auto& d : builtins) {
        const double hi = std::holds_alternative<Uniform>(d) ? std::get<Uniform>(d).hi
                                                             : 40.0 * mean(d);
        const int steps = 400000;
        double total = 0.0;
        double prev = pdf(d, 0.0);
        const double h = hi / steps;
        for (int i = 1; i <= steps; ++i) {
            const double cur = pdf(d, i * h);
            total += 0.5 * (prev + cur) * h;
            prev = cur;
        }
        if (std::abs(total - 1.0) > 1e-6) {
            ok = false;
            detail = "pdf integral for " + to_string(d) + " = " + num(total);
        }
    }

    // closed form vs quadrature
    const std::vector<Distribution> closed = {Exponential{1.0}, Uniform{0.0, 2.0},
                                              Hyperexponential{5, 1.0}};
    for (const auto& d : closed) {
        for (std::int64_t n : {1, 10, 100}) {
            const double exact = expected_min(MinQuery{d, n});
            const double quad = cpcsim::detail::expected_min_quadrature(d, n).value;
            if (!within_rel(quad, exact, 1e-6)) {
                ok = false;
                detail = "quadrature mismatch for " + to_string(d) +
                         " n=" + std::to_string(n);
            }
        }
    }

    // MC vs analytic, 4 stderr, 5 seeds, one excursion allowed
    for (const auto& d : builtins) {
        for (std::int64_t n : {1, 2, 10, 100}) {
            const double exact = expected_min(MinQuery{d, n});
            int exc = 0;
            for (std::uint64_t s = 1; s <= 5; ++s) {
                SimConfig cfg{100000, d, n, s * 7919, DenominatorMode::AnalyticMean};
                auto r = simulate(cfg);
                if (std::abs(r.mean_min - exact) > 4.0 * r.stderr_est) ++exc;
            }
            if (exc > 1) {
                ok = false;
                detail = "MC drift for " + to_string(d) + " n=" + std::to_string(n);
            }
        }
    }

    // min-stability of exponentials (KS vs Exponential(n*lambda))
    {
        const std::size_t rounds = 50000;
        const int n = 8;
        Rng rng(271828);
        Distribution d = Exponential{1.0};
        std::vector<double> mins(rounds);
        for (auto& m : mins) {
            m = sample(d, rng);
            for (int i = 1; i < n; ++i) m = std::min(m, sample(d, rng));
        }
        std::sort(mins.begin(), mins.end());
        Distribution ref = Exponential{8.0};
        double stat = 0.0;
        for (std::size_t i = 0; i < rounds; ++i) {
            const double f = cdf(ref, mins[i]);
            stat = std::max(stat, std::abs(f - static_cast<double>(i) / rounds));
            stat = std::max(stat, std::abs(f - static_cast<double>(i + 1) / rounds));
        }
        if (stat >= 1.95 / std::sqrt(static_cast<double>(rounds))) {
            ok = false;
            detail = "min-stability KS " + num(stat);
        }
    }

    // determinism byte-equality
    {
        SimConfig cfg{50000, Hyperexponential{10, 1.0}, 100, 555,
                      DenominatorMode::AnalyticMean};
        auto a = simulate(cfg);
        auto b = simulate(cfg);
        if (std::memcmp(&a, &b, sizeof a) != 0) {
            ok = false;
            detail = "simulate not bit-identical";
        }
    }

    report(7, "property suite: KS, pdf normalization, quadrature, MC consistency, determinism",
           ok, detail);
}

void criterion8_racer() {
    // wall-clock sensitive: scheduler stalls of tens of ms do land in the
    // round means on a busy host, so each statistical check gets three
    // attempts before it counts as a failure
    bool ok = true;
    std::string detail;
    try {
        bool exp_ok = false;
        double last_exp = 0.0;
        for (int attempt = 0; attempt < 3 && !exp_ok; ++attempt) {
            RaceConfig cfg;
            cfg.replicas = 4;
            cfg.rounds = 200;
            cfg.seed = 8;
            cfg.task = SyntheticTask{Exponential{1.0}, 20.0};
            last_exp = race(cfg).empirical_speedup;
            exp_ok = within_rel(last_exp, 4.0, 0.20);
        }
        if (!exp_ok) {
            ok = false;
            detail = "exponential race speedup " + num(last_exp);
        }

        bool flat_ok = false;
        double last_flat = 0.0;
        for (int attempt = 0; attempt < 3 && !flat_ok; ++attempt) {
            RaceConfig flat;
            flat.replicas = 8;
            flat.rounds = 50;
            flat.seed = 9;
            flat.task = SyntheticTask{Uniform{24.9, 25.1}, 1.0};
            last_flat = race(flat).empirical_speedup;
            flat_ok = within_rel(last_flat, 1.0, 0.10);
        }
        if (!flat_ok) {
            ok = false;
            detail += std::string(detail.empty() ? "" : "; ") + "constant race speedup " +
                      num(last_flat);
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(8, "racer: exponential n=4 within 20% of 4, constant task within 10% of 1", ok,
           detail);
}

}  // namespace

int main(int argc, char** argv) {
    bool skip_racer = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--skip-racer") == 0) skip_racer = true;

    criterion1_linear_speedup();
    criterion2_cv_table();
    criterion3_hyper_anchors();
    criterion4_erlang_anchors();
    criterion5_cv_inversion();
    criterion6_uniform_vs_erlang();
    criterion7_property_suite();
    if (skip_racer)
        std::cout << "SKIP  [8] racer (requested via --skip-racer)\n";
    else
        criterion8_racer();

    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
