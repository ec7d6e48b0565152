#include "cpcsim/monte_carlo.hpp"

#include <cmath>
#include <stdexcept>

namespace cpcsim {

SimResult simulate(const SimConfig& cfg) {
    if (cfg.steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
    if (cfg.cores < 1) throw std::invalid_argument("simulate: cores must be >= 1");
    Rng rng(cfg.seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t i = 0; i < cfg.steps; ++i) {
        double y = sample(cfg.dist, rng);
        for (std::int64_t c = 1; c < cfg.cores; ++c)
            y = std::min(y, sample(cfg.dist, rng));
        sum += y;
        sum_sq += y * y;
    }
    const double nd = static_cast<double>(cfg.steps);
    SimResult r;
    r.mean_min = sum / nd;
    const double var = std::max(0.0, (sum_sq - sum * sum / nd) / std::max(1.0, nd - 1.0));
    r.stderr_est = std::sqrt(var / nd);
    r.steps = cfg.steps;
    r.seed = cfg.seed;

    double denom = mean(cfg.dist);
    if (cfg.denominator_mode == DenominatorMode::SimulatedMean) {
        SimConfig single = cfg;
        single.cores = 1;
        single.seed = mix64(cfg.seed ^ 0x5155u);
        single.denominator_mode = DenominatorMode::AnalyticMean;
        denom = simulate(single).mean_min;
    }
    r.speedup_estimate = denom / r.mean_min;
    r.speedup_stderr = denom / (r.mean_min * r.mean_min) * r.stderr_est;
    return r;
}

namespace {

void fill_mc(CurvePoint& p, const SimConfig& tmpl, const Distribution& dist,
             std::int64_t cores, std::size_t index) {
    SimConfig cfg = tmpl;
    cfg.dist = dist;
    cfg.cores = cores;
    cfg.seed = Rng::substream(tmpl.seed, index).seed();
    SimResult r = simulate(cfg);
    p.mc_speedup = r.speedup_estimate;
    p.mc_stderr = r.speedup_stderr;
}

}  // namespace

std::vector<CurvePoint> sweep_cores(const Distribution& dist,
                                    std::span<const std::int64_t> n_values,
                                    const std::optional<SimConfig>& sim) {
    std::vector<CurvePoint> out = speedup_curve(dist, n_values);
    if (sim)
        for (std::size_t i = 0; i < out.size(); ++i)
            fill_mc(out[i], *sim, dist, n_values[i], i);
    return out;
}

std::vector<CurvePoint> sweep_erlang_k(std::span<const int> k_values, double lambda,
                                       std::int64_t cores,
                                       const std::optional<SimConfig>& sim) {
    std::vector<CurvePoint> out;
    out.reserve(k_values.size());
    for (std::size_t i = 0; i < k_values.size(); ++i) {
        Distribution d = Erlang{k_values[i], lambda};
        CurvePoint p;
        p.x = static_cast<double>(k_values[i]);
        p.cv = cv(d);
        p.analytic_speedup = speedup(MinQuery{d, cores});
        if (sim) fill_mc(p, *sim, d, cores, i);
        out.push_back(p);
    }
    return out;
}

std::vector<CurvePoint> sweep_hyper_a(std::span<const double> a_values, double lambda,
                                      std::int64_t cores,
                                      const std::optional<SimConfig>& sim) {
    std::vector<CurvePoint> out;
    out.reserve(a_values.size());
    for (std::size_t i = 0; i < a_values.size(); ++i) {
        Distribution d = Hyperexponential{a_values[i], lambda};
        CurvePoint p;
        p.x = a_values[i];
        p.cv = cv(d);
        p.analytic_speedup = speedup(MinQuery{d, cores});
        if (sim) fill_mc(p, *sim, d, cores, i);
        out.push_back(p);
    }
    return out;
}

double hyper_a_for_cv(double target_cv) {
    if (!(target_cv > 1.0))
        throw std::invalid_argument("hyper_a_for_cv: target cv must be > 1");
    // cv^2 + 1 = (1+(2a-1)^2)/a^2  =>  (cv^2-3) a^2 + 4a - 2 = 0
    const double c2 = target_cv * target_cv;
    const double qa = c2 - 3.0;
    if (qa >= 0.0)  // cv^2 = (1+(2a-1)^2)/a^2 - 1 < 3 for every finite a
        throw std::invalid_argument("hyper_a_for_cv: cv >= sqrt(3) is unreachable");
    const double sd = std::sqrt(16.0 + 8.0 * qa);
    const double r1 = (-4.0 + sd) / (2.0 * qa);
    const double r2 = (-4.0 - sd) / (2.0 * qa);
    const double a = std::max(r1, r2);
    if (!(a > 0.5))
        throw std::invalid_argument("hyper_a_for_cv: no root > 1/2 for this cv");
    return a;
}

}  // namespace cpcsim
