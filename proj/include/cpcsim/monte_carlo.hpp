#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cpcsim/order_stats.hpp"

namespace cpcsim {

enum class DenominatorMode {
    AnalyticMean,   // speedup = mean(dist) / mean_min
    SimulatedMean,  // speedup = simulated E[Y_1] / mean_min
};

struct SimConfig {
    std::uint64_t steps = 100000;
    Distribution dist;
    std::int64_t cores = 1;
    std::uint64_t seed = 0;
    DenominatorMode denominator_mode = DenominatorMode::AnalyticMean;
};

struct SimResult {
    double mean_min = 0.0;       // estimate of E[Y_n]
    double stderr_est = 0.0;     // sample sd / sqrt(N)
    double speedup_estimate = 0.0;
    double speedup_stderr = 0.0;
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
};

// The minimum-of-n Monte Carlo estimator: N rounds of n fresh draws,
// averaging the round minima. Deterministic for a fixed seed.
SimResult simulate(const SimConfig& cfg);

// Sweeps. Analytic speedup is always filled; MC columns only when a
// SimConfig template is given. Each point gets a sub-seed derived from
// (template seed, point index).
std::vector<CurvePoint> sweep_cores(const Distribution& dist,
                                    std::span<const std::int64_t> n_values,
                                    const std::optional<SimConfig>& sim = std::nullopt);

std::vector<CurvePoint> sweep_erlang_k(std::span<const int> k_values, double lambda,
                                       std::int64_t cores,
                                       const std::optional<SimConfig>& sim = std::nullopt);

std::vector<CurvePoint> sweep_hyper_a(std::span<const double> a_values, double lambda,
                                      std::int64_t cores,
                                      const std::optional<SimConfig>& sim = std::nullopt);

// Root a > 1 of cv^2 = (1+(2a-1)^2)/a^2 - 1 for a given target cv > 1.
double hyper_a_for_cv(double target_cv);

}  // namespace cpcsim
