#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cpcsim/distribution.hpp"

namespace cpcsim {

// Empirical first-wins harness: n concurrent replicas per round, first
// finisher wins, losers are cancelled.

struct SyntheticTask {
    Distribution dist;
    double unit_ms = 20.0;  // wall milliseconds per model time unit
};

// External command; "{i}" in any arg is replaced by the replica index.
// Exit code 0 means completion; the first 0 wins.
struct CommandTask {
    std::vector<std::string> argv;
};

struct RaceConfig {
    int replicas = 1;
    int rounds = 1;
    std::variant<SyntheticTask, CommandTask> task{CommandTask{}};
    std::uint64_t seed = 0;
    std::chrono::milliseconds cancel_grace{2000};
    bool pin_cores = false;  // best-effort core affinity, off by default
};

struct RoundResult {
    int winner = -1;
    double winner_ms = 0.0;
};

struct RaceResult {
    std::vector<RoundResult> rounds;
    double mean_winner_ms = 0.0;
    // Mean of column 0 of the sampled duration matrix, so the speedup
    // numerator carries no separate sampling noise. For command tasks
    // this falls back to single-replica wall measurements.
    double mean_single_ms = 0.0;
    double empirical_speedup = 0.0;
    double model_speedup = 0.0;  // order_stats prediction, synthetic only
    double overhead_ms = 0.0;
    int discarded_rounds = 0;
};

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CancelTimeout : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CommandFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-replica spawn+cancel overhead, measured by racing zero-duration
// tasks.
std::chrono::duration<double, std::milli> calibrate();

// Throws CalibrationError when synthetic mean duration < 10x measured
// overhead, CancelTimeout when a loser outlives cancel_grace,
// CommandFailure when every round of a command race fails.
RaceResult race(const RaceConfig& cfg);

}  // namespace cpcsim
