#include "cpcsim/racer.hpp"

#include <sys/types.h>
#include <sys/wait.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <csignal>
#include <numeric>
#include <pthread.h>
#include <thread>
#include <unistd.h>

#include "cpcsim/order_stats.hpp"

namespace cpcsim {

namespace {

using Clock = std::chrono::steady_clock;
using MsF = std::chrono::duration<double, std::milli>;

// Realize a target duration against an absolute deadline: chunked
// sleeps (1ms quanta, so cancellation lands within ~1ms) down to a
// short yield-spin window. A wide busy-spin window serializes badly
// when replicas outnumber cores, so the window is kept at 200us.
void burn_until(Clock::time_point deadline, const std::atomic<bool>& cancel) {
    constexpr auto kSpinWindow = std::chrono::microseconds(200);
    constexpr auto kSleepQuantum = std::chrono::milliseconds(1);
    while (!cancel.load(std::memory_order_relaxed)) {
        const auto now = Clock::now();
        if (now >= deadline) return;
        const auto remaining = deadline - now;
        if (remaining > kSpinWindow)
            std::this_thread::sleep_for(std::min<Clock::duration>(remaining - kSpinWindow,
                                                                  kSleepQuantum));
        else
            std::this_thread::yield();
    }
}

void pin_to_core(int index) {
    cpu_set_t set;
    CPU_ZERO(&set);
    CPU_SET(index % static_cast<int>(std::thread::hardware_concurrency()), &set);
    pthread_setaffinity_np(pthread_self(), sizeof(set), &set);  // best effort
}

struct SyntheticRound {
    int winner = -1;
    double winner_ms = 0.0;
    double teardown_ms = 0.0;
};

SyntheticRound run_synthetic_round(const std::vector<double>& durations_ms,
                                   bool pin, std::chrono::milliseconds grace) {
    const int n = static_cast<int>(durations_ms.size());
    std::atomic<bool> cancel{false};
    std::atomic<int> winner{-1};
    std::atomic<int> started{0};
    std::atomic<bool> go{false};
    MsF winner_time{0};

    std::vector<std::thread> workers;
    workers.reserve(n);
    Clock::time_point start_time;
    for (int i = 0; i < n; ++i) {
        workers.emplace_back([&, i] {
            if (pin) pin_to_core(i);
            started.fetch_add(1);
            while (!go.load(std::memory_order_acquire)) std::this_thread::yield();
            const auto begin = Clock::now();
            burn_until(begin + std::chrono::duration_cast<Clock::duration>(
                                   MsF(durations_ms[i])),
                       cancel);
            if (cancel.load(std::memory_order_relaxed)) return;
            int expected = -1;
            if (winner.compare_exchange_strong(expected, i)) {
                winner_time = Clock::now() - start_time;
                cancel.store(true, std::memory_order_relaxed);
            }
        });
    }
    while (started.load() < n) std::this_thread::yield();
    start_time = Clock::now();
    go.store(true, std::memory_order_release);

    for (auto& t : workers) t.join();
    const auto teardown = Clock::now() - start_time - std::chrono::duration_cast<Clock::duration>(winner_time);
    if (teardown > grace)
        throw CancelTimeout("losers outlived cancel_grace (" +
                            std::to_string(MsF(teardown).count()) + " ms)");
    SyntheticRound r;
    r.winner = winner.load();
    r.winner_ms = winner_time.count();
    r.teardown_ms = MsF(teardown).count();
    return r;
}

std::string substitute_index(const std::string& s, int index) {
    std::string out = s;
    const std::string tok = "{i}";
    for (auto pos = out.find(tok); pos != std::string::npos; pos = out.find(tok, pos))
        out.replace(pos, tok.size(), std::to_string(index));
    return out;
}

struct CommandRound {
    int winner = -1;
    double winner_ms = 0.0;
    bool discarded = false;
};

CommandRound run_command_round(const CommandTask& task, int replicas,
                               std::chrono::milliseconds grace) {
    std::vector<pid_t> pids(replicas, -1);
    const auto start = Clock::now();
    for (int i = 0; i < replicas; ++i) {
        std::vector<std::string> argv;
        argv.reserve(task.argv.size());
        for (const auto& a : task.argv) argv.push_back(substitute_index(a, i));
        pid_t pid = fork();
        if (pid == 0) {
            std::vector<char*> cargv;
            for (auto& a : argv) cargv.push_back(a.data());
            cargv.push_back(nullptr);
            execvp(cargv[0], cargv.data());
            _exit(127);
        }
        pids[i] = pid;
    }

    CommandRound r;
    int live = replicas;
    while (live > 0 && r.winner < 0) {
        for (int i = 0; i < replicas; ++i) {
            if (pids[i] < 0) continue;
            int status = 0;
            pid_t got = waitpid(pids[i], &status, WNOHANG);
            if (got == 0) continue;
            pids[i] = -1;
            --live;
            if (WIFEXITED(status) && WEXITSTATUS(status) == 0 && r.winner < 0) {
                r.winner = i;
                r.winner_ms = MsF(Clock::now() - start).count();
            }
        }
        if (r.winner < 0 && live > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    if (r.winner < 0) r.discarded = true;

    // cancel the losers: SIGTERM, escalate to SIGKILL at grace/2
    for (pid_t pid : pids)
        if (pid > 0) kill(pid, SIGTERM);
    const auto term_deadline = Clock::now() + grace / 2;
    const auto kill_deadline = Clock::now() + grace;
    bool killed = false;
    while (live > 0) {
        for (int i = 0; i < replicas; ++i) {
            if (pids[i] < 0) continue;
            int status = 0;
            if (waitpid(pids[i], &status, WNOHANG) > 0) {
                pids[i] = -1;
                --live;
            }
        }
        if (live == 0) break;
        const auto now = Clock::now();
        if (!killed && now > term_deadline) {
            for (pid_t pid : pids)
                if (pid > 0) kill(pid, SIGKILL);
            killed = true;
        }
        if (now > kill_deadline)
            throw CancelTimeout("command replicas outlived cancel_grace");
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    return r;
}

}  // namespace

std::chrono::duration<double, std::milli> calibrate() {
    constexpr int kRounds = 21;
    constexpr int kReplicas = 4;
    std::vector<double> samples;
    samples.reserve(kRounds);
    for (int round = 0; round < kRounds; ++round) {
        auto r = run_synthetic_round(std::vector<double>(kReplicas, 0.0), false,
                                     std::chrono::milliseconds(2000));
        samples.push_back(r.winner_ms + r.teardown_ms);
    }
    // median: one descheduled round must not poison the estimate
    std::nth_element(samples.begin(), samples.begin() + kRounds / 2, samples.end());
    return MsF(samples[kRounds / 2]);
}

RaceResult race(const RaceConfig& cfg) {
    if (cfg.replicas < 1) throw std::invalid_argument("race: replicas must be >= 1");
    if (cfg.rounds < 1) throw std::invalid_argument("race: rounds must be >= 1");

    RaceResult result;
    result.overhead_ms = calibrate().count();

    if (const auto* syn = std::get_if<SyntheticTask>(&cfg.task)) {
        const double mean_ms = mean(syn->dist) * syn->unit_ms;
        if (mean_ms < 10.0 * result.overhead_ms)
            throw CalibrationError("synthetic mean duration " + std::to_string(mean_ms) +
                                   " ms is below 10x spawn overhead of " +
                                   std::to_string(result.overhead_ms) + " ms");

        // sampled duration matrix is fixed by the seed before any racing
        Rng rng(cfg.seed);
        std::vector<std::vector<double>> durations(cfg.rounds,
                                                   std::vector<double>(cfg.replicas));
        for (auto& row : durations)
            for (auto& d : row) d = sample(syn->dist, rng) * syn->unit_ms;

        double winner_sum = 0.0;
        double single_sum = 0.0;
        for (const auto& row : durations) {
            auto r = run_synthetic_round(row, cfg.pin_cores, cfg.cancel_grace);
            result.rounds.push_back({r.winner, r.winner_ms});
            winner_sum += r.winner_ms;
            single_sum += row[0];
        }
        result.mean_winner_ms = winner_sum / cfg.rounds;
        result.mean_single_ms = single_sum / cfg.rounds;
        result.model_speedup = speedup(MinQuery{syn->dist, cfg.replicas});
    } else {
        const auto& task = std::get<CommandTask>(cfg.task);
        if (task.argv.empty()) throw std::invalid_argument("race: empty command");
        double winner_sum = 0.0;
        int kept = 0;
        for (int round = 0; round < cfg.rounds; ++round) {
            auto r = run_command_round(task, cfg.replicas, cfg.cancel_grace);
            if (r.discarded) {
                ++result.discarded_rounds;
                continue;
            }
            result.rounds.push_back({r.winner, r.winner_ms});
            winner_sum += r.winner_ms;
            ++kept;
        }
        if (kept == 0)
            throw CommandFailure("every round failed: no replica exited 0");
        result.mean_winner_ms = winner_sum / kept;
        // single-replica baseline measured on the wall clock
        double single_sum = 0.0;
        int single_kept = 0;
        for (int round = 0; round < cfg.rounds; ++round) {
            auto r = run_command_round(task, 1, cfg.cancel_grace);
            if (!r.discarded) {
                single_sum += r.winner_ms;
                ++single_kept;
            }
        }
        result.mean_single_ms = single_kept > 0 ? single_sum / single_kept : 0.0;
        result.model_speedup = 0.0;
    }

    result.empirical_speedup =
        result.mean_winner_ms > 0.0 ? result.mean_single_ms / result.mean_winner_ms : 0.0;
    return result;
}

}  // namespace cpcsim
