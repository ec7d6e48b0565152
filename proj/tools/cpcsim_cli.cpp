#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpcsim/monte_carlo.hpp"
#include "cpcsim/order_stats.hpp"
#include "cpcsim/racer.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitRaceEnv = 4;

// shortest round-trip decimal representation
std::string fmt(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CPCSIM_SEED")) {
        std::uint64_t s = 0;
        std::string v(env);
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
        if (ec == std::errc{} && ptr == v.data() + v.size()) return s;
    }
    return 0;
}

struct Range {
    double start = 0.0;
    double end = 0.0;
    double step = 1.0;
};

// "start..end[:step]"
Range parse_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos)
        throw CLI::ValidationError("range", "expected start..end[:step], got '" + s + "'");
    Range r;
    auto num = [&](const std::string& tok) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw CLI::ValidationError("range", "bad number '" + tok + "'");
        return v;
    };
    r.start = num(s.substr(0, dots));
    std::string rest = s.substr(dots + 2);
    auto colon = rest.find(':');
    if (colon == std::string::npos) {
        r.end = num(rest);
    } else {
        r.end = num(rest.substr(0, colon));
        r.step = num(rest.substr(colon + 1));
    }
    if (r.step <= 0.0 || r.end < r.start)
        throw CLI::ValidationError("range", "need start <= end and step > 0");
    return r;
}

void write_sweep_csv(std::ostream& os, const std::vector<cpcsim::CurvePoint>& points) {
    os << "x,cv,analytic_speedup,mc_speedup,mc_stderr\n";
    for (const auto& p : points) {
        os << fmt(p.x) << ',' << fmt(p.cv) << ',' << fmt(p.analytic_speedup) << ',';
        if (p.mc_speedup) os << fmt(*p.mc_speedup);
        os << ',';
        if (p.mc_stderr) os << fmt(*p.mc_stderr);
        os << '\n';
    }
}

void write_sweep_json(std::ostream& os, const std::vector<cpcsim::CurvePoint>& points) {
    for (const auto& p : points) {
        json row;
        row["x"] = p.x;
        row["cv"] = p.cv;
        row["analytic_speedup"] = p.analytic_speedup;
        if (p.mc_speedup) row["mc_speedup"] = *p.mc_speedup;
        if (p.mc_stderr) row["mc_stderr"] = *p.mc_stderr;
        os << row.dump() << '\n';
    }
}

// whitespace split for --cmd templates
std::vector<std::string> split_command(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Competitive parallel computing: speedup prediction, simulation and racing"};
    app.require_subcommand(1);

    std::string dist_spec;
    std::int64_t cores = 1;
    std::uint64_t steps = 100000;
    std::uint64_t seed = default_seed();
    bool as_json = false;
    bool as_csv = false;

    auto* predict = app.add_subcommand("predict", "Analytic E[Y_n], speedup and cv");
    predict->add_option("dist", dist_spec,
                        "exp:<l> | erlang:<k>:<l> | hyper:<a>:<l> | uniform:<lo>:<hi>")
        ->required();
    predict->add_option("--cores", cores, "core count n")->default_val(1);
    predict->add_flag("--json", as_json, "emit a JSON object");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of E[Y_n]");
    simulate->add_option("dist", dist_spec)->required();
    simulate->add_option("--cores", cores)->default_val(1);
    simulate->add_option("--steps", steps)->default_val(100000);
    simulate->add_option("--seed", seed);
    bool simulated_denom = false;
    simulate->add_flag("--simulated-mean", simulated_denom,
                       "use a simulated E[Y_1] as the speedup denominator");
    simulate->add_flag("--json", as_json);
    simulate->add_flag("--csv", as_csv);

    auto* sweep = app.add_subcommand("sweep", "Parameter sweeps with CSV/JSON output");
    std::string family;
    std::string range_spec;
    std::string mode = "analytic";
    std::string out_path;
    double lambda = 1.0;
    sweep->add_option("--family", family, "cores | erlang-k | hyper-a")
        ->required()
        ->check(CLI::IsMember({"cores", "erlang-k", "hyper-a"}));
    sweep->add_option("--dist", dist_spec, "distribution (cores family only)");
    sweep->add_option("--range", range_spec, "start..end[:step]")->required();
    sweep->add_option("--cores", cores)->default_val(100);
    sweep->add_option("--lambda", lambda)->default_val(1.0);
    sweep->add_option("--mode", mode)->check(CLI::IsMember({"analytic", "mc", "both"}));
    sweep->add_option("--steps", steps)->default_val(100000);
    sweep->add_option("--seed", seed);
    sweep->add_option("--out", out_path, "output file (default stdout)");
    sweep->add_flag("--json", as_json);

    auto* race = app.add_subcommand("race", "Empirical first-wins racing harness");
    std::string cmd_template;
    int replicas = 4;
    int rounds = 50;
    double unit_ms = 20.0;
    std::int64_t grace_ms = 2000;
    bool pin = false;
    race->add_option("dist", dist_spec, "synthetic task distribution");
    race->add_option("--cmd", cmd_template, "external command template; {i} = replica index");
    race->add_option("--replicas", replicas)->default_val(4);
    race->add_option("--rounds", rounds)->default_val(50);
    race->add_option("--seed", seed);
    race->add_option("--unit-ms", unit_ms, "wall ms per model time unit")->default_val(20.0);
    race->add_option("--grace-ms", grace_ms, "loser teardown bound")->default_val(2000);
    race->add_flag("--pin", pin, "pin replicas to cores (best effort)");
    race->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*predict) {
            auto d = cpcsim::parse_distribution(dist_spec);
            cpcsim::MinQuery q{d, cores};
            const double em = cpcsim::expected_min(q);
            const double sp = cpcsim::speedup(q);
            if (as_json) {
                json row;
                row["dist"] = cpcsim::to_string(d);
                row["cores"] = cores;
                row["cv"] = cpcsim::cv(d);
                row["mean"] = cpcsim::mean(d);
                row["expected_min"] = em;
                row["speedup"] = sp;
                std::cout << row.dump() << '\n';
            } else {
                std::cout << "dist          " << cpcsim::to_string(d) << '\n'
                          << "cores         " << cores << '\n'
                          << "cv            " << fmt(cpcsim::cv(d)) << '\n'
                          << "mean          " << fmt(cpcsim::mean(d)) << '\n'
                          << "expected_min  " << fmt(em) << '\n'
                          << "speedup       " << fmt(sp) << '\n';
            }
        } else if (*simulate) {
            cpcsim::SimConfig cfg{steps, cpcsim::parse_distribution(dist_spec), cores, seed,
                                  simulated_denom ? cpcsim::DenominatorMode::SimulatedMean
                                                  : cpcsim::DenominatorMode::AnalyticMean};
            auto r = cpcsim::simulate(cfg);
            if (as_csv) {
                std::cout << "mean_min,stderr,speedup,speedup_stderr,steps,seed\n"
                          << fmt(r.mean_min) << ',' << fmt(r.stderr_est) << ','
                          << fmt(r.speedup_estimate) << ',' << fmt(r.speedup_stderr) << ','
                          << r.steps << ',' << r.seed << '\n';
            } else {
                json row;
                row["mean_min"] = r.mean_min;
                row["stderr"] = r.stderr_est;
                row["speedup"] = r.speedup_estimate;
                row["speedup_stderr"] = r.speedup_stderr;
                row["steps"] = r.steps;
                row["seed"] = r.seed;
                std::cout << row.dump() << '\n';
            }
        } else if (*sweep) {
            Range r = parse_range(range_spec);
            std::optional<cpcsim::SimConfig> sim;
            std::vector<cpcsim::CurvePoint> points;
            auto make_sim = [&](const cpcsim::Distribution& d) {
                if (mode != "analytic")
                    sim = cpcsim::SimConfig{steps, d, cores, seed,
                                            cpcsim::DenominatorMode::AnalyticMean};
            };
            if (family == "cores") {
                if (dist_spec.empty())
                    throw CLI::ValidationError("--dist", "required for --family cores");
                auto d = cpcsim::parse_distribution(dist_spec);
                make_sim(d);
                std::vector<std::int64_t> ns;
                for (double v = r.start; v <= r.end + 1e-9; v += r.step)
                    ns.push_back(static_cast<std::int64_t>(v + 0.5));
                points = cpcsim::sweep_cores(d, ns, sim);
            } else if (family == "erlang-k") {
                make_sim(cpcsim::Erlang{1, lambda});
                std::vector<int> ks;
                for (double v = r.start; v <= r.end + 1e-9; v += r.step)
                    ks.push_back(static_cast<int>(v + 0.5));
                points = cpcsim::sweep_erlang_k(ks, lambda, cores, sim);
            } else {
                make_sim(cpcsim::Exponential{lambda});
                std::vector<double> as;
                for (double v = r.start; v <= r.end + 1e-9; v += r.step) as.push_back(v);
                points = cpcsim::sweep_hyper_a(as, lambda, cores, sim);
            }
            std::ofstream file;
            std::ostream* os = &std::cout;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) throw CLI::ValidationError("--out", "cannot open " + out_path);
                os = &file;
            }
            if (as_json)
                write_sweep_json(*os, points);
            else
                write_sweep_csv(*os, points);
        } else if (*race) {
            cpcsim::RaceConfig cfg;
            cfg.replicas = replicas;
            cfg.rounds = rounds;
            cfg.seed = seed;
            cfg.cancel_grace = std::chrono::milliseconds(grace_ms);
            cfg.pin_cores = pin;
            if (!cmd_template.empty()) {
                cfg.task = cpcsim::CommandTask{split_command(cmd_template)};
            } else if (!dist_spec.empty()) {
                cfg.task = cpcsim::SyntheticTask{cpcsim::parse_distribution(dist_spec), unit_ms};
            } else {
                throw CLI::ValidationError("race", "need a dist spec or --cmd");
            }
            auto result = cpcsim::race(cfg);
            json row;
            row["replicas"] = replicas;
            row["rounds"] = static_cast<int>(result.rounds.size());
            row["discarded_rounds"] = result.discarded_rounds;
            row["mean_winner_ms"] = result.mean_winner_ms;
            row["mean_single_ms"] = result.mean_single_ms;
            row["empirical_speedup"] = result.empirical_speedup;
            row["model_speedup"] = result.model_speedup;
            row["overhead_ms"] = result.overhead_ms;
            if (as_json) {
                json winners = json::array();
                for (const auto& rr : result.rounds)
                    winners.push_back({{"winner", rr.winner}, {"winner_ms", rr.winner_ms}});
                row["per_round"] = winners;
                std::cout << row.dump() << '\n';
            } else {
                for (auto& [key, value] : row.items())
                    std::cout << key << "  " << value.dump() << '\n';
            }
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const cpcsim::QuadratureError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const cpcsim::CalibrationError& e) {
        std::cerr << "race environment error: " << e.what() << '\n';
        return kExitRaceEnv;
    } catch (const cpcsim::CancelTimeout& e) {
        std::cerr << "race environment error: " << e.what() << '\n';
        return kExitRaceEnv;
    } catch (const cpcsim::CommandFailure& e) {
        std::cerr << "race environment error: " << e.what() << '\n';
        return kExitRaceEnv;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}
