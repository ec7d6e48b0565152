#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "cpcsim/rng.hpp"

namespace cpcsim {

// Per-core execution time laws. All three rate-based families are
// parameterized so that the mean is 1/lambda.

struct Exponential {
    double lambda;
    explicit Exponential(double lambda);
};

struct Erlang {
    int k;          // phase count
    double lambda;  // rate of the mean; per-phase rate is k*lambda
    Erlang(int k, double lambda);
};

// Two-branch mixture with equal branch probabilities and rates
// a*lambda and a*lambda/(2a-1). Requires a > 1/2 so both rates are
// positive; a = 1 collapses to Exponential(lambda).
struct Hyperexponential {
    double a;
    double lambda;
    Hyperexponential(double a, double lambda);

    double rate1() const { return a * lambda; }
    double rate2() const { return a * lambda / (2.0 * a - 1.0); }
};

struct Uniform {
    double lo;
    double hi;
    Uniform(double lo, double hi);
};

using Distribution = std::variant<Exponential, Erlang, Hyperexponential, Uniform>;

double cdf(const Distribution& d, double x);
double pdf(const Distribution& d, double x);

// 1 - cdf, computed in direct form so deep tails keep full precision.
double survival(const Distribution& d, double x);

double mean(const Distribution& d);
double variance(const Distribution& d);
double cv(const Distribution& d);

double sample(const Distribution& d, Rng& rng);

// Text grammar: exp:<lambda> | erlang:<k>:<lambda> | hyper:<a>:<lambda>
// | uniform:<lo>:<hi>. Locale-independent, decimal point only.
// Throws std::invalid_argument on malformed input.
Distribution parse_distribution(const std::string& spec);
std::string to_string(const Distribution& d);

namespace detail {
// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P.
double gamma_p(double a, double x);
double gamma_q(double a, double x);
}  // namespace detail

}  // namespace cpcsim
