#include "cpcsim/distribution.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace cpcsim {

Exponential::Exponential(double lambda_) : lambda(lambda_) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("Exponential: lambda must be > 0");
}

Erlang::Erlang(int k_, double lambda_) : k(k_), lambda(lambda_) {
    if (k < 1) throw std::invalid_argument("Erlang: k must be a positive integer");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("Erlang: lambda must be > 0");
}

Hyperexponential::Hyperexponential(double a_, double lambda_) : a(a_), lambda(lambda_) {
    if (!(a > 0.5) || !std::isfinite(a))
        throw std::invalid_argument("Hyperexponential: a must be > 1/2");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("Hyperexponential: lambda must be > 0");
}

Uniform::Uniform(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo >= 0.0) || !std::isfinite(lo))
        throw std::invalid_argument("Uniform: lo must be >= 0");
    if (!(hi > lo) || !std::isfinite(hi))
        throw std::invalid_argument("Uniform: hi must be > lo");
}

namespace detail {

// Regularized incomplete gamma, series for x < a+1 and continued
// fraction otherwise. Accurate to ~1e-15 relative, which covers the
// Erlang CDF for k up to 1000 comfortably.
namespace {
constexpr int kMaxIter = 10000;
constexpr double kEps = 1e-16;

double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    // Lentz's method for the continued fraction of Q(a,x).
    const double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}
}  // namespace

double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

}  // namespace detail

double cdf(const Distribution& d, double x) {
    return std::visit(
        [x](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                if (x < 0.0) return 0.0;
                return -std::expm1(-v.lambda * x);
            } else if constexpr (std::is_same_v<T, Erlang>) {
                if (x < 0.0) return 0.0;
                return detail::gamma_p(static_cast<double>(v.k), v.lambda * v.k * x);
            } else if constexpr (std::is_same_v<T, Hyperexponential>) {
                if (x < 0.0) return 0.0;
                return 1.0 - 0.5 * (std::exp(-v.rate1() * x) + std::exp(-v.rate2() * x));
            } else {
                if (x <= v.lo) return 0.0;
                if (x >= v.hi) return 1.0;
                return (x - v.lo) / (v.hi - v.lo);
            }
        },
        d);
}

double pdf(const Distribution& d, double x) {
    return std::visit(
        [x](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                if (x < 0.0) return 0.0;
                return v.lambda * std::exp(-v.lambda * x);
            } else if constexpr (std::is_same_v<T, Erlang>) {
                if (x < 0.0) return 0.0;
                const double rate = v.lambda * v.k;
                if (x == 0.0) return v.k == 1 ? rate : 0.0;
                // exp form avoids overflow of (rate*x)^(k-1) for large k
                return std::exp(v.k * std::log(rate) + (v.k - 1) * std::log(x) -
                                rate * x - std::lgamma(static_cast<double>(v.k)));
            } else if constexpr (std::is_same_v<T, Hyperexponential>) {
                if (x < 0.0) return 0.0;
                return 0.5 * v.rate1() * std::exp(-v.rate1() * x) +
                       0.5 * v.rate2() * std::exp(-v.rate2() * x);
            } else {
                if (x < v.lo || x > v.hi) return 0.0;
                return 1.0 / (v.hi - v.lo);
            }
        },
        d);
}

double survival(const Distribution& d, double x) {
    return std::visit(
        [x](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                if (x < 0.0) return 1.0;
                return std::exp(-v.lambda * x);
            } else if constexpr (std::is_same_v<T, Erlang>) {
                if (x < 0.0) return 1.0;
                return detail::gamma_q(static_cast<double>(v.k), v.lambda * v.k * x);
            } else if constexpr (std::is_same_v<T, Hyperexponential>) {
                if (x < 0.0) return 1.0;
                return 0.5 * (std::exp(-v.rate1() * x) + std::exp(-v.rate2() * x));
            } else {
                if (x <= v.lo) return 1.0;
                if (x >= v.hi) return 0.0;
                return (v.hi - x) / (v.hi - v.lo);
            }
        },
        d);
}

double mean(const Distribution& d) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>)
                return 0.5 * (v.lo + v.hi);
            else
                return 1.0 / v.lambda;
        },
        d);
}

double variance(const Distribution& d) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return 1.0 / (v.lambda * v.lambda);
            } else if constexpr (std::is_same_v<T, Erlang>) {
                return 1.0 / (v.k * v.lambda * v.lambda);
            } else if constexpr (std::is_same_v<T, Hyperexponential>) {
                const double t = 2.0 * v.a - 1.0;
                const double ex2 = (1.0 + t * t) / (v.a * v.a * v.lambda * v.lambda);
                return ex2 - 1.0 / (v.lambda * v.lambda);
            } else {
                const double w = v.hi - v.lo;
                return w * w / 12.0;
            }
        },
        d);
}

double cv(const Distribution& d) {
    return std::sqrt(variance(d)) / mean(d);
}

double sample(const Distribution& d, Rng& rng) {
    return std::visit(
        [&rng](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return -std::log(rng.uniform()) / v.lambda;
            } else if constexpr (std::is_same_v<T, Erlang>) {
                // sum of k phases at rate k*lambda; one log of a product
                double prod = 1.0;
                for (int i = 0; i < v.k; ++i) prod *= rng.uniform();
                return -std::log(prod) / (v.lambda * v.k);
            } else if constexpr (std::is_same_v<T, Hyperexponential>) {
                const double rate = rng.uniform() < 0.5 ? v.rate1() : v.rate2();
                return -std::log(rng.uniform()) / rate;
            } else {
                return v.lo + (v.hi - v.lo) * rng.uniform();
            }
        },
        d);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

double parse_number(const std::string& tok, const std::string& spec) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw std::invalid_argument("bad number '" + tok + "' in distribution spec '" + spec + "'");
    return value;
}

int parse_int(const std::string& tok, const std::string& spec) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw std::invalid_argument("bad integer '" + tok + "' in distribution spec '" + spec + "'");
    return value;
}

std::string fmt(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

}  // namespace

Distribution parse_distribution(const std::string& spec) {
    auto parts = split(spec, ':');
    const std::string& family = parts[0];
    auto expect = [&](std::size_t n) {
        if (parts.size() != n)
            throw std::invalid_argument("distribution spec '" + spec + "': expected " +
                                        std::to_string(n - 1) + " parameter(s)");
    };
    if (family == "exp") {
        expect(2);
        return Exponential{parse_number(parts[1], spec)};
    }
    if (family == "erlang") {
        expect(3);
        return Erlang{parse_int(parts[1], spec), parse_number(parts[2], spec)};
    }
    if (family == "hyper") {
        expect(3);
        return Hyperexponential{parse_number(parts[1], spec), parse_number(parts[2], spec)};
    }
    if (family == "uniform") {
        expect(3);
        return Uniform{parse_number(parts[1], spec), parse_number(parts[2], spec)};
    }
    throw std::invalid_argument("unknown distribution family '" + family + "'");
}

std::string to_string(const Distribution& d) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Exponential>)
                return "exp:" + fmt(v.lambda);
            else if constexpr (std::is_same_v<T, Erlang>)
                return "erlang:" + std::to_string(v.k) + ":" + fmt(v.lambda);
            else if constexpr (std::is_same_v<T, Hyperexponential>)
                return "hyper:" + fmt(v.a) + ":" + fmt(v.lambda);
            else
                return "uniform:" + fmt(v.lo) + ":" + fmt(v.hi);
        },
        d);
}

}  // namespace cpcsim
