#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cpcsim/distribution.hpp"

namespace cpcsim {

// Minimum of n i.i.d. execution times.
struct MinQuery {
    Distribution dist;
    std::int64_t n;

    MinQuery(Distribution d, std::int64_t n_) : dist(std::move(d)), n(n_) {
        if (n < 1) throw std::invalid_argument("MinQuery: n must be >= 1");
    }
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One point of a parameter sweep. x is the swept value (core count,
// Erlang k, or hyperexponential a).
struct CurvePoint {
    double x = 0.0;
    double cv = 0.0;
    double analytic_speedup = 0.0;
    std::optional<double> mc_speedup;
    std::optional<double> mc_stderr;
};

// F_{Y_n}(y) = 1 - survival(y)^n, via exp(n*log(survival)) for large n.
double min_cdf(const MinQuery& q, double y);

// f_{Y_n}(y) = n * survival(y)^(n-1) * pdf(y).
double min_pdf(const MinQuery& q, double y);

// E[Y_n]. Closed forms for exponential, uniform and (n <= 1e6)
// hyperexponential; survival-power quadrature otherwise.
// Throws QuadratureError on non-convergence.
double expected_min(const MinQuery& q);

// S_n = E[Y_1] / E[Y_n] = mean(dist) / expected_min.
double speedup(const MinQuery& q);

std::vector<CurvePoint> speedup_curve(const Distribution& dist,
                                      std::span<const std::int64_t> n_values);

namespace detail {
// Integral of survival(dist,y)^n over [0,inf), adaptive G7/K15 on the
// t/(1-t) transform. rel_tol 1e-9 with a 1e-300 absolute floor.
struct QuadResult {
    double value;
    double error_estimate;
};
QuadResult expected_min_quadrature(const Distribution& dist, std::int64_t n);
}  // namespace detail

}  // namespace cpcsim
