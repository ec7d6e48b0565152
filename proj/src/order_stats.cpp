#include "cpcsim/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace cpcsim {

namespace {

// survival^n as exp(n*log s); 0 where the survival already vanished.
double survival_pow(const Distribution& d, double y, double n) {
    if (n == 0.0) return 1.0;  // keeps the n=1 min_pdf identity at the support edge
    const double s = survival(d, y);
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return std::exp(n * std::log(s));
}

// Gauss-Kronrod 15-point nodes/weights on [-1,1] (positive half).
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename F>
void gk15(const F& f, double a, double b, double& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kKronrodNodes[i]);
        fv[14 - i] = f(c + h * kKronrodNodes[i]);
    }
    fv[7] = f(c);
    double kron = 0.0;
    for (int i = 0; i < 8; ++i) kron += kKronrodWeights[i] * (fv[i] + (i < 7 ? fv[14 - i] : 0.0));
    double gauss = 0.0;
    for (int i = 0; i < 4; ++i) {
        const int j = 2 * i + 1;  // odd Kronrod nodes are the G7 nodes
        gauss += kGaussWeights[i] * (fv[j] + (i < 3 ? fv[14 - j] : 0.0));
    }
    result = kron * h;
    err = std::abs(kron - gauss) * h;
}

struct Interval {
    double a, b, value, error;
};

template <typename F>
detail::QuadResult adaptive_gk(const F& f, double a, double b, double rel_tol,
                               double abs_floor, int max_intervals) {
    std::deque<Interval> heap;
    Interval whole{};
    whole.a = a;
    whole.b = b;
    gk15(f, a, b, whole.value, whole.error);
    heap.push_back(whole);
    double total = whole.value;
    double total_err = whole.error;
    int splits = 0;
    while (total_err > std::max(rel_tol * std::abs(total), abs_floor) &&
           splits < max_intervals) {
        auto worst = std::max_element(heap.begin(), heap.end(),
                                      [](const Interval& x, const Interval& y) {
                                          return x.error < y.error;
                                      });
        Interval iv = *worst;
        heap.erase(worst);
        const double mid = 0.5 * (iv.a + iv.b);
        Interval left{}, right{};
        left.a = iv.a;
        left.b = mid;
        right.a = mid;
        right.b = iv.b;
        gk15(f, left.a, left.b, left.value, left.error);
        gk15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value - iv.value;
        total_err += left.error + right.error - iv.error;
        heap.push_back(left);
        heap.push_back(right);
        ++splits;
    }
    if (total_err > std::max(rel_tol * std::abs(total), abs_floor))
        throw QuadratureError("expected_min quadrature did not converge (err=" +
                              std::to_string(total_err) + ")");
    return {total, total_err};
}

// E[Y_n] for the two-branch hyperexponential via the binomial sum
//   sum_j C(n,j) (1/2)^n / (j*l1 + (n-j)*l2).
// Terms are accumulated outward from the pmf mode with a ratio
// recurrence so nothing underflows for large n.
double hyper_expected_min_sum(const Hyperexponential& h, std::int64_t n) {
    const double l1 = h.rate1();
    const double l2 = h.rate2();
    const auto denom = [&](std::int64_t j) {
        return static_cast<double>(j) * l1 + static_cast<double>(n - j) * l2;
    };
    if (n == 1) return 0.5 / l1 + 0.5 / l2;
    const std::int64_t mode = n / 2;
    const double nd = static_cast<double>(n);
    const double log_pmode = std::lgamma(nd + 1.0) - std::lgamma(mode + 1.0) -
                             std::lgamma(nd - mode + 1.0) - nd * std::log(2.0);
    const double pmode = std::exp(log_pmode);
    double sum = pmode / denom(mode);
    // downward in j: p_{j-1} = p_j * j / (n-j+1)
    double p = pmode;
    for (std::int64_t j = mode; j > 0; --j) {
        p *= static_cast<double>(j) / static_cast<double>(n - j + 1);
        if (p < 1e-18 * pmode) break;
        sum += p / denom(j - 1);
    }
    // upward: p_{j+1} = p_j * (n-j) / (j+1)
    p = pmode;
    for (std::int64_t j = mode; j < n; ++j) {
        p *= static_cast<double>(n - j) / static_cast<double>(j + 1);
        if (p < 1e-18 * pmode) break;
        sum += p / denom(j + 1);
    }
    return sum;
}

constexpr std::int64_t kBinomialSumCap = 1000000;

}  // namespace

double min_cdf(const MinQuery& q, double y) {
    return 1.0 - survival_pow(q.dist, y, static_cast<double>(q.n));
}

double min_pdf(const MinQuery& q, double y) {
    const double f = pdf(q.dist, y);
    if (f == 0.0) return 0.0;
    return static_cast<double>(q.n) * survival_pow(q.dist, y, static_cast<double>(q.n - 1)) * f;
}

namespace detail {

QuadResult expected_min_quadrature(const Distribution& dist, std::int64_t n) {
    // E[Y_n] = integral of survival^n over [0,inf); map y = scale*t/(1-t)
    // with scale at the median of the min, so the transformed integrand
    // cannot hide between the initial Kronrod nodes for huge n.
    const double nd = static_cast<double>(n);
    double hi = mean(dist);
    while (survival_pow(dist, hi, nd) > 0.5 && hi < 1e308) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-300 + 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (survival_pow(dist, mid, nd) > 0.5 ? lo : hi) = mid;
    }
    const double scale = std::max(hi, 1e-300);
    auto integrand = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double om = 1.0 - t;
        const double y = scale * t / om;
        const double s = survival_pow(dist, y, nd);
        return s * scale / (om * om);
    };
    return adaptive_gk(integrand, 0.0, 1.0, 1e-9, 1e-300, 2000);
}

}  // namespace detail

double expected_min(const MinQuery& q) {
    const auto n = q.n;
    if (const auto* e = std::get_if<Exponential>(&q.dist))
        return 1.0 / (e->lambda * static_cast<double>(n));
    if (const auto* u = std::get_if<Uniform>(&q.dist))
        return u->lo + (u->hi - u->lo) / static_cast<double>(n + 1);
    if (const auto* h = std::get_if<Hyperexponential>(&q.dist); h && n <= kBinomialSumCap)
        return hyper_expected_min_sum(*h, n);
    return detail::expected_min_quadrature(q.dist, n).value;
}

double speedup(const MinQuery& q) {
    if (q.n == 1) return 1.0;
    return mean(q.dist) / expected_min(q);
}

std::vector<CurvePoint> speedup_curve(const Distribution& dist,
                                      std::span<const std::int64_t> n_values) {
    if (n_values.empty())
        throw std::invalid_argument("speedup_curve: n_values must be nonempty");
    std::vector<CurvePoint> out;
    out.reserve(n_values.size());
    const double c = cv(dist);
    for (auto n : n_values) {
        CurvePoint p;
        p.x = static_cast<double>(n);
        p.cv = c;
        p.analytic_speedup = speedup(MinQuery{dist, n});
        out.push_back(p);
    }
    return out;
}

}  // namespace cpcsim
