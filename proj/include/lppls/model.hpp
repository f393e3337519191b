#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "lppls/price_series.hpp"

namespace lppls {

/// Window of trading-day indices, both endpoints included.
struct Window {
    std::size_t t1;
    std::size_t t2;
    std::size_t n_points() const { return t2 - t1 + 1; }
    std::size_t dt() const { return t2 - t1; }
};

/// Nonlinear parameters of the reformulated model: critical time t_c
/// (real-valued trading-day ordinal, fractional days allowed), power-law
/// exponent m and angular log-frequency omega.
struct NonlinearParams {
    double tc;
    double m;
    double omega;
};

/// Linear parameters A, B, C1, C2. The original oscillation amplitude C and
/// phase phi are derived views: C1 = C cos(phi), C2 = C sin(phi).
struct LinearParams {
    double a = 0.0;
    double b = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double c() const { return std::sqrt(c1 * c1 + c2 * c2); }
    double phase() const { return std::atan2(c2, c1); }
};

struct LpplsFit {
    NonlinearParams nonlinear{};
    LinearParams linear{};
    Window window{};
    double rss = 0.0;
    std::size_t n_points = 0;

    // B < 0 marks a positive bubble, B > 0 a negative one.
    bool is_positive_bubble() const { return linear.b < 0.0; }
};

// Distance to the singularity, floored so log stays defined when the
// optimizer probes t_c arbitrarily close to a sample time.
inline double time_to_tc(double tc, double t) {
    constexpr double kFloor = 1e-9;
    double dt = tc - t;
    return dt < kFloor ? kFloor : dt;
}

/// Model log-price at time t. Requires t < t_c.
double lppls_eval(const NonlinearParams& p, const LinearParams& q, double t);

/// Least-squares solution for (A, B, C1, C2) given fixed nonlinear params,
/// via orthogonal decomposition of the design matrix. Returns nullopt when
/// the basis is numerically rank deficient (condition estimate > 1e12).
std::optional<LinearParams> solve_linear(const PriceSeries& series, const Window& window,
                                         const NonlinearParams& p);

struct CostResult {
    double rss;  // +inf when the linear system is singular
    LinearParams linear;
    bool ok;
};

/// Concentrated cost F1(t_c, m, omega): rss at the optimal linear params.
CostResult cost(const PriceSeries& series, const Window& window, const NonlinearParams& p);

/// Elementwise fitted-minus-observed log-price over the window, time order.
std::vector<double> residuals(const PriceSeries& series, const Window& window,
                              const LpplsFit& fit);

/// Synthetic series exp(LPPLS(t) + eps), eps ~ N(0, sigma^2), on a calendar
/// of consecutive weekdays. Deterministic per seed.
PriceSeries synthesize(const NonlinearParams& p, const LinearParams& q, std::size_t n,
                       double noise_sigma, std::uint64_t seed,
                       DateSerial start_date = to_serial(2000, 1, 3));

}  // namespace lppls
