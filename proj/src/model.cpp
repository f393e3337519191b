#include "lppls/model.hpp"

#include <Eigen/Dense>
#include <limits>
#include <random>

#include "lppls/errors.hpp"

namespace lppls {

namespace {

// Basis rows f = (tc-t)^m, g = f cos(w ln(tc-t)), h = f sin(w ln(tc-t)).
inline void basis_at(const NonlinearParams& p, double t, double& f, double& g, double& h) {
    const double dt = time_to_tc(p.tc, t);
    const double ldt = std::log(dt);
    f = std::exp(p.m * ldt);
    const double x = p.omega * ldt;
    g = f * std::cos(x);
    h = f * std::sin(x);
}

Eigen::MatrixX4d design_matrix(const Window& window, const NonlinearParams& p) {
    const std::size_t n = window.n_points();
    Eigen::MatrixX4d X(n, 4);
    for (std::size_t i = 0; i < n; ++i) {
        double f, g, h;
        basis_at(p, static_cast<double>(window.t1 + i), f, g, h);
        X(i, 0) = 1.0;
        X(i, 1) = f;
        X(i, 2) = g;
        X(i, 3) = h;
    }
    return X;
}

void check_window(const PriceSeries& series, const Window& window, const NonlinearParams& p) {
    if (window.t1 >= window.t2 || window.t2 >= series.size())
        throw DomainError("invalid fit window");
    if (window.n_points() < 4) throw DomainError("window needs at least 4 points");
    if (!(p.tc > static_cast<double>(window.t2)))
        throw DomainError("t_c must exceed the window end");
}

}  // namespace

double lppls_eval(const NonlinearParams& p, const LinearParams& q, double t) {
    if (!(p.tc - t > 0.0)) throw DomainError("lppls_eval requires t < t_c");
    double f, g, h;
    basis_at(p, t, f, g, h);
    return q.a + q.b * f + q.c1 * g + q.c2 * h;
}

std::optional<LinearParams> solve_linear(const PriceSeries& series, const Window& window,
                                         const NonlinearParams& p) {
    check_window(series, window, p);
    const std::size_t n = window.n_points();
    Eigen::MatrixX4d X = design_matrix(window, p);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) y(i) = series.log_price(window.t1 + i);

    Eigen::ColPivHouseholderQR<Eigen::MatrixX4d> qr(X);
    const auto& R = qr.matrixR();
    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
        double d = std::abs(R(k, k));
        rmax = std::max(rmax, d);
        rmin = std::min(rmin, d);
    }
    if (!(rmin > 0.0) || rmax / rmin > 1e12) return std::nullopt;

    Eigen::Vector4d beta = qr.solve(y);
    if (!beta.allFinite()) return std::nullopt;
    return LinearParams{beta(0), beta(1), beta(2), beta(3)};
}

CostResult cost(const PriceSeries& series, const Window& window, const NonlinearParams& p) {
    auto lin = solve_linear(series, window, p);
    if (!lin) return {std::numeric_limits<double>::infinity(), {}, false};

    const std::size_t n = window.n_points();
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f, g, h;
        const double t = static_cast<double>(window.t1 + i);
        basis_at(p, t, f, g, h);
        const double fit = lin->a + lin->b * f + lin->c1 * g + lin->c2 * h;
        const double e = fit - series.log_price(window.t1 + i);
        rss += e * e;
    }
    if (!std::isfinite(rss)) return {std::numeric_limits<double>::infinity(), {}, false};
    return {rss, *lin, true};
}

std::vector<double> residuals(const PriceSeries& series, const Window& window,
                              const LpplsFit& fit) {
    check_window(series, window, fit.nonlinear);
    const std::size_t n = window.n_points();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(window.t1 + i);
        r[i] = lppls_eval(fit.nonlinear, fit.linear, t) - series.log_price(window.t1 + i);
    }
    return r;
}

PriceSeries synthesize(const NonlinearParams& p, const LinearParams& q, std::size_t n,
                       double noise_sigma, std::uint64_t seed, DateSerial start_date) {
    if (!(p.tc > static_cast<double>(n) - 1.0))
        throw DomainError("synthesize requires t_c beyond the last sample");
    if (noise_sigma < 0.0) throw DomainError("noise_sigma must be >= 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::pair<DateSerial, double>> rows;
    rows.reserve(n);
    DateSerial d = next_weekday_on_or_after(start_date);
    for (std::size_t i = 0; i < n; ++i) {
        double lp = lppls_eval(p, q, static_cast<double>(i));
        if (noise_sigma > 0.0) lp += noise_sigma * gauss(rng);
        rows.emplace_back(d, std::exp(lp));
        d = next_weekday_on_or_after(d + 1);
    }
    return PriceSeries::from_rows(std::move(rows));
}

}  // namespace lppls
