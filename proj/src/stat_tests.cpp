#include "lppls/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lppls/errors.hpp"

namespace lppls {

std::vector<DetrendedPoint> detrended_residual(const PriceSeries& series, const Window& window,
                                               const LpplsFit& fit) {
    const NonlinearParams& p = fit.nonlinear;
    if (!(p.tc > static_cast<double>(window.t2)))
        throw DomainError("detrended_residual requires t_c > t2");
    if (window.t2 >= series.size() || window.t1 >= window.t2)
        throw DomainError("invalid window");

    std::vector<DetrendedPoint> out;
    out.reserve(window.n_points());
    for (std::size_t i = window.t1; i <= window.t2; ++i) {
        const double dt = time_to_tc(p.tc, static_cast<double>(i));
        const double x = std::log(dt);
        const double pm = std::exp(p.m * x);
        const double r =
            (series.log_price(i) - fit.linear.a - fit.linear.b * pm) / pm;
        out.push_back({x, r});
    }
    return out;
}

namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Effective number of independent frequencies for the tallest-peak
// significance. Scales with the number of points and the scanned band:
// N/2 independent frequencies up to the Nyquist limit, times the factor by
// which the scan extends past it. Calibrated so white-noise p-values are
// uniform at the 5% quantile.
double independent_frequencies(std::size_t n, double max_freq_factor) {
    return std::max(2.0, static_cast<double>(n) * max_freq_factor);
}

}  // namespace

LombResult lomb_test(std::span<const DetrendedPoint> points, const LombOptions& opts) {
    const std::size_t n = points.size();
    if (n < 8) throw DomainError("lomb_test needs at least 8 points");

    double xmin = points[0].x, xmax = points[0].x;
    double rbar = 0.0;
    for (const auto& p : points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        rbar += p.r;
    }
    rbar /= static_cast<double>(n);
    if (!(xmax > xmin)) throw DomainError("lomb_test needs distinct abscissae");

    double var = 0.0;
    for (const auto& p : points) var += (p.r - rbar) * (p.r - rbar);
    var /= static_cast<double>(n - 1);
    if (var <= 0.0) return {0.0, 0.0, 1.0};

    const double span_x = xmax - xmin;
    const double mean_dx = span_x / static_cast<double>(n - 1);
    const double nyquist = 1.0 / (2.0 * mean_dx);
    const double fstep = 1.0 / (span_x * opts.oversampling);
    const double fmax = opts.max_freq_factor * nyquist;

    LombResult best;
    for (double f = fstep; f <= fmax; f += fstep) {
        const double w = 2.0 * M_PI * f;
        double s2 = 0.0, c2 = 0.0;
        for (const auto& p : points) {
            s2 += std::sin(2.0 * w * p.x);
            c2 += std::cos(2.0 * w * p.x);
        }
        const double tau = std::atan2(s2, c2) / (2.0 * w);
        double cs = 0.0, ss = 0.0, cc = 0.0, sswt = 0.0;
        for (const auto& p : points) {
            const double arg = w * (p.x - tau);
            const double co = std::cos(arg), si = std::sin(arg);
            const double d = p.r - rbar;
            cs += d * co;
            ss += d * si;
            cc += co * co;
            sswt += si * si;
        }
        const double power = (cs * cs / cc + ss * ss / sswt) / (2.0 * var);
        if (power > best.peak_power) {
            best.peak_power = power;
            best.peak_frequency = f;
        }
    }

    const double m = independent_frequencies(n, opts.max_freq_factor);
    const double log_one_minus = std::log1p(-std::exp(-best.peak_power));
    best.p_value = std::clamp(-std::expm1(m * log_one_minus), 0.0, 1.0);
    return best;
}

double df_critical_value(std::size_t n, double level) {
    // MacKinnon (2010) response surface, constant, no trend.
    const double t = static_cast<double>(n);
    if (level <= 0.015)
        return -3.43035 - 6.5393 / t - 16.786 / (t * t) - 79.433 / (t * t * t);
    if (level <= 0.075)
        return -2.86154 - 2.8903 / t - 4.234 / (t * t) - 40.04 / (t * t * t);
    return -2.56677 - 1.5384 / t - 2.809 / (t * t);
}

namespace {

struct Ar1Regression {
    double phi;       // coefficient on r_{t-1} in the differenced regression
    double se_phi;    // OLS standard error
    double s;         // regression standard error
    double t_stat;    // phi / se_phi
    std::size_t t_eff;  // effective sample size
    std::vector<double> resid;
    bool degenerate;
};

Ar1Regression ar1_regression(std::span<const double> r) {
    const std::size_t n = r.size();
    Ar1Regression out{};
    out.t_eff = n - 1;

    double var_check = 0.0;
    const double rb = mean_of(r);
    for (double x : r) var_check += (x - rb) * (x - rb);
    // Residuals at double-rounding scale (e.g. an exact fit) carry no
    // information about mean reversion; treat them as constant.
    if (var_check <= static_cast<double>(n) * 1e-24) {
        out.degenerate = true;
        return out;
    }

    // OLS of y_t = c + phi * x_t with y = dr_t, x = r_{t-1}
    const std::size_t T = n - 1;
    double sx = 0.0, sy = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        sx += r[t - 1];
        sy += r[t] - r[t - 1];
    }
    const double xb = sx / T, yb = sy / T;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        const double dx = r[t - 1] - xb;
        sxx += dx * dx;
        sxy += dx * (r[t] - r[t - 1] - yb);
    }
    if (sxx <= 0.0) {
        out.degenerate = true;
        return out;
    }
    out.phi = sxy / sxx;
    const double c = yb - out.phi * xb;

    out.resid.resize(T);
    double ssr = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        const double e = (r[t] - r[t - 1]) - c - out.phi * r[t - 1];
        out.resid[t - 1] = e;
        ssr += e * e;
    }
    const double s2 = ssr / static_cast<double>(T - 2);
    out.s = std::sqrt(s2);
    out.se_phi = std::sqrt(s2 / sxx);
    out.t_stat = out.se_phi > 0.0 ? out.phi / out.se_phi
                                  : -std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace

UnitRootResult dickey_fuller(std::span<const double> residuals) {
    if (residuals.size() < 20) throw DomainError("dickey_fuller needs at least 20 points");
    UnitRootResult out;
    const Ar1Regression reg = ar1_regression(residuals);
    out.critical_value_10pct = df_critical_value(residuals.size(), 0.10);
    if (reg.degenerate) {
        out.degenerate = true;
        out.rejects_unit_root = true;  // stationary by convention
        out.statistic = out.critical_value_10pct;
        return out;
    }
    out.statistic = reg.t_stat;
    out.rejects_unit_root = out.statistic < out.critical_value_10pct;
    return out;
}

UnitRootResult phillips_perron(std::span<const double> residuals) {
    const std::size_t n = residuals.size();
    if (n < 20) throw DomainError("phillips_perron needs at least 20 points");
    UnitRootResult out;
    const Ar1Regression reg = ar1_regression(residuals);
    out.critical_value_10pct = df_critical_value(n, 0.10);
    if (reg.degenerate) {
        out.degenerate = true;
        out.rejects_unit_root = true;
        out.statistic = out.critical_value_10pct;
        return out;
    }

    const std::size_t T = reg.t_eff;
    double gamma0 = 0.0;
    for (double e : reg.resid) gamma0 += e * e;
    gamma0 /= static_cast<double>(T);

    const std::size_t q = static_cast<std::size_t>(
        std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
    double lambda2 = gamma0;
    for (std::size_t j = 1; j <= q && j < T; ++j) {
        double gj = 0.0;
        for (std::size_t t = j; t < T; ++t) gj += reg.resid[t] * reg.resid[t - j];
        gj /= static_cast<double>(T);
        lambda2 += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(q + 1)) * gj;
    }
    lambda2 = std::max(lambda2, 1e-300);

    const double lambda = std::sqrt(lambda2);
    out.statistic = std::sqrt(gamma0 / lambda2) * reg.t_stat -
                    (lambda2 - gamma0) / (2.0 * lambda) *
                        (static_cast<double>(T) * reg.se_phi / reg.s);
    out.rejects_unit_root = out.statistic < out.critical_value_10pct;
    return out;
}

}  // namespace lppls
