#include "lppls/calibrator.hpp"

#include <cmath>
#include <limits>

#include "lppls/cma_es.hpp"
#include "lppls/errors.hpp"

namespace lppls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over the combined words
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct BoxMap {
    double tc_lo, tc_hi, m_lo, m_hi, w_lo, w_hi;

    NonlinearParams to_params(const Eigen::VectorXd& u) const {
        return NonlinearParams{tc_lo + u(0) * (tc_hi - tc_lo), m_lo + u(1) * (m_hi - m_lo),
                               w_lo + u(2) * (w_hi - w_lo)};
    }
};

bool in_box(const NonlinearParams& p, const BoxMap& box) {
    return p.tc >= box.tc_lo && p.tc <= box.tc_hi && p.m >= box.m_lo && p.m <= box.m_hi &&
           p.omega >= box.w_lo && p.omega <= box.w_hi;
}

}  // namespace

double damping_ratio(const NonlinearParams& p, const LinearParams& q) {
    // Amplitudes below rounding scale (a flat least-squares solution on
    // featureless data) are treated as exact zeros.
    constexpr double kEps = 1e-12;
    const double amp = q.c();
    const double num = p.m * std::fabs(q.b);
    if (amp <= kEps) {
        if (num <= kEps) return std::numeric_limits<double>::quiet_NaN();
        return kInf;
    }
    return num / (p.omega * amp);
}

double feasibility_penalty(const NonlinearParams& p, const LinearParams& q,
                           const SearchSpace& space, const Window& window) {
    double v = 0.0;
    auto box_violation = [](double x, double lo, double hi) {
        const double range = hi - lo;
        if (x < lo) return (lo - x) / range;
        if (x > hi) return (x - hi) / range;
        return 0.0;
    };
    v += box_violation(p.m, space.m_min, space.m_max);
    v += box_violation(p.omega, space.omega_min, space.omega_max);
    v += box_violation(p.tc, space.tc_min(window), space.tc_max(window));

    const double d = damping_ratio(p, q);
    if (std::isnan(d)) {
        v += space.damping_min;  // flat fit, no hazard-rate information
    } else if (d < space.damping_min) {
        v += space.damping_min - d;
    }
    return v;
}

CalibrationResult calibrate(const PriceSeries& series, const Window& window,
                            const SearchSpace& space, const CalibrationConfig& cfg) {
    if (window.t2 >= series.size() || window.t1 >= window.t2)
        throw DomainError("calibrate: window outside series");
    if (window.n_points() < 30) return {std::nullopt, "window too short"};

    const BoxMap box{space.tc_min(window), space.tc_max(window), space.m_min,
                     space.m_max,          space.omega_min,      space.omega_max};

    auto objective = [&](const Eigen::VectorXd& u) -> double {
        const NonlinearParams p = box.to_params(u);
        const CostResult c = cost(series, window, p);
        if (!c.ok) return kInf;
        const double pen = feasibility_penalty(p, c.linear, space, window);
        return c.rss * (1.0 + cfg.penalty_weight * pen);
    };

    bool have_best = false;
    double best_f = kInf;
    Eigen::VectorXd best_u;
    for (int r = 0; r < cfg.restarts; ++r) {
        CmaOptions opts;
        opts.lambda = cfg.population_size;
        opts.max_evaluations = cfg.max_evaluations;
        opts.sigma0 = cfg.initial_sigma;
        opts.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(r));
        const CmaResult res = cma_minimize(3, objective, opts);
        if (std::isfinite(res.best_f) && (!have_best || res.best_f < best_f)) {
            best_f = res.best_f;
            best_u = res.best_x;
            have_best = true;
        }
    }

    if (!have_best)
        return {std::nullopt, "degenerate window: linear subsystem singular everywhere"};

    // Hard-check every constraint on the final candidate. A penalized
    // optimum still outside the feasible region (typically a damping
    // violation on featureless data) means the window has no admissible fit.
    const NonlinearParams p = box.to_params(best_u);
    const CostResult c = cost(series, window, p);
    if (!c.ok)
        return {std::nullopt, "degenerate window: linear subsystem singular everywhere"};
    const double d = damping_ratio(p, c.linear);
    if (!in_box(p, box) || std::isnan(d) || d < space.damping_min)
        return {std::nullopt, "final candidate infeasible"};
    return {LpplsFit{p, c.linear, window, c.rss, window.n_points()}, ""};
}

}  // namespace lppls
