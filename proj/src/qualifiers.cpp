#include "lppls/qualifiers.hpp"

#include <cmath>

#include "lppls/errors.hpp"

namespace lppls {

const FilterCondition* FilterReport::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

double oscillation_count(const LpplsFit& fit, OscConvention conv) {
    const double tc = fit.nonlinear.tc;
    const double t1 = static_cast<double>(fit.window.t1);
    const double t2 = static_cast<double>(fit.window.t2);
    if (!(tc > t2)) throw DomainError("oscillation_count requires t_c > t2");
    double coef;
    switch (conv) {
        case OscConvention::FullCycles: coef = fit.nonlinear.omega / (2.0 * M_PI); break;
        case OscConvention::HalfPeriods: coef = fit.nonlinear.omega / M_PI; break;
        case OscConvention::RawHalfOmega: coef = fit.nonlinear.omega / 2.0; break;
        default: coef = fit.nonlinear.omega / (2.0 * M_PI);
    }
    return coef * std::log((tc - t1) / (tc - t2));
}

double max_relative_error(const PriceSeries& series, const Window& window,
                          const LpplsFit& fit) {
    double worst = 0.0;
    for (std::size_t i = window.t1; i <= window.t2; ++i) {
        const double p = series.close(i);
        const double p_hat = std::exp(lppls_eval(fit.nonlinear, fit.linear,
                                                 static_cast<double>(i)));
        worst = std::max(worst, std::fabs(p_hat - p) / p);
    }
    return worst;
}

FilterReport qualify(const PriceSeries& series, const Window& window, const LpplsFit& fit,
                     const FilterConditions& cfg) {
    FilterReport report;
    auto add = [&](std::string name, double value, double threshold, bool pass,
                   std::string note = "") {
        report.conditions.push_back(
            {std::move(name), value, threshold, pass, std::move(note)});
    };

    const auto& p = fit.nonlinear;
    add("m_range", p.m, cfg.m_max, p.m >= cfg.m_min && p.m <= cfg.m_max);
    add("omega_range", p.omega, cfg.omega_max,
        p.omega >= cfg.omega_min && p.omega <= cfg.omega_max);

    const double tc_hi = static_cast<double>(window.t2) +
                         cfg.tc_extension_factor * static_cast<double>(window.dt());
    add("tc_range", p.tc, tc_hi,
        p.tc >= static_cast<double>(window.t2) && p.tc <= tc_hi);

    const double osc = oscillation_count(fit, cfg.osc_convention);
    add("oscillations", osc, cfg.min_oscillations, osc >= cfg.min_oscillations);

    const double mre = max_relative_error(series, window, fit);
    add("max_rel_error", mre, cfg.max_rel_error, mre <= cfg.max_rel_error);

    // Spectral and unit-root conditions need non-degenerate residuals.
    try {
        const auto pts = detrended_residual(series, window, fit);
        const LombResult lomb = lomb_test(pts, cfg.lomb);
        const double f_fit = p.omega / (2.0 * M_PI);
        const bool freq_ok =
            lomb.peak_frequency >= f_fit / (1.0 + cfg.lomb_freq_tolerance) &&
            lomb.peak_frequency <= f_fit * (1.0 + cfg.lomb_freq_tolerance);
        add("lomb_p", lomb.p_value, cfg.alpha_sig,
            lomb.p_value <= cfg.alpha_sig && freq_ok,
            freq_ok ? "" : "spectral peak away from the fitted log-frequency");
    } catch (const DomainError& e) {
        add("lomb_p", 1.0, cfg.alpha_sig, false, e.what());
    }

    const auto res = residuals(series, window, fit);
    try {
        const UnitRootResult df = dickey_fuller(res);
        add("df_reject", df.statistic, df.critical_value_10pct,
            df.rejects_unit_root && !df.degenerate,
            df.degenerate ? "degenerate residuals" : "");
        const UnitRootResult pp = phillips_perron(res);
        add("pp_reject", pp.statistic, pp.critical_value_10pct,
            pp.rejects_unit_root && !pp.degenerate,
            pp.degenerate ? "degenerate residuals" : "");
    } catch (const DomainError& e) {
        add("df_reject", 0.0, 0.0, false, e.what());
        add("pp_reject", 0.0, 0.0, false, e.what());
    }

    report.qualified = true;
    for (const auto& c : report.conditions) report.qualified = report.qualified && c.pass;

    if (fit.linear.b < 0.0)
        report.bubble_sign = BubbleSign::Positive;
    else if (fit.linear.b > 0.0)
        report.bubble_sign = BubbleSign::Negative;
    return report;
}

}  // namespace lppls
