#pragma once

#include <string>
#include <vector>

#include "lppls/model.hpp"
#include "lppls/stat_tests.hpp"

namespace lppls {

/// Coefficient convention for counting log-periodic oscillations over a
/// window. FullCycles (omega/2pi) is the default; the others are kept for
/// comparison with alternative counting conventions in the literature.
enum class OscConvention { FullCycles, HalfPeriods, RawHalfOmega };

/// Post-calibration filter thresholds. Defaults are strictly tighter than
/// the calibration search box.
struct FilterConditions {
    double m_min = 0.01;
    double m_max = 0.99;
    double omega_min = 2.0;
    double omega_max = 25.0;
    double tc_extension_factor = 1.0 / 5.0;  // t_c <= t2 + factor*(t2-t1)
    double min_oscillations = 2.5;
    double max_rel_error = 0.15;
    double alpha_sig = 0.05;
    // The significant Lomb peak must sit at the fitted log-frequency
    // omega/2pi within this relative tolerance; a merely significant peak
    // elsewhere (red residual noise) is not log-periodic evidence.
    double lomb_freq_tolerance = 0.1;
    OscConvention osc_convention = OscConvention::FullCycles;
    LombOptions lomb;
};

struct FilterCondition {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

enum class BubbleSign { Undefined, Positive, Negative };

struct FilterReport {
    std::vector<FilterCondition> conditions;
    bool qualified = false;
    BubbleSign bubble_sign = BubbleSign::Undefined;

    const FilterCondition* find(const std::string& name) const;
};

/// Number of log-periodic oscillations between t1 and t2 under the chosen
/// convention: coef * ln((t_c - t1)/(t_c - t2)).
double oscillation_count(const LpplsFit& fit, OscConvention conv = OscConvention::FullCycles);

/// max over the window of |p_hat - p| / p in price space.
double max_relative_error(const PriceSeries& series, const Window& window, const LpplsFit& fit);

/// Full filter battery: three parameter ranges, oscillation count, maximum
/// relative error, Lomb peak significance of the detrended residual, and
/// DF + PP unit-root rejection of the log residuals.
FilterReport qualify(const PriceSeries& series, const Window& window, const LpplsFit& fit,
                     const FilterConditions& cfg = {});

}  // namespace lppls
