#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lppls/model.hpp"

namespace lppls {

/// Search box for the nonlinear parameters plus the damping constraint
/// m|B| / (omega sqrt(C1^2 + C2^2)) >= damping_min.
struct SearchSpace {
    double m_min = 0.0;
    double m_max = 1.0;
    double omega_min = 1.0;
    double omega_max = 50.0;
    // t_c in [t2, t2 + tc_extension_factor * (t2 - t1)]
    double tc_extension_factor = 1.0 / 3.0;
    double damping_min = 1.0;

    double tc_max(const Window& w) const {
        return static_cast<double>(w.t2) + tc_extension_factor * static_cast<double>(w.dt());
    }
    double tc_min(const Window& w) const { return static_cast<double>(w.t2); }
};

struct CalibrationConfig {
    int population_size = 7;  // 4 + floor(3 ln 3)
    int max_evaluations = 2000;
    int restarts = 3;
    std::uint64_t seed = 0;
    double initial_sigma = 0.3;
    // Relative weight of the feasibility penalty during the search:
    // objective = rss * (1 + weight * penalty). The weight is deliberately
    // mild; it nudges the search toward the feasible region without pinning
    // noise-dominated windows onto the damping boundary, so the hard
    // post-check on the final candidate stays meaningful.
    double penalty_weight = 0.1;
};

/// Damping ratio m|B|/(omega*sqrt(C1^2+C2^2)); +inf when the oscillation
/// amplitude vanishes together with B != 0, NaN when both vanish.
double damping_ratio(const NonlinearParams& p, const LinearParams& q);

/// Zero inside the feasible region; otherwise grows with the total
/// box-constraint and damping violation. Box terms are measured in
/// range-scaled units so parameters of different magnitude weigh alike.
double feasibility_penalty(const NonlinearParams& p, const LinearParams& q,
                           const SearchSpace& space, const Window& window);

struct CalibrationResult {
    std::optional<LpplsFit> fit;
    std::string reason;  // set when no fit was produced
    bool ok() const { return fit.has_value(); }
};

/// Minimize the concentrated cost with CMA-ES restarts over the search box,
/// penalizing damping violations during search and hard-checking all
/// constraints on the final candidate. Deterministic per seed.
CalibrationResult calibrate(const PriceSeries& series, const Window& window,
                            const SearchSpace& space, const CalibrationConfig& cfg);

}  // namespace lppls
