#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lppls/indicator.hpp"

namespace lppls {

/// Discrete probability mass over calendar dates. Support extends past the
/// series end on a weekday grid when t_c lands beyond the last observation.
struct DensityEstimate {
    std::vector<DateSerial> support;
    std::vector<double> mass;       // sums to 1
    std::vector<double> histogram;  // raw, unsmoothed mass (also sums to 1)
    std::size_t source_count = 0;
};

enum class FitField { T1, Tc };

/// Qualified fits whose t2 date lies inside [t2_lo, t2_hi], inclusive.
std::vector<QualifiedFit> collect_fits(const std::vector<QualifiedFit>& fits,
                                       const PriceSeries& series, DateSerial t2_lo,
                                       DateSerial t2_hi);

/// Empirical distribution of t1 or t_c over trading days, Gaussian-kernel
/// smoothed with a Silverman-rule bandwidth and renormalized on the daily
/// grid. The raw histogram is kept alongside.
DensityEstimate density(const std::vector<QualifiedFit>& fits, FitField field,
                        const PriceSeries& series);

/// Smallest dates at which the cumulative mass reaches lo and hi.
std::pair<DateSerial, DateSerial> quantile_range(const DensityEstimate& d, double lo,
                                                 double hi);

void write_density_csv(const std::string& path, const DensityEstimate& t1_density,
                       const DensityEstimate& tc_density);

}  // namespace lppls
