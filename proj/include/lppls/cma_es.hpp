#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace lppls {

/// CMA-ES minimizer over the unit cube [0,1]^dim.
///
/// Out-of-box samples are mapped back by reflection at the boundaries, so
/// the objective only ever sees feasible box points. Deterministic per seed.
struct CmaOptions {
    int lambda = 0;          // population size; 0 -> 4 + floor(3 ln dim)
    int max_evaluations = 2000;
    double sigma0 = 0.3;     // initial step size in unit-cube coordinates
    std::uint64_t seed = 0;
    double tol_fun = 1e-14;  // stop when recent best-f spread falls below this
};

struct CmaResult {
    Eigen::VectorXd best_x;
    double best_f;
    int evaluations;
};

CmaResult cma_minimize(int dim, const std::function<double(const Eigen::VectorXd&)>& objective,
                       const CmaOptions& opts);

// Reflect a point into [0,1] coordinate-wise (period-2 triangular map).
double reflect_into_unit(double x);

}  // namespace lppls
