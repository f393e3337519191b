#include "lppls/cma_es.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace lppls {

double reflect_into_unit(double x) {
    if (x >= 0.0 && x <= 1.0) return x;
    x = std::fmod(std::fabs(x), 2.0);
    return x > 1.0 ? 2.0 - x : x;
}

CmaResult cma_minimize(int dim, const std::function<double(const Eigen::VectorXd&)>& objective,
                       const CmaOptions& opts) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;

    const int n = dim;
    const int lambda = opts.lambda > 0
                           ? opts.lambda
                           : 4 + static_cast<int>(std::floor(3.0 * std::log(double(n))));
    const int mu = lambda / 2;

    // Standard log-rank recombination weights.
    VectorXd weights(mu);
    for (int i = 0; i < mu; ++i)
        weights(i) = std::log(mu + 0.5) - std::log(double(i + 1));
    weights /= weights.sum();
    const double mueff = 1.0 / weights.squaredNorm();

    const double cc = (4.0 + mueff / n) / (n + 4.0 + 2.0 * mueff / n);
    const double cs = (mueff + 2.0) / (n + mueff + 5.0);
    const double c1 = 2.0 / ((n + 1.3) * (n + 1.3) + mueff);
    const double cmu = std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) /
                                              ((n + 2.0) * (n + 2.0) + mueff));
    const double damps =
        1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (n + 1.0)) - 1.0) + cs;
    const double chi_n = std::sqrt(double(n)) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

    VectorXd xmean = VectorXd::Constant(n, 0.5);
    double sigma = opts.sigma0;
    VectorXd pc = VectorXd::Zero(n), ps = VectorXd::Zero(n);
    MatrixXd C = MatrixXd::Identity(n, n);
    MatrixXd B = MatrixXd::Identity(n, n);
    VectorXd D = VectorXd::Ones(n);

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    CmaResult result;
    result.best_x = xmean;
    result.best_f = std::numeric_limits<double>::infinity();
    result.evaluations = 0;

    std::deque<double> recent_best;
    std::vector<VectorXd> zs(lambda), xs(lambda);
    std::vector<double> fs(lambda);
    std::vector<int> order(lambda);

    while (result.evaluations < opts.max_evaluations) {
        for (int k = 0; k < lambda; ++k) {
            VectorXd z(n);
            for (int j = 0; j < n; ++j) z(j) = gauss(rng);
            VectorXd x = xmean + sigma * (B * (D.asDiagonal() * z));
            for (int j = 0; j < n; ++j) x(j) = reflect_into_unit(x(j));
            zs[k] = z;
            xs[k] = x;
            fs[k] = objective(x);
            ++result.evaluations;
        }

        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fs[a] < fs[b]; });

        if (fs[order[0]] < result.best_f) {
            result.best_f = fs[order[0]];
            result.best_x = xs[order[0]];
        }

        VectorXd zmean = VectorXd::Zero(n);
        VectorXd xold = xmean;
        xmean = VectorXd::Zero(n);
        for (int i = 0; i < mu; ++i) {
            zmean += weights(i) * zs[order[i]];
            xmean += weights(i) * xs[order[i]];
        }

        ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * (B * zmean);
        const double ps_norm = ps.norm();
        const bool hsig =
            ps_norm / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * (result.evaluations / lambda))) /
                chi_n <
            1.4 + 2.0 / (n + 1.0);
        pc = (1.0 - cc) * pc;
        if (hsig) pc += std::sqrt(cc * (2.0 - cc) * mueff) * (xmean - xold) / sigma;

        MatrixXd rank_mu = MatrixXd::Zero(n, n);
        for (int i = 0; i < mu; ++i) {
            VectorXd y = (xs[order[i]] - xold) / sigma;
            rank_mu += weights(i) * y * y.transpose();
        }
        C = (1.0 - c1 - cmu) * C +
            c1 * (pc * pc.transpose() + (hsig ? 0.0 : cc * (2.0 - cc)) * C) + cmu * rank_mu;

        sigma *= std::exp((cs / damps) * (ps_norm / chi_n - 1.0));
        sigma = std::min(sigma, 10.0);

        Eigen::SelfAdjointEigenSolver<MatrixXd> eig((C + C.transpose()) * 0.5);
        D = eig.eigenvalues().cwiseMax(1e-20).cwiseSqrt();
        B = eig.eigenvectors();

        recent_best.push_back(fs[order[0]]);
        if (recent_best.size() > 12) recent_best.pop_front();
        if (recent_best.size() >= 12) {
            auto [lo, hi] = std::minmax_element(recent_best.begin(), recent_best.end());
            if (*hi - *lo < opts.tol_fun) break;
        }
        if (sigma * D.maxCoeff() < 1e-12) break;
    }
    return result;
}

}  // namespace lppls
