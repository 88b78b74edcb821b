#pragma once

// Reference implementations for the tests. They follow the textbook
// definitions with plain loops and share no code with the library.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;

/// n x d matrix of N(0, 1) draws (std::normal_distribution; only needs to be
/// reproducible on this toolchain).
inline Matrix random_matrix(std::size_t n, std::size_t d, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            m(i, j) = g(gen);
    return m;
}

inline Matrix random_spd(std::size_t d, unsigned seed) {
    const Matrix a = random_matrix(d + 3, d, seed);
    return a.transpose() * a / static_cast<double>(d) + 0.1 * Matrix::Identity(d, d);
}

/// (1/n) sum_i Y_i Y_i', triple loop.
inline Matrix covariance(const Matrix& y, bool center) {
    const auto n = y.rows(), d = y.cols();
    std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
    if (center)
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index i = 0; i < n; ++i)
                mean[j] += y(i, j);
            mean[j] /= static_cast<double>(n);
        }
    Matrix s(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) {
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                acc += (y(i, a) - mean[a]) * (y(i, b) - mean[b]);
            s(a, b) = acc / static_cast<double>(n);
        }
    return s;
}

inline double mean_square(const Matrix& y, Eigen::Index col) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.rows(); ++i)
        acc += y(i, col) * y(i, col);
    return acc / static_cast<double>(y.rows());
}

/// (1/n) sum_{i=1}^{n-tau} [Y_i^2(nu) - mu(nu)] [Y_{i+tau}^2(mu) - mu(mu)].
inline double gamma(const Matrix& y, Eigen::Index nu, Eigen::Index mu, Eigen::Index tau) {
    const double mnu = mean_square(y, nu), mmu = mean_square(y, mu);
    double acc = 0.0;
    for (Eigen::Index i = 0; i + tau < y.rows(); ++i)
        acc += (y(i, nu) * y(i, nu) - mnu) * (y(i + tau, mu) * y(i + tau, mu) - mmu);
    return acc / static_cast<double>(y.rows());
}

/// weight(tau) for tau >= 1.
template <class Weight>
double beta_sq(const Matrix& y, Eigen::Index nu, Eigen::Index mu, Eigen::Index m, Weight weight) {
    double acc = gamma(y, nu, mu, 0);
    for (Eigen::Index tau = 1; tau <= m; ++tau)
        acc += 2.0 * weight(tau) * gamma(y, nu, mu, tau);
    return acc;
}

/// d^-2 sum_{nu} sum_{mu} [gamma(0) + 2 sum_tau w gamma(tau)] as one nested
/// loop over (nu, mu, tau, i).
template <class Weight>
double sigma_tr_sq(const Matrix& y, Eigen::Index m, Weight weight) {
    const auto n = y.rows(), d = y.cols();
    double total = 0.0;
    for (Eigen::Index nu = 0; nu < d; ++nu)
        for (Eigen::Index mu = 0; mu < d; ++mu) {
            const double mnu = mean_square(y, nu), mmu = mean_square(y, mu);
            for (Eigen::Index tau = 0; tau <= m; ++tau) {
                const double w = tau == 0 ? 1.0 : 2.0 * weight(tau);
                for (Eigen::Index i = 0; i + tau < n; ++i)
                    total += w * (y(i, nu) * y(i, nu) - mnu) *
                             (y(i + tau, mu) * y(i + tau, mu) - mmu) / static_cast<double>(n);
            }
        }
    return total / static_cast<double>(d * d);
}

inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Inverse of phi by bisection to machine precision.
inline double phi_inverse(double p) {
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (phi(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Random orthogonal matrix from the QR factor of a Gaussian matrix.
inline Matrix random_orthogonal(std::size_t d, unsigned seed) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(d, d, seed));
    return qr.householderQ() * Matrix::Identity(d, d);
}

} // namespace oracle
