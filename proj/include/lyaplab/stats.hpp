#pragma once

#include <array>
#include <vector>

namespace lyaplab {

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_tail(double statistic, double dof);

struct BatchStats {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Mean and standard error of the mean from batch values.
BatchStats batch_means(const std::vector<double>& batches);

/// Eigenvector of the smallest eigenvalue of a symmetric 3x3 matrix
/// (cyclic Jacobi).  Input in row-major order; output is unit length.
std::array<double, 3> smallest_eigenvector_sym3(const std::array<double, 9>& m);

} // namespace lyaplab
