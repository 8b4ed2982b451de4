#pragma once

// Lawson-Hanson active-set nonnegative least squares, in binary64 and in exact rationals.

#include "cmtk/scalar.hpp"

#include <vector>

namespace cmtk {

template <typename Scalar>
struct NnlsResult {
    Vector<Scalar> x;
    double residual = 0.0;  // ||A x - b||_2
    double kkt_gap = 0.0;   // max stationarity violation of the column-normalized problem
    Index iterations = 0;
    bool converged = false;
};

struct NnlsOptions {
    double tol = 1e-10;        // converged when the KKT gap is at most tol
    Index max_iterations = 0;  // 0: 3 * columns
};

/// min ||A x - b|| s.t. x >= 0. Columns are scaled to unit norm internally; zero columns get x = 0.
NnlsResult<double> nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const NnlsOptions& options = {});

/// Exact Lawson-Hanson. The float solution's support seeds the passive set; the result
/// satisfies the KKT conditions exactly when converged.
NnlsResult<Rational> nnls(const Matrix<Rational>& A, const Vector<Rational>& b, const NnlsOptions& options = {});

/// KKT stationarity gap of x for the column-normalized problem: max over j of g_j (x_j = 0) and
/// |g_j| (x_j > 0), where g = D A^T (b - A x) and D scales columns to unit norm.
double kkt_gap(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x);

}  // namespace cmtk
