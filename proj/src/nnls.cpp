#include "cmtk/nnls.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include <algorithm>
#include <limits>
#include <optional>

namespace cmtk {

namespace {

using Quad = boost::multiprecision::float128;


template <typename T>
using VecT = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using MatT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

Eigen::VectorXd column_norms(const Eigen::MatrixXd& A) { return A.colwise().norm().transpose(); }

std::vector<Index> members(const std::vector<bool>& flag) {
    std::vector<Index> out;
    for (std::size_t j = 0; j < flag.size(); ++j)
        if (flag[j]) out.push_back(static_cast<Index>(j));
    return out;
}

template <typename T>
VecT<T> solve_passive(const MatT<T>& As, const VecT<T>& b, const std::vector<Index>& P) {
    MatT<T> sub(As.rows(), static_cast<Index>(P.size()));
    for (std::size_t i = 0; i < P.size(); ++i) sub.col(static_cast<Index>(i)) = As.col(P[i]);
    const VecT<T> z = sub.colPivHouseholderQr().solve(b);
    VecT<T> full = VecT<T>::Zero(As.cols());
    for (std::size_t i = 0; i < P.size(); ++i) full(P[i]) = z(static_cast<Index>(i));
    return full;
}

// Lawson-Hanson on unit-norm columns in floating type T; returns the unscaled solution.
template <typename T>
VecT<T> lawson_hanson(const MatT<T>& A, const VecT<T>& b, double tol, Index max_iter, Index& iterations) {
    using std::abs;
    const Index n = A.cols();
    const VecT<T> norms = A.colwise().norm().transpose();
    MatT<T> As = A;
    for (Index j = 0; j < n; ++j)
        if (norms(j) > 0) As.col(j) /= norms(j);

    // Entering threshold: the rounding floor of the scaled gradient, so that ill-conditioned
    // systems keep improving the residual after the gradient drops below tol.
    const T eps = std::numeric_limits<T>::epsilon() / 2;
    const T bnorm = b.norm();
    const T threshold = std::min(T(tol), T(4) * eps * (bnorm > 0 ? bnorm : T(1e-300)));

    VecT<T> x = VecT<T>::Zero(n);
    std::vector<bool> passive(n, false), blocked(n, false);
    for (Index j = 0; j < n; ++j) blocked[j] = norms(j) == 0;

    while (iterations < max_iter) {
        const VecT<T> w = As.transpose() * (b - As * x);
        Index best = -1;
        for (Index j = 0; j < n; ++j)
            if (!passive[j] && !blocked[j] && w(j) > threshold && (best < 0 || w(j) > w(best))) best = j;
        if (best < 0) break;
        ++iterations;
        passive[best] = true;
        while (true) {
            const std::vector<Index> P = members(passive);
            const VecT<T> z = solve_passive<T>(As, b, P);
            bool feasible = true;
            for (Index j : P) feasible = feasible && z(j) > 0;
            if (feasible) {
                x = z;
                break;
            }
            T alpha = 1;
            for (Index j : P)
                if (z(j) <= 0) alpha = std::min(alpha, T(x(j) / (x(j) - z(j))));
            x += alpha * (z - x);
            const T xmax = x.cwiseAbs().maxCoeff();
            for (Index j : P) {
                if (x(j) <= 0 || (z(j) <= 0 && x(j) <= T(1e-15) * xmax)) {
                    x(j) = 0;
                    passive[j] = false;
                }
            }
            if (!passive[best]) {
                // the entering column could not move off zero; do not pick it again until x changes
                blocked[best] = true;
                break;
            }
        }
        if (passive[best])
            for (Index j = 0; j < n; ++j) blocked[j] = norms(j) == 0;
    }

    for (Index j = 0; j < n; ++j) x(j) = norms(j) > 0 ? T(x(j) / norms(j)) : T(0);
    return x;
}

std::optional<Vector<Rational>> solve_passive(const Matrix<Rational>& A, const Vector<Rational>& b,
                                              const std::vector<Index>& P) {
    const Index p = static_cast<Index>(P.size());
    Matrix<Rational> sub(A.rows(), p);
    for (Index i = 0; i < p; ++i) sub.col(i) = A.col(P[i]);
    const Matrix<Rational> G = sub.transpose() * sub;
    const Vector<Rational> r = sub.transpose() * b;
    Eigen::PartialPivLU<Matrix<Rational>> lu(G);
    if (lu.determinant() == 0) return std::nullopt;
    const Vector<Rational> z = lu.solve(r);
    Vector<Rational> full = Vector<Rational>::Zero(A.cols());
    for (Index i = 0; i < p; ++i) full(P[i]) = z(i);
    return full;
}

}  // namespace

double kkt_gap(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x) {
    const Eigen::VectorXd norms = column_norms(A);
    const Eigen::VectorXd g = A.transpose() * (b - A * x);
    double gap = 0.0;
    for (Index j = 0; j < A.cols(); ++j) {
        if (norms(j) == 0) continue;
        const double gj = g(j) / norms(j);
        gap = std::max(gap, x(j) > 0 ? std::abs(gj) : gj);
    }
    return gap;
}

NnlsResult<double> nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const NnlsOptions& options) {
    const Index max_iter = options.max_iterations > 0 ? options.max_iterations : 3 * A.cols() + 10;
    NnlsResult<double> result;
    result.x = lawson_hanson<double>(A, b, options.tol, max_iter, result.iterations);
    result.residual = (A * result.x - b).norm();
    result.kkt_gap = kkt_gap(A, b, result.x);
    result.converged = result.kkt_gap <= options.tol;
    return result;
}

NnlsResult<Rational> nnls(const Matrix<Rational>& A, const Vector<Rational>& b, const NnlsOptions& options) {
    const Index n = A.cols();
    const Index max_iter = options.max_iterations > 0 ? options.max_iterations : 3 * n + 10;
    const Eigen::MatrixXd Ad = A.unaryExpr([](const Rational& v) { return to_double(v); });
    const Eigen::VectorXd bd = b.unaryExpr([](const Rational& v) { return to_double(v); });
    const Eigen::VectorXd norms = column_norms(Ad);
    // quad-precision seed: binary64 cannot separate neighbouring grid columns of high moments
    NnlsResult<Rational> result;
    const MatT<Quad> Aq = A.unaryExpr([](const Rational& v) { return v.convert_to<Quad>(); });
    const VecT<Quad> bq = b.unaryExpr([](const Rational& v) { return v.convert_to<Quad>(); });
    const VecT<Quad> seed = lawson_hanson<Quad>(Aq, bq, options.tol, max_iter, result.iterations);
    std::vector<bool> passive(n, false), blocked(n, false);
    for (Index j = 0; j < n; ++j) {
        passive[j] = seed(j) > 0;
        blocked[j] = norms(j) == 0;
    }

    // Shrink the seed support until its unconstrained solution is strictly positive.
    Vector<Rational> x = Vector<Rational>::Zero(n);
    while (true) {
        const std::vector<Index> P = members(passive);
        if (P.empty()) break;
        const auto z = solve_passive(A, b, P);
        if (!z) {
            passive[P.back()] = false;
            continue;
        }
        bool feasible = true;
        for (Index j : P)
            if ((*z)(j) <= 0) {
                passive[j] = false;
                feasible = false;
            }
        if (feasible) {
            x = *z;
            break;
        }
    }

    Index steps = 0;
    while (steps < max_iter) {
        const Vector<Rational> residual = b - A * x;
        const Vector<Rational> w = A.transpose() * residual;
        Index best = -1;
        double best_score = 0.0;
        for (Index j = 0; j < n; ++j) {
            if (passive[j] || blocked[j] || w(j) <= 0) continue;
            const double score = to_double(w(j)) / norms(j);
            if (best < 0 || score > best_score) {
                best = j;
                best_score = score;
            }
        }
        if (best < 0) {
            result.converged = true;
            for (Index j = 0; j < n; ++j)
                if (blocked[j] && norms(j) > 0 && w(j) > 0) result.converged = false;
            break;
        }
        ++steps;
        passive[best] = true;
        while (true) {
            const std::vector<Index> P = members(passive);
            const auto z = solve_passive(A, b, P);
            if (!z) {
                passive[best] = false;
                blocked[best] = true;
                break;
            }
            bool feasible = true;
            for (Index j : P) feasible = feasible && (*z)(j) > 0;
            if (feasible) {
                x = *z;
                break;
            }
            Rational alpha(1);
            for (Index j : P)
                if ((*z)(j) <= 0) alpha = std::min(alpha, Rational(x(j) / (x(j) - (*z)(j))));
            x += alpha * (*z - x);
            for (Index j : P)
                if (x(j) <= 0) {
                    x(j) = 0;
                    passive[j] = false;
                }
            if (!passive[best]) {
                blocked[best] = true;
                break;
            }
        }
        if (passive[best])
            for (Index j = 0; j < n; ++j) blocked[j] = norms(j) == 0;
    }
    result.iterations += steps;

    result.x = x;
    const Vector<Rational> r = A * x - b;
    result.residual = std::sqrt(to_double(Rational(r.squaredNorm())));
    const Vector<Rational> g = A.transpose() * Vector<Rational>(-r);
    double gap = 0.0;
    for (Index j = 0; j < n; ++j) {
        if (norms(j) == 0) continue;
        const double gj = to_double(g(j)) / norms(j);
        gap = std::max(gap, x(j) > 0 ? std::abs(gj) : gj);
    }
    result.kkt_gap = gap;
    return result;
}

}  // namespace cmtk
