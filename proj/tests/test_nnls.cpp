#include "cmtk/nnls.hpp"

#include <doctest.h>

#include <random>

using namespace cmtk;

namespace {

// Exhaustive NNLS for tiny problems: best feasible least-squares solution over all supports.
double brute_force_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const Index n = A.cols();
    double best = b.norm();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<Index> cols;
        for (Index j = 0; j < n; ++j)
            if (mask & (1u << j)) cols.push_back(j);
        Eigen::MatrixXd S(A.rows(), static_cast<Index>(cols.size()));
        for (std::size_t i = 0; i < cols.size(); ++i) S.col(static_cast<Index>(i)) = A.col(cols[i]);
        const Eigen::VectorXd z = S.fullPivHouseholderQr().solve(b);
        if ((z.array() < 0).any()) continue;
        best = std::min(best, (S * z - b).norm());
    }
    return best;
}

}  // namespace

TEST_CASE("float NNLS matches exhaustive search on small problems") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 40; ++trial) {
        Eigen::MatrixXd A(6, 5);
        Eigen::VectorXd b(6);
        for (Index i = 0; i < 6; ++i) {
            b(i) = g(rng);
            for (Index j = 0; j < 5; ++j) A(i, j) = g(rng);
        }
        const auto r = nnls(A, b);
        CHECK((r.x.array() >= 0).all());
        CHECK(r.residual == doctest::Approx(brute_force_residual(A, b)).epsilon(1e-9));
        CHECK(r.converged);
        CHECK(r.kkt_gap <= 1e-10);
    }
}

TEST_CASE("exact NNLS satisfies KKT exactly") {
    Matrix<Rational> A(3, 3);
    A << Rational(1), Rational(2), Rational(0), Rational(0), Rational(1), Rational(1), Rational(1), Rational(0),
        Rational(3);
    Vector<Rational> b(3);
    b << Rational(-1), Rational(2), Rational(1, 2);
    const auto r = nnls(A, b);
    CHECK(r.converged);
    CHECK(r.kkt_gap == 0.0);
    for (Index j = 0; j < 3; ++j) CHECK(r.x(j) >= 0);
    const Vector<Rational> g = A.transpose() * Vector<Rational>(b - A * r.x);
    for (Index j = 0; j < 3; ++j) {
        if (r.x(j) > 0)
            CHECK(g(j) == 0);
        else
            CHECK(g(j) <= 0);
    }
}

TEST_CASE("exact NNLS recovers a consistent nonnegative system") {
    // two interior atoms are determined uniquely by six moments
    Matrix<Rational> A(6, 6);
    for (Index k = 0; k < 6; ++k)
        for (Index j = 0; j < 6; ++j) {
            Rational p(1);
            for (Index i = 0; i < k; ++i) p *= Rational(j, 5);
            A(k, j) = p;
        }
    Vector<Rational> x0 = Vector<Rational>::Zero(6);
    x0(1) = Rational(1, 3);
    x0(4) = Rational(2, 7);
    const Vector<Rational> b = A * x0;
    const auto r = nnls(A, b);
    CHECK(r.residual == 0.0);
    CHECK(r.x == x0);
}

TEST_CASE("zero columns stay at zero") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 2);
    A(0, 1) = 1.0;
    Eigen::VectorXd b(3);
    b << 2.0, 1.0, 0.0;
    const auto r = nnls(A, b);
    CHECK(r.x(0) == 0.0);
    CHECK(r.x(1) == doctest::Approx(2.0));
}
