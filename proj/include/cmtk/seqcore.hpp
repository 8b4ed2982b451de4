#pragma once

// Finite sequences and their difference calculus.
//
// Every table entry is stored sign-folded: D(n, k) = (-1)^n Delta^n a(k), so the
// completely monotone condition reads D >= 0 and the completely alternating one D <= 0.

#include "cmtk/errors.hpp"
#include "cmtk/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cmtk {

/// Finite prefix a_0..a_K of a real sequence sampled with lattice spacing `step`.
///
/// Floating-point sequences carry an absolute error bound per value; by default one
/// rounding (u |a_k|). Exact sequences ignore the error vector.
template <typename Scalar>
class Sequence {
public:
    explicit Sequence(Vector<Scalar> values, double step = 1.0) : values_(std::move(values)), step_(step) {
        validate();
        errors_ = default_errors();
    }

    Sequence(Vector<Scalar> values, Eigen::VectorXd errors, double step = 1.0)
        : values_(std::move(values)), errors_(std::move(errors)), step_(step) {
        validate();
        if (errors_.size() != values_.size()) throw std::invalid_argument("error vector length mismatch");
        if (is_exact_v<Scalar>) errors_.setZero();
    }

    const Vector<Scalar>& values() const { return values_; }
    const Eigen::VectorXd& errors() const { return errors_; }
    double step() const { return step_; }
    Index size() const { return values_.size(); }
    /// K, the largest available index.
    Index max_index() const { return values_.size() - 1; }
    const Scalar& operator[](Index k) const { return values_(k); }

    /// (a_{k+offset})_k
    Sequence shifted(Index offset) const {
        if (offset < 0 || offset > max_index()) throw InsufficientData("insufficient data");
        const Index n = size() - offset;
        return Sequence(values_.tail(n), errors_.tail(n), step_);
    }

private:
    void validate() const {
        if (values_.size() == 0) throw std::invalid_argument("sequence must be nonempty");
        if (!(step_ > 0)) throw std::invalid_argument("sequence step must be positive");
    }

    Eigen::VectorXd default_errors() const {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(values_.size());
        if constexpr (!is_exact_v<Scalar>) e = kUnitRoundoff * values_.cwiseAbs();
        return e;
    }

    Vector<Scalar> values_;
    Eigen::VectorXd errors_;
    double step_;
};

/// Rounds an exact sequence to binary64, recording one rounding per value.
Sequence<double> to_float(const Sequence<Rational>& a);

enum class Sign { negative, zero, positive, undecided };

/// Triangular table D(n, k) = (-1)^n Delta^n a(k) for n <= depth and n + k <= K.
template <typename Scalar>
class DifferenceTable {
public:
    DifferenceTable(Matrix<Scalar> values, Eigen::MatrixXd errors, Index max_index)
        : values_(std::move(values)), errors_(std::move(errors)), max_index_(max_index) {}

    Index depth() const { return values_.rows() - 1; }
    Index max_index() const { return max_index_; }
    bool contains(Index n, Index k) const { return n >= 0 && n <= depth() && k >= 0 && n + k <= max_index_; }

    const Scalar& operator()(Index n, Index k) const { return values_(n, k); }
    /// Absolute error bound of D(n, k); zero in exact mode.
    double error(Index n, Index k) const { return errors_(n, k); }

    /// Sign of D(n, k); `undecided` when a nonzero error bound covers zero.
    Sign sign(Index n, Index k) const {
        const Scalar& v = values_(n, k);
        const double err = errors_(n, k);
        if (err > 0 && std::abs(to_double(v)) <= err) return Sign::undecided;
        if (v > 0) return Sign::positive;
        if (v < 0) return Sign::negative;
        return Sign::zero;
    }

    /// Entries D(0..m, k) available in column k.
    Vector<Scalar> column(Index k) const {
        const Index m = std::min(depth(), max_index_ - k);
        return values_.col(k).head(m + 1);
    }

    const Matrix<Scalar>& values() const { return values_; }
    const Eigen::MatrixXd& errors() const { return errors_; }

private:
    Matrix<Scalar> values_;
    Eigen::MatrixXd errors_;
    Index max_index_;
};

/// Default table depth: K, capped at 40 in floating point where cancellation dominates beyond.
template <typename Scalar>
Index default_depth(const Sequence<Scalar>& a) {
    if constexpr (is_exact_v<Scalar>)
        return a.max_index();
    else
        return std::min<Index>(a.max_index(), 40);
}

/// Closed binomial sum sum_i C(n,i) (-1)^i a_{k+i}, i.e. (-1)^n Delta^n a(k).
/// In floating point the sum is compensated (TwoProduct + Neumaier); `error` receives the bound.
template <typename Scalar>
Scalar binomial_difference(const Sequence<Scalar>& a, Index n, Index k, double* error = nullptr);

/// Plain sign-folded recurrence D(n,k) = D(n-1,k) - D(n-1,k+1) without error tracking.
template <typename Scalar>
Matrix<Scalar> recurrence_table(const Sequence<Scalar>& a, Index depth);

/// Difference table to the given depth. Exact: recurrence. Float: compensated closed form
/// with per-entry error bounds.
template <typename Scalar>
DifferenceTable<Scalar> difference_table(const Sequence<Scalar>& a, Index depth);

/// b_n = sum_i C(n,i) (-1)^i a_i; an involution.
template <typename Scalar>
Sequence<Scalar> binomial_transform(const Sequence<Scalar>& a);

/// (Delta^n a(0))_n.
template <typename Scalar>
Sequence<Scalar> euler_transform(const Sequence<Scalar>& a);

/// Inverse of euler_transform: a_n = sum_i C(n,i) e_i.
template <typename Scalar>
Sequence<Scalar> inverse_euler_transform(const Sequence<Scalar>& e);

// ---------------------------------------------------------------------------

namespace detail {

/// Neumaier summation.
struct CompensatedSum {
    double sum = 0.0;
    double compensation = 0.0;
    double magnitude = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            compensation += (sum - t) + x;
        else
            compensation += (x - t) + sum;
        sum = t;
        magnitude += std::abs(x);
    }
    double value() const { return sum + compensation; }
};

// Pascal entries are exact in binary64 up to this row.
inline constexpr Index kExactPascalRows = 56;

inline double closed_form_double(const Eigen::VectorXd& values, const Eigen::VectorXd& errors,
                                 const Eigen::VectorXd& binom, Index n, Index k, double* error) {
    CompensatedSum s;
    double data_error = 0.0;
    double weighted = 0.0;
    for (Index i = 0; i <= n; ++i) {
        const double c = (i % 2 == 0) ? binom(i) : -binom(i);
        const double v = values(k + i);
        const double p = c * v;
        s.add(p);
        s.add(std::fma(c, v, -p));
        data_error += binom(i) * errors(k + i);
        weighted += binom(i) * std::abs(v);
    }
    const double result = s.value();
    if (error) {
        const double m = static_cast<double>(n + 2);
        double bound = data_error + 2.0 * kUnitRoundoff * std::abs(result) +
                       4.0 * m * m * kUnitRoundoff * kUnitRoundoff * s.magnitude;
        if (n > kExactPascalRows) bound += static_cast<double>(n) * kUnitRoundoff * weighted;
        *error = bound * (1.0 + 4.0 * kUnitRoundoff);
    }
    return result;
}

}  // namespace detail

template <typename Scalar>
Scalar binomial_difference(const Sequence<Scalar>& a, Index n, Index k, double* error) {
    if (n < 0 || k < 0 || n + k > a.max_index()) throw InsufficientData("insufficient data");
    if constexpr (is_exact_v<Scalar>) {
        const Vector<Scalar> binom = pascal_row<Scalar>(n);
        Scalar sum(0);
        for (Index i = 0; i <= n; ++i) {
            if (i % 2 == 0)
                sum += binom(i) * a[k + i];
            else
                sum -= binom(i) * a[k + i];
        }
        if (error) *error = 0.0;
        return sum;
    } else {
        const Eigen::VectorXd binom = pascal_row<double>(n);
        return detail::closed_form_double(a.values(), a.errors(), binom, n, k, error);
    }
}

template <typename Scalar>
Matrix<Scalar> recurrence_table(const Sequence<Scalar>& a, Index depth) {
    const Index K = a.max_index();
    if (depth < 0 || depth > K) throw InsufficientData("insufficient data");
    Matrix<Scalar> d = Matrix<Scalar>::Zero(depth + 1, K + 1);
    d.row(0) = a.values().transpose();
    for (Index n = 1; n <= depth; ++n)
        for (Index k = 0; k + n <= K; ++k) d(n, k) = d(n - 1, k) - d(n - 1, k + 1);
    return d;
}

template <typename Scalar>
DifferenceTable<Scalar> difference_table(const Sequence<Scalar>& a, Index depth) {
    const Index K = a.max_index();
    if (depth < 0 || depth > K) throw InsufficientData("insufficient data");
    Eigen::MatrixXd errors = Eigen::MatrixXd::Zero(depth + 1, K + 1);
    if constexpr (is_exact_v<Scalar>) {
        return DifferenceTable<Scalar>(recurrence_table(a, depth), std::move(errors), K);
    } else {
        Matrix<Scalar> d = Matrix<Scalar>::Zero(depth + 1, K + 1);
        const Eigen::MatrixXd binom = pascal_triangle<double>(depth);
        for (Index n = 0; n <= depth; ++n) {
            const Eigen::VectorXd row = binom.row(n).head(n + 1).transpose();
            for (Index k = 0; k + n <= K; ++k) {
                double err = 0.0;
                d(n, k) = detail::closed_form_double(a.values(), a.errors(), row, n, k, &err);
                errors(n, k) = err;
            }
        }
        return DifferenceTable<Scalar>(std::move(d), std::move(errors), K);
    }
}

template <typename Scalar>
Sequence<Scalar> binomial_transform(const Sequence<Scalar>& a) {
    const Index K = a.max_index();
    Vector<Scalar> b(K + 1);
    Eigen::VectorXd err(K + 1);
    for (Index n = 0; n <= K; ++n) {
        double e = 0.0;
        b(n) = binomial_difference(a, n, 0, &e);
        err(n) = e;
    }
    return Sequence<Scalar>(std::move(b), std::move(err), a.step());
}

template <typename Scalar>
Sequence<Scalar> euler_transform(const Sequence<Scalar>& a) {
    Sequence<Scalar> b = binomial_transform(a);
    Vector<Scalar> e = b.values();
    for (Index n = 1; n < e.size(); n += 2) e(n) = -e(n);
    return Sequence<Scalar>(std::move(e), b.errors(), a.step());
}

template <typename Scalar>
Sequence<Scalar> inverse_euler_transform(const Sequence<Scalar>& e) {
    // a_n = sum_i C(n,i) e_i  ==  binomial transform of ((-1)^i e_i)
    Vector<Scalar> signed_e = e.values();
    for (Index i = 1; i < signed_e.size(); i += 2) signed_e(i) = -signed_e(i);
    return binomial_transform(Sequence<Scalar>(std::move(signed_e), e.errors(), e.step()));
}

extern template class Sequence<double>;
extern template class Sequence<Rational>;
extern template DifferenceTable<double> difference_table(const Sequence<double>&, Index);
extern template DifferenceTable<Rational> difference_table(const Sequence<Rational>&, Index);

}  // namespace cmtk
