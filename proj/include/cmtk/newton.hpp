#pragma once

// Gregory-Newton interpolation: falling factorials, Stirling numbers, Newton series from
// integer samples, evaluation with a heuristic tail estimate and Levin acceleration.

#include "cmtk/seqcore.hpp"

#include <complex>
#include <vector>

namespace cmtk {

using Complex = std::complex<double>;

/// z (z-1) ... (z-k+1); 1 for k = 0.
template <typename T>
T falling_factorial(const T& z, Index k) {
    T r(1);
    for (Index i = 0; i < k; ++i) r *= z - T(static_cast<double>(i));
    return r;
}

template <>
inline Rational falling_factorial(const Rational& z, Index k) {
    Rational r(1);
    for (Index i = 0; i < k; ++i) r *= z - Rational(i);
    return r;
}

/// Unsigned Stirling numbers of the first kind c(n,k) and second kind S(n,k) for n < size.
class StirlingTable {
public:
    explicit StirlingTable(Index size = 0) { extend(size); }

    /// Grows the table to at least `size` rows.
    void extend(Index size);
    Index size() const { return static_cast<Index>(second_.size()); }

    const Integer& first(Index n, Index k) const;
    /// s(n,k) = (-1)^{n-k} c(n,k)
    Integer signed_first(Index n, Index k) const;
    const Integer& second(Index n, Index k) const;
    /// Row sum of the second kind, the Bell number B_n.
    Integer bell(Index n) const;

private:
    std::vector<std::vector<Integer>> first_;
    std::vector<std::vector<Integer>> second_;
    Integer zero_{0};
};

enum class Basis { power, falling };

/// Converts polynomial coefficients between z^n and z^{(n)} (falling) bases, exactly.
/// The table is extended when the degree exceeds it.
template <typename Scalar>
Vector<Scalar> basis_convert(const Vector<Scalar>& coeffs, Basis from, StirlingTable& table);

template <typename Scalar>
Vector<Scalar> basis_convert(const Vector<Scalar>& coeffs, Basis from) {
    StirlingTable table;
    return basis_convert(coeffs, from, table);
}

/// f(z) = sum_k c_k z^{(k)}, c_k = Delta^k f(0) / k!, in index units of the samples.
template <typename Scalar>
class NewtonSeries {
public:
    NewtonSeries(Vector<Scalar> coeffs, Eigen::VectorXd errors, Sequence<Scalar> samples)
        : coeffs_(std::move(coeffs)), errors_(std::move(errors)), samples_(std::move(samples)) {}

    const Vector<Scalar>& coeffs() const { return coeffs_; }
    /// Absolute error bound per coefficient; zero in exact mode.
    const Eigen::VectorXd& errors() const { return errors_; }
    const Sequence<Scalar>& samples() const { return samples_; }
    Index size() const { return coeffs_.size(); }

private:
    Vector<Scalar> coeffs_;
    Eigen::VectorXd errors_;
    Sequence<Scalar> samples_;
};

template <typename Scalar>
NewtonSeries<Scalar> series_from_samples(const Sequence<Scalar>& samples);

struct SeriesEvaluation {
    Complex partial_sum;        // sum_{k < n_terms} c_k z^{(k)}
    double tail_estimate = 0;   // |last three terms| summed; heuristic, not a bound
    bool diverging = false;     // term magnitudes grew for 5 consecutive k
    bool outside_half_plane = false;  // Re z <= 0
    Complex accelerated;        // Levin u-transform of the partial sums
    Index levin_order = 0;      // 0 when the series terminated or acceleration was not applicable
    double acceleration_change = 0;   // |L_k - L_{k-1}| at the chosen order
    Index n_terms = 0;
};

/// Partial sum with diagnostics. Throws InsufficientData when n_terms exceeds the series.
template <typename Scalar>
SeriesEvaluation eval_series(const NewtonSeries<Scalar>& s, Complex z, Index n_terms);

template <typename Scalar>
SeriesEvaluation eval_series(const NewtonSeries<Scalar>& s, Complex z) {
    return eval_series(s, z, s.size());
}

/// Exact partial sum at a rational point.
Rational eval_series_exact(const NewtonSeries<Rational>& s, const Rational& z, Index n_terms);

struct ExponentialTypeReport {
    bool pass = true;
    Index worst = -1;            // sample index maximizing log|f(x)| - log C - D|x|
    double worst_excess = 0.0;   // that maximum; <= 0 on pass
};

/// Checks |f(x_i)| <= C exp(D |x_i|) at every sample.
ExponentialTypeReport exponential_type_check(const std::vector<double>& x, const std::vector<double>& f, double C,
                                             double D);

extern template NewtonSeries<double> series_from_samples(const Sequence<double>&);
extern template NewtonSeries<Rational> series_from_samples(const Sequence<Rational>&);
extern template SeriesEvaluation eval_series(const NewtonSeries<double>&, Complex, Index);
extern template SeriesEvaluation eval_series(const NewtonSeries<Rational>&, Complex, Index);
extern template Vector<Rational> basis_convert(const Vector<Rational>&, Basis, StirlingTable&);
extern template Vector<double> basis_convert(const Vector<double>&, Basis, StirlingTable&);

}  // namespace cmtk
