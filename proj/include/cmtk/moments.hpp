#pragma once

// Hausdorff moment inversion on a uniform grid by nonnegative least squares, and evaluation of
// the reconstructed Laplace transform / Bernstein function.

#include "cmtk/classify.hpp"
#include "cmtk/nnls.hpp"
#include "cmtk/triplet.hpp"

#include <optional>
#include <variant>

namespace cmtk {

struct InversionOptions {
    Index grid = 200;   // M: grid {0, 1/M, ..., 1}
    double tol = 1e-10;  // KKT tolerance; residual above 100 * tol is rejected
    bool reject_unrepresentable = true;
    bool fit_drift = true;  // CA only: false fixes the drift at 0
};

struct FitReport {
    double residual = 0.0;
    double kkt_gap = 0.0;
    Index grid_size = 0;
    Index iterations = 0;
    bool converged = false;
    Mode mode = Mode::exact;
    double tol = 0.0;
    // CA fits only
    std::optional<double> drift_upper_bound;  // Delta a(K-1), an upper bound for d
    double drift_bias = 0.0;                  // Delta a(K-2) - Delta a(K-1)
    bool drift_clamped = false;
};

template <typename Scalar>
struct CmFit {
    DiscreteMeasure<Scalar> measure;
    FitReport report;
};

template <typename Scalar>
struct CaFit {
    CATriplet<Scalar> triplet;
    FitReport report;
};

/// min ||V w - a|| over w >= 0 with V_kj = u_j^k on the grid. Throws CertificationFailed when the
/// sequence fails CM certification and NotRepresentable when the residual exceeds 100 * tol.
template <typename Scalar>
CmFit<Scalar> invert_cm(const Sequence<Scalar>& a, const InversionOptions& options = {});

/// q = a_0; the drift and the weights of (1 - u_j^k), u_j in [0,1), are fitted jointly by NNLS
/// over k = 1..K. The drift is clamped to Delta a(K-1) when it exceeds that bound.
template <typename Scalar>
CaFit<Scalar> invert_ca(const Sequence<Scalar>& a, const InversionOptions& options = {});

/// Forward maps: (sum_j w_j u_j^k)_k and (q + d k + sum_j w_j (1 - u_j^k))_k for k <= K.
template <typename Scalar>
Sequence<Scalar> moments(const DiscreteMeasure<Scalar>& m, Index K);
template <typename Scalar>
Sequence<Scalar> moments(const CATriplet<Scalar>& t, Index K);

/// Psi(lambda) = sum_j w_j u_j^lambda; the u = 0 atom counts at lambda = 0 only.
template <typename Scalar>
double evaluate(const DiscreteMeasure<Scalar>& m, double lambda) {
    return laplace_value(to_exponential(m), lambda);
}

/// Phi(lambda) = q + d lambda + sum_j w_j (1 - u_j^lambda).
template <typename Scalar>
double evaluate(const CATriplet<Scalar>& t, double lambda) {
    return bernstein_value(to_exponential(t), lambda);
}

struct ExtendOptions {
    InversionOptions inversion;
    std::optional<Index> depth;  // certification depth; default_depth when unset
};

/// The reconstructed CM or Bernstein interpolant of integer samples f(k h), k = 0..K.
class Interpolant {
public:
    Interpolant(Kind kind, std::variant<LaplaceMeasure, BernsteinTriplet> representation, Certificate certificate,
                FitReport report, double step);

    double operator()(double lambda) const;

    Kind kind() const { return kind_; }
    const std::variant<LaplaceMeasure, BernsteinTriplet>& representation() const { return representation_; }
    const Certificate& certificate() const { return certificate_; }
    const FitReport& report() const { return report_; }
    double step() const { return step_; }

private:
    Kind kind_;
    std::variant<LaplaceMeasure, BernsteinTriplet> representation_;
    Certificate certificate_;
    FitReport report_;
    double step_;
};

/// Certify, invert, and return the evaluator. Throws CertificationFailed on a failed certificate;
/// the fit residual is reported on the interpolant rather than rejected.
template <typename Scalar>
Interpolant extend_from_integer_samples(const Sequence<Scalar>& samples, Kind kind, const ExtendOptions& options = {});

struct EgfCheck {
    double max_residual = 0.0;
    double truncation_bound = 0.0;  // tail of the exponential series beyond K plus fit residual
    bool ok = false;
};

/// sum_{k<=K} a_k (-t)^k / k! against sum_j w_j exp(-t u_j) on the t grid.
template <typename Scalar>
EgfCheck egf_validate_cm(const Sequence<Scalar>& a, const CmFit<Scalar>& fit, const std::vector<double>& t_grid);

extern template CmFit<double> invert_cm(const Sequence<double>&, const InversionOptions&);
extern template CmFit<Rational> invert_cm(const Sequence<Rational>&, const InversionOptions&);
extern template CaFit<double> invert_ca(const Sequence<double>&, const InversionOptions&);
extern template CaFit<Rational> invert_ca(const Sequence<Rational>&, const InversionOptions&);
extern template Sequence<double> moments(const DiscreteMeasure<double>&, Index);
extern template Sequence<Rational> moments(const DiscreteMeasure<Rational>&, Index);
extern template Sequence<double> moments(const CATriplet<double>&, Index);
extern template Sequence<Rational> moments(const CATriplet<Rational>&, Index);
extern template EgfCheck egf_validate_cm(const Sequence<double>&, const CmFit<double>&, const std::vector<double>&);
extern template EgfCheck egf_validate_cm(const Sequence<Rational>&, const CmFit<Rational>&, const std::vector<double>&);
extern template Interpolant extend_from_integer_samples(const Sequence<double>&, Kind, const ExtendOptions&);
extern template Interpolant extend_from_integer_samples(const Sequence<Rational>&, Kind, const ExtendOptions&);

}  // namespace cmtk
