#pragma once

// Bernstein functions Phi(lambda) = q + d lambda + int (1 - e^{-lambda x}) mu(dx): evaluation,
// triplet extraction from integer samples, the theta_c membership test and the
// self-decomposability suite.

#include "cmtk/funcops.hpp"
#include "cmtk/moments.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cmtk {

/// q + d lambda + sum_j w_j (1 - e^{-lambda x_j}). Throws DomainError for lambda < 0.
inline double eval_bernstein(const BernsteinTriplet& t, double lambda) { return bernstein_value(t, lambda); }

/// sup over lambda: q + total Levy mass when d = 0, else +inf.
double bernstein_supremum(const BernsteinTriplet& t);

/// The triplet's Bernstein function as a handle on [0, inf).
FunctionHandle triplet_handle(const BernsteinTriplet& t, std::string name = "triplet");

template <typename Scalar>
struct BernsteinExtraction {
    CATriplet<Scalar> moment_form;  // q + d k + sum_j w_j (1 - u_j^k)
    BernsteinTriplet triplet;       // u = e^{-x}
    FitReport report;
    Certificate certificate;
    double roundtrip_error = 0.0;   // max_k |Phi_fit(k) - Phi(k)|
    std::optional<double> d_limit;  // drift from the limit decomposition (handle input only)
};

/// CA inversion of samples Phi(k h), mapped to Levy form. Throws CertificationFailed.
template <typename Scalar>
BernsteinExtraction<Scalar> extract_triplet(const Sequence<Scalar>& samples, const InversionOptions& options = {});

struct ExtractOptions {
    Index K = 30;
    InversionOptions inversion{200, 1e-10, false};
    Index drift_n_max = 10000;  // horizon of the drift limit (Phi((n+1)) - Phi(n))
};

/// Samples Phi on 0..K. The drift comes from the limit decomposition; the remainder
/// Phi(k) - d k is inverted as a CA sequence.
BernsteinExtraction<double> extract_triplet(const FunctionHandle& phi, const ExtractOptions& options = {});

struct ThetaEntry {
    double c = 0.0;
    bool zero_at_origin = true;   // theta_c Phi(0) == 0 exactly
    Certificate certificate;      // CA certificate of (theta_c Phi(k))_k
    double increment_ratio = 0.0; // last increment over the mean increment; near 1 for a drift
    bool bounded = true;
    bool affine = false;          // inconclusive certificate resolved: affine within error bounds
    Verdict verdict = Verdict::pass;
};

struct ThetaReport {
    std::vector<ThetaEntry> entries;
    Verdict verdict = Verdict::pass;
};

struct ThetaOptions {
    double bounded_ratio = 0.5;  // boundedness surrogate: increment_ratio <= bounded_ratio
};

/// theta_c Phi must be a bounded Bernstein function vanishing at 0 for each c.
/// Throws DomainError if Phi is negative on the default grid.
ThetaReport check_bf_via_theta(const FunctionHandle& phi, const std::vector<double>& cs = {1.0, 0.7071067811865476},
                               Index depth = 30, const ThetaOptions& options = {});

struct SdTest {
    Certificate certificate;
    std::optional<MinimalityReport> minimality;
    Verdict verdict = Verdict::pass;
    std::optional<double> witness_delta;  // Delta^n b(k) at the witness, unfolded sign
    bool affine = false;                  // inconclusive certificate resolved: affine within error bounds
};

struct SdReport {
    std::vector<std::pair<double, SdTest>> test_a;  // (Phi(k) - Phi(ck))_k per c
    std::optional<SdTest> test_b;                  // (k Phi'(k))_k; empty when skipped
    bool b_skipped = false;
    bool derivative_supplied = false;
    double derivative_error = 0.0;                 // max estimated error of Phi'(k)
    Verdict verdict = Verdict::pass;
    std::string caveat = "holomorphy hypotheses are not checked numerically";
};

struct SdOptions {
    double minimality_tol = 0.05;
};

/// Each test passes when certified CA and minimal, fails on a certification witness and is
/// otherwise inconclusive. Verdict: fail when any test fails; pass when test (b) and every test (a)
/// pass; else inconclusive.
SdReport check_selfdecomposable(const FunctionHandle& phi,
                                const std::vector<double>& cs = {0.25, 0.5, 0.75, 0.9}, Index depth = 30,
                                const SdOptions& options = {});

/// e^{-t} sum_{k<=K} a_k t^k / k! against q + d t + sum_j w_j (1 - e^{-t (1 - u_j)}) on the t grid.
template <typename Scalar>
EgfCheck egf_validate(const Sequence<Scalar>& a, const CATriplet<Scalar>& fit, const std::vector<double>& t_grid);

extern template BernsteinExtraction<double> extract_triplet(const Sequence<double>&, const InversionOptions&);
extern template BernsteinExtraction<Rational> extract_triplet(const Sequence<Rational>&, const InversionOptions&);
extern template EgfCheck egf_validate(const Sequence<double>&, const CATriplet<double>&, const std::vector<double>&);
extern template EgfCheck egf_validate(const Sequence<Rational>&, const CATriplet<Rational>&,
                                      const std::vector<double>&);

}  // namespace cmtk
