#include "cmtk/moments.hpp"

#include <cmath>

namespace cmtk {

namespace {

template <typename Scalar>
Scalar grid_point(Index j, Index M) {
    if constexpr (is_exact_v<Scalar>)
        return Rational(j, M);
    else
        return static_cast<double>(j) / static_cast<double>(M);
}

template <typename Scalar>
NnlsResult<Scalar> solve(const Matrix<Scalar>& A, const Vector<Scalar>& b, double tol) {
    NnlsOptions opt;
    opt.tol = tol;
    return nnls(A, b, opt);
}

template <typename Scalar>
void require_certified(const Sequence<Scalar>& a, Kind kind) {
    Certificate c = certify(a, kind, default_depth(a));
    if (c.verdict == Verdict::fail) throw CertificationFailed(std::move(c));
}

void check_grid(const InversionOptions& options) {
    if (options.grid < 1) throw DomainError("grid size must be >= 1");
    if (!(options.tol > 0)) throw DomainError("tolerance must be > 0");
}

template <typename Scalar>
void fill_report(FitReport& r, const NnlsResult<Scalar>& res, const InversionOptions& options) {
    r.residual = res.residual;
    r.kkt_gap = res.kkt_gap;
    r.grid_size = options.grid;
    r.iterations = res.iterations;
    r.converged = res.converged;
    r.mode = ScalarTraits<Scalar>::mode;
    r.tol = options.tol;
}

void check_residual(const FitReport& r, const InversionOptions& options) {
    if (options.reject_unrepresentable && r.residual > 100.0 * r.tol)
        throw NotRepresentable("not representable at this grid (residual " + std::to_string(r.residual) + ")",
                               r.residual);
}

}  // namespace

template <typename Scalar>
CmFit<Scalar> invert_cm(const Sequence<Scalar>& a, const InversionOptions& options) {
    check_grid(options);
    require_certified(a, Kind::cm);
    const Index K = a.max_index(), M = options.grid;
    Matrix<Scalar> V(K + 1, M + 1);
    for (Index j = 0; j <= M; ++j) {
        const Scalar u = grid_point<Scalar>(j, M);
        Scalar p(1);
        for (Index k = 0; k <= K; ++k) {
            V(k, j) = p;
            p *= u;
        }
    }
    const auto res = solve<Scalar>(V, a.values(), options.tol);

    std::vector<MeasureAtom<Scalar>> atoms;
    for (Index j = 0; j <= M; ++j)
        if (res.x(j) > 0) atoms.push_back({grid_point<Scalar>(j, M), res.x(j)});
    CmFit<Scalar> fit{DiscreteMeasure<Scalar>(std::move(atoms), Support::closed), {}};
    fill_report(fit.report, res, options);
    check_residual(fit.report, options);
    return fit;
}

template <typename Scalar>
CaFit<Scalar> invert_ca(const Sequence<Scalar>& a, const InversionOptions& options) {
    check_grid(options);
    require_certified(a, Kind::ca);
    const Index K = a.max_index(), M = options.grid;
    CaFit<Scalar> fit;
    fit.triplet.q = a[0];
    fit.report.grid_size = M;
    fit.report.mode = ScalarTraits<Scalar>::mode;
    fit.report.tol = options.tol;
    if (K == 0) {
        fit.report.converged = true;
        return fit;
    }

    // columns 0..M-1: 1 - u_j^k; column M: k
    Matrix<Scalar> A(K, M + 1);
    Vector<Scalar> b(K);
    for (Index k = 1; k <= K; ++k) {
        b(k - 1) = a[k] - a[0];
        A(k - 1, M) = Scalar(k);
    }
    for (Index j = 0; j < M; ++j) {
        const Scalar u = grid_point<Scalar>(j, M);
        Scalar p = u;
        for (Index k = 1; k <= K; ++k) {
            A(k - 1, j) = Scalar(1) - p;
            p *= u;
        }
    }
    if (!options.fit_drift) A.col(M).setZero();
    auto res = solve<Scalar>(A, b, options.tol);
    Scalar d = res.x(M);

    Scalar bound = a[K] - a[K - 1];
    if (bound < 0) bound = Scalar(0);
    fit.report.drift_upper_bound = to_double(bound);
    if (K >= 2) fit.report.drift_bias = to_double(Scalar(a[K - 1] - a[K - 2] - bound));
    if (d > bound) {
        d = bound;
        fit.report.drift_clamped = true;
        Vector<Scalar> b2(K);
        for (Index k = 1; k <= K; ++k) b2(k - 1) = b(k - 1) - d * Scalar(k);
        const Matrix<Scalar> A2 = A.leftCols(M);
        auto res2 = solve<Scalar>(A2, b2, options.tol);
        res.x.head(M) = res2.x;
        res.x(M) = d;
        res.residual = res2.residual;
        res.kkt_gap = res2.kkt_gap;
        res.iterations += res2.iterations;
        res.converged = res2.converged;
    }

    std::vector<MeasureAtom<Scalar>> atoms;
    for (Index j = 0; j < M; ++j)
        if (res.x(j) > 0) atoms.push_back({grid_point<Scalar>(j, M), res.x(j)});
    fit.triplet.d = d;
    fit.triplet.measure = DiscreteMeasure<Scalar>(std::move(atoms), Support::half_open);
    const auto clamped = fit.report.drift_clamped;
    const auto upper = fit.report.drift_upper_bound;
    const auto bias = fit.report.drift_bias;
    fill_report(fit.report, res, options);
    fit.report.drift_clamped = clamped;
    fit.report.drift_upper_bound = upper;
    fit.report.drift_bias = bias;
    check_residual(fit.report, options);
    return fit;
}

template <typename Scalar>
Sequence<Scalar> moments(const DiscreteMeasure<Scalar>& m, Index K) {
    Vector<Scalar> v(K + 1);
    for (Index k = 0; k <= K; ++k) v(k) = m.moment(k);
    return Sequence<Scalar>(std::move(v));
}

template <typename Scalar>
Sequence<Scalar> moments(const CATriplet<Scalar>& t, Index K) {
    Vector<Scalar> v(K + 1);
    for (Index k = 0; k <= K; ++k) v(k) = t.value_at(k);
    return Sequence<Scalar>(std::move(v));
}

Interpolant::Interpolant(Kind kind, std::variant<LaplaceMeasure, BernsteinTriplet> representation,
                         Certificate certificate, FitReport report, double step)
    : kind_(kind),
      representation_(std::move(representation)),
      certificate_(std::move(certificate)),
      report_(report),
      step_(step) {}

double Interpolant::operator()(double lambda) const {
    if (!(lambda >= 0)) throw DomainError("lambda must be >= 0");
    const double s = lambda / step_;
    if (const auto* m = std::get_if<LaplaceMeasure>(&representation_)) return laplace_value(*m, s);
    return bernstein_value(std::get<BernsteinTriplet>(representation_), s);
}

template <typename Scalar>
Interpolant extend_from_integer_samples(const Sequence<Scalar>& samples, Kind kind, const ExtendOptions& options) {
    const Index depth = std::min(options.depth.value_or(default_depth(samples)), samples.max_index());
    InversionOptions inversion = options.inversion;
    inversion.reject_unrepresentable = false;
    Certificate cert = certify(samples, kind, depth);
    if (cert.verdict == Verdict::fail) throw CertificationFailed(std::move(cert));
    if (kind == Kind::cm) {
        auto fit = invert_cm(samples, inversion);
        return Interpolant(kind, to_exponential(fit.measure), std::move(cert), fit.report, samples.step());
    }
    auto fit = invert_ca(samples, inversion);
    return Interpolant(kind, to_exponential(fit.triplet), std::move(cert), fit.report, samples.step());
}

template <typename Scalar>
EgfCheck egf_validate_cm(const Sequence<Scalar>& a, const CmFit<Scalar>& fit, const std::vector<double>& t_grid) {
    EgfCheck out;
    out.ok = true;
    const Index K = a.max_index();
    for (double t : t_grid) {
        double lhs = 0.0, magnitude = 0.0, p = 1.0;
        for (Index k = 0; k <= K; ++k) {
            const double term = to_double(a[k]) * p;
            lhs += term;
            magnitude += std::abs(term);
            p *= -t / static_cast<double>(k + 1);
        }
        double rhs = 0.0;
        for (const auto& atom : fit.measure.atoms()) rhs += to_double(atom.w) * std::exp(-t * to_double(atom.u));
        // |a_k| <= a_0 for a CM sequence, so the tail is at most a_0 t^{K+1} e^t / (K+1)!
        const double tail = std::abs(to_double(a[0])) * std::abs(p) * std::exp(t);
        const double bound = tail + fit.report.residual * std::exp(t) + 8.0 * kUnitRoundoff * (magnitude + rhs);
        out.max_residual = std::max(out.max_residual, std::abs(lhs - rhs));
        out.truncation_bound = std::max(out.truncation_bound, bound);
        out.ok = out.ok && std::abs(lhs - rhs) <= bound;
    }
    return out;
}

template CmFit<double> invert_cm(const Sequence<double>&, const InversionOptions&);
template CmFit<Rational> invert_cm(const Sequence<Rational>&, const InversionOptions&);
template CaFit<double> invert_ca(const Sequence<double>&, const InversionOptions&);
template CaFit<Rational> invert_ca(const Sequence<Rational>&, const InversionOptions&);
template Sequence<double> moments(const DiscreteMeasure<double>&, Index);
template Sequence<Rational> moments(const DiscreteMeasure<Rational>&, Index);
template Sequence<double> moments(const CATriplet<double>&, Index);
template Sequence<Rational> moments(const CATriplet<Rational>&, Index);
template Interpolant extend_from_integer_samples(const Sequence<double>&, Kind, const ExtendOptions&);
template Interpolant extend_from_integer_samples(const Sequence<Rational>&, Kind, const ExtendOptions&);
template EgfCheck egf_validate_cm(const Sequence<double>&, const CmFit<double>&, const std::vector<double>&);
template EgfCheck egf_validate_cm(const Sequence<Rational>&, const CmFit<Rational>&, const std::vector<double>&);

}  // namespace cmtk
