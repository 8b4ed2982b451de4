#include "cmtk/bernstein.hpp"

#include <cmath>
#include <limits>

namespace cmtk {

double bernstein_supremum(const BernsteinTriplet& t) {
    if (t.d > 0) return std::numeric_limits<double>::infinity();
    double s = t.q + t.infinity_mass;
    for (const auto& a : t.levy) s += a.w;
    return s;
}

FunctionHandle triplet_handle(const BernsteinTriplet& t, std::string name) {
    t.validate();
    return FunctionHandle(std::move(name), [t](long double lambda) {
        long double s = t.q + t.d * lambda;
        for (const auto& a : t.levy) s -= a.w * std::expm1(-lambda * a.x);
        if (lambda > 0) s += t.infinity_mass;
        return s;
    });
}

namespace {

template <typename Scalar>
double max_deviation(const CATriplet<Scalar>& t, const Sequence<Scalar>& a) {
    double worst = 0.0;
    for (Index k = 0; k <= a.max_index(); ++k)
        worst = std::max(worst, std::abs(to_double(Scalar(t.value_at(k) - a[k]))));
    return worst;
}

// Levy form in lambda units for samples taken at spacing h: u^k = e^{-(x/h) (k h)}.
BernsteinTriplet rescale(BernsteinTriplet t, double h) {
    if (h == 1.0) return t;
    t.d /= h;
    for (auto& a : t.levy) a.x /= h;
    return t;
}

Verdict combine(const std::vector<Verdict>& vs) {
    bool inconclusive = false;
    for (Verdict v : vs) {
        if (v == Verdict::fail) return Verdict::fail;
        inconclusive = inconclusive || v == Verdict::inconclusive;
    }
    return inconclusive ? Verdict::inconclusive : Verdict::pass;
}

// a_k = a_0 + k (a_1 - a_0) with a_1 >= a_0, all within the error bounds. Such a sequence is CA
// with no atom at u = 0; its difference table is zero beyond the first row.
bool affine_within_errors(const Sequence<double>& a) {
    const Eigen::VectorXd& e = a.errors();
    const double slope = a[1] - a[0];
    if (slope < -(e(0) + e(1))) return false;
    for (Index k = 2; k <= a.max_index(); ++k) {
        const double kd = static_cast<double>(k);
        const double tol = e(k) + kd * (e(0) + e(1)) + 4 * kUnitRoundoff * (std::abs(a[k]) + kd * std::abs(slope));
        if (std::abs(a[k] - (a[0] + kd * slope)) > tol) return false;
    }
    return true;
}

}  // namespace

template <typename Scalar>
BernsteinExtraction<Scalar> extract_triplet(const Sequence<Scalar>& samples, const InversionOptions& options) {
    Certificate cert = certify(samples, Kind::ca);
    if (cert.verdict == Verdict::fail) throw CertificationFailed(std::move(cert));
    CaFit<Scalar> fit = invert_ca(samples, options);
    BernsteinExtraction<Scalar> out{fit.triplet, rescale(to_exponential(fit.triplet), samples.step()), fit.report,
                                    std::move(cert), 0.0, std::nullopt};
    out.roundtrip_error = max_deviation(out.moment_form, samples);
    return out;
}

BernsteinExtraction<double> extract_triplet(const FunctionHandle& phi, const ExtractOptions& options) {
    if (phi.open_at_zero()) throw DomainError("triplet extraction needs Phi(0)");
    const Sequence<double> a = lattice_samples(phi, 1.0, options.K);
    Certificate cert = certify(a, Kind::ca);
    if (cert.verdict == Verdict::fail) throw CertificationFailed(std::move(cert));

    const Index K = options.K;
    double d = bf_limit_decompose(phi, 1.0, options.drift_n_max, {0.0}).d;
    // the drift of a CA sequence is at most its last increment
    d = std::clamp(d, 0.0, K >= 1 ? std::max(0.0, a[K] - a[K - 1]) : 0.0);

    Eigen::VectorXd v = a.values(), e = a.errors();
    for (Index k = 0; k <= K; ++k) {
        v(k) -= d * static_cast<double>(k);
        e(k) += kUnitRoundoff * (std::abs(v(k)) + 2 * d * static_cast<double>(k));
    }
    InversionOptions inversion = options.inversion;
    inversion.fit_drift = false;
    CaFit<double> fit = invert_ca(Sequence<double>(v, e), inversion);
    fit.triplet.d += d;

    BernsteinExtraction<double> out{fit.triplet, to_exponential(fit.triplet), fit.report, std::move(cert), 0.0, d};
    out.roundtrip_error = max_deviation(out.moment_form, a);
    return out;
}

ThetaReport check_bf_via_theta(const FunctionHandle& phi, const std::vector<double>& cs, Index depth,
                               const ThetaOptions& options) {
    if (depth < 1) throw InsufficientData("depth too small");
    for (double x : default_grid(phi.domain())) {
        const Evaluation e = phi(x);
        if (e.value < -e.error) throw DomainError("Phi is negative on the probe grid");
    }
    ThetaReport r;
    std::vector<Verdict> verdicts;
    try {
        for (double c : cs) {
            ThetaEntry entry;
            entry.c = c;
            const FunctionHandle theta = apply_operator(phi, Operator::theta, c);
            phi.reset_calls();
            entry.zero_at_origin = theta(0.0L).value == 0;
            const Sequence<double> s = lattice_samples(theta, 1.0, depth);
            entry.certificate = certify(s, Kind::ca, depth);
            entry.affine = entry.certificate.verdict == Verdict::inconclusive && affine_within_errors(s);
            const double mean = (s[depth] - s[0]) / static_cast<double>(depth);
            const double last = s[depth] - s[depth - 1];
            entry.increment_ratio = mean > 0 ? last / mean : 0.0;
            entry.bounded = entry.increment_ratio <= options.bounded_ratio;
            if (!entry.zero_at_origin || entry.certificate.verdict == Verdict::fail)
                entry.verdict = Verdict::fail;
            else if (entry.certificate.verdict == Verdict::inconclusive && !entry.affine)
                entry.verdict = Verdict::inconclusive;
            else
                entry.verdict = entry.bounded ? Verdict::pass : Verdict::fail;
            verdicts.push_back(entry.verdict);
            r.entries.push_back(std::move(entry));
        }
    } catch (const BudgetExceeded&) {
        verdicts.push_back(Verdict::inconclusive);
    }
    r.verdict = combine(verdicts);
    return r;
}

namespace {

SdTest run_sd_test(const Sequence<double>& s, Index depth, double minimality_tol) {
    SdTest t;
    t.certificate = certify(s, Kind::ca, depth);
    if (t.certificate.witness) {
        const auto& w = *t.certificate.witness;
        t.witness_delta = (w.n % 2 == 0 ? 1.0 : -1.0) * w.value.value;
    }
    t.affine = t.certificate.verdict == Verdict::inconclusive && affine_within_errors(s);
    if (t.affine) {
        t.verdict = Verdict::pass;
    } else if (t.certificate.verdict == Verdict::pass) {
        t.minimality = is_minimal(s, Kind::ca, depth, minimality_tol);
        // the trail bounds the atom from above, so a large trail does not prove non-minimality
        t.verdict = t.minimality->minimal ? Verdict::pass : Verdict::inconclusive;
    } else {
        t.verdict = t.certificate.verdict;
    }
    return t;
}

}  // namespace

SdReport check_selfdecomposable(const FunctionHandle& phi, const std::vector<double>& cs, Index depth,
                                const SdOptions& options) {
    if (depth < 2) throw InsufficientData("depth too small");
    if (phi.open_at_zero()) throw DomainError("self-decomposability test needs Phi(0+) finite");
    SdReport r;
    std::vector<Verdict> verdicts;
    try {
        for (double c : cs) {
            if (!(c > 0 && c < 1)) throw DomainError("c must lie in (0, 1)");
            phi.reset_calls();
            const Sequence<double> b = lattice_samples(apply_operator(phi, Operator::rho, c), 1.0, depth);
            SdTest t = run_sd_test(b, depth, options.minimality_tol);
            verdicts.push_back(t.verdict);
            r.test_a.emplace_back(c, std::move(t));
        }

        // (k Phi'(k))_k
        phi.reset_calls();
        r.derivative_supplied = phi.derivative().has_value();
        Eigen::VectorXd s = Eigen::VectorXd::Zero(depth + 1), e = Eigen::VectorXd::Zero(depth + 1);
        bool finite = true;
        for (Index k = 1; k <= depth && finite; ++k) {
            const long double kl = static_cast<long double>(k);
            long double deriv;
            double err;
            if (r.derivative_supplied) {
                deriv = (*phi.derivative())(kl);
                err = 0x1p-58 * static_cast<double>(std::fabs(deriv));
            } else {
                const long double h = 1e-6L * std::max(1.0L, kl);
                double eval_err = 0.0;
                auto central = [&](long double step) {
                    const Evaluation p = phi(kl + step), m = phi(kl - step);
                    eval_err = std::max(eval_err, (p.error + m.error) / static_cast<double>(2 * step));
                    return (p.value - m.value) / (2 * step);
                };
                const long double coarse = central(h), fine = central(h / 2);
                deriv = (4 * fine - coarse) / 3;
                err = static_cast<double>(std::fabs(deriv - fine)) + 3.0 * eval_err;
            }
            finite = std::isfinite(static_cast<double>(deriv)) && std::isfinite(err);
            s(k) = static_cast<double>(kl * deriv);
            e(k) = static_cast<double>(kl) * err + kUnitRoundoff * std::abs(s(k));
            r.derivative_error = std::max(r.derivative_error, err);
        }
        if (finite) {
            SdTest t = run_sd_test(Sequence<double>(s, e), depth, options.minimality_tol);
            verdicts.push_back(t.verdict);
            r.test_b = std::move(t);
        } else {
            r.b_skipped = true;
            verdicts.push_back(Verdict::inconclusive);
        }
    } catch (const BudgetExceeded&) {
        verdicts.push_back(Verdict::inconclusive);
    }
    r.verdict = combine(verdicts);
    return r;
}

template <typename Scalar>
EgfCheck egf_validate(const Sequence<Scalar>& a, const CATriplet<Scalar>& fit, const std::vector<double>& t_grid) {
    EgfCheck out;
    out.ok = true;
    const Index K = a.max_index();
    const double q = to_double(fit.q), d = to_double(fit.d);
    double mass = 0.0;
    for (const auto& atom : fit.measure.atoms()) mass += to_double(atom.w);
    const double deviation = max_deviation(fit, a);
    for (double t : t_grid) {
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("EGF grid must lie in [0, 1]");
        double sum = 0.0, p = 1.0;
        for (Index k = 0; k <= K; ++k) {
            sum += to_double(a[k]) * p;
            p *= t / static_cast<double>(k + 1);
        }
        const double lhs = std::exp(-t) * sum;
        double rhs = q + d * t;
        for (const auto& atom : fit.measure.atoms()) rhs -= to_double(atom.w) * std::expm1(-t * (1.0 - to_double(atom.u)));
        // fitted values satisfy b_k <= q + mass + d k; p = t^{K+1} / (K+1)!
        const double tail = (q + mass) * p + d * t * p * static_cast<double>(K + 1);
        const double bound = tail + deviation + 8.0 * kUnitRoundoff * (std::abs(sum) + std::abs(rhs) + 1.0);
        out.max_residual = std::max(out.max_residual, std::abs(lhs - rhs));
        out.truncation_bound = std::max(out.truncation_bound, bound);
        out.ok = out.ok && std::abs(lhs - rhs) <= bound;
    }
    return out;
}

template BernsteinExtraction<double> extract_triplet(const Sequence<double>&, const InversionOptions&);
template BernsteinExtraction<Rational> extract_triplet(const Sequence<Rational>&, const InversionOptions&);
template EgfCheck egf_validate(const Sequence<double>&, const CATriplet<double>&, const std::vector<double>&);
template EgfCheck egf_validate(const Sequence<Rational>&, const CATriplet<Rational>&, const std::vector<double>&);

}  // namespace cmtk
