#include "cmtk/triplet.hpp"

#include "cmtk/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cmtk {

template <typename Scalar>
DiscreteMeasure<Scalar>::DiscreteMeasure(std::vector<MeasureAtom<Scalar>> atoms, Support support)
    : support_(support) {
    for (const auto& a : atoms) {
        if constexpr (!is_exact_v<Scalar>) {
            if (!std::isfinite(a.u) || !std::isfinite(a.w)) throw DomainError("measure atoms must be finite");
        }
        if (a.w < 0) throw DomainError("measure weights must be nonnegative");
        if (a.u < 0 || a.u > 1 || (support == Support::half_open && a.u == 1))
            throw DomainError(support == Support::closed ? "atom outside [0,1]" : "atom outside [0,1)");
    }
    atoms.push_back({Scalar(0), Scalar(0)});
    if (support == Support::closed) atoms.push_back({Scalar(1), Scalar(0)});
    std::stable_sort(atoms.begin(), atoms.end(), [](const auto& l, const auto& r) { return l.u < r.u; });
    for (auto& a : atoms) {
        if (!atoms_.empty() && atoms_.back().u == a.u)
            atoms_.back().w += a.w;
        else
            atoms_.push_back(a);
    }
}

template <typename Scalar>
Scalar DiscreteMeasure<Scalar>::weight_at_one() const {
    return support_ == Support::closed ? atoms_.back().w : Scalar(0);
}

template <typename Scalar>
Scalar DiscreteMeasure<Scalar>::total_mass() const {
    Scalar s(0);
    for (const auto& a : atoms_) s += a.w;
    return s;
}

template <typename Scalar>
Scalar DiscreteMeasure<Scalar>::moment(Index k) const {
    Scalar s(0);
    for (const auto& a : atoms_) {
        Scalar p(1);
        for (Index i = 0; i < k; ++i) p *= a.u;
        s += a.w * p;
    }
    return s;
}

template <typename Scalar>
Scalar CATriplet<Scalar>::value_at(Index k) const {
    Scalar s = q + d * Scalar(k);
    for (const auto& a : measure.atoms()) {
        Scalar p(1);
        for (Index i = 0; i < k; ++i) p *= a.u;
        s += a.w * (Scalar(1) - p);
    }
    return s;
}

void BernsteinTriplet::validate() const {
    auto bad = [](double v) { return !std::isfinite(v) || v < 0; };
    if (bad(q)) throw DomainError("triplet q must be finite and >= 0");
    if (bad(d)) throw DomainError("triplet d must be finite and >= 0");
    if (bad(infinity_mass)) throw DomainError("triplet infinity mass must be finite and >= 0");
    for (const auto& a : levy) {
        if (bad(a.w)) throw DomainError("Levy weights must be finite and >= 0");
        if (!std::isfinite(a.x) || a.x <= 0) throw DomainError("Levy atoms must lie in (0, inf)");
    }
    if (!std::isfinite(levy_integral())) throw DomainError("Levy measure does not integrate min(1, x)");
}

double BernsteinTriplet::levy_integral() const {
    double s = 0.0;
    for (const auto& a : levy) s += a.w * std::min(1.0, a.x);
    return s;
}

double laplace_value(const LaplaceMeasure& m, double lambda) {
    if (!(lambda >= 0)) throw DomainError("lambda must be >= 0");
    double s = lambda == 0 ? m.infinity_mass : 0.0;
    for (const auto& a : m.atoms) s += a.w * std::exp(-lambda * a.x);
    return s;
}

double bernstein_value(const BernsteinTriplet& t, double lambda) {
    if (!(lambda >= 0)) throw DomainError("lambda must be >= 0");
    double s = t.q + t.d * lambda;
    if (lambda > 0) s += t.infinity_mass;
    for (const auto& a : t.levy) s += a.w * -std::expm1(-lambda * a.x);
    return s;
}

namespace {

template <typename Scalar>
std::vector<LaplaceAtom> exponential_atoms(const DiscreteMeasure<Scalar>& m, double* infinity_mass) {
    std::vector<LaplaceAtom> out;
    *infinity_mass = 0.0;
    for (const auto& a : m.atoms()) {
        if (a.w == 0) continue;
        if (a.u == 0)
            *infinity_mass += to_double(a.w);
        else
            out.push_back({a.u == 1 ? 0.0 : -std::log(to_double(a.u)), to_double(a.w)});
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.x < r.x; });
    return out;
}

}  // namespace

template <typename Scalar>
LaplaceMeasure to_exponential(const DiscreteMeasure<Scalar>& m) {
    LaplaceMeasure out;
    out.atoms = exponential_atoms(m, &out.infinity_mass);
    return out;
}

template <typename Scalar>
BernsteinTriplet to_exponential(const CATriplet<Scalar>& t) {
    BernsteinTriplet out;
    out.q = to_double(t.q);
    out.d = to_double(t.d);
    out.levy = exponential_atoms(t.measure, &out.infinity_mass);
    return out;
}

DiscreteMeasure<double> to_moment_form(const LaplaceMeasure& m) {
    std::vector<MeasureAtom<double>> atoms{{0.0, m.infinity_mass}};
    for (const auto& a : m.atoms) atoms.push_back({std::exp(-a.x), a.w});
    return DiscreteMeasure<double>(std::move(atoms), Support::closed);
}

CATriplet<double> to_moment_form(const BernsteinTriplet& t) {
    std::vector<MeasureAtom<double>> atoms{{0.0, t.infinity_mass}};
    for (const auto& a : t.levy) atoms.push_back({std::exp(-a.x), a.w});
    return CATriplet<double>{t.q, t.d, DiscreteMeasure<double>(std::move(atoms), Support::half_open)};
}

template class DiscreteMeasure<double>;
template class DiscreteMeasure<Rational>;
template struct CATriplet<double>;
template struct CATriplet<Rational>;
template LaplaceMeasure to_exponential(const DiscreteMeasure<double>&);
template LaplaceMeasure to_exponential(const DiscreteMeasure<Rational>&);
template BernsteinTriplet to_exponential(const CATriplet<double>&);
template BernsteinTriplet to_exponential(const CATriplet<Rational>&);

}  // namespace cmtk
