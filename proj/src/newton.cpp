#include "cmtk/newton.hpp"

#include <cmath>
#include <limits>

namespace cmtk {

void StirlingTable::extend(Index size) {
    for (Index n = this->size(); n < size; ++n) {
        std::vector<Integer> c(static_cast<std::size_t>(n + 1), Integer(0));
        std::vector<Integer> s(static_cast<std::size_t>(n + 1), Integer(0));
        if (n == 0) {
            c[0] = 1;
            s[0] = 1;
        } else {
            const auto& pc = first_.back();
            const auto& ps = second_.back();
            const Integer m(n - 1);
            for (Index k = 1; k <= n; ++k) {
                const auto uk = static_cast<std::size_t>(k);
                const Integer keep_c = k < n ? pc[uk] : Integer(0);
                const Integer keep_s = k < n ? ps[uk] : Integer(0);
                c[uk] = pc[uk - 1] + m * keep_c;
                s[uk] = ps[uk - 1] + Integer(k) * keep_s;
            }
        }
        first_.push_back(std::move(c));
        second_.push_back(std::move(s));
    }
}

const Integer& StirlingTable::first(Index n, Index k) const {
    if (n < 0 || n >= size()) throw InsufficientData("Stirling table too small");
    if (k < 0 || k > n) return zero_;
    return first_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

Integer StirlingTable::signed_first(Index n, Index k) const {
    const Integer& c = first(n, k);
    return ((n - k) % 2 == 0) ? c : Integer(-c);
}

const Integer& StirlingTable::second(Index n, Index k) const {
    if (n < 0 || n >= size()) throw InsufficientData("Stirling table too small");
    if (k < 0 || k > n) return zero_;
    return second_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

Integer StirlingTable::bell(Index n) const {
    Integer b(0);
    for (Index k = 0; k <= n; ++k) b += second(n, k);
    return b;
}

namespace {

template <typename Scalar>
Scalar from_integer(const Integer& v) {
    if constexpr (std::is_same_v<Scalar, Rational>)
        return Rational(v);
    else
        return v.convert_to<double>();
}

}  // namespace

template <typename Scalar>
Vector<Scalar> basis_convert(const Vector<Scalar>& coeffs, Basis from, StirlingTable& table) {
    const Index n = coeffs.size();
    table.extend(n);
    Vector<Scalar> out = Vector<Scalar>::Constant(n, Scalar(0));
    for (Index i = 0; i < n; ++i) {
        if (coeffs(i) == Scalar(0)) continue;
        for (Index k = 0; k <= i; ++k) {
            // z^i = sum_k S(i,k) z^(k);  z^(i) = sum_k s(i,k) z^k
            const Integer m = from == Basis::power ? table.second(i, k) : table.signed_first(i, k);
            if (m != 0) out(k) += coeffs(i) * from_integer<Scalar>(m);
        }
    }
    return out;
}

template <typename Scalar>
NewtonSeries<Scalar> series_from_samples(const Sequence<Scalar>& samples) {
    const Sequence<Scalar> e = euler_transform(samples);
    Vector<Scalar> c = e.values();
    Eigen::VectorXd err = e.errors();
    Scalar fact(1);
    for (Index k = 0; k < c.size(); ++k) {
        if (k > 0) fact *= Scalar(static_cast<double>(k));
        c(k) /= fact;
        if constexpr (std::is_same_v<Scalar, Rational>) {
            err(k) = 0.0;
        } else {
            err(k) = err(k) / fact + kUnitRoundoff * std::abs(c(k)) * static_cast<double>(k + 1);
        }
    }
    return NewtonSeries<Scalar>(std::move(c), std::move(err), samples);
}

namespace {

// Levin u-transform (beta = 1) of partial sums s_0..s_{k}, remainder estimates w_j = (j+1) t_j.
Complex levin_u(const std::vector<Complex>& s, const std::vector<Complex>& t, Index k) {
    Complex num(0), den(0);
    double binom = 1.0;
    for (Index j = 0; j <= k; ++j) {
        if (j > 0) binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
        const double scale = std::pow(static_cast<double>(j + 1) / static_cast<double>(k + 1), static_cast<double>(k - 1));
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const Complex w = static_cast<double>(j + 1) * t[static_cast<std::size_t>(j)];
        const Complex f = sign * binom * scale / w;
        num += f * s[static_cast<std::size_t>(j)];
        den += f;
    }
    return num / den;
}

}  // namespace

template <typename Scalar>
SeriesEvaluation eval_series(const NewtonSeries<Scalar>& s, Complex z, Index n_terms) {
    if (n_terms < 1 || n_terms > s.size()) throw InsufficientData("insufficient data");
    SeriesEvaluation out;
    out.n_terms = n_terms;
    out.outside_half_plane = z.real() <= 0.0;

    std::vector<Complex> terms, partial;
    Complex ff(1.0), sum(0.0);
    Index growth = 0;
    double prev = std::numeric_limits<double>::infinity();
    bool terminated = false;
    for (Index k = 0; k < n_terms; ++k) {
        if (k > 0) ff *= z - static_cast<double>(k - 1);
        const Complex t = to_double(s.coeffs()(k)) * ff;
        sum += t;
        terms.push_back(t);
        partial.push_back(sum);
        const double mag = std::abs(t);
        if (mag == 0.0) terminated = true;
        growth = (mag > prev && prev > 0.0) ? growth + 1 : 0;
        if (growth >= 5) out.diverging = true;
        prev = mag;
    }
    out.partial_sum = sum;
    for (Index k = std::max<Index>(0, n_terms - 3); k < n_terms; ++k)
        out.tail_estimate += std::abs(terms[static_cast<std::size_t>(k)]);

    out.accelerated = sum;
    if (terminated || n_terms < 4) return out;

    const Index max_order = std::min<Index>(n_terms - 1, 30);
    Complex last = levin_u(partial, terms, 1);
    double best = std::numeric_limits<double>::infinity();
    for (Index k = 2; k <= max_order; ++k) {
        const Complex cur = levin_u(partial, terms, k);
        const double change = std::abs(cur - last);
        if (std::isfinite(change) && change < best) {
            best = change;
            out.accelerated = cur;
            out.levin_order = k;
        }
        last = cur;
    }
    out.acceleration_change = out.levin_order > 0 ? best : 0.0;
    return out;
}

Rational eval_series_exact(const NewtonSeries<Rational>& s, const Rational& z, Index n_terms) {
    if (n_terms < 1 || n_terms > s.size()) throw InsufficientData("insufficient data");
    Rational ff(1), sum(0);
    for (Index k = 0; k < n_terms; ++k) {
        if (k > 0) ff *= z - Rational(k - 1);
        if (ff == 0) break;
        sum += s.coeffs()(k) * ff;
    }
    return sum;
}

ExponentialTypeReport exponential_type_check(const std::vector<double>& x, const std::vector<double>& f, double C,
                                             double D) {
    if (x.size() != f.size()) throw std::invalid_argument("sample length mismatch");
    if (!(C > 0) || !(D >= 0)) throw DomainError("exponential type constants must satisfy C > 0, D >= 0");
    ExponentialTypeReport r;
    r.worst_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::abs(f[i]);
        const double excess = (a == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(a)) - std::log(C) -
                              D * std::abs(x[i]);
        if (excess > r.worst_excess) {
            r.worst_excess = excess;
            r.worst = static_cast<Index>(i);
        }
    }
    r.pass = r.worst_excess <= 0.0;
    return r;
}

template NewtonSeries<double> series_from_samples(const Sequence<double>&);
template NewtonSeries<Rational> series_from_samples(const Sequence<Rational>&);
template SeriesEvaluation eval_series(const NewtonSeries<double>&, Complex, Index);
template SeriesEvaluation eval_series(const NewtonSeries<Rational>&, Complex, Index);
template Vector<Rational> basis_convert(const Vector<Rational>&, Basis, StirlingTable&);
template Vector<double> basis_convert(const Vector<double>&, Basis, StirlingTable&);

}  // namespace cmtk
