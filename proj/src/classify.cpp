#include "cmtk/classify.hpp"

namespace cmtk {

const char* to_string(Kind kind) { return kind == Kind::cm ? "cm" : "ca"; }

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(Degeneracy d) {
    switch (d) {
        case Degeneracy::strict: return "strict";
        case Degeneracy::constant_tail: return "constant-tail";
        case Degeneracy::affine_tail: return "affine-tail";
    }
    return "?";
}

namespace {

std::string describe(const Certificate& c) {
    std::string s = std::string("sequence is not ") + (c.kind == Kind::cm ? "CM" : "CA") + " to depth " +
                    std::to_string(c.depth);
    if (c.witness)
        s += ": violation at (n=" + std::to_string(c.witness->n) + ", k=" + std::to_string(c.witness->k) + ")";
    return s;
}

template <typename Scalar>
Number entry(const DifferenceTable<Scalar>& t, Index n, Index k, bool negate) {
    Scalar v = t(n, k);
    if (negate) v = -v;
    return make_number(v, t.error(n, k));
}

template <typename Scalar>
void require_certified(const Sequence<Scalar>& a, Kind kind, Index depth) {
    Certificate c = certify(a, kind, depth);
    if (c.verdict == Verdict::fail) throw CertificationFailed(std::move(c));
}

}  // namespace

CertificationFailed::CertificationFailed(Certificate certificate)
    : Error(describe(certificate)), certificate_(std::move(certificate)) {}

template <typename Scalar>
Certificate certify(const DifferenceTable<Scalar>& table, Kind kind) {
    Certificate c;
    c.kind = kind;
    c.depth = table.depth();
    c.max_index = table.max_index();
    c.mode = ScalarTraits<Scalar>::mode;

    const Index first_row = kind == Kind::cm ? 0 : 1;
    const Sign bad = kind == Kind::cm ? Sign::negative : Sign::positive;
    std::optional<Scalar> min_abs, origin_abs;
    double min_err = 0.0, origin_err = 0.0;

    for (Index n = first_row; n <= table.depth(); ++n) {
        for (Index k = 0; table.contains(n, k); ++k) {
            ++c.checked;
            const Sign s = table.sign(n, k);
            if (s == Sign::undecided) ++c.undecided;
            if (s == bad && !c.witness) c.witness = Witness{n, k, make_number(table(n, k), table.error(n, k))};
            const Scalar mag = abs_value(table(n, k));
            if (!min_abs || mag < *min_abs) {
                min_abs = mag;
                min_err = table.error(n, k);
            }
            if (k == 0 && (!origin_abs || mag < *origin_abs)) {
                origin_abs = mag;
                origin_err = table.error(n, k);
            }
        }
    }
    if (min_abs) c.min_margin = make_number(*min_abs, min_err);
    if (origin_abs) c.origin_margin = make_number(*origin_abs, origin_err);

    if (c.witness)
        c.verdict = Verdict::fail;
    else if (c.undecided > 0)
        c.verdict = Verdict::inconclusive;
    else
        c.verdict = Verdict::pass;
    return c;
}

template <typename Scalar>
Certificate certify(const Sequence<Scalar>& a, Kind kind, Index depth) {
    return certify(difference_table(a, depth), kind);
}

template <typename Scalar>
AtomEstimate atom_at_zero(const Sequence<Scalar>& a, Kind kind, Index depth) {
    if (kind == Kind::ca && depth < 2) throw InsufficientData("depth too small");
    const DifferenceTable<Scalar> table = difference_table(a, depth);
    Certificate c = certify(table, kind);
    if (c.verdict == Verdict::fail) throw CertificationFailed(std::move(c));

    AtomEstimate est;
    est.kind = kind;
    est.first_n = kind == Kind::cm ? 0 : 2;
    for (Index n = est.first_n; n <= depth; ++n) est.trail.push_back(entry(table, n, 0, kind == Kind::ca));
    est.estimate = est.trail.back();

    for (std::size_t i = 0; i < est.trail.size(); ++i) {
        const Number& t = est.trail[i];
        const bool negative = t.exact ? *t.exact < 0 : t.value < -t.error;
        if (negative) est.monotone_ok = false;
        if (i == 0) continue;
        const Number& prev = est.trail[i - 1];
        const bool increases = t.exact && prev.exact ? *t.exact > *prev.exact
                                                     : t.value - prev.value > t.error + prev.error;
        if (increases) est.monotone_ok = false;
    }
    return est;
}

double default_minimality_tol(const AtomEstimate& atom) {
    return std::max(1e-6, 10.0 * atom.estimate.error);
}

template <typename Scalar>
MinimalityReport is_minimal(const Sequence<Scalar>& a, Kind kind, Index depth, std::optional<double> tol) {
    MinimalityReport r;
    r.atom = atom_at_zero(a, kind, depth);
    r.tol = tol.value_or(default_minimality_tol(r.atom));
    const Number& e = r.atom.estimate;
    const bool small = e.exact ? *e.exact <= to_rational(r.tol) : e.value <= r.tol;
    r.minimal = small && r.atom.monotone_ok;
    return r;
}

template <typename Scalar>
DegeneracyReport degenerate_classify(const Sequence<Scalar>& a, Kind kind, Index depth) {
    require_certified(a, kind, depth);
    const DifferenceTable<Scalar> table = difference_table(a, depth);
    DegeneracyReport r;
    for (Index n = 1; n <= depth && !r.zero_entry; ++n) {
        for (Index k = 0; table.contains(n, k); ++k) {
            const Sign s = table.sign(n, k);
            if (s == Sign::zero || s == Sign::undecided) {
                r.zero_entry = std::make_pair(n, k);
                break;
            }
        }
    }

    const Index K = a.max_index();
    const Eigen::VectorXd& err = a.errors();
    bool tail_shape = true;
    if (kind == Kind::cm) {
        for (Index k = 2; k <= K && tail_shape; ++k) {
            const double tol = err(k) + err(1);
            tail_shape = tol > 0 ? std::abs(to_double(Scalar(a[k] - a[1]))) <= tol : a[k] == a[1];
        }
    } else {
        for (Index k = 3; k <= K && tail_shape; ++k) {
            const Scalar predicted = a[1] + Scalar(k - 1) * (a[2] - a[1]);
            const double tol = err(k) + static_cast<double>(k) * (err(1) + err(2));
            tail_shape = tol > 0 ? std::abs(to_double(Scalar(a[k] - predicted))) <= tol : a[k] == predicted;
        }
    }

    const Degeneracy degenerate = kind == Kind::cm ? Degeneracy::constant_tail : Degeneracy::affine_tail;
    if (r.zero_entry || tail_shape) r.degeneracy = degenerate;
    r.tail_consistent = !r.zero_entry || tail_shape;
    return r;
}

template Certificate certify(const DifferenceTable<double>&, Kind);
template Certificate certify(const DifferenceTable<Rational>&, Kind);
template Certificate certify(const Sequence<double>&, Kind, Index);
template Certificate certify(const Sequence<Rational>&, Kind, Index);
template AtomEstimate atom_at_zero(const Sequence<double>&, Kind, Index);
template AtomEstimate atom_at_zero(const Sequence<Rational>&, Kind, Index);
template MinimalityReport is_minimal(const Sequence<double>&, Kind, Index, std::optional<double>);
template MinimalityReport is_minimal(const Sequence<Rational>&, Kind, Index, std::optional<double>);
template DegeneracyReport degenerate_classify(const Sequence<double>&, Kind, Index);
template DegeneracyReport degenerate_classify(const Sequence<Rational>&, Kind, Index);

}  // namespace cmtk
