#pragma once

// Finite-depth certification of completely monotone (CM) and completely alternating (CA)
// sequences, atom-at-zero estimation, minimality and the degenerate dichotomy.

#include "cmtk/seqcore.hpp"

#include <optional>
#include <vector>

namespace cmtk {

enum class Kind { cm, ca };
enum class Verdict { pass, fail, inconclusive };

const char* to_string(Kind kind);
const char* to_string(Verdict verdict);

struct Witness {
    Index n = 0;
    Index k = 0;
    Number value;
};

/// Result of checking the sign condition on D(n, k) for every admissible entry up to `depth`.
/// CM: D >= 0 for n >= 0. CA: D <= 0 for n >= 1.
struct Certificate {
    Kind kind = Kind::cm;
    Index depth = 0;
    Index max_index = 0;
    Verdict verdict = Verdict::pass;
    std::optional<Witness> witness;  // first strict violation, n ascending then k ascending
    Number min_margin;                // smallest |D(n, k)| over all checked entries
    Number origin_margin;             // smallest |D(n, 0)| over checked rows
    Index checked = 0;
    Index undecided = 0;
    Mode mode = Mode::exact;
};

/// Raised when an operation requires a sequence that did not certify.
class CertificationFailed : public Error {
public:
    explicit CertificationFailed(Certificate certificate);
    const Certificate& certificate() const noexcept { return certificate_; }

private:
    Certificate certificate_;
};

template <typename Scalar>
Certificate certify(const DifferenceTable<Scalar>& table, Kind kind);

template <typename Scalar>
Certificate certify(const Sequence<Scalar>& a, Kind kind, Index depth);

template <typename Scalar>
Certificate certify(const Sequence<Scalar>& a, Kind kind) {
    return certify(a, kind, default_depth(a));
}

struct AtomEstimate {
    Kind kind = Kind::cm;
    Index first_n = 0;          // row of trail[0]: 0 (CM) or 2 (CA)
    std::vector<Number> trail;  // D(n, 0) for CM, -D(n, 0) for CA
    Number estimate;            // trail.back()
    bool monotone_ok = true;    // nonincreasing and nonnegative within error bounds
};

/// Trail of the atom at u = 0. Throws CertificationFailed when certify fails.
template <typename Scalar>
AtomEstimate atom_at_zero(const Sequence<Scalar>& a, Kind kind, Index depth);

struct MinimalityReport {
    bool minimal = false;
    double tol = 0.0;
    AtomEstimate atom;
};

/// Default tolerance: 1e-6 exact, max(1e-6, 10 * error of the estimate) in floating point.
double default_minimality_tol(const AtomEstimate& atom);

template <typename Scalar>
MinimalityReport is_minimal(const Sequence<Scalar>& a, Kind kind, Index depth, std::optional<double> tol = std::nullopt);

enum class Degeneracy { strict, constant_tail, affine_tail };

const char* to_string(Degeneracy d);

struct DegeneracyReport {
    Degeneracy degeneracy = Degeneracy::strict;
    std::optional<std::pair<Index, Index>> zero_entry;  // first D(n, k) = 0 with n >= 1
    bool tail_consistent = true;  // the zero entry, if any, agrees with the observed tail shape
};

template <typename Scalar>
DegeneracyReport degenerate_classify(const Sequence<Scalar>& a, Kind kind, Index depth);

extern template Certificate certify(const DifferenceTable<double>&, Kind);
extern template Certificate certify(const DifferenceTable<Rational>&, Kind);
extern template Certificate certify(const Sequence<double>&, Kind, Index);
extern template Certificate certify(const Sequence<Rational>&, Kind, Index);
extern template AtomEstimate atom_at_zero(const Sequence<double>&, Kind, Index);
extern template AtomEstimate atom_at_zero(const Sequence<Rational>&, Kind, Index);
extern template MinimalityReport is_minimal(const Sequence<double>&, Kind, Index, std::optional<double>);
extern template MinimalityReport is_minimal(const Sequence<Rational>&, Kind, Index, std::optional<double>);
extern template DegeneracyReport degenerate_classify(const Sequence<double>&, Kind, Index);
extern template DegeneracyReport degenerate_classify(const Sequence<Rational>&, Kind, Index);

}  // namespace cmtk
