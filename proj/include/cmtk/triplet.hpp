#pragma once

// Representing measures: discrete measures on [0,1] (moment form) and their images on [0,inf]
// under x = -ln u (Laplace form), plus Bernstein triplets.

#include "cmtk/scalar.hpp"

#include <vector>

namespace cmtk {

template <typename Scalar>
struct MeasureAtom {
    Scalar u;
    Scalar w;
};

/// [0,1] for CM representing measures; [0,1) for the measure of a CA triplet.
enum class Support { closed, half_open };

/// Finite nonnegative measure on [0,1] or [0,1). Atoms are sorted by u, merged, and the
/// endpoint atoms (u = 0, and u = 1 on a closed support) are always present, possibly with weight 0.
template <typename Scalar>
class DiscreteMeasure {
public:
    explicit DiscreteMeasure(std::vector<MeasureAtom<Scalar>> atoms = {}, Support support = Support::closed);

    const std::vector<MeasureAtom<Scalar>>& atoms() const { return atoms_; }
    Support support() const { return support_; }
    const Scalar& weight_at_zero() const { return atoms_.front().w; }
    /// Weight at u = 1; zero on a half-open support.
    Scalar weight_at_one() const;
    Scalar total_mass() const;

    /// sum_j w_j u_j^k with 0^0 = 1.
    Scalar moment(Index k) const;

private:
    std::vector<MeasureAtom<Scalar>> atoms_;
    Support support_;
};

/// a_k = q + d k + sum_j w_j (1 - u_j^k), with the measure on [0,1).
template <typename Scalar>
struct CATriplet {
    Scalar q{0};
    Scalar d{0};
    DiscreteMeasure<Scalar> measure{{}, Support::half_open};

    Scalar value_at(Index k) const;
};

struct LaplaceAtom {
    double x;
    double w;
};

/// Measure on [0, inf]: finite atoms plus a separate mass at x = inf.
struct LaplaceMeasure {
    std::vector<LaplaceAtom> atoms;
    double infinity_mass = 0.0;
};

/// q + d lambda + sum_j w_j (1 - exp(-lambda x_j)) + infinity_mass * [lambda > 0].
struct BernsteinTriplet {
    double q = 0.0;
    double d = 0.0;
    std::vector<LaplaceAtom> levy;
    double infinity_mass = 0.0;

    /// Throws DomainError unless q, d, weights >= 0, x_j > 0 and every value is finite.
    void validate() const;
    /// sum_j w_j min(1, x_j)
    double levy_integral() const;
};

/// sum_j w_j exp(-lambda x_j), plus the infinity mass at lambda = 0 only.
double laplace_value(const LaplaceMeasure& m, double lambda);
double bernstein_value(const BernsteinTriplet& t, double lambda);

template <typename Scalar>
LaplaceMeasure to_exponential(const DiscreteMeasure<Scalar>& m);
template <typename Scalar>
BernsteinTriplet to_exponential(const CATriplet<Scalar>& t);

/// Inverse map u = exp(-x); the infinity mass returns to u = 0.
DiscreteMeasure<double> to_moment_form(const LaplaceMeasure& m);
CATriplet<double> to_moment_form(const BernsteinTriplet& t);

extern template class DiscreteMeasure<double>;
extern template class DiscreteMeasure<Rational>;
extern template struct CATriplet<double>;
extern template struct CATriplet<Rational>;
extern template LaplaceMeasure to_exponential(const DiscreteMeasure<double>&);
extern template LaplaceMeasure to_exponential(const DiscreteMeasure<Rational>&);
extern template BernsteinTriplet to_exponential(const CATriplet<double>&);
extern template BernsteinTriplet to_exponential(const CATriplet<Rational>&);

}  // namespace cmtk
