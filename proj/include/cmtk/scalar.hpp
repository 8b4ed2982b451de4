#pragma once

// Scalar layer: exact rationals (GMP) and binary64, both usable as Eigen scalars.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cmtk {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class Mode { exact, floating };

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr Mode mode = Mode::floating;
};

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr Mode mode = Mode::exact;
};

template <typename Scalar>
inline constexpr bool is_exact_v = ScalarTraits<Scalar>::exact;

/// Unit roundoff of binary64.
inline constexpr double kUnitRoundoff = 0x1p-53;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// Exact conversion; every finite double is a dyadic rational.
Rational to_rational(double x);

/// Parses "p/q", integers, decimals and scientific notation exactly. Returns nullopt on failure.
std::optional<Rational> try_parse_rational(std::string_view text);

/// Throwing variant of try_parse_rational.
Rational parse_rational(std::string_view text);

/// "p/q" or "p" for integers.
std::string to_string(const Rational& x);

const char* to_string(Mode mode);

template <typename Scalar>
Scalar abs_value(const Scalar& x) {
    using std::abs;
    return abs(x);
}

/// A computed scalar in reporting form: binary64 approximation, the exact value when the
/// computation was exact, and an absolute error bound (zero when exact).
struct Number {
    double value = 0.0;
    std::optional<Rational> exact;
    double error = 0.0;
};

inline Number make_number(double v, double error = 0.0) { return Number{v, std::nullopt, error}; }
inline Number make_number(const Rational& v, double = 0.0) { return Number{to_double(v), v, 0.0}; }

/// Row n of Pascal's triangle, built by the additive recurrence in the scalar type.
template <typename Scalar>
Vector<Scalar> pascal_row(Index n) {
    Vector<Scalar> row = Vector<Scalar>::Zero(n + 1);
    row(0) = Scalar(1);
    for (Index m = 1; m <= n; ++m) {
        for (Index i = m; i >= 1; --i) row(i) = row(i) + row(i - 1);
    }
    return row;
}

/// Lower-triangular Pascal table: entry (n, i) = C(n, i) for i <= n.
template <typename Scalar>
Matrix<Scalar> pascal_triangle(Index n_max) {
    Matrix<Scalar> c = Matrix<Scalar>::Zero(n_max + 1, n_max + 1);
    for (Index n = 0; n <= n_max; ++n) {
        c(n, 0) = Scalar(1);
        for (Index i = 1; i <= n; ++i) c(n, i) = c(n - 1, i - 1) + (i <= n - 1 ? c(n - 1, i) : Scalar(0));
    }
    return c;
}

}  // namespace cmtk
