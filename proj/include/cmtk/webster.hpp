#pragma once

// Webster's functional equation f(x+1) = g(x) f(x), f(1) = 1, for log-concave g, solved by the
// truncated infinite product
//   f(x) = e^{-gamma_g x} / g(x) * prod_{n<=N} g(n) / g(n+x) e^{a_n x},
//   a_n = g'(n) / g(n),  gamma_g = lim (sum_{j<=n} a_j - log g(n)),
// or, when g -> 1 at infinity, f(x) = 1/g(x) * prod_{n<=N} g(n) / g(n+x).

#include "cmtk/funcops.hpp"

#include <string>
#include <vector>

namespace cmtk {

enum class DerivativeMode { supplied, central_difference };
enum class Acceleration { none, aitken };

struct WebsterProblem {
    FunctionHandle g;
    DerivativeMode derivative = DerivativeMode::central_difference;
    Index N = 100000;
    Acceleration acceleration = Acceleration::aitken;
    bool unit_limit = false;  // g(x) -> 1 as x -> inf; selects the simpler product
};

struct WebsterSolution {
    double value = 0.0;          // accelerated when enabled, else the truncated product
    double raw_value = 0.0;      // truncated product at N
    double log_value = 0.0;
    double indicator = 0.0;      // |value(N) - value(N/2)| for the chosen method
    double gamma_raw = 0.0;      // sum_{j<=N} a_j - log g(N); 0 on the unit-limit path
    double gamma_accelerated = 0.0;
    double tail_ratio = 0.0;     // g(N + x) / g(N), should be near 1
    bool unit_limit_path = false;
    bool log_concave = true;     // midpoint spot check on the sample grid
    std::vector<std::string> warnings;
};

/// Throws DomainError for x <= 0, N < 8 or g <= 0 at a sampled point. A failed log-concavity
/// spot check is reported as a warning and the computation proceeds.
WebsterSolution solve_webster(const WebsterProblem& p, double x);

/// The solution as a handle on (0, inf); each call runs solve_webster.
FunctionHandle webster_function(const WebsterProblem& p);

/// max over the grid of |f(x+1) - g(x) f(x)| / (1 + |f(x+1)|). Grid points must be positive.
double verify_functional_equation(const FunctionHandle& f, const FunctionHandle& g, const std::vector<double>& grid);

/// Midpoint inequality log g((a+b)/2) >= (log g(a) + log g(b)) / 2 on consecutive triples of a
/// geometric grid over [lo, hi].
bool log_concave_spot_check(const FunctionHandle& g, double lo, double hi, Index points = 33);

/// g(x) = e^c.
FunctionHandle constant_function(double c);
/// g = exp(-h); log-concave when h is convex, e.g. completely monotone.
FunctionHandle exp_of_neg(const FunctionHandle& h);

/// Aitken delta-squared extrapolation of x0, x1, x2; returns x2 when the second difference vanishes.
long double aitken(long double x0, long double x1, long double x2);

}  // namespace cmtk
