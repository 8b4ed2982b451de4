#pragma once

// Black-box function handles on [0, inf), the difference operators sigma, tau, Delta, theta, rho
// with their iterates, the limit decompositions of CM and Bernstein functions, and lattice checks.

#include "cmtk/classify.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cmtk {

/// A value together with an absolute bound on its distance from the exact function value.
struct Evaluation {
    long double value = 0;
    double error = 0.0;
};

enum class Domain { closed, open_at_zero };
enum class Concurrency { thread_safe, single_threaded };

/// Deterministic callable on [0, inf) or (0, inf). Copies share the evaluation counter and budget.
class FunctionHandle {
public:
    using Fn = std::function<long double(long double)>;

    /// rel_error bounds |computed - exact| / |exact| for one call of fn.
    FunctionHandle(std::string name, Fn fn, Domain domain = Domain::closed, double rel_error = 0x1p-58,
                   Concurrency concurrency = Concurrency::thread_safe);

    /// Throws DomainError outside the domain and BudgetExceeded once the budget is spent.
    Evaluation operator()(long double x) const;
    double value(double x) const { return static_cast<double>((*this)(x).value); }

    const std::string& name() const { return name_; }
    Domain domain() const { return domain_; }
    bool open_at_zero() const { return domain_ == Domain::open_at_zero; }

    /// Calls of the underlying callables since the last reset.
    long calls() const;
    long budget() const;
    void set_budget(long budget) const;
    void reset_calls() const;

    const std::optional<Fn>& derivative() const { return derivative_; }
    FunctionHandle with_derivative(Fn d) const;

    /// Handle built from other handles; counting and locking happen in the leaves.
    static FunctionHandle composite(std::string name, std::function<Evaluation(long double)> eval, Domain domain,
                                    const FunctionHandle& base);

private:
    struct Shared;
    FunctionHandle() = default;

    std::string name_;
    Domain domain_ = Domain::closed;
    std::shared_ptr<Shared> shared_;
    std::function<Evaluation(long double)> eval_;
    std::optional<Fn> derivative_;
};

/// Budget for new handles: CMTK_MAX_EVALS if set, else 10^6.
long default_budget();

/// Named built-ins: exp-decay, reciprocal, sqrt, log1p, one-minus-exp, abs-sin-pi, identity, square, exp-square.
FunctionHandle builtin(const std::string& name);
std::vector<std::string> builtin_names();

/// sin(pi x), exactly zero at integers.
long double sin_pi(long double x);

enum class Operator { sigma, tau, delta, theta, rho };
const char* to_string(Operator op);

/// n-th iterate of op_c applied to f:
///   sigma_c^n f(x) = f(c^n x), tau_c^n f(x) = f(x + n c),
///   Delta_c^n f(x) = sum_i (-1)^{n-i} C(n,i) f(x + i c),
///   theta_c^n f = (-1)^n (Delta_c^n f - Delta_c^n f(0)),
///   rho_c^n f(x) = sum_i (-1)^i C(n,i) f(c^i x).
/// theta and rho need f at 0; rho needs c in (0,1).
FunctionHandle apply_operator(const FunctionHandle& f, Operator op, double c, Index n = 1);

/// 64 points geometric on [1e-3, 10], preceded by 0 unless open at zero.
std::vector<double> default_grid(Domain domain = Domain::closed);

struct CmLimitReport {
    double c = 0.0;
    Index n_max = 0;
    double horizon = 0.0;              // n_max c
    double psi_inf = 0.0;              // Psi(n_max c)
    std::vector<double> grid;
    std::vector<double> limit;         // (-Delta_{n_max c}) Psi on the grid
    double residual = 0.0;             // max |Psi - psi_inf - limit| on the grid
    double tail = 0.0;                 // (-Delta_c) Psi at the largest grid point; -> 0 means no mass at 0
    std::optional<double> c_alt;
    double psi_inf_alt = 0.0;          // limit at c_alt with the nearest matching horizon
    double c_difference = 0.0;         // max difference of the two decompositions on the grid
    bool c_independent = true;
};

struct LimitOptions {
    std::optional<double> c_alt = 0.7071067811865476;  // second c for the independence spot check
    double tol = 1e-12;
};

/// Psi = Psi_inf + lim (-Delta_{nc}) Psi. Throws DomainError("not CM-like on grid") unless Psi is
/// nonnegative and nonincreasing on the grid.
CmLimitReport cm_limit_decompose(const FunctionHandle& psi, double c, Index n_max,
                                 const std::vector<double>& grid, const LimitOptions& options = {});

struct BfLimitReport {
    double c = 0.0;
    Index n_max = 0;
    double q = 0.0;                    // Phi(0)
    double d = 0.0;                    // (Phi((n+1)c) - Phi(nc)) / c
    double d_cesaro = 0.0;             // Phi(nc) / (nc)
    std::vector<double> grid;
    std::vector<double> theta;         // theta_{nc} Phi on the grid
    double residual = 0.0;             // max |Phi - q - d lambda - theta|
    // max |theta_{nc} Phi - sum_k [theta_c Phi(lambda + kc) - theta_c Phi(kc)]|; skipped for n_max > 1000
    std::optional<double> telescoping_error;
};

/// Phi = q + d lambda + lim theta_{nc} Phi. Throws DomainError when Phi is negative on the grid or open at zero.
BfLimitReport bf_limit_decompose(const FunctionHandle& phi, double c, Index n_max, const std::vector<double>& grid);

struct LatticeEntry {
    double alpha = 0.0;
    Certificate certificate;
    std::optional<MinimalityReport> minimality;
};

struct LatticeReport {
    Kind kind = Kind::cm;
    std::vector<LatticeEntry> entries;
    Verdict verdict = Verdict::pass;   // pass iff every lattice passes
    bool all_minimal = true;
    bool complete = true;              // false when the budget ran out
    std::string message;
};

struct LatticeOptions {
    std::optional<double> minimality_tol;  // classify default when empty
    Index minimality_depth = 60;           // trail length for is_minimal; at least depth
};

/// Certifies (f(alpha k))_{k <= depth} for each alpha, or (f(alpha (k+1))) when f is open at zero.
/// Passing lattices are sampled further and checked for minimality at max(depth, minimality_depth).
LatticeReport lattice_check(const FunctionHandle& f, Kind kind, const std::vector<double>& alphas, Index depth,
                            const LatticeOptions& options = {});

/// Samples (f(alpha k))_{k <= K} with error bounds, shifted by one step when f is open at zero.
Sequence<double> lattice_samples(const FunctionHandle& f, double alpha, Index K);

struct SubaffineReport {
    double supremum = 0.0;   // max over the grid of |Phi(x + c) - Phi(x)|
    double argmax = 0.0;
    bool pass = true;        // supremum <= M
};

SubaffineReport subaffine_check(const FunctionHandle& phi, double c, double M, const std::vector<double>& grid);

}  // namespace cmtk
