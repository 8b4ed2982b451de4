#include "cmtk/funcops.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>

namespace cmtk {

namespace {

constexpr long double kLongRoundoff = std::numeric_limits<long double>::epsilon() / 2;
constexpr long double kPi = 3.141592653589793238462643383279502884L;

long double binom(Index n, Index i) {
    long double c = 1;
    for (Index j = 1; j <= i; ++j) c = c * static_cast<long double>(n - i + j) / static_cast<long double>(j);
    return std::round(c);
}

double rounding(long double magnitude, Index ops) {
    return static_cast<double>(static_cast<long double>(ops + 1) * kLongRoundoff * magnitude);
}

}  // namespace

struct FunctionHandle::Shared {
    Fn fn;
    double rel_error = 0.0;
    Concurrency concurrency = Concurrency::thread_safe;
    std::mutex mutex;
    std::atomic<long> calls{0};
    std::atomic<long> budget{0};
};

long default_budget() {
    if (const char* env = std::getenv("CMTK_MAX_EVALS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return 1000000;
}

FunctionHandle::FunctionHandle(std::string name, Fn fn, Domain domain, double rel_error, Concurrency concurrency)
    : name_(std::move(name)), domain_(domain), shared_(std::make_shared<Shared>()) {
    shared_->fn = std::move(fn);
    shared_->rel_error = rel_error;
    shared_->concurrency = concurrency;
    shared_->budget = default_budget();
    Shared* s = shared_.get();
    eval_ = [s](long double x) {
        if (s->calls.fetch_add(1) >= s->budget.load())
            throw BudgetExceeded("evaluation budget of " + std::to_string(s->budget.load()) + " calls exhausted");
        long double v;
        if (s->concurrency == Concurrency::single_threaded) {
            std::lock_guard<std::mutex> lock(s->mutex);
            v = s->fn(x);
        } else {
            v = s->fn(x);
        }
        if (!std::isfinite(v)) throw DomainError("non-finite function value");
        return Evaluation{v, static_cast<double>(s->rel_error * std::fabs(v))};
    };
}

FunctionHandle FunctionHandle::composite(std::string name, std::function<Evaluation(long double)> eval, Domain domain,
                                         const FunctionHandle& base) {
    FunctionHandle h;
    h.name_ = std::move(name);
    h.domain_ = domain;
    h.shared_ = base.shared_;
    h.eval_ = std::move(eval);
    return h;
}

Evaluation FunctionHandle::operator()(long double x) const {
    if (!(x >= 0)) throw DomainError("argument must be nonnegative");
    if (x == 0 && open_at_zero()) throw DomainError(name_ + " is not defined at 0");
    return eval_(x);
}

long FunctionHandle::calls() const { return shared_->calls.load(); }
long FunctionHandle::budget() const { return shared_->budget.load(); }
void FunctionHandle::set_budget(long budget) const { shared_->budget = budget; }
void FunctionHandle::reset_calls() const { shared_->calls = 0; }

FunctionHandle FunctionHandle::with_derivative(Fn d) const {
    FunctionHandle h = *this;
    h.derivative_ = std::move(d);
    return h;
}

long double sin_pi(long double x) {
    const long double r = std::fmod(x, 2.0L);  // exact
    const long double a = r < 0 ? r + 2 : r;
    if (a == std::floor(a)) return 0;
    if (a == 0.5L) return 1;
    if (a == 1.5L) return -1;
    if (a < 0.5L) return std::sin(kPi * a);
    if (a < 1.5L) return std::sin(kPi * (1 - a));
    return -std::sin(kPi * (2 - a));
}

FunctionHandle builtin(const std::string& name) {
    using L = long double;
    static const std::map<std::string, std::pair<FunctionHandle::Fn, FunctionHandle::Fn>> table = {
        {"exp-decay", {[](L x) { return std::exp(-x); }, [](L x) { return -std::exp(-x); }}},
        {"reciprocal", {[](L x) { return 1 / (1 + x); }, [](L x) { return -1 / ((1 + x) * (1 + x)); }}},
        {"sqrt", {[](L x) { return std::sqrt(x); }, [](L x) { return 1 / (2 * std::sqrt(x)); }}},
        {"log1p", {[](L x) { return std::log1p(x); }, [](L x) { return 1 / (1 + x); }}},
        {"one-minus-exp", {[](L x) { return -std::expm1(-x); }, [](L x) { return std::exp(-x); }}},
        {"abs-sin-pi", {[](L x) { return std::fabs(sin_pi(x)); }, nullptr}},
        {"identity", {[](L x) { return x; }, [](L) { return L(1); }}},
        {"square", {[](L x) { return x * x; }, [](L x) { return 2 * x; }}},
        {"exp-square", {[](L x) { return std::exp(x * x); }, [](L x) { return 2 * x * std::exp(x * x); }}},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown built-in function: " + name);
    FunctionHandle h(name, it->second.first);
    return it->second.second ? h.with_derivative(it->second.second) : h;
}

std::vector<std::string> builtin_names() {
    return {"exp-decay", "reciprocal",  "sqrt",   "log1p",     "one-minus-exp",
            "abs-sin-pi", "identity", "square", "exp-square"};
}

const char* to_string(Operator op) {
    switch (op) {
        case Operator::sigma: return "sigma";
        case Operator::tau: return "tau";
        case Operator::delta: return "delta";
        case Operator::theta: return "theta";
        case Operator::rho: return "rho";
    }
    return "?";
}

namespace {

// sum_i coef_i f(x_i) with propagated error
template <typename Points>
Evaluation combination(const FunctionHandle& f, Index n, Points point) {
    long double sum = 0, magnitude = 0;
    double err = 0.0;
    for (Index i = 0; i <= n; ++i) {
        const auto [coef, x] = point(i);
        const Evaluation e = f(x);
        sum += coef * e.value;
        magnitude += std::fabs(coef * e.value);
        err += static_cast<double>(std::fabs(coef)) * e.error;
    }
    return Evaluation{sum, err + rounding(magnitude, 2 * n + 2)};
}

Evaluation delta_power(const FunctionHandle& f, long double c, Index n, long double x) {
    return combination(f, n, [&](Index i) {
        const long double sign = ((n - i) % 2 == 0) ? 1 : -1;
        return std::pair<long double, long double>(sign * binom(n, i), x + static_cast<long double>(i) * c);
    });
}

}  // namespace

FunctionHandle apply_operator(const FunctionHandle& f, Operator op, double c, Index n) {
    if (!(c > 0) || !std::isfinite(c)) throw DomainError("operator parameter c must be positive");
    if (n < 0) throw DomainError("iterate must be nonnegative");
    if ((op == Operator::theta || op == Operator::rho) && f.open_at_zero())
        throw DomainError(std::string(to_string(op)) + " requires f defined at 0");
    if (op == Operator::rho && !(c < 1)) throw DomainError("rho requires c in (0, 1)");
    if (n == 0) return f;

    const long double cl = c;
    const std::string name = std::string(to_string(op)) + "_" + std::to_string(c) + "^" + std::to_string(n) + "(" +
                             f.name() + ")";
    switch (op) {
        case Operator::sigma: {
            const long double scale = std::pow(cl, static_cast<long double>(n));
            return FunctionHandle::composite(name, [f, scale](long double x) { return f(scale * x); }, f.domain(), f);
        }
        case Operator::tau: {
            const long double shift = cl * static_cast<long double>(n);
            return FunctionHandle::composite(name, [f, shift](long double x) { return f(x + shift); }, f.domain(), f);
        }
        case Operator::delta:
            return FunctionHandle::composite(name, [f, cl, n](long double x) { return delta_power(f, cl, n, x); },
                                             f.domain(), f);
        case Operator::theta:
            return FunctionHandle::composite(
                name,
                [f, cl, n](long double x) {
                    const Evaluation a = delta_power(f, cl, n, x);
                    const Evaluation b = delta_power(f, cl, n, 0);
                    const long double sign = (n % 2 == 0) ? 1 : -1;
                    const long double v = sign * (a.value - b.value);
                    return Evaluation{v, a.error + b.error + rounding(std::fabs(a.value) + std::fabs(b.value), 1)};
                },
                Domain::closed, f);
        case Operator::rho:
            return FunctionHandle::composite(
                name,
                [f, cl, n](long double x) {
                    return combination(f, n, [&](Index i) {
                        const long double sign = (i % 2 == 0) ? 1 : -1;
                        return std::pair<long double, long double>(sign * binom(n, i),
                                                                   std::pow(cl, static_cast<long double>(i)) * x);
                    });
                },
                Domain::closed, f);
    }
    throw std::invalid_argument("unknown operator");
}

std::vector<double> default_grid(Domain domain) {
    std::vector<double> g;
    if (domain == Domain::closed) g.push_back(0.0);
    const double lo = 1e-3, hi = 10.0;
    for (int i = 0; i < 64; ++i) g.push_back(lo * std::pow(hi / lo, i / 63.0));
    g.back() = hi;
    return g;
}

CmLimitReport cm_limit_decompose(const FunctionHandle& psi, double c, Index n_max, const std::vector<double>& grid,
                                 const LimitOptions& options) {
    if (!(c > 0) || n_max < 1) throw DomainError("need c > 0 and n_max >= 1");
    if (grid.empty()) throw DomainError("empty grid");
    psi.reset_calls();

    std::vector<Evaluation> values;
    for (double x : grid) values.push_back(psi(x));
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (values[j].value < -values[j].error) throw DomainError("not CM-like on grid");
        if (j > 0 && grid[j] > grid[j - 1] &&
            values[j].value > values[j - 1].value + values[j].error + values[j - 1].error)
            throw DomainError("not CM-like on grid");
    }

    CmLimitReport r;
    r.c = c;
    r.n_max = n_max;
    const long double H = static_cast<long double>(c) * static_cast<long double>(n_max);
    r.horizon = static_cast<double>(H);
    const long double inf = psi(H).value;
    r.psi_inf = static_cast<double>(inf);
    r.grid = grid;

    std::optional<long double> H_alt, inf_alt;
    if (options.c_alt) {
        if (!(*options.c_alt > 0)) throw DomainError("c_alt must be positive");
        const long double ca = *options.c_alt;
        const long double n_alt = std::max(1.0L, std::round(H / ca));
        H_alt = n_alt * ca;
        inf_alt = psi(*H_alt).value;
        r.c_alt = options.c_alt;
        r.psi_inf_alt = static_cast<double>(*inf_alt);
        r.c_difference = static_cast<double>(std::fabs(inf - *inf_alt));
    }

    for (std::size_t j = 0; j < grid.size(); ++j) {
        const long double far = psi(grid[j] + H).value;
        const long double lim = values[j].value - far;
        r.limit.push_back(static_cast<double>(lim));
        r.residual = std::max(r.residual, static_cast<double>(std::fabs(values[j].value - inf - lim)));
        if (H_alt) {
            const long double lim_alt = values[j].value - psi(grid[j] + *H_alt).value;
            r.c_difference = std::max(r.c_difference, static_cast<double>(std::fabs(lim - lim_alt)));
        }
    }
    const double top = *std::max_element(grid.begin(), grid.end());
    r.tail = static_cast<double>(psi(top).value - psi(top + static_cast<long double>(c)).value);
    r.c_independent = r.c_difference <= options.tol;
    return r;
}

BfLimitReport bf_limit_decompose(const FunctionHandle& phi, double c, Index n_max, const std::vector<double>& grid) {
    if (!(c > 0) || n_max < 1) throw DomainError("need c > 0 and n_max >= 1");
    if (phi.open_at_zero()) throw DomainError("Bernstein decomposition needs Phi(0)");
    if (grid.empty()) throw DomainError("empty grid");
    phi.reset_calls();

    std::vector<Evaluation> values;
    for (double x : grid) {
        values.push_back(phi(x));
        if (values.back().value < -values.back().error) throw DomainError("not Bernstein-like on grid");
    }

    BfLimitReport r;
    r.c = c;
    r.n_max = n_max;
    r.grid = grid;
    const long double cl = c;
    const long double H = cl * static_cast<long double>(n_max);
    const long double q = phi(0).value;
    const long double at_h = phi(H).value;
    const long double d = (phi(H + cl).value - at_h) / cl;
    r.q = static_cast<double>(q);
    r.d = static_cast<double>(d);
    r.d_cesaro = static_cast<double>((at_h - q) / H);

    auto theta_c = [&](long double y) { return phi(cl).value - q + phi(y).value - phi(y + cl).value; };
    const bool telescope = n_max <= 1000;
    double tele = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const long double lam = grid[j];
        const long double th = at_h - q + values[j].value - phi(lam + H).value;
        r.theta.push_back(static_cast<double>(th));
        r.residual = std::max(r.residual, static_cast<double>(std::fabs(values[j].value - q - d * lam - th)));
        if (telescope) {
            long double sum = 0;
            for (Index k = 0; k < n_max; ++k) {
                const long double kc = cl * static_cast<long double>(k);
                sum += theta_c(lam + kc) - theta_c(kc);
            }
            tele = std::max(tele, static_cast<double>(std::fabs(th - sum)));
        }
    }
    if (telescope) r.telescoping_error = tele;
    return r;
}

Sequence<double> lattice_samples(const FunctionHandle& f, double alpha, Index K) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw DomainError("lattice spacing must be positive");
    if (K < 0) throw InsufficientData("insufficient data");
    Eigen::VectorXd v(K + 1), e(K + 1);
    const Index shift = f.open_at_zero() ? 1 : 0;
    for (Index k = 0; k <= K; ++k) {
        // alpha * k is exact in long double for k < 2^11
        const Evaluation ev = f(static_cast<long double>(alpha) * static_cast<long double>(k + shift));
        v(k) = static_cast<double>(ev.value);
        e(k) = ev.error + kUnitRoundoff * std::abs(v(k));
    }
    return Sequence<double>(std::move(v), std::move(e), alpha);
}

LatticeReport lattice_check(const FunctionHandle& f, Kind kind, const std::vector<double>& alphas, Index depth,
                            const LatticeOptions& options) {
    LatticeReport r;
    r.kind = kind;
    f.reset_calls();
    bool any_fail = false, any_inconclusive = false;
    try {
        for (double alpha : alphas) {
            const Sequence<double> a = lattice_samples(f, alpha, depth);
            LatticeEntry entry;
            entry.alpha = alpha;
            entry.certificate = certify(a, kind, depth);
            if (entry.certificate.verdict == Verdict::pass) {
                const Index mdepth = std::max(depth, options.minimality_depth);
                if (kind == Kind::cm || mdepth >= 2) {
                    const Sequence<double> deep = mdepth == depth ? a : lattice_samples(f, alpha, mdepth);
                    entry.minimality = is_minimal(deep, kind, mdepth, options.minimality_tol);
                    r.all_minimal = r.all_minimal && entry.minimality->minimal;
                }
            } else {
                r.all_minimal = false;
            }
            any_fail = any_fail || entry.certificate.verdict == Verdict::fail;
            any_inconclusive = any_inconclusive || entry.certificate.verdict == Verdict::inconclusive;
            r.entries.push_back(std::move(entry));
        }
    } catch (const BudgetExceeded& e) {
        r.complete = false;
        r.message = e.what();
        any_inconclusive = true;
    }
    r.verdict = any_fail ? Verdict::fail : any_inconclusive ? Verdict::inconclusive : Verdict::pass;
    return r;
}

SubaffineReport subaffine_check(const FunctionHandle& phi, double c, double M, const std::vector<double>& grid) {
    if (!(c > 0)) throw DomainError("c must be positive");
    phi.reset_calls();
    SubaffineReport r;
    for (double x : grid) {
        const double diff = static_cast<double>(std::fabs(phi(static_cast<long double>(x) + c).value - phi(x).value));
        if (diff > r.supremum) {
            r.supremum = diff;
            r.argmax = x;
        }
    }
    r.pass = r.supremum <= M;
    return r;
}

}  // namespace cmtk
