#include "cmtk/webster.hpp"

#include <cmath>

namespace cmtk {

namespace {

struct Neumaier {
    long double sum = 0, comp = 0;
    void add(long double v) {
        const long double t = sum + v;
        comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    long double value() const { return sum + comp; }
};

long double positive(const FunctionHandle& g, long double x) {
    const long double v = g(x).value;
    if (!(v > 0)) throw DomainError("g must be positive on sampled points");
    return v;
}

long double log_derivative(const WebsterProblem& p, long double n, long double gn) {
    if (p.derivative == DerivativeMode::supplied) return (*p.g.derivative())(n) / gn;
    // central differences with one Richardson step
    const long double h = std::max(1e-6L, 1e-8L * n);
    auto central = [&](long double s) { return (p.g(n + s).value - p.g(n - s).value) / (2 * s); };
    return (4 * central(h / 2) - central(h)) / 3 / gn;
}

}  // namespace

long double aitken(long double x0, long double x1, long double x2) {
    const long double d1 = x2 - x1, d0 = x1 - x0;
    const long double denom = d1 - d0;
    if (denom == 0) return x2;
    return x2 - d1 * d1 / denom;
}

bool log_concave_spot_check(const FunctionHandle& g, double lo, double hi, Index points) {
    std::vector<long double> t;
    for (Index i = 0; i < points; ++i)
        t.push_back(static_cast<long double>(lo) *
                    std::pow(static_cast<long double>(hi) / lo, static_cast<long double>(i) / (points - 1)));
    for (std::size_t i = 0; i + 2 < t.size(); ++i) {
        const long double a = std::log(positive(g, t[i])), b = std::log(positive(g, t[i + 2]));
        const long double m = std::log(positive(g, (t[i] + t[i + 2]) / 2));
        const long double slack = 1e-12L * (std::fabs(a) + std::fabs(b)) + 1e-15L;
        if (m < (a + b) / 2 - slack) return false;
    }
    return true;
}

WebsterSolution solve_webster(const WebsterProblem& p, double x) {
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("Webster solution needs x > 0");
    if (p.N < 8) throw DomainError("product truncation N must be at least 8");
    if (!p.unit_limit && p.derivative == DerivativeMode::supplied && !p.g.derivative())
        throw std::invalid_argument("derivative mode 'supplied' needs a handle with a derivative");
    p.g.reset_calls();

    WebsterSolution s;
    s.unit_limit_path = p.unit_limit;
    const long double xl = x;
    const long double log_gx = std::log(positive(p.g, xl));

    // log f_M at M = N/8, N/4, N/2, N
    const Index marks[4] = {p.N / 8, p.N / 4, p.N / 2, p.N};
    long double logf[4] = {0, 0, 0, 0}, gammas[4] = {0, 0, 0, 0};
    Neumaier a_sum, prod;
    int next = 0;
    for (Index n = 1; n <= p.N; ++n) {
        const long double nl = static_cast<long double>(n);
        const long double gn = positive(p.g, nl);
        const long double log_gn = std::log(gn);
        prod.add(log_gn - std::log(positive(p.g, nl + xl)));
        if (!p.unit_limit) {
            const long double a = log_derivative(p, nl, gn);
            a_sum.add(a);
            prod.add(a * xl);
        }
        while (next < 4 && marks[next] == n) {
            gammas[next] = p.unit_limit ? 0 : a_sum.value() - log_gn;
            logf[next] = -gammas[next] * xl - log_gx + prod.value();
            ++next;
        }
    }

    s.gamma_raw = static_cast<double>(gammas[3]);
    s.gamma_accelerated = p.unit_limit ? 0.0 : static_cast<double>(aitken(gammas[1], gammas[2], gammas[3]));
    s.raw_value = static_cast<double>(std::exp(logf[3]));
    if (p.acceleration == Acceleration::aitken) {
        const long double cur = aitken(logf[1], logf[2], logf[3]);
        const long double prev = aitken(logf[0], logf[1], logf[2]);
        s.log_value = static_cast<double>(cur);
        s.value = static_cast<double>(std::exp(cur));
        s.indicator = static_cast<double>(std::fabs(std::exp(cur) - std::exp(prev)));
    } else {
        s.log_value = static_cast<double>(logf[3]);
        s.value = s.raw_value;
        s.indicator = static_cast<double>(std::fabs(std::exp(logf[3]) - std::exp(logf[2])));
    }

    const long double big = static_cast<long double>(p.N);
    s.tail_ratio = static_cast<double>(positive(p.g, big + xl) / positive(p.g, big));
    s.log_concave = log_concave_spot_check(p.g, std::min(0.5, x), static_cast<double>(big + xl));
    if (!s.log_concave) s.warnings.push_back("g failed the log-concavity spot check; theorem hypotheses unmet");
    if (p.unit_limit && std::fabs(positive(p.g, big) - 1) > 1e-3L)
        s.warnings.push_back("unit limit declared but g(N) is not close to 1");
    return s;
}

FunctionHandle webster_function(const WebsterProblem& p) {
    return FunctionHandle(
        "webster(" + p.g.name() + ")", [p](long double x) { return static_cast<long double>(solve_webster(p, x).value); },
        Domain::open_at_zero, 0.0);
}

double verify_functional_equation(const FunctionHandle& f, const FunctionHandle& g, const std::vector<double>& grid) {
    double worst = 0.0;
    for (double x : grid) {
        if (!(x > 0)) throw DomainError("grid must lie in (0, inf)");
        const long double next = f(static_cast<long double>(x) + 1).value;
        const long double rhs = g(x).value * f(x).value;
        worst = std::max(worst, static_cast<double>(std::fabs(next - rhs) / (1 + std::fabs(next))));
    }
    return worst;
}

FunctionHandle constant_function(double c) {
    const long double v = std::exp(static_cast<long double>(c));
    return FunctionHandle("constant(" + std::to_string(c) + ")", [v](long double) { return v; })
        .with_derivative([](long double) { return 0.0L; });
}

FunctionHandle exp_of_neg(const FunctionHandle& h) {
    FunctionHandle g = FunctionHandle::composite(
        "exp-of-neg(" + h.name() + ")",
        [h](long double x) {
            const Evaluation e = h(x);
            const long double v = std::exp(-e.value);
            return Evaluation{v, static_cast<double>(v * (e.error + 0x1p-62L))};
        },
        h.domain(), h);
    if (h.derivative()) {
        auto dh = *h.derivative();
        return g.with_derivative([h, dh](long double x) { return -dh(x) * std::exp(-h(x).value); });
    }
    return g;
}

}  // namespace cmtk
