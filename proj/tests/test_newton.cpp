#include "cmtk/newton.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace cmtk;
using testing_support::exact_seq;
using testing_support::float_seq;

namespace {

// S(n,k) = (1/k!) sum_j (-1)^j C(k,j) (k-j)^n
Rational stirling2_oracle(long n, long k) {
    Rational s(0);
    for (long j = 0; j <= k; ++j) {
        Rational t = oracle::binomial(k, j) * oracle::pow(Rational(k - j), n);
        s = (j % 2 == 0) ? s + t : s - t;
    }
    return s / oracle::factorial(k);
}

// coefficients of the rising product z(z+1)...(z+n-1) are the unsigned c(n,k)
std::vector<Rational> rising_coeffs(long n) {
    std::vector<Rational> p{Rational(1)};
    for (long i = 0; i < n; ++i) {
        std::vector<Rational> q(p.size() + 1, Rational(0));
        for (std::size_t j = 0; j < p.size(); ++j) {
            q[j + 1] += p[j];
            q[j] += Rational(i) * p[j];
        }
        p = q;
    }
    return p;
}

// Bell triangle
std::vector<Rational> bell_oracle(long n) {
    std::vector<Rational> bells{Rational(1)};
    std::vector<Rational> row{Rational(1)};
    for (long i = 1; i <= n; ++i) {
        std::vector<Rational> next{row.back()};
        for (const auto& r : row) next.push_back(next.back() + r);
        bells.push_back(next.front());
        row = next;
    }
    return bells;
}

Vector<Rational> vec(std::initializer_list<long> v) {
    Vector<Rational> x(static_cast<Index>(v.size()));
    Index i = 0;
    for (long c : v) x(i++) = Rational(c);
    return x;
}

}  // namespace

TEST_CASE("falling factorial examples") {
    CHECK(falling_factorial(5.0, 3) == 60.0);
    CHECK(falling_factorial(0.5, 2) == -0.25);
    CHECK(falling_factorial(Rational(7), 7) == oracle::factorial(7));
    CHECK(falling_factorial(Complex(2.0, 1.0), 0) == Complex(1.0));
    const Complex z(0.5, 2.0);
    CHECK(std::abs(falling_factorial(z, 2) - z * (z - 1.0)) <= 1e-15);
}

TEST_CASE("Stirling table against independent oracles") {
    StirlingTable t(16);
    const auto bells = bell_oracle(15);
    for (long n = 0; n < 16; ++n) {
        const auto rc = rising_coeffs(n);
        for (long k = 0; k <= n; ++k) {
            CHECK(Rational(t.second(n, k)) == stirling2_oracle(n, k));
            CHECK(Rational(t.first(n, k)) == rc[static_cast<std::size_t>(k)]);
        }
        CHECK(Rational(t.bell(n)) == bells[static_cast<std::size_t>(n)]);
    }
    for (long n = 0; n + 1 < 16; ++n)
        for (long k = 1; k <= n + 1; ++k) {
            CHECK(t.signed_first(n + 1, k) == t.signed_first(n, k - 1) - Integer(n) * t.signed_first(n, k));
            CHECK(t.second(n + 1, k) == Integer(k) * t.second(n, k) + t.second(n, k - 1));
        }
    CHECK_THROWS_AS(t.second(16, 0), InsufficientData);
}

TEST_CASE("basis conversion examples and round trip") {
    CHECK(basis_convert(vec({0, 0, 1}), Basis::power) == vec({0, 1, 1}));
    CHECK(basis_convert(vec({0, 0, 0, 1}), Basis::power) == vec({0, 1, 3, 1}));
    CHECK(basis_convert(vec({0, 0, 0, 1}), Basis::falling) == vec({0, 2, -3, 1}));

    std::mt19937_64 rng(8);
    std::uniform_int_distribution<long> coef(-50, 50);
    StirlingTable table(2);
    for (int trial = 0; trial < 20; ++trial) {
        Vector<Rational> p(9);
        for (Index i = 0; i < 9; ++i) p(i) = Rational(coef(rng));
        const auto f = basis_convert(p, Basis::power, table);
        CHECK(basis_convert(f, Basis::falling, table) == p);
        // both forms agree at a rational point
        const Rational z(3, 7);
        Rational vp(0), vf(0);
        for (Index i = 0; i < 9; ++i) {
            vp += p(i) * oracle::pow(z, i);
            vf += f(i) * falling_factorial(z, i);
        }
        CHECK(vp == vf);
    }
    CHECK(table.size() >= 9);
}

TEST_CASE("series coefficients from samples") {
    auto geo = series_from_samples(exact_seq(3, [](long k) { return oracle::pow(Rational(1, 2), k); }));
    for (Index k = 0; k < 4; ++k) CHECK(geo.coeffs()(k) == oracle::pow(Rational(-1, 2), k) / oracle::factorial(k));

    auto h = exact_seq(3, [](long k) { return Rational(1, k + 1); });
    auto hs = series_from_samples(h);
    const auto hv = testing_support::to_vector(h.values());
    for (Index k = 0; k < 4; ++k) {
        const Rational delta = (k % 2 == 0 ? 1 : -1) * oracle::signed_difference(hv, k, 0);
        CHECK(delta == Rational(k % 2 == 0 ? 1 : -1, k + 1));
        CHECK(hs.coeffs()(k) * oracle::factorial(k) == delta);
    }

    auto c = series_from_samples(exact_seq(5, [](long) { return Rational(7, 3); }));
    CHECK(c.coeffs()(0) == Rational(7, 3));
    for (Index k = 1; k < 6; ++k) CHECK(c.coeffs()(k) == 0);
}

TEST_CASE("coefficients times k! equal the Euler transform") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = exact_seq(oracle::random_rational_vector(rng, 15));
        auto s = series_from_samples(a);
        auto e = euler_transform(a);
        CHECK(s.coeffs()(0) == a[0]);
        for (Index k = 0; k < 16; ++k) CHECK(s.coeffs()(k) * oracle::factorial(k) == e[k]);
    }
}

TEST_CASE("interpolation nodes are reproduced") {
    std::mt19937_64 rng(6);
    auto a = exact_seq(oracle::random_rational_vector(rng, 20));
    auto s = series_from_samples(a);
    for (Index n = 0; n < 20; ++n) CHECK(eval_series_exact(s, Rational(n), s.size()) == a[n]);

    auto f = series_from_samples(float_seq(30, [](double k) { return std::exp2(-k); }));
    for (Index n = 0; n <= 12; ++n) {
        auto r = eval_series(f, Complex(static_cast<double>(n)), f.size());
        CHECK(std::abs(r.partial_sum.real() - std::exp2(-static_cast<double>(n))) <= 1e-12 * std::exp2(-static_cast<double>(n)) + 1e-15);
    }

    auto g = series_from_samples(exact_seq(59, [](long k) { return oracle::pow(Rational(1, 2), k); }));
    CHECK(std::abs(eval_series(g, Complex(2.0)).partial_sum.real() - 0.25) <= 1e-12);
}

TEST_CASE("evaluation off the nodes") {
    auto g = series_from_samples(exact_seq(59, [](long k) { return oracle::pow(Rational(1, 2), k); }));
    auto rg = eval_series(g, Complex(0.5));
    CHECK(std::abs(rg.partial_sum.real() - std::sqrt(0.5)) <= 1e-9);
    CHECK(!rg.diverging);
    CHECK(!rg.outside_half_plane);

    auto h = series_from_samples(exact_seq(59, [](long k) { return Rational(1, k + 1); }));
    auto rh = eval_series(h, Complex(0.5));
    CHECK(std::abs(rh.accelerated.real() - 2.0 / 3.0) <= 1e-6);
    CHECK(rh.levin_order > 0);

    CHECK(eval_series(g, Complex(-0.5)).outside_half_plane);
    CHECK_THROWS_AS(eval_series(g, Complex(0.5), 61), InsufficientData);
}

TEST_CASE("geometric samples converge on [0, 10]") {
    auto g = series_from_samples(exact_seq(59, [](long k) { return oracle::pow(Rational(1, 2), k); }));
    for (double z = 0.0; z <= 10.0; z += 0.25) {
        auto r = eval_series(g, Complex(z));
        CHECK(r.tail_estimate <= 1e-8);
        CHECK(std::abs(r.partial_sum.real() - std::exp2(-z)) <= 1e-8);
    }
}

TEST_CASE("exponential type check") {
    std::vector<double> x, f;
    for (double t = 0; t <= 50; t += 0.5) {
        x.push_back(t);
        f.push_back(std::exp2(-t));
    }
    CHECK(exponential_type_check(x, f, 1.0, 0.0).pass);

    x.clear();
    f.clear();
    for (double t = 0; t <= 10; t += 0.25) {
        x.push_back(t);
        f.push_back(std::exp(t * t));
    }
    auto r = exponential_type_check(x, f, 100.0, 9.0);
    CHECK(!r.pass);
    CHECK(r.worst == static_cast<Index>(x.size()) - 1);
    CHECK(!exponential_type_check(x, f, 1.0, 9.9).pass);
    // x^2 <= 10 x on [0, 10], so D = 10 is not a counterexample on this range
    CHECK(exponential_type_check(x, f, 1.0, 10.0).pass);

    x.clear();
    f.clear();
    for (double t = 0; t <= 100; t += 0.5) {
        x.push_back(t);
        f.push_back(std::sqrt(t));
    }
    CHECK(exponential_type_check(x, f, 1.0, 1.0).pass);
}

TEST_CASE("harmonic samples: raw tail is slow, accelerated value converges on [0, 10]") {
    auto h = series_from_samples(exact_seq(59, [](long k) { return Rational(1, k + 1); }));
    CHECK(eval_series(h, Complex(0.5)).tail_estimate > 1e-8);
    for (double z = 0.0; z <= 10.0; z += 0.25) {
        auto r = eval_series(h, Complex(z));
        CHECK(std::abs(r.accelerated.real() - 1.0 / (1.0 + z)) <= 1e-8);
    }
}
