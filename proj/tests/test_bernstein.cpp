#include "cmtk/bernstein.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

using namespace cmtk;
using testing_support::exact_seq;

namespace {

FunctionHandle lambda_over_one_plus() {
    return FunctionHandle("x/(1+x)", [](long double x) { return x / (1 + x); })
        .with_derivative([](long double x) { return 1 / ((1 + x) * (1 + x)); });
}

// q + d lambda + sum w (1 - e^{-lambda x}) evaluated directly in long double
double direct(double q, double d, const std::vector<std::pair<double, double>>& atoms, double lambda) {
    long double s = q + static_cast<long double>(d) * lambda;
    for (auto [x, w] : atoms) s += w * (1 - std::exp(-static_cast<long double>(lambda) * x));
    return static_cast<double>(s);
}

}  // namespace

TEST_CASE("evaluation examples") {
    BernsteinTriplet one{0, 0, {{1.0, 1.0}}, 0};
    CHECK(eval_bernstein(one, 1.0) == doctest::Approx(0.6321205588285577).epsilon(1e-15));
    BernsteinTriplet affine{2, 3, {}, 0};
    CHECK(eval_bernstein(affine, 4.0) == 14.0);
    CHECK(eval_bernstein(affine, 0.0) == 2.0);
    CHECK_THROWS_AS(eval_bernstein(affine, -1.0), DomainError);

    BernsteinTriplet bounded{1, 0, {{1.0, 0.5}, {2.0, 0.25}}, 0};
    CHECK(bernstein_supremum(bounded) == 1.75);
    CHECK(eval_bernstein(bounded, 60.0) == doctest::Approx(1.75).epsilon(1e-15));
    bounded.d = 0.1;
    CHECK(std::isinf(bernstein_supremum(bounded)));

    const auto h = triplet_handle(BernsteinTriplet{0.5, 0.2, {{0.3, 1.0}, {4.0, 2.0}}, 0});
    for (double x : {0.0, 0.7, 3.0, 11.0})
        CHECK(static_cast<double>(h(x).value) ==
              doctest::Approx(direct(0.5, 0.2, {{0.3, 1.0}, {4.0, 2.0}}, x)).epsilon(1e-15));
}

TEST_CASE("monotone and concave on samples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        BernsteinTriplet t{U(rng), U(rng) * (trial % 2), {}, 0};
        for (int j = 0; j < 5; ++j) t.levy.push_back({U(rng) + 0.01, U(rng)});
        double prev = eval_bernstein(t, 0.0), prev_inc = INFINITY;
        CHECK(prev == t.q);
        for (double l = 0.25; l <= 20.0; l += 0.25) {
            const double v = eval_bernstein(t, l);
            CHECK(v >= prev);
            CHECK(v - prev <= prev_inc + 1e-13 * (1 + v));
            prev_inc = v - prev;
            prev = v;
        }
    }
}

TEST_CASE("extraction examples") {
    SUBCASE("1 - e^{-lambda}") {
        const auto ex = extract_triplet(builtin("one-minus-exp"));
        CHECK(std::abs(ex.triplet.q) <= 1e-15);
        CHECK(ex.triplet.d <= 1e-6);
        REQUIRE(ex.d_limit);
        double mass = 0, near = 0, weighted_x = 0;
        for (const auto& a : ex.triplet.levy) {
            mass += a.w;
            if (std::abs(a.x - 1.0) <= 0.05) {
                near += a.w;
                weighted_x += a.w * a.x;
            }
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(near >= 0.99 * mass);
        CHECK(weighted_x / near == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(ex.roundtrip_error <= 1e-4);
        CHECK(ex.certificate.verdict == Verdict::pass);
    }
    SUBCASE("2 + 3 lambda") {
        FunctionHandle f("2+3x", [](long double x) { return 2 + 3 * x; });
        const auto ex = extract_triplet(f);
        CHECK(ex.triplet.q == 2.0);
        CHECK(std::abs(ex.triplet.d - 3.0) <= 1e-6);
        double mass = 0;
        for (const auto& a : ex.triplet.levy) mass += a.w;
        CHECK(mass <= 1e-9);
        CHECK(ex.roundtrip_error <= 1e-9);
    }
    SUBCASE("lambda / (1 + lambda)") {
        const auto ex = extract_triplet(lambda_over_one_plus());
        CHECK(ex.triplet.q == 0.0);
        CHECK(ex.triplet.d <= 1e-6);
        double worst = 0;
        for (int k = 0; k <= 20; ++k)
            worst = std::max(worst, std::abs(eval_bernstein(ex.triplet, k) - k / (1.0 + k)));
        CHECK(worst <= 1e-6);
    }
    SUBCASE("non-CA input fails certification") {
        CHECK_THROWS_AS(extract_triplet(builtin("square")), CertificationFailed);
        CHECK_THROWS_AS(extract_triplet(builtin("exp-decay")), CertificationFailed);
    }
}

TEST_CASE("exact roundtrip of random rational triplets") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> grid_index(1, 199), n_atoms(0, 8), num(0, 40);
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 10; ++trial) {
        CATriplet<Rational> t;
        t.q = Rational(num(rng), 8);
        t.d = Rational(num(rng), 16);
        std::vector<MeasureAtom<Rational>> atoms;
        const int m = n_atoms(rng);
        for (int j = 0; j < m; ++j) atoms.push_back({Rational(grid_index(rng), 200), Rational(1 + num(rng), 10)});
        t.measure = DiscreteMeasure<Rational>(atoms, Support::half_open);

        const auto a = exact_seq(30, [&](long k) { return t.value_at(k); });
        const auto ex = extract_triplet(a);
        CHECK(ex.triplet.q == to_double(t.q));
        CHECK(ex.moment_form.q == t.q);
        CHECK(std::abs(ex.triplet.d - to_double(t.d)) <= 1e-3);
        const BernsteinTriplet truth = to_exponential(t);
        double worst = 0;
        for (double l = 0; l <= 20.0; l += 0.125)
            worst = std::max(worst, std::abs(eval_bernstein(ex.triplet, l) - eval_bernstein(truth, l)));
        CHECK(worst <= 10 * ex.report.residual + 1e-12);
    }
    MESSAGE("10 exact roundtrips: "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s");
}

TEST_CASE("samples on a coarser lattice map to lambda units") {
    CATriplet<double> t;
    t.d = 0.5;
    t.measure = DiscreteMeasure<double>({{0.25, 1.0}}, Support::half_open);
    Eigen::VectorXd v(21);
    for (int k = 0; k <= 20; ++k) v(k) = t.value_at(k);
    const auto ex = extract_triplet(Sequence<double>(v, 2.0));
    // Phi(2k) = a_k, so Phi(lambda) = 0.25 lambda + (1 - e^{-lambda ln(4)/2})
    for (double l : {1.0, 2.0, 7.0})
        CHECK(eval_bernstein(ex.triplet, l) ==
              doctest::Approx(0.25 * l + 1 - std::pow(0.25, l / 2)).epsilon(1e-6));
}

TEST_CASE("theta mass identity") {
    const BernsteinTriplet t{0.3, 0.4, {{0.5, 1.0}, {1.5, 0.5}, {3.0, 2.0}}, 0};
    const auto phi = triplet_handle(t);
    for (double c : {1.0, 0.5, 2.0}) {
        const auto theta = apply_operator(phi, Operator::theta, c);
        Eigen::VectorXd v(41);
        for (int k = 0; k <= 40; ++k) v(k) = static_cast<double>(theta(k).value);
        InversionOptions opts;
        opts.reject_unrepresentable = false;
        const auto fit = invert_ca(Sequence<double>(v), opts);
        const double mass = to_double(fit.triplet.q) + to_double(fit.triplet.measure.total_mass());
        const double expected = eval_bernstein(t, c) - t.q - t.d * c;
        CHECK(std::abs(to_double(fit.triplet.d)) <= 1e-8);
        CHECK(mass == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("bf membership via theta") {
    for (std::string name : {"identity", "one-minus-exp", "sqrt"}) {
        const auto r = check_bf_via_theta(builtin(name));
        INFO(name);
        CHECK(r.verdict == Verdict::pass);
        CHECK(r.entries.size() == 2);
        for (const auto& e : r.entries) {
            CHECK(e.zero_at_origin);
            CHECK(e.bounded);
        }
    }
    CHECK(check_bf_via_theta(lambda_over_one_plus()).verdict == Verdict::pass);
    CHECK(check_bf_via_theta(builtin("log1p")).verdict == Verdict::pass);

    // theta_1 of x is identically zero
    const auto id = check_bf_via_theta(builtin("identity"), {1.0});
    CHECK(id.entries[0].increment_ratio == 0.0);

    // theta_1 lambda^2 = -2 lambda
    const auto sq = check_bf_via_theta(builtin("square"), {1.0});
    CHECK(sq.verdict == Verdict::fail);
    REQUIRE(sq.entries[0].certificate.witness);
    CHECK(sq.entries[0].certificate.witness->n == 1);
    CHECK(sq.entries[0].certificate.witness->value.value == doctest::Approx(2.0));

    // theta_1 (1 - e^{-lambda}) = (1 - e^{-1})(1 - e^{-lambda})
    const auto th = apply_operator(builtin("one-minus-exp"), Operator::theta, 1.0);
    for (double l : {0.0, 0.5, 3.0})
        CHECK(static_cast<double>(th(l).value) ==
              doctest::Approx((1 - std::exp(-1.0)) * (1 - std::exp(-l))).epsilon(1e-14));

    // a function with a drift-like theta image is not bounded: theta_c(x log(1+x)) grows like log
    FunctionHandle xlog("xlog", [](long double x) { return x * std::log1p(x); });
    CHECK(check_bf_via_theta(xlog).verdict == Verdict::fail);

    FunctionHandle negative("neg", [](long double x) { return -1 - x; });
    CHECK_THROWS_AS(check_bf_via_theta(negative), DomainError);
}

TEST_CASE("bf membership of a fitted square root") {
    ExtractOptions opts;
    opts.K = 30;
    const auto ex = extract_triplet(builtin("sqrt"), opts);
    const auto approx = triplet_handle(ex.triplet, "sqrt-fit");
    CHECK(check_bf_via_theta(approx).verdict == Verdict::pass);
    for (int k = 0; k <= 30; ++k) CHECK(std::abs(eval_bernstein(ex.triplet, k) - std::sqrt(k)) <= 1e-3);
}

TEST_CASE("self-decomposability examples") {
    SUBCASE("log(1 + lambda)") {
        const auto r = check_selfdecomposable(builtin("log1p"));
        CHECK(r.verdict == Verdict::pass);
        REQUIRE(r.test_b);
        CHECK(r.test_b->certificate.verdict == Verdict::pass);
        REQUIRE(r.test_b->minimality);
        CHECK(r.test_b->minimality->minimal);
        CHECK(r.derivative_supplied);
        CHECK(r.test_a.size() == 4);
        CHECK(!r.caveat.empty());
    }
    SUBCASE("1 - e^{-lambda}") {
        const auto r = check_selfdecomposable(builtin("one-minus-exp"));
        CHECK(r.verdict == Verdict::fail);
        REQUIRE(r.test_b);
        CHECK(r.test_b->verdict == Verdict::fail);
        const auto& w = r.test_b->certificate.witness;
        REQUIRE(w);
        CHECK(w->n == 1);
        CHECK(w->k == 1);
        REQUIRE(r.test_b->witness_delta);
        const double expected = 2 * std::exp(-2.0) - std::exp(-1.0);
        CHECK(*r.test_b->witness_delta == doctest::Approx(expected).epsilon(1e-12));
        CHECK(expected == doctest::Approx(-0.0972).epsilon(1e-3));
    }
    SUBCASE("lambda") {
        const auto r = check_selfdecomposable(builtin("identity"));
        CHECK(r.verdict == Verdict::pass);
        for (const auto& [c, t] : r.test_a) CHECK(t.verdict == Verdict::pass);
    }
    SUBCASE("central differences") {
        FunctionHandle f("log1p-nd", [](long double x) { return std::log1p(x); });
        // derivative noise limits the usable depth; at depth 30 it can only cost decisiveness
        const auto deep = check_selfdecomposable(f);
        CHECK(!deep.derivative_supplied);
        CHECK(deep.derivative_error <= 1e-8);
        CHECK(deep.verdict != Verdict::fail);
        const auto r = check_selfdecomposable(f, {0.25, 0.5, 0.75, 0.9}, 20);
        CHECK(r.verdict == Verdict::pass);
    }
    SUBCASE("non-finite derivative skips test (b)") {
        FunctionHandle f("kink", [](long double x) { return x < 2 ? x : 2 + 0 * x; });
        auto g = f.with_derivative([](long double x) { return x == 2 ? NAN : 1.0L; });
        const auto r = check_selfdecomposable(g);
        CHECK(r.b_skipped);
        CHECK(!r.test_b);
        CHECK(r.verdict != Verdict::pass);
    }
    CHECK_THROWS_AS(check_selfdecomposable(builtin("log1p"), {1.0}), DomainError);
}

TEST_CASE("test (b) passing implies test (a) passing") {
    std::vector<FunctionHandle> fs = {builtin("log1p"), builtin("identity"), builtin("sqrt"),
                                      lambda_over_one_plus(), builtin("one-minus-exp")};
    fs.push_back(triplet_handle(BernsteinTriplet{0, 0.2, {{0.5, 1.0}, {2.0, 1.0}, {6.0, 1.0}}, 0})
                     .with_derivative([](long double x) {
                         return 0.2L + 0.5L * std::exp(-0.5L * x) + 2 * std::exp(-2 * x) + 6 * std::exp(-6 * x);
                     }));
    for (const auto& f : fs) {
        const auto r = check_selfdecomposable(f);
        INFO(f.name());
        if (r.test_b && r.test_b->verdict == Verdict::pass)
            for (const auto& [c, t] : r.test_a) CHECK(t.verdict == Verdict::pass);
    }
}

TEST_CASE("egf identity") {
    const std::vector<double> ts = {0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
    SUBCASE("pure drift") {
        const auto a = exact_seq(30, [](long k) { return Rational(k); });
        CATriplet<Rational> fit;
        fit.d = 1;
        const auto r = egf_validate(a, fit, ts);
        CHECK(r.max_residual <= 1e-12);
        CHECK(r.ok);
    }
    SUBCASE("1 - 2^{-k}") {
        const auto a = exact_seq(30, [](long k) { return 1 - oracle::pow(Rational(1, 2), k); });
        const auto fit = invert_ca(a);
        const auto r = egf_validate(a, fit.triplet, ts);
        CHECK(r.max_residual <= 1e-8);
        CHECK(r.ok);
        // closed form: 1 - e^{-t/2}
        CATriplet<Rational> truth;
        truth.measure = DiscreteMeasure<Rational>({{Rational(1, 2), Rational(1)}}, Support::half_open);
        CHECK(egf_validate(a, truth, ts).max_residual <= 1e-14);
    }
    SUBCASE("constant") {
        const auto a = exact_seq(20, [](long) { return Rational(3, 2); });
        CATriplet<Rational> fit;
        fit.q = Rational(3, 2);
        CHECK(egf_validate(a, fit, ts).max_residual <= 1e-15);
    }
    SUBCASE("a wrong fit shows up in the residual") {
        const auto a = exact_seq(20, [](long k) { return Rational(k); });
        CATriplet<Rational> fit;
        fit.d = Rational(11, 10);
        CHECK(egf_validate(a, fit, ts).max_residual == doctest::Approx(0.1).epsilon(1e-12));
    }
    CHECK_THROWS_AS(egf_validate(exact_seq(3, [](long) { return Rational(0); }), CATriplet<Rational>{}, {2.0}),
                    DomainError);
}
