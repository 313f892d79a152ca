#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "kapteyn/summation.hpp"

using namespace kapteyn;
using namespace kapteyn::summation;
using specfun::bessel_j;

namespace {

double schott(double z) { return 0.5 * (1.0 / std::sqrt(1.0 - z * z) - 1.0); }

SeriesSpec schott_spec(double z) {
    SeriesSpec s;
    s.kind = SeriesKind::K2;
    s.coeff = rule::Power{0.0};
    s.alpha = s.gamma = 1.0;
    s.beta = s.epsilon = 0.0;
    s.c = s.f = z;
    s.b = s.g = 0.0;
    return s;
}

}  // namespace

TEST(SumDirect, ZeroTerms) {
    const auto r = sum_direct([](long) { return 0.0; }, Range::from(1), {});
    EXPECT_EQ(r.value, 0.0);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.terms_used, 5u);
}

TEST(SumDirect, Geometric) {
    const auto r = sum_direct([](long n) { return std::pow(0.5, static_cast<double>(n)); }, Range::from(1), {});
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_TRUE(r.converged);
    EXPECT_FALSE(r.accelerated);
}

TEST(SumDirect, SchottAtPointSix) {
    const auto r = sum_direct(
        [](long n) {
            const double j = bessel_j(static_cast<double>(n), 0.6 * n);
            return j * j;
        },
        Range::from(1), {1e-13, 10000});
    EXPECT_NEAR(r.value, 0.125, 1e-9);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.err_estimate, 1e-13 * (1.0 + std::abs(r.value)));
}

TEST(SumDirect, ParityZerosDoNotStopEarly) {
    // Every other term vanishes; a single-term test would stop at n = 2.
    const auto r = sum_direct([](long n) { return n % 2 == 0 ? 0.0 : 1.0 / (static_cast<double>(n) * n * n * n); },
                              Range::from(1), {1e-6, 10000});
    EXPECT_GT(r.terms_used, 5u);
    EXPECT_NEAR(r.value, std::pow(std::numbers::pi, 4) / 96.0, 1e-4);
}

TEST(SumDirect, BudgetExhausted) {
    const auto r = sum_direct([](long n) { return 1.0 / static_cast<double>(n); }, Range::from(1), {1e-12, 50});
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.terms_used, 50u);
}

TEST(SumDirect, NonFiniteTermAborts) {
    try {
        sum_direct([](long n) { return n == 7 ? std::nan("") : 1.0 / (n * n * n * n * 1.0); }, Range::from(1), {});
        FAIL() << "expected nonfinite_term";
    } catch (const nonfinite_term& e) {
        EXPECT_EQ(e.index(), 7);
    }
}

TEST(SumDirect, BilateralSymmetry) {
    auto term = [](long n) {
        const double j = bessel_j(static_cast<double>(n), 0.4 * std::abs(static_cast<double>(n)) + 0.1);
        return j * j;
    };
    const auto two = sum_direct(term, Range::bilateral(), {});
    const auto one = sum_direct(term, Range::from(1), {});
    EXPECT_NEAR(two.value, 2.0 * one.value + term(0), 1e-12);
}

TEST(SumDirect, BilateralOrderIsDeterministic) {
    std::vector<long> seen;
    sum_direct(
        [&seen](long n) {
            seen.push_back(n);
            return 0.0;
        },
        Range::bilateral(), {});
    ASSERT_GE(seen.size(), 5u);
    EXPECT_EQ(seen[0], 0);
    EXPECT_EQ(seen[1], 1);
    EXPECT_EQ(seen[2], -1);
    EXPECT_EQ(seen[3], 2);
    EXPECT_EQ(seen[4], -2);
}

TEST(Wynn, AlternatingHarmonic) {
    std::vector<double> partials;
    double s = 0.0;
    for (int n = 1; n <= 40; ++n) {
        s += (n % 2 ? 1.0 : -1.0) / n;
        partials.push_back(s);
    }
    EXPECT_NEAR(wynn_epsilon(partials), std::numbers::ln2, 1e-10);
}

TEST(Wynn, ConstantAndGeometric) {
    EXPECT_EQ(wynn_epsilon({2.5, 2.5, 2.5}), 2.5);
    std::vector<double> partials;
    double s = 0.0;
    for (int n = 1; n <= 30; ++n) {
        s += std::pow(0.5, n);
        partials.push_back(s);
    }
    EXPECT_NEAR(wynn_epsilon(partials), 1.0, 1e-13);
    EXPECT_THROW(wynn_epsilon({1.0, 2.0}), domain_error);
}

TEST(Wynn, SlowAlternatingSeriesAccelerated) {
    // sum (-1)^(n+1)/sqrt(n) needs far more than 10^4 direct terms.
    auto term = [](long n) { return (n % 2 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(n)); };
    const auto r = sum_accelerated(term, Range::from(1), {1e-10, 10000});
    EXPECT_TRUE(r.accelerated);
    EXPECT_TRUE(r.converged);
    // (1 - sqrt 2) zeta(1/2)
    EXPECT_NEAR(r.value, 0.60489864342163037025, 1e-9);
    EXPECT_LE(r.err_estimate, 1e-10 * (1.0 + std::abs(r.value)));
}

TEST(Accelerated, MatchesDirectWhenDirectConverges) {
    auto term = [](long n) {
        const double j = bessel_j(static_cast<double>(n), 0.5 * n);
        return j * j;
    };
    const auto d = sum_direct(term, Range::from(1), {1e-13, 10000});
    const auto a = sum_accelerated(term, Range::from(1), {1e-13, 10000});
    EXPECT_LE(std::abs(d.value - a.value), 10.0 * std::max(d.err_estimate, a.err_estimate) + 1e-16);
}

TEST(Accelerated, ReportsNonConvergence) {
    const auto r = sum_accelerated([](long n) { return 1.0 / static_cast<double>(n); }, Range::from(1), {1e-12, 400});
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.terms_used, 400u);
}

TEST(EvalSeries, SchottSpec) {
    const auto r = eval_series(schott_spec(0.5), {1e-12, 10000});
    EXPECT_NEAR(r.value, schott(0.5), 1e-9);
    EXPECT_NEAR(r.value, 0.077350269189625764509, 1e-9);
    EXPECT_TRUE(r.converged);
}

TEST(EvalSeries, KapteynFirstKindGeometric) {
    SeriesSpec s;
    s.kind = SeriesKind::K1;
    s.coeff = rule::Geometric{0.5};
    s.alpha = 1.0;
    s.c = 0.3;
    // gamma, epsilon, f, g are ignored for K1
    s.gamma = 99.0;
    s.f = 1e6;
    const auto r = eval_series(s, {1e-12, 10000});
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 0.087262683616672498058, 1e-10);
}

TEST(EvalSeries, ZeroArguments) {
    SeriesSpec s;
    s.kind = SeriesKind::K2;
    s.beta = s.epsilon = 1.0;
    const auto r = eval_series(s, {});
    EXPECT_EQ(r.value, 0.0);
    EXPECT_TRUE(r.converged);
}

TEST(EvalSeries, Validation) {
    SeriesSpec s;
    s.coeff = rule::InverseQuadratic{3.0};
    s.c = 0.2;
    EXPECT_THROW(eval_series(s, {}), domain_error);
    s.coeff = rule::InverseQuadratic{0.5};
    EXPECT_NO_THROW(eval_series(s, {}));
    s.alpha = std::nan("");
    EXPECT_THROW(eval_series(s, {}), domain_error);
}

TEST(CoefficientRules, Values) {
    EXPECT_EQ(coefficient(rule::Constant{}, 7), 1.0);
    EXPECT_EQ(coefficient(rule::Power{2.0}, 3), 9.0);
    EXPECT_EQ(coefficient(rule::Geometric{0.5}, 3), 0.125);
    EXPECT_EQ(coefficient(rule::InverseQuadratic{0.5}, 1), 1.0 / 0.75);
    EXPECT_EQ(coefficient(rule::InverseShiftedHalf{0.25, 1}, 0), -1.0 / (0.25 - 0.0625));
    EXPECT_EQ(coefficient(rule::InverseShiftedHalf{0.25, 1}, 1), 1.0 / (2.25 - 0.0625));
    EXPECT_EQ(coefficient(rule::Custom{[](long n) { return n * 10.0; }}, 4), 40.0);
}

TEST(GaussLegendre, SpecExamples) {
    EXPECT_NEAR(gauss_legendre([](double) { return 1.0; }, 0.0, 1.0, 8), 1.0, 1e-15);
    EXPECT_NEAR(gauss_legendre([](double x) { return std::cos(x); }, 0.0, std::numbers::pi / 2, 16), 1.0, 1e-13);
    EXPECT_NEAR(gauss_legendre([](double x) { return std::cos(x) * std::cos(x); }, 0.0, std::numbers::pi / 2, 16),
                std::numbers::pi / 4, 1e-13);
    EXPECT_THROW(gauss_legendre([](double) { return 1.0; }, 0.0, 1.0, 1), domain_error);
}

TEST(GaussLegendre, ExactForPolynomials) {
    // An n-point rule integrates degree 2n-1 exactly.
    const double v = gauss_legendre([](double x) { return std::pow(x, 9) + 3 * x * x; }, -1.0, 2.0, 5);
    EXPECT_NEAR(v, (std::pow(2.0, 10) - 1.0) / 10.0 + 9.0, 1e-12);
    const auto rule = gauss_legendre_rule(64);
    double w = 0.0;
    for (double x : rule.weights) w += x;
    EXPECT_NEAR(w, 2.0, 1e-14);
}

TEST(ProductRep, SpecExamples) {
    const auto a = product_rep_check(1.0, 1.0, 1.0);
    EXPECT_LE(a.gap, 1e-10);
    EXPECT_NEAR(a.lhs, 0.19364451801445908452, 1e-14);
    const auto b = product_rep_check(0.3, 0.7, 1.2);
    EXPECT_LE(b.gap, 1e-9);
    EXPECT_NEAR(b.lhs, 0.43895669543485579302, 1e-13);
    const auto c = product_rep_check(0.0, 0.0, 0.0);
    EXPECT_EQ(c.lhs, 1.0);
    EXPECT_NEAR(c.rhs, 1.0, 1e-15);
    EXPECT_THROW(product_rep_check(-0.7, -0.6, 1.0), domain_error);
}

TEST(ProductRep, QuadratureOrder) {
    const double sets[][3] = {{1, 1, 1}, {0.3, 0.7, 1.2}, {2, 0, 0.5}};
    for (const auto& s : sets) {
        const double g32 = product_rep_check(s[0], s[1], s[2], 32).gap;
        const double g64 = product_rep_check(s[0], s[1], s[2], 64).gap;
        EXPECT_TRUE(g64 <= g32 || g64 < 1e-12) << s[0] << " " << s[1] << " " << s[2];
    }
}

TEST(Rm, SpecExamples) {
    EXPECT_EQ(eval_Rm(0, 0, 1, 0, 1, 0, 1.0), 1.0);
    EXPECT_EQ(eval_Rm(1, 0, 1, 0, 1, 0, 1.0), 2.0);
    // m=2, n=1: 1/(0!2!) /(G(2)G(4)) + 1/(1!1!) /(G(3)G(3)) + 1/(2!0!) /(G(4)G(2)) = 1/12 + 1/4 + 1/12
    EXPECT_NEAR(eval_Rm(2, 1, 1, 0, 1, 0, 1.0), 5.0 / 12.0, 1e-16);
    EXPECT_THROW(eval_Rm(-1, 0, 1, 0, 1, 0, 1.0), domain_error);
}

TEST(Rm, LambdaWeighting) {
    // k = 0 carries Lambda^0, k = 1 carries Lambda^-2.
    const double lam = 2.0;
    const double expected = 1.0 + 1.0 / (lam * lam);
    EXPECT_NEAR(eval_Rm(1, 0, 1, 0, 1, 0, lam), expected, 1e-16);
}

TEST(Qn, ZeroArgument) { EXPECT_EQ(eval_Qn(3, 0.0, 1, 0.5, 1, 0, 1.0), eval_Rm(0, 3, 1, 0.5, 1, 0, 1.0)); }

TEST(Qn, MatchesBesselProduct) {
    const double j = bessel_j(1, 0.5);
    EXPECT_NEAR(eval_Qn(1, 0.25, 1, 0, 1, 0, 1.0), j * j / (0.25 * 0.25), 1e-12);
}

TEST(Qn, MatchesProductWithScaledArgument) {
    // J_a(X) J_b(Lambda X) = (X/2)^(a+b) Lambda^b Q_n
    const double lam = 1.7, X = 1.3, a = 2.5, b = 1.25;
    const double q = eval_Qn(1, X / 2, 1, 1.5, 1, 0.25, lam);
    const double expected = bessel_j(a, X) * bessel_j(b, lam * X);
    EXPECT_NEAR(std::pow(X / 2, a + b) * std::pow(lam, b) * q, expected, 1e-13);
}

TEST(QnAssembly, ReproducesSchott) {
    for (double z : {0.5, 0.3}) {
        const auto via_q = eval_series_via_qn(schott_spec(z), {1e-12, 10000});
        const auto direct = eval_series(schott_spec(z), {1e-12, 10000});
        EXPECT_NEAR(via_q.value, direct.value, 1e-8) << z;
        EXPECT_NEAR(via_q.value, schott(z), 1e-9) << z;
    }
}

TEST(QnAssembly, ProportionalArgumentsRequired) {
    SeriesSpec s = schott_spec(0.3);
    s.g = 0.1;
    EXPECT_THROW(eval_series_via_qn(s, {}), domain_error);
    s = schott_spec(0.3);
    s.kind = SeriesKind::K1;
    EXPECT_THROW(eval_series_via_qn(s, {}), domain_error);
}
