#include <cmath>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "kapteyn/exact.hpp"

using namespace kapteyn;
using namespace kapteyn::exact;

namespace {

RadicalSum k2_initial_form() {
    return RadicalSum{RadicalTerm(0, UPoly::constant(BigRational(-1, 2)), 0),
                      RadicalTerm(0, UPoly::constant(BigRational(1, 2)), -1)};
}

// A mixed odd-parity sum for round-trip checks.
RadicalSum odd_sample() {
    return RadicalSum{RadicalTerm(1, UPoly{1, 3}, -1), RadicalTerm(1, UPoly{BigRational(2, 7), 0, -5}, -5),
                      RadicalTerm(1, UPoly{0, 0, 1}, 0), RadicalTerm(1, UPoly{4}, 3)};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(BigRationalArith, LowestTerms) {
    BigRational a(2, 4);
    EXPECT_EQ(boost::multiprecision::numerator(a), 1);
    EXPECT_EQ(boost::multiprecision::denominator(a), 2);
    BigRational b(-3, 9);
    EXPECT_EQ(boost::multiprecision::numerator(b), -1);
    EXPECT_EQ(boost::multiprecision::denominator(b), 3);
    // 1/6 + 1/10 = 4/15, cross-multiplied: 15 * (1*10 + 6*1) = 4 * 60
    const BigRational s = BigRational(1, 6) + BigRational(1, 10);
    EXPECT_EQ(s, BigRational(4, 15));
    EXPECT_EQ(15 * (1 * 10 + 6 * 1), 4 * 60);
    EXPECT_EQ(to_string(BigRational(-7, 3)), "-7/3");
    EXPECT_EQ(to_string(BigRational(12)), "12");
}

TEST(BigRationalArith, PowAndFactorials) {
    EXPECT_EQ(kapteyn::pow(BigRational(2, 3), 3), BigRational(8, 27));
    EXPECT_EQ(kapteyn::pow(BigRational(2), -3), BigRational(1, 8));
    EXPECT_EQ(kapteyn::pow(BigRational(0), 0), BigRational(1));
    EXPECT_THROW(kapteyn::pow(BigRational(0), -1), domain_error);
    EXPECT_EQ(factorial(20), BigInt("2432902008176640000"));
    EXPECT_EQ(binomial(10, 3), 120);
    EXPECT_EQ(binomial(3, 5), 0);
}

TEST(UPolyOps, TrimAndArithmetic) {
    UPoly p{1, 2, 0, 0};
    EXPECT_EQ(p.degree(), 1);
    EXPECT_TRUE(UPoly{}.is_zero());
    EXPECT_TRUE((UPoly{0, 0}).is_zero());
    EXPECT_EQ(UPoly({1, 1}) * UPoly({1, -1}), UPoly({1, 0, -1}));
    EXPECT_EQ(UPoly({1, 2, 3}).derivative(), UPoly({2, 6}));
    EXPECT_EQ(UPoly({0, 5, 1}).divide_by_u(), UPoly({5, 1}));
    EXPECT_THROW(UPoly({1, 1}).divide_by_u(), structural_error);
}

TEST(UPolyOps, DivideByOneMinus4u) {
    const UPoly q{3, -1, 7};
    const UPoly p = q * UPoly{1, -4};
    EXPECT_TRUE(p.divisible_by_one_minus_4u());
    EXPECT_EQ(p.divide_by_one_minus_4u(), q);
    EXPECT_FALSE(q.divisible_by_one_minus_4u());
    EXPECT_THROW(q.divide_by_one_minus_4u(), structural_error);
}

TEST(UPolyOps, SubstituteV) {
    // u = (1 - v)/4, so u^2 = (1 - 2v + v^2)/16
    EXPECT_EQ(UPoly({0, 0, 1}).substitute_v(), UPoly({BigRational(1, 16), BigRational(-1, 8), BigRational(1, 16)}));
}

TEST(RadicalSumNorm, MergesAndCancels) {
    const RadicalSum a{RadicalTerm(0, UPoly{1}, -1)};
    const RadicalSum b{RadicalTerm(0, UPoly{-1}, -1)};
    EXPECT_TRUE(radical_add(a, b).is_zero());
    EXPECT_EQ(radical_add(a, RadicalSum{}), a);
    const RadicalSum k2 = radical_add(RadicalSum::constant(BigRational(-1, 2)),
                                      RadicalSum{RadicalTerm(0, UPoly::constant(BigRational(1, 2)), -1)});
    EXPECT_EQ(k2, k2_initial_form());
    EXPECT_EQ(k2.terms().size(), 2u);
}

TEST(RadicalSumNorm, SameFunctionSameForm) {
    // (1-4u)^(-3/2) * (1 - 4u) is (1-4u)^(-1/2)
    const RadicalSum a{RadicalTerm(0, UPoly{1, -4}, -3)};
    const RadicalSum b{RadicalTerm(0, UPoly{1}, -1)};
    EXPECT_EQ(a, b);
    // u + (1-4u)/4 = 1/4
    const RadicalSum c{RadicalTerm(0, UPoly{0, 1}, 0), RadicalTerm(0, UPoly{BigRational(1, 4)}, 2)};
    EXPECT_EQ(c, RadicalSum::constant(BigRational(1, 4)));
}

TEST(RadicalDerivative, SpecExamples) {
    EXPECT_TRUE(radical_derivative(RadicalSum::constant(BigRational(-1, 2))).is_zero());
    const RadicalSum z2{RadicalTerm(0, UPoly{0, 1}, 0)};
    EXPECT_EQ(radical_derivative(z2), (RadicalSum{RadicalTerm(1, UPoly{2}, 0)}));
    const RadicalSum half{RadicalTerm(0, UPoly{BigRational(1, 2)}, -1)};
    EXPECT_EQ(radical_derivative(half), (RadicalSum{RadicalTerm(1, UPoly{2}, -3)}));
}

TEST(RadicalDerivative, MatchesFiniteDifference) {
    const RadicalSum f = radical_add(k2_initial_form(), odd_sample());
    const RadicalSum df = radical_derivative(f);
    for (double z : {0.1, 0.27, 0.41}) {
        const double h = 1e-6;
        const double fd = (radical_eval(f, z + h) - radical_eval(f, z - h)) / (2 * h);
        EXPECT_LT(rel(radical_eval(df, z), fd), 1e-7) << z;
    }
}

TEST(RadicalIntegrate, SpecExamples) {
    EXPECT_TRUE(radical_integrate(RadicalSum{}).is_zero());
    const RadicalSum f{RadicalTerm(1, UPoly{1}, -1)};
    const RadicalSum expected{RadicalTerm(0, UPoly{BigRational(1, 4)}, 0), RadicalTerm(0, UPoly{BigRational(-1, 4)}, 1)};
    EXPECT_EQ(radical_integrate(f), expected);
    const RadicalSum z3{RadicalTerm(1, UPoly{0, 1}, 0)};
    EXPECT_EQ(radical_integrate(z3), (RadicalSum{RadicalTerm(0, UPoly{0, 0, BigRational(1, 4)}, 0)}));
}

TEST(RadicalIntegrate, RoundTrip) {
    const RadicalSum f = odd_sample();
    EXPECT_EQ(radical_derivative(radical_integrate(f)), f);
    const RadicalSum g{RadicalTerm(1, UPoly{1, 10, 4}, -7), RadicalTerm(1, UPoly{0, 1, 1}, -13)};
    EXPECT_EQ(radical_derivative(radical_integrate(g)), g);
}

TEST(RadicalIntegrate, VanishesAtZero) { EXPECT_EQ(radical_eval(radical_integrate(odd_sample()), 0.0), 0.0); }

TEST(RadicalIntegrate, Errors) {
    EXPECT_THROW(radical_integrate(k2_initial_form()), parity_error);
    // z (1-4u)^(-1) integrates to a logarithm.
    EXPECT_THROW(radical_integrate(RadicalSum{RadicalTerm(1, UPoly{1}, -2)}), structural_error);
}

TEST(RadicalMulTerm, SpecExamples) {
    const RadicalSum f = k2_initial_form();
    EXPECT_EQ(radical_mul_term(f, 0, UPoly{1}, 0), f);
    const RadicalSum z2{RadicalTerm(0, UPoly{0, 1}, 0)};
    EXPECT_EQ(radical_mul_term(z2, 0, UPoly{0, 1}, 0), (RadicalSum{RadicalTerm(0, UPoly{0, 0, 1}, 0)}));
    const RadicalSum r{RadicalTerm(0, UPoly{1}, -1)};
    EXPECT_EQ(radical_mul_term(r, 0, UPoly{0, 1}, -6), (RadicalSum{RadicalTerm(0, UPoly{0, 1}, -7)}));
    // z * z folds into u
    const RadicalSum z{RadicalTerm(1, UPoly{1}, 0)};
    EXPECT_EQ(radical_mul_term(z, 1, UPoly{1}, 0), (RadicalSum{RadicalTerm(0, UPoly{0, 1}, 0)}));
}

TEST(RadicalEval, SpecExamples) {
    EXPECT_EQ(radical_eval(k2_initial_form(), 0.0), 0.0);
    EXPECT_NEAR(radical_eval(k2_initial_form(), 0.3), 0.125, 1e-15);
    EXPECT_EQ(radical_eval(RadicalSum{}, 0.37), 0.0);
    EXPECT_THROW(radical_eval(k2_initial_form(), 0.5), domain_error);
    EXPECT_THROW(radical_eval(k2_initial_form(), -0.6), domain_error);
    EXPECT_NO_THROW(radical_eval(RadicalSum{RadicalTerm(0, UPoly{1}, 1)}, 0.5));
}

TEST(RadicalEval, Homomorphism) {
    const RadicalSum f = k2_initial_form();
    const RadicalSum g = odd_sample();
    for (double z : {0.1, 0.3, 0.45}) {
        const double lhs = radical_eval(radical_add(f, g), z);
        const double rhs = radical_eval(f, z) + radical_eval(g, z);
        EXPECT_LT(rel(lhs, rhs), 1e-12) << z;
    }
}

TEST(RadicalTaylor, SpecExamples) {
    const auto c = radical_taylor(RadicalSum{RadicalTerm(0, UPoly{1}, -1)}, 3);
    EXPECT_EQ(c, (std::vector<BigRational>{1, 2, 6}));
    EXPECT_EQ(radical_taylor(k2_initial_form(), 2)[1], BigRational(1));
    EXPECT_EQ(radical_taylor(RadicalSum::constant(1), 4), (std::vector<BigRational>{1, 0, 0, 0}));
    EXPECT_THROW(radical_taylor(odd_sample(), 3), parity_error);
}

TEST(RadicalTaylor, CentralBinomials) {
    const auto c = radical_taylor(RadicalSum{RadicalTerm(0, UPoly{1}, -1)}, 12);
    for (unsigned j = 0; j < 12; ++j) EXPECT_EQ(c[j], BigRational(binomial(2 * j, j))) << j;
}

TEST(RadicalTaylor, ConsistentWithEval) {
    const RadicalSum f{RadicalTerm(0, UPoly{1, 37, 118, 27}, -13), RadicalTerm(0, UPoly{BigRational(-1, 2)}, 0)};
    const auto c = radical_taylor(f, 16);
    const double z = 0.05;
    double sum = 0.0, zp = 1.0;
    for (const auto& ck : c) {
        sum += to_double(ck) * zp;
        zp *= z * z;
    }
    EXPECT_LT(rel(sum, radical_eval(f, z)), 1e-12);
}

TEST(Render, Format) {
    EXPECT_EQ(render(UPoly{1, 37, 118, 27}), "1 + 37u + 118u^2 + 27u^3");
    EXPECT_EQ(render_term(2, UPoly{1, 37, 118, 27}, -13), "z^2*(1 + 37u + 118u^2 + 27u^3)*(1-4u)^(-13/2)");
    EXPECT_EQ(render(UPoly{BigRational(-1, 2), 0, -1}), "-1/2 - u^2");
    EXPECT_EQ(render(UPoly{0, BigRational(3, 4)}), "(3/4)u");
    EXPECT_EQ(render(k2_initial_form()), "(-1/2) + (1/2)*(1-4u)^(-1/2)");
    EXPECT_EQ(render(RadicalSum{}), "0");
}

TEST(Exact, SharedAcrossThreads) {
    const RadicalSum f = odd_sample();
    std::vector<RadicalSum> out(4);
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < out.size(); ++i)
        pool.emplace_back([&, i] { out[i] = radical_derivative(radical_integrate(f)); });
    for (auto& t : pool) t.join();
    for (const auto& r : out) EXPECT_EQ(r, f);
}
