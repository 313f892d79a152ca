#pragma once

// Kapteyn series with inverse powers of n:
//   first kind   sum_{n>=1} J_{2n}(2nz) / n^(2p)
//   second kind  sum_{n>=1} J_n(nz)^2 / n^(2p)
// as power series in u = z^2. For integer p both are polynomials.

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "kapteyn/bigrational.hpp"
#include "kapteyn/errors.hpp"
#include "kapteyn/exact.hpp"
#include "kapteyn/specfun.hpp"

namespace kapteyn::catalog {

using specfun::AccuracyBudget;

namespace detail {

// The alternating coefficient sums cancel by many orders of magnitude, so
// non-integer p is handled in 50-digit binary floating point.
using Wide = boost::multiprecision::cpp_bin_float_50;

inline Wide wide_factorial(long n) {
    Wide f = 1;
    for (long k = 2; k <= n; ++k) f *= k;
    return f;
}

inline void require_positive_finite(double p, const char* who) {
    if (!(p > 0.0) || !std::isfinite(p)) throw domain_error(std::string(who) + ": p > 0 required");
}

inline bool integral_p(double p) { return specfun::detail::is_integer(p); }

inline constexpr long max_power_terms = 400;

}  // namespace detail

// ---------------------------------------------------------------------------
// First kind

/// sum_{j=1..k} (-1)^(j+k) j^(2(k-p)) / ((k-j)! (k+j)!), exact for integer p.
inline BigRational coeff_first_kind(long p, long k) {
    if (p < 1 || k < 1 || k > p) throw domain_error("coeff_first_kind: 1 <= k <= p required");
    BigRational s = 0;
    for (long j = 1; j <= k; ++j) {
        BigRational t = kapteyn::pow(BigRational(j), 2 * (k - p)) /
                        BigRational(factorial(static_cast<unsigned>(k - j)) * factorial(static_cast<unsigned>(k + j)));
        s += ((j + k) % 2 == 0) ? t : BigRational(-t);
    }
    return s;
}

/// The same coefficient for real p and any k >= 1.
inline double coeff_first_kind_real(double p, long k) {
    detail::require_positive_finite(p, "coeff_first_kind_real");
    if (k < 1) throw domain_error("coeff_first_kind_real: k >= 1 required");
    using detail::Wide;
    Wide s = 0;
    const Wide expo = 2 * (Wide(k) - Wide(p));
    for (long j = 1; j <= k; ++j) {
        Wide t = boost::multiprecision::pow(Wide(j), expo) /
                 (detail::wide_factorial(k - j) * detail::wide_factorial(k + j));
        s += ((j + k) % 2 == 0) ? t : Wide(-t);
    }
    return s.convert_to<double>();
}

/// Polynomial in u for integer p.
inline exact::UPoly first_kind_poly(long p) {
    std::vector<BigRational> c(static_cast<std::size_t>(p) + 1, BigRational(0));
    for (long k = 1; k <= p; ++k) c[static_cast<std::size_t>(k)] = coeff_first_kind(p, k);
    return exact::UPoly(std::move(c));
}

namespace detail {

// Sum c_k u^k, stopping after three consecutive terms below rel_tol |partial|.
template <typename Coeff>
double power_series_in_u(Coeff coeff, double u, const AccuracyBudget& budget, const char* who) {
    specfun::detail::CompensatedSum<double> acc;
    double upow = 1.0;
    int small = 0;
    const long limit = std::min<long>(max_power_terms, static_cast<long>(budget.max_terms));
    for (long k = 1; k <= limit; ++k) {
        upow *= u;
        const double t = coeff(k) * upow;
        acc.add(t);
        if (std::abs(t) <= budget.rel_tol * std::abs(acc.value()))
            ++small;
        else
            small = 0;
        if (small >= 3 || upow == 0.0) return acc.value();
    }
    throw budget_exhausted(std::string(who) + ": power series did not settle", acc.value(),
                           static_cast<std::size_t>(limit));
}

}  // namespace detail

/// sum_{n>=1} J_{2n}(2nz)/n^(2p) for |z| < 1/2.
inline double eval_first_kind(double p, double z, const AccuracyBudget& budget = {}) {
    budget.validate();
    detail::require_positive_finite(p, "eval_first_kind");
    if (!(std::abs(z) < 0.5)) throw domain_error("eval_first_kind: |z| < 1/2 required");
    const double u = z * z;
    if (u == 0.0) return 0.0;
    if (detail::integral_p(p)) {
        const auto poly = first_kind_poly(static_cast<long>(p));
        return exact::radical_eval(exact::RadicalSum{exact::RadicalTerm(0, poly, 0)}, z);
    }
    return detail::power_series_in_u([p](long k) { return coeff_first_kind_real(p, k); }, u, budget,
                                     "eval_first_kind");
}

// ---------------------------------------------------------------------------
// Second kind with inverse powers

/// wallis_ratio(k) * sum_{j=0..k-1} (-1)^j (k-j)^(2(k-p)) / (j! (2k-j)!), exact for integer p.
inline BigRational coeff_second_kind_neg_exact(long p, long k) {
    if (p < 1) throw domain_error("coeff_second_kind_neg: p >= 1 required");
    if (k < 1) throw domain_error("coeff_second_kind_neg: k >= 1 required");
    BigRational s = 0;
    for (long j = 0; j < k; ++j) {
        BigRational t = kapteyn::pow(BigRational(k - j), 2 * (k - p)) /
                        BigRational(factorial(static_cast<unsigned>(j)) * factorial(static_cast<unsigned>(2 * k - j)));
        s += (j % 2 == 0) ? t : BigRational(-t);
    }
    return specfun::wallis_ratio(k) * s;
}

inline double coeff_second_kind_neg(double p, long k) {
    detail::require_positive_finite(p, "coeff_second_kind_neg");
    if (k < 1) throw domain_error("coeff_second_kind_neg: k >= 1 required");
    if (detail::integral_p(p)) return to_double(coeff_second_kind_neg_exact(static_cast<long>(p), k));
    using detail::Wide;
    Wide s = 0;
    const Wide expo = 2 * (Wide(k) - Wide(p));
    for (long j = 0; j < k; ++j) {
        Wide t = boost::multiprecision::pow(Wide(k - j), expo) /
                 (detail::wide_factorial(j) * detail::wide_factorial(2 * k - j));
        s += (j % 2 == 0) ? t : Wide(-t);
    }
    Wide wallis = 1;
    for (long i = 1; i <= k; ++i) wallis *= Wide(2 * i - 1) / (2 * i);
    return (wallis * s).convert_to<double>();
}

/// Polynomial in u for integer p; coefficients beyond k = p vanish.
inline exact::UPoly second_kind_neg_poly(long p) {
    std::vector<BigRational> c(static_cast<std::size_t>(p) + 1, BigRational(0));
    for (long k = 1; k <= p; ++k) c[static_cast<std::size_t>(k)] = coeff_second_kind_neg_exact(p, k);
    return exact::UPoly(std::move(c));
}

/// sum_{n>=1} J_n(nz)^2 / n^(2p). Integer p: |z| < 1; otherwise |z| < 1/2.
inline double eval_second_kind_neg(double p, double z, const AccuracyBudget& budget = {}) {
    budget.validate();
    detail::require_positive_finite(p, "eval_second_kind_neg");
    const bool integral = detail::integral_p(p);
    if (integral && !(std::abs(z) < 1.0)) throw domain_error("eval_second_kind_neg: |z| < 1 required");
    if (!integral && !(std::abs(z) < 0.5))
        throw domain_error("eval_second_kind_neg: |z| < 1/2 required for non-integer p");
    const double u = z * z;
    if (u == 0.0) return 0.0;
    if (integral) {
        const auto poly = second_kind_neg_poly(static_cast<long>(p));
        return to_double(poly(BigRational(z) * BigRational(z)));
    }
    return detail::power_series_in_u([p](long k) { return coeff_second_kind_neg(p, k); }, u, budget,
                                     "eval_second_kind_neg");
}

// ---------------------------------------------------------------------------
// xi_k(p)

inline double xi(int k, double p) {
    switch (k) {
        case 2:
            return -1.0 / 16.0 + std::pow(4.0, -(1.0 + p));
        case 3:
            return (5.0 - std::pow(2.0, 7.0 - 2.0 * p) + std::pow(3.0, 5.0 - 2.0 * p)) / 768.0;
        case 4:
            return (-7.0 + std::pow(2.0, 13.0 - 4.0 * p) + 7.0 * std::pow(2.0, 7.0 - 2.0 * p) -
                    std::pow(9.0, 4.0 - p)) /
                   18432.0;
        case 5:
            return (42.0 - std::pow(2.0, 21.0 - 4.0 * p) - 3.0 * std::pow(2.0, 13.0 - 2.0 * p) +
                    std::pow(5.0, 9.0 - 2.0 * p) + std::pow(9.0, 6.0 - p)) /
                   2949120.0;
        default:
            throw domain_error("xi: k must be in 2..5");
    }
}

inline BigRational xi_exact(int k, long p) {
    const auto pw = [](long base, long e) { return kapteyn::pow(BigRational(base), e); };
    switch (k) {
        case 2:
            return BigRational(-1, 16) + pw(4, -(1 + p));
        case 3:
            return (BigRational(5) - pw(2, 7 - 2 * p) + pw(3, 5 - 2 * p)) / 768;
        case 4:
            return (BigRational(-7) + pw(2, 13 - 4 * p) + 7 * pw(2, 7 - 2 * p) - pw(9, 4 - p)) / 18432;
        case 5:
            return (BigRational(42) - pw(2, 21 - 4 * p) - 3 * pw(2, 13 - 2 * p) + pw(5, 9 - 2 * p) + pw(9, 6 - p)) /
                   2949120;
        default:
            throw domain_error("xi: k must be in 2..5");
    }
}

/// (z d/dz)^2 F_p = 4 (1 - z^2) F_{p-1} on the first-kind polynomials.
inline bool verify_recurrence_eq43(long p) {
    if (p < 2) throw domain_error("verify_recurrence_eq43: p >= 2 required");
    const exact::UPoly fp = first_kind_poly(p);
    std::vector<BigRational> lhs(fp.coefficients().size());
    for (std::size_t k = 0; k < lhs.size(); ++k)
        lhs[k] = fp.coefficients()[k] * BigRational(4 * static_cast<long>(k * k));
    const exact::UPoly rhs = exact::UPoly{4, -4} * first_kind_poly(p - 1);
    return exact::UPoly(std::move(lhs)) == rhs;
}

}  // namespace kapteyn::catalog
