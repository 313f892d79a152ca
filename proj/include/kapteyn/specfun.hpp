#pragma once

// Real-valued special-function kernel: gamma family, double factorials and
// Bessel functions of the first kind for real order and real argument.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "kapteyn/bigrational.hpp"
#include "kapteyn/errors.hpp"

namespace kapteyn::specfun {

/// Truncation policy shared by every infinite sum in the library.
struct AccuracyBudget {
    double rel_tol = 1e-13;
    std::size_t max_terms = 10000;

    AccuracyBudget() = default;
    AccuracyBudget(double tol, std::size_t terms) : rel_tol(tol), max_terms(terms) { validate(); }

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol < 1.0))
            throw domain_error("AccuracyBudget: rel_tol must lie in (0, 1)");
        if (max_terms < 1) throw domain_error("AccuracyBudget: max_terms must be >= 1");
    }
};

/// Largest argument for which Gamma(x) is representable as a double.
inline constexpr double max_gamma_arg = 171.62437695630272;

namespace detail {

inline constexpr long double pi_ld = std::numbers::pi_v<long double>;

inline bool is_integer(double x) { return std::isfinite(x) && x == std::nearbyint(x); }

/// sin(pi x) with exact zeros at the integers.
inline long double sin_pi(long double x) {
    long double r = std::fmod(x, 2.0L);
    if (r > 1.0L)
        r -= 2.0L;
    else if (r < -1.0L)
        r += 2.0L;
    if (r > 0.5L)
        r = 1.0L - r;
    else if (r < -0.5L)
        r = -1.0L - r;
    return std::sin(pi_ld * r);
}

// Lanczos approximation, g = 7, nine terms; about 15 significant digits.
inline constexpr long double lanczos_g = 7.0L;
inline constexpr long double lanczos_coeffs[9] = {
    0.99999999999980993227684700473478L, 676.520368121885098567009190444019L,
    -1259.13921672240287047156078755283L, 771.3234287776530788486528258894L,
    -176.61502916214059906584551354L,     12.507343278686904814458936853L,
    -0.13857109526572011689554707L,       9.984369578019570859563e-6L,
    1.50563273514931155834e-7L};

// Gamma(x) for x >= 0.5. The power is split so that t^(x-1/2) e^(-t) does
// not overflow before the exponential is applied.
inline long double lanczos_gamma(long double x) {
    x -= 1.0L;
    long double a = lanczos_coeffs[0];
    for (int i = 1; i < 9; ++i) a += lanczos_coeffs[i] / (x + i);
    const long double t = x + lanczos_g + 0.5L;
    const long double half_pow = std::pow(t, (x + 0.5L) / 2.0L);
    return std::sqrt(2.0L * pi_ld) * half_pow * (std::exp(-t) * half_pow) * a;
}

// The embedded coefficients drift to 1e-13 near x = 170, so larger
// arguments are brought down to (2, 3] by the recurrence Gamma(y+1) = y Gamma(y).
inline long double gamma_positive(long double x) {
    long double prod = 1.0L;
    while (x > 3.0L) {
        x -= 1.0L;
        prod *= x;
    }
    return prod * lanczos_gamma(x);
}

inline long double gamma_ld(long double x) {
    if (x < 0.5L) return pi_ld / (sin_pi(x) * gamma_positive(1.0L - x));
    return gamma_positive(x);
}

/// 1/Gamma(x), zero at the poles.
inline long double recip_gamma_ld(long double x) {
    if (x <= 0.0L && x == std::nearbyint(x)) return 0.0L;
    if (x > 1750.0L) return 0.0L;
    if (x < 0.5L) return sin_pi(x) * gamma_positive(1.0L - x) / pi_ld;
    if (x == std::nearbyint(x) && x <= 171.0L) {
        long double f = 1.0L;
        for (long k = 2; k < static_cast<long>(x); ++k) f *= k;
        return 1.0L / f;
    }
    return 1.0L / gamma_positive(x);
}

/// Neumaier's variant of Kahan summation.
template <typename Real>
struct CompensatedSum {
    Real sum = 0;
    Real carry = 0;

    void add(Real v) {
        const Real t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    Real value() const { return sum + carry; }
};

struct SeriesResult {
    long double value = 0;
    long double abs_sum = 0;
    std::size_t terms = 0;
    bool exhausted = false;
};

// (x/2)^order / Gamma(order + 1). Non-negative orders use a running product
// so large orders neither overflow nor lose the leading power.
inline long double bessel_leading_term(long double order, long double half) {
    if (order < 0.0L) return std::pow(half, order) * recip_gamma_ld(order + 1.0L);
    const long double whole = std::floor(order);
    const long double frac = order - whole;
    long double lead = (frac == 0.0L ? 1.0L : std::pow(half, frac)) * recip_gamma_ld(frac + 1.0L);
    const auto m = static_cast<long>(whole);
    for (long i = 1; i <= m; ++i) {
        lead *= half / (frac + i);
        if (lead == 0.0L) break;
    }
    return lead;
}

// Ascending power series for J_order(x), x > 0, evaluated in extended
// precision with compensated accumulation.
inline SeriesResult bessel_series(double order, double x, const AccuracyBudget& budget) {
    constexpr long double eps = std::numeric_limits<long double>::epsilon();
    const long double nu = order;
    const long double half = static_cast<long double>(x) / 2.0L;
    const long double h2 = half * half;

    SeriesResult r;
    CompensatedSum<long double> acc;
    long double term = bessel_leading_term(nu, half);
    for (std::size_t k = 0;; ++k) {
        acc.add(term);
        r.abs_sum += std::abs(term);
        r.terms = k + 1;
        const long double shifted = nu + static_cast<long double>(k) + 1.0L;
        const long double ratio = -h2 / ((static_cast<long double>(k) + 1.0L) * shifted);
        const bool decreasing = shifted > 0.0L && std::abs(ratio) < 1.0L;
        const long double sum = acc.value();
        if (decreasing &&
            std::abs(term) <= std::max<long double>(budget.rel_tol * std::abs(sum), eps * r.abs_sum))
            break;
        if (r.terms >= budget.max_terms) {
            r.exhausted = true;
            break;
        }
        term *= ratio;
    }
    r.value = acc.value();
    return r;
}

// Backward recurrence for J_0..J_nmax at x > 0 in extended precision,
// normalized by J_0 + 2 sum J_2k = 1.
inline std::vector<long double> miller(std::size_t n_max, double x) {
    const double xc = std::ceil(x);
    std::size_t start = n_max + static_cast<std::size_t>(std::max(20.0, xc));
    // The start must also clear the turning point at order ~ x.
    start = std::max(start, static_cast<std::size_t>(std::ceil(x + 25.0 + 12.0 * std::cbrt(x))));
    if (start % 2 != 0) ++start;

    constexpr long double big = 1e2000L;
    constexpr long double rescale = 1e-2000L;
    const long double xl = x;
    std::vector<long double> out(n_max + 1, 0.0L);
    CompensatedSum<long double> norm;
    long double upper = 0.0L;      // J_{k+1}
    long double current = 1e-30L;  // J_k, k = start
    norm.add(2.0L * current);
    for (std::size_t k = start; k >= 1; --k) {
        const long double lower = (2.0L * static_cast<long double>(k) / xl) * current - upper;
        upper = current;
        current = lower;
        const std::size_t idx = k - 1;
        if (idx <= n_max) out[idx] = current;
        if (idx % 2 == 0) norm.add((idx == 0 ? 1.0L : 2.0L) * current);
        if (std::abs(current) > big) {
            current *= rescale;
            upper *= rescale;
            norm.sum *= rescale;
            norm.carry *= rescale;
            for (std::size_t i = idx; i <= n_max; ++i) out[i] *= rescale;
        }
    }
    const long double total = norm.value();
    for (auto& v : out) v /= total;
    return out;
}

inline double miller_single(long n, double x) {
    return static_cast<double>(miller(static_cast<std::size_t>(n), x)[static_cast<std::size_t>(n)]);
}

}  // namespace detail

/// Gamma(x). Lanczos approximation for x >= 1/2, reflection below.
inline double gamma_fn(double x) {
    if (std::isnan(x)) throw domain_error("gamma_fn: NaN argument");
    if (x <= 0.0 && detail::is_integer(x)) throw pole_error("gamma_fn: pole at non-positive integer");
    if (x > max_gamma_arg) throw overflow_error("gamma_fn: result exceeds the double range");
    if (detail::is_integer(x) && x <= 171.0) {
        long double f = 1.0L;
        for (long k = 2; k < static_cast<long>(x); ++k) f *= k;
        return static_cast<double>(f);
    }
    const long double g = detail::gamma_ld(x);
    if (!std::isfinite(static_cast<double>(g))) throw overflow_error("gamma_fn: result exceeds the double range");
    return static_cast<double>(g);
}

/// 1/Gamma(x); defined everywhere and exactly zero at the poles of Gamma.
inline double recip_gamma(double x) {
    if (std::isnan(x)) return x;
    return static_cast<double>(detail::recip_gamma_ld(x));
}

/// n!! with (-1)!! = 0!! = 1.
inline BigInt double_factorial(long n) {
    if (n < -1) throw domain_error("double_factorial: n must be >= -1");
    BigInt r = 1;
    for (long k = n; k > 1; k -= 2) r *= k;
    return r;
}

/// (2n-1)!!/(2n)!!, equal to Gamma(n+1/2)/(n! sqrt(pi)).
inline BigRational wallis_ratio(long n) {
    if (n < 0) throw domain_error("wallis_ratio: n must be >= 0");
    return BigRational(double_factorial(2 * n - 1), double_factorial(2 * n));
}

/// J_0(x) .. J_nmax(x) by backward recurrence.
inline std::vector<double> bessel_j_array(long n_max, double x) {
    if (n_max < 1) throw domain_error("bessel_j_array: n_max must be >= 1");
    if (!(x >= 0.0) || !std::isfinite(x)) throw domain_error("bessel_j_array: x must be finite and >= 0");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const auto values = detail::miller(static_cast<std::size_t>(n_max), x);
    std::transform(values.begin(), values.end(), out.begin(), [](long double v) { return static_cast<double>(v); });
    return out;
}

/// J_order(x) for real order and real x.
///
/// The ascending series is summed in extended precision. Integer orders fall
/// back to backward recurrence when the argument is large or the series has
/// cancelled too many digits; non-integer orders in that situation raise
/// budget_exhausted instead of returning an inaccurate value.
inline double bessel_j(double order, double x, const AccuracyBudget& budget = {}) {
    budget.validate();
    if (!std::isfinite(order) || !std::isfinite(x)) throw domain_error("bessel_j: non-finite argument");
    constexpr long double eps = std::numeric_limits<long double>::epsilon();

    const bool integral = detail::is_integer(order);
    if (integral) {
        const long n = static_cast<long>(order);
        const double sign_order = (n < 0 && (-n) % 2 != 0) ? -1.0 : 1.0;
        const long m = n < 0 ? -n : n;
        const double sign_arg = (x < 0.0 && m % 2 != 0) ? -1.0 : 1.0;
        const double ax = std::abs(x);
        if (ax == 0.0) return m == 0 ? 1.0 : 0.0;
        if (ax > 2.0 * (static_cast<double>(m) + 30.0)) return sign_order * sign_arg * detail::miller_single(m, ax);

        const auto s = detail::bessel_series(static_cast<double>(m), ax, budget);
        if (s.exhausted)
            throw budget_exhausted("bessel_j: series did not converge within max_terms",
                                   sign_order * sign_arg * static_cast<double>(s.value), s.terms);
        const long double err = 32.0L * eps * s.abs_sum;
        if (err > budget.rel_tol * std::abs(s.value)) return sign_order * sign_arg * detail::miller_single(m, ax);
        return sign_order * sign_arg * static_cast<double>(s.value);
    }

    if (x < 0.0) throw domain_error("bessel_j: negative argument requires an integer order");
    if (x == 0.0) {
        if (order > 0.0) return 0.0;
        throw domain_error("bessel_j: J_order(0) is unbounded for negative non-integer order");
    }
    const auto s = detail::bessel_series(order, x, budget);
    const double value = static_cast<double>(s.value);
    if (x > 2.0 * (std::abs(order) + 30.0))
        throw budget_exhausted("bessel_j: argument too large for the series at non-integer order", value, s.terms);
    if (s.exhausted) throw budget_exhausted("bessel_j: series did not converge within max_terms", value, s.terms);
    const long double err = 32.0L * eps * s.abs_sum;
    if (err > 100.0L * budget.rel_tol * std::abs(s.value))
        throw budget_exhausted("bessel_j: series cancellation exceeds the requested accuracy", value, s.terms);
    return value;
}

/// sin(pi nu)/(pi nu), with the removable singularity at nu = 0.
inline double sinc_pi(double nu) {
    const double t = std::numbers::pi * nu;
    if (std::abs(nu) < 1e-8) return 1.0 - t * t / 6.0;
    return static_cast<double>(detail::sin_pi(nu)) / t;
}

}  // namespace kapteyn::specfun
