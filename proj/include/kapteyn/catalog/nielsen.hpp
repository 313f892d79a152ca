#pragma once

// Gamma-series forms of the Nielsen-type Kapteyn sums and the cosine-power
// integral behind them.

#include <cmath>
#include <limits>
#include <numbers>

#include "kapteyn/errors.hpp"
#include "kapteyn/specfun.hpp"

namespace kapteyn::catalog {

enum class NielsenKind { even, odd };

namespace detail {

// First index whose term survives the 1/Gamma poles.
inline long nielsen_first_index(NielsenKind kind, double nu) {
    if (!specfun::detail::is_integer(nu)) return 0;
    const long v = static_cast<long>(nu);
    if (kind == NielsenKind::even) return std::max(0L, std::abs(v));
    return std::max({0L, v - 1, -v});
}

}  // namespace detail

/// even: (1/sqrt pi) sum n! Gamma(n+1/2) (2x)^(2n) / (Gamma(n+1+nu) Gamma(n+1-nu))
/// odd:  (1/sqrt pi) sum n! Gamma(n+3/2) (2x)^(2n+1) / (Gamma(n+1+nu) Gamma(n+2-nu))
inline double nielsen_rhs(NielsenKind kind, double nu, double x, const specfun::AccuracyBudget& budget = {}) {
    budget.validate();
    if (!std::isfinite(nu)) throw domain_error("nielsen_rhs: nu must be finite");
    if (!(std::abs(x) < 0.5)) throw domain_error("nielsen_rhs: |x| < 1/2 required");
    using specfun::detail::recip_gamma_ld;
    using specfun::detail::gamma_ld;
    const bool even = kind == NielsenKind::even;
    const long n0 = detail::nielsen_first_index(kind, nu);
    const long double nul = nu;
    const long double y = 2.0L * static_cast<long double>(x);
    const long double y2 = y * y;
    const long double shift = even ? 0.5L : 1.5L;

    // Leading term at n0, then the term ratio
    //   (n+1)(n+shift)(2x)^2 / ((n+1+nu)(n+1+[odd]-nu)).
    const long double nn0 = static_cast<long double>(n0);
    long double term = gamma_ld(nn0 + 1.0L) * gamma_ld(nn0 + shift) * std::pow(y, 2.0L * nn0 + (even ? 0.0L : 1.0L)) *
                       recip_gamma_ld(nn0 + 1.0L + nul) * recip_gamma_ld(nn0 + (even ? 1.0L : 2.0L) - nul);
    specfun::detail::CompensatedSum<long double> acc;
    for (long n = n0;; ++n) {
        acc.add(term);
        const long double nl = n;
        if (nl > std::abs(nul) + 1.0L && std::abs(term) <= budget.rel_tol * 1e-3L * std::abs(acc.value())) break;
        if (static_cast<std::size_t>(n - n0 + 1) >= budget.max_terms)
            throw budget_exhausted("nielsen_rhs: series did not converge within max_terms",
                                   static_cast<double>(acc.value() / std::sqrt(std::numbers::pi_v<long double>)),
                                   static_cast<std::size_t>(n - n0 + 1));
        term *= (nl + 1.0L) * (nl + shift) * y2 / ((nl + 1.0L + nul) * (nl + (even ? 1.0L : 2.0L) - nul));
    }
    return static_cast<double>(acc.value() / std::sqrt(std::numbers::pi_v<long double>));
}

/// int_0^{pi/2} cos^(nu-1)(t) cos(a t) dt
///   = pi Gamma(nu+1) / (2^nu nu Gamma((nu+1+a)/2) Gamma((nu+1-a)/2)).
inline double nielsen_integral(double nu, double a) {
    if (!(nu > 0.0) || !std::isfinite(nu) || !std::isfinite(a))
        throw domain_error("nielsen_integral: nu > 0 and finite a required");
    using specfun::detail::gamma_ld;
    using specfun::detail::recip_gamma_ld;
    const long double nl = nu;
    const long double al = a;
    const long double v = std::numbers::pi_v<long double> * gamma_ld(nl + 1.0L) / (std::pow(2.0L, nl) * nl) *
                          recip_gamma_ld((nl + 1.0L + al) / 2.0L) * recip_gamma_ld((nl + 1.0L - al) / 2.0L);
    return static_cast<double>(v);
}

}  // namespace kapteyn::catalog
