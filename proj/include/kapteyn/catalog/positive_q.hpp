#pragma once

// K2(z, q) = sum_{n>=1} n^(2q) J_n(2nz)^2 for integer q >= 0, generated
// exactly from K2(z, 0) by a third-order differential recurrence.

#include <cmath>
#include <cstddef>
#include <deque>
#include <mutex>
#include <shared_mutex>

#include "kapteyn/bigrational.hpp"
#include "kapteyn/errors.hpp"
#include "kapteyn/exact.hpp"

namespace kapteyn::catalog {

/// sum_{k=0..n} (-1)^k C(2n, k) (n-k)^(2(n+q)) / (n!)^2: the coefficient of z^(2n) in K2(z, q).
inline BigRational coeff_second_kind_pos(long q, long n) {
    if (q < 0) throw domain_error("coeff_second_kind_pos: q >= 0 required");
    if (n < 1) throw domain_error("coeff_second_kind_pos: n >= 1 required");
    BigInt s = 0;
    const auto e = static_cast<unsigned>(2 * (n + q));
    for (long k = 0; k <= n; ++k) {
        BigInt t = binomial(static_cast<unsigned>(2 * n), static_cast<unsigned>(k)) *
                   boost::multiprecision::pow(BigInt(n - k), e);
        s += (k % 2 == 0) ? t : BigInt(-t);
    }
    const BigInt f = factorial(static_cast<unsigned>(n));
    return BigRational(s, f * f);
}

/// -1/2 + 1/(2 sqrt(1 - 4z^2))
inline double k2_q0(double z) {
    if (!(std::abs(z) < 0.5)) throw domain_error("k2_q0: |z| < 1/2 required");
    const double v = 1.0 - 4.0 * z * z;
    // Written as a single fraction to avoid cancellation near z = 0.
    const double s = std::sqrt(v);
    return (1.0 - s) / (2.0 * s);
}

/// K2(z, q) in exact form. For q >= 1 the symbolic part is the single term
/// z^2 P_q(z^2) (1 - 4z^2)^(-(6q+1)/2); at q = 0 it is the two-term initial
/// condition and `p` is left empty.
struct K2Family {
    long q = 0;
    exact::RadicalSum symbolic;
    exact::UPoly p;
};

inline K2Family k2_initial() {
    using exact::RadicalTerm;
    using exact::UPoly;
    return {0, exact::RadicalSum{RadicalTerm(0, UPoly::constant(BigRational(-1, 2)), 0),
                                 RadicalTerm(0, UPoly::constant(BigRational(1, 2)), -1)},
            {}};
}

/// One step q -> q + 1:
///   K2(z, q+1) = [z^2/(4v) D^2 + z(1 - 8z^2)/(4v^2) D + 2z^2(1 + 2z^2)/v^3] K2(z, q)
///              - (4/sqrt v) int_0^z w (1 + 10w^2 + 4w^4) v(w)^(-7/2) K2(w, q) dw,
/// with v = 1 - 4z^2 and D = d/dz.
inline K2Family next_k2(const K2Family& f) {
    using exact::UPoly;
    const exact::RadicalSum& k = f.symbolic;
    const exact::RadicalSum d1 = exact::radical_derivative(k);
    const exact::RadicalSum d2 = exact::radical_derivative(d1);

    const auto t1 = exact::radical_mul_term(d2, 0, UPoly{0, BigRational(1, 4)}, -2);
    const auto t2 = exact::radical_mul_term(d1, 1, UPoly{BigRational(1, 4), -2}, -4);
    const auto t3 = exact::radical_mul_term(k, 0, UPoly{0, 2, 4}, -6);
    const auto integrand = exact::radical_mul_term(k, 1, UPoly{1, 10, 4}, -7);
    const auto t4 = exact::radical_mul_term(exact::radical_integrate(integrand), 0, UPoly{-4}, -1);

    const exact::RadicalSum sum = exact::radical_add(exact::radical_add(t1, t2), exact::radical_add(t3, t4));

    const long q = f.q + 1;
    const int target = -static_cast<int>(6 * q + 1);
    if (sum.terms().size() != 1) throw structural_error("next_k2: result is not a single radical term");
    const auto& term = sum.terms().front();
    if (term.parity != 0 || term.half_exp % 2 == 0 || term.half_exp < target)
        throw structural_error("next_k2: result is not of the form P(u) (1-4u)^(-(6q+1)/2)");
    const UPoly full = term.poly * UPoly::one_minus_4u_pow((term.half_exp - target) / 2);
    if (full.coeff(0) != 0) throw structural_error("next_k2: K2(0, q) does not vanish");

    K2Family out;
    out.q = q;
    out.p = full.divide_by_u();
    out.symbolic = exact::RadicalSum{exact::RadicalTerm(0, full, target)};
    return out;
}

/// Memoized K2 chain. Readers share the lock; extension is exclusive.
class K2Chain {
public:
    K2Chain() { chain_.push_back(k2_initial()); }

    K2Family get(long q) {
        if (q < 0) throw domain_error("K2Chain: q >= 0 required");
        const auto idx = static_cast<std::size_t>(q);
        {
            std::shared_lock lock(mutex_);
            if (idx < chain_.size()) return chain_[idx];
        }
        std::unique_lock lock(mutex_);
        while (chain_.size() <= idx) chain_.push_back(next_k2(chain_.back()));
        return chain_[idx];
    }

private:
    std::shared_mutex mutex_;
    std::deque<K2Family> chain_;
};

inline K2Chain& k2_chain() {
    static K2Chain chain;
    return chain;
}

/// K2(z, q) for |z| < 1/2.
inline double eval_k2_pos(long q, double z) {
    if (q < 0) throw domain_error("eval_k2_pos: q >= 0 required");
    if (!(std::abs(z) < 0.5)) throw domain_error("eval_k2_pos: |z| < 1/2 required");
    if (q == 0) return k2_q0(z);
    return exact::radical_eval(k2_chain().get(q).symbolic, z);
}

}  // namespace kapteyn::catalog
