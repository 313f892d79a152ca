#pragma once

// Exact calculus over "radical rational" functions
//
//     f(z) = sum_i  z^{s_i} * P_i(u) * (1 - 4u)^{e_i/2},   u = z^2,
//
// with rational-coefficient polynomials P_i and a parity bit s_i in {0, 1}.
// The class is closed under d/dz, under multiplication by such terms, and
// under integration from 0 of odd members.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kapteyn/bigrational.hpp"
#include "kapteyn/errors.hpp"

namespace kapteyn::exact {

/// Polynomial in u with exact rational coefficients, lowest degree first.
/// Trailing zeros are trimmed; the zero polynomial has no coefficients.
class UPoly {
public:
    UPoly() = default;
    UPoly(std::initializer_list<BigRational> c) : coeffs_(c) { trim(); }
    explicit UPoly(std::vector<BigRational> c) : coeffs_(std::move(c)) { trim(); }

    static UPoly constant(const BigRational& c) { return UPoly(std::vector<BigRational>{c}); }
    static UPoly monomial(const BigRational& c, std::size_t degree) {
        std::vector<BigRational> v(degree + 1);
        v[degree] = c;
        return UPoly(std::move(v));
    }
    /// (1 - 4u)^k for k >= 0.
    static UPoly one_minus_4u_pow(long k) {
        UPoly r = constant(1);
        const UPoly base{1, -4};
        for (long i = 0; i < k; ++i) r = r * base;
        return r;
    }

    bool is_zero() const { return coeffs_.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    const std::vector<BigRational>& coefficients() const { return coeffs_; }
    BigRational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : BigRational(0); }

    BigRational operator()(const BigRational& u) const {
        BigRational acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
        return acc;
    }

    UPoly derivative() const {
        if (coeffs_.size() <= 1) return {};
        std::vector<BigRational> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
        return UPoly(std::move(d));
    }

    /// Multiply by u^k.
    UPoly shift(std::size_t k) const {
        if (is_zero()) return {};
        std::vector<BigRational> v(k, BigRational(0));
        v.insert(v.end(), coeffs_.begin(), coeffs_.end());
        return UPoly(std::move(v));
    }

    /// Exact quotient by u; requires P(0) = 0.
    UPoly divide_by_u() const {
        if (is_zero()) return {};
        if (coeffs_.front() != 0) throw structural_error("UPoly: polynomial is not divisible by u");
        return UPoly(std::vector<BigRational>(coeffs_.begin() + 1, coeffs_.end()));
    }

    bool divisible_by_one_minus_4u() const { return !is_zero() && (*this)(BigRational(1, 4)) == 0; }

    /// Exact quotient by (1 - 4u); requires P(1/4) = 0.
    UPoly divide_by_one_minus_4u() const {
        if (is_zero()) return {};
        // Synthetic division by (u - 1/4), then scale by -1/4.
        const BigRational root(1, 4);
        const std::size_t n = coeffs_.size();
        std::vector<BigRational> q(n - 1);
        BigRational carry = 0;
        for (std::size_t i = n; i-- > 1;) {
            carry = coeffs_[i] + carry * root;
            q[i - 1] = carry;
        }
        if (coeffs_[0] + carry * root != 0) throw structural_error("UPoly: not divisible by (1 - 4u)");
        for (auto& c : q) c *= BigRational(-1, 4);
        return UPoly(std::move(q));
    }

    /// Re-express P(u) as Q(v) with u = (1 - v)/4.
    UPoly substitute_v() const {
        UPoly result;
        const UPoly u_of_v{BigRational(1, 4), BigRational(-1, 4)};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) result = result * u_of_v + constant(*it);
        return result;
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        std::vector<BigRational> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
        return UPoly(std::move(v));
    }
    friend UPoly operator-(const UPoly& a) {
        std::vector<BigRational> v(a.coeffs_);
        for (auto& c : v) c = -c;
        return UPoly(std::move(v));
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<BigRational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return UPoly(std::move(v));
    }
    friend UPoly operator*(const BigRational& c, const UPoly& p) { return constant(c) * p; }
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.coeffs_ == b.coeffs_; }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<BigRational> coeffs_;
};

/// z^parity * poly(u) * (1 - 4u)^(half_exp/2).
struct RadicalTerm {
    int parity = 0;
    UPoly poly;
    int half_exp = 0;

    RadicalTerm() = default;
    RadicalTerm(int s, UPoly p, int e) : parity(s), poly(std::move(p)), half_exp(e) {
        if (s != 0 && s != 1) throw structural_error("RadicalTerm: parity must be 0 or 1");
    }

    friend bool operator==(const RadicalTerm&, const RadicalTerm&) = default;
};

namespace detail {
inline int exp_class(int e) { return ((e % 2) + 2) % 2; }
}  // namespace detail

/// Finite sum of radical terms in canonical form: at most one term per
/// (parity, half-exponent parity) class, no zero polynomials, no removable
/// factor of (1 - 4u), even-class exponents <= 0, sorted by (parity, class).
/// Two canonical sums are equal exactly when they represent the same function.
class RadicalSum {
public:
    RadicalSum() = default;
    explicit RadicalSum(std::vector<RadicalTerm> terms) : terms_(std::move(terms)) { normalize(); }
    RadicalSum(std::initializer_list<RadicalTerm> terms) : terms_(terms) { normalize(); }

    static RadicalSum constant(const BigRational& c) { return RadicalSum{RadicalTerm(0, UPoly::constant(c), 0)}; }

    const std::vector<RadicalTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend bool operator==(const RadicalSum&, const RadicalSum&) = default;

private:
    void normalize() {
        std::map<std::pair<int, int>, std::vector<RadicalTerm>> groups;
        for (auto& t : terms_) {
            if (t.poly.is_zero()) continue;
            groups[{t.parity, detail::exp_class(t.half_exp)}].push_back(std::move(t));
        }
        std::vector<RadicalTerm> out;
        for (auto& [key, group] : groups) {
            int e_min = group.front().half_exp;
            for (const auto& t : group) e_min = std::min(e_min, t.half_exp);
            UPoly p;
            for (const auto& t : group) p = p + t.poly * UPoly::one_minus_4u_pow((t.half_exp - e_min) / 2);
            int e = e_min;
            const bool even_class = key.second == 0;
            if (even_class && e > 0) {
                p = p * UPoly::one_minus_4u_pow(e / 2);
                e = 0;
            }
            while (!p.is_zero() && (!even_class || e < 0) && p.divisible_by_one_minus_4u()) {
                p = p.divide_by_one_minus_4u();
                e += 2;
            }
            if (!p.is_zero()) out.emplace_back(key.first, std::move(p), e);
        }
        terms_ = std::move(out);
    }

    std::vector<RadicalTerm> terms_;
};

inline RadicalSum radical_add(const RadicalSum& f, const RadicalSum& g) {
    std::vector<RadicalTerm> all = f.terms();
    all.insert(all.end(), g.terms().begin(), g.terms().end());
    return RadicalSum(std::move(all));
}

inline RadicalSum radical_scale(const RadicalSum& f, const BigRational& c) {
    std::vector<RadicalTerm> out;
    for (const auto& t : f.terms()) out.emplace_back(t.parity, c * t.poly, t.half_exp);
    return RadicalSum(std::move(out));
}

inline RadicalSum radical_sub(const RadicalSum& f, const RadicalSum& g) {
    return radical_add(f, radical_scale(g, -1));
}

/// Exact d/dz.
inline RadicalSum radical_derivative(const RadicalSum& f) {
    std::vector<RadicalTerm> out;
    for (const auto& t : f.terms()) {
        const UPoly& p = t.poly;
        const BigRational chain = BigRational(-4 * t.half_exp);
        if (t.parity == 0) {
            // z^{-1} * 2u P'(u) = z * 2 P'(u)
            out.emplace_back(1, BigRational(2) * p.derivative(), t.half_exp);
            out.emplace_back(1, chain * p, t.half_exp - 2);
        } else {
            out.emplace_back(0, p + BigRational(2) * p.derivative().shift(1), t.half_exp);
            out.emplace_back(0, (chain * p).shift(1), t.half_exp - 2);
        }
    }
    return RadicalSum(std::move(out));
}

/// Multiply every term by z^s * P(u) * (1 - 4u)^(e/2).
inline RadicalSum radical_mul_term(const RadicalSum& f, int s, const UPoly& p, int e) {
    if (s < 0) throw structural_error("radical_mul_term: negative power of z");
    std::vector<RadicalTerm> out;
    for (const auto& t : f.terms()) {
        const int total = t.parity + s;
        UPoly q = t.poly * p;
        q = q.shift(static_cast<std::size_t>(total / 2));
        out.emplace_back(total % 2, std::move(q), t.half_exp + e);
    }
    return RadicalSum(std::move(out));
}

/// Exact integral from 0 to z of an odd radical sum.
///
/// With u = w^2 and v = 1 - 4u the integrand w P(u) v^{e/2} dw becomes
/// -(1/8) Q(v) v^{e/2} dv, Q(v) = P((1 - v)/4); each power of v integrates
/// in closed form unless it is v^{-1}, which would produce a logarithm.
inline RadicalSum radical_integrate(const RadicalSum& f) {
    std::vector<RadicalTerm> out;
    BigRational at_zero = 0;
    for (const auto& t : f.terms()) {
        if (t.parity != 1) throw parity_error("radical_integrate: integrand has an even term");
        const UPoly q = t.poly.substitute_v();
        const auto& a = q.coefficients();
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[j] == 0) continue;
            const int new_exp = t.half_exp + 2 * static_cast<int>(j) + 2;
            if (new_exp == 0) throw structural_error("radical_integrate: logarithmic term in antiderivative");
            // -(1/8) a_j v^{E/2} / (E/2)
            const BigRational c = -a[j] / BigRational(4 * new_exp);
            out.emplace_back(0, UPoly::constant(c), new_exp);
            at_zero += c;
        }
    }
    out.emplace_back(0, UPoly::constant(-at_zero), 0);
    return RadicalSum(std::move(out));
}

/// Floating evaluation. The polynomial and 1 - 4z^2 are evaluated exactly at
/// the binary value of z; only the final power is taken in floating point.
inline double radical_eval(const RadicalSum& f, double z) {
    if (!std::isfinite(z)) throw domain_error("radical_eval: non-finite argument");
    const BigRational zr(z);
    const BigRational u = zr * zr;
    const BigRational v = BigRational(1) - 4 * u;
    const long double vl = v.convert_to<long double>();
    long double total = 0.0L;
    for (const auto& t : f.terms()) {
        if (t.half_exp < 0 && vl <= 0.0L) throw domain_error("radical_eval: |z| < 1/2 required");
        if (t.half_exp % 2 != 0 && vl < 0.0L) throw domain_error("radical_eval: |z| <= 1/2 required");
        long double term = t.poly(u).convert_to<long double>();
        if (t.parity == 1) term *= static_cast<long double>(z);
        if (t.half_exp != 0) term *= std::pow(vl, static_cast<long double>(t.half_exp) / 2.0L);
        total += term;
    }
    return static_cast<double>(total);
}

/// First n_terms Taylor coefficients in u of an even radical sum.
inline std::vector<BigRational> radical_taylor(const RadicalSum& f, std::size_t n_terms) {
    std::vector<BigRational> out(n_terms, BigRational(0));
    for (const auto& t : f.terms()) {
        if (t.parity != 0) throw parity_error("radical_taylor: odd term present");
        // (1 - 4u)^a = sum_j binom(a, j) (-4u)^j, a = e/2
        const BigRational a(t.half_exp, 2);
        std::vector<BigRational> b(n_terms);
        if (n_terms > 0) b[0] = 1;
        for (std::size_t j = 0; j + 1 < n_terms; ++j)
            b[j + 1] = b[j] * (a - static_cast<long>(j)) / static_cast<long>(j + 1) * -4;
        const auto& p = t.poly.coefficients();
        for (std::size_t i = 0; i < p.size() && i < n_terms; ++i)
            for (std::size_t j = 0; i + j < n_terms; ++j) out[i + j] += p[i] * b[j];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text rendering

namespace detail {

inline std::string render_coeff_power(const BigRational& c, std::size_t k, bool leading) {
    std::string s;
    BigRational mag = c;
    if (leading) {
        if (c < 0) {
            s += "-";
            mag = -c;
        }
    } else {
        s += c < 0 ? " - " : " + ";
        if (c < 0) mag = -c;
    }
    const bool integral = boost::multiprecision::denominator(mag) == 1;
    if (k == 0) return s + to_string(mag);
    if (mag != 1) s += integral ? to_string(mag) : "(" + to_string(mag) + ")";
    s += "u";
    if (k > 1) s += "^" + std::to_string(k);
    return s;
}

}  // namespace detail

/// "1 + 37u + 118u^2 + 27u^3"
inline std::string render(const UPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    bool leading = true;
    for (std::size_t k = 0; k < p.coefficients().size(); ++k) {
        const auto& c = p.coefficients()[k];
        if (c == 0) continue;
        s += detail::render_coeff_power(c, k, leading);
        leading = false;
    }
    return s;
}

inline std::string render_half_exponent(int e) {
    if (e % 2 == 0) return std::to_string(e / 2);
    return std::to_string(e) + "/2";
}

/// "z^2*(1 + 37u)*(1-4u)^(-13/2)"-style rendering of a single term, with an
/// explicit power of z pulled out of the polynomial.
inline std::string render_term(int z_power, const UPoly& p, int half_exp) {
    std::string s;
    if (z_power == 1)
        s += "z*";
    else if (z_power > 1)
        s += "z^" + std::to_string(z_power) + "*";
    s += "(" + render(p) + ")";
    if (half_exp != 0) s += "*(1-4u)^(" + render_half_exponent(half_exp) + ")";
    return s;
}

inline std::string render(const RadicalSum& f) {
    if (f.is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < f.terms().size(); ++i) {
        const auto& t = f.terms()[i];
        if (i > 0) s += " + ";
        s += render_term(t.parity, t.poly, t.half_exp);
    }
    return s;
}

}  // namespace kapteyn::exact
