#pragma once

// Registry of closed-form Kapteyn identities. Each entry pairs a series
// (offset + sum of terms) with an independent evaluator and a domain check.

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "kapteyn/catalog/negative_q.hpp"
#include "kapteyn/catalog/nielsen.hpp"
#include "kapteyn/catalog/positive_q.hpp"
#include "kapteyn/errors.hpp"
#include "kapteyn/specfun.hpp"
#include "kapteyn/summation.hpp"

namespace kapteyn::catalog {

using Params = std::map<std::string, double>;

struct Identity {
    std::string id;
    std::string formula;
    std::vector<std::string> param_names;
    std::vector<Params> defaults;
    double tolerance = 1e-8;
    // Which side of the identity the series sits on.
    bool series_on_lhs = true;
    std::function<void(const Params&)> check_domain;
    std::function<summation::Range(const Params&)> range;
    std::function<double(long, const Params&)> term;
    std::function<double(const Params&)> offset;
    std::function<double(const Params&, const AccuracyBudget&)> closed;
    // Optional exact test; returns an empty string on success.
    std::function<std::string(const Params&)> exact_check;
};

struct CheckReport {
    std::string id;
    Params params;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_gap = 0.0;
    double gap = 0.0;  // |lhs - rhs| / max(1, |closed form|)
    bool pass = false;
    summation::EvalReport series;
    std::string note;
};

inline double param(const Params& p, const std::string& name) {
    const auto it = p.find(name);
    if (it == p.end()) throw domain_error("missing parameter " + name);
    if (!std::isfinite(it->second)) throw domain_error("parameter " + name + " must be finite");
    return it->second;
}

inline long int_param(const Params& p, const std::string& name) {
    const double v = param(p, name);
    if (!specfun::detail::is_integer(v)) throw domain_error("parameter " + name + " must be an integer");
    return static_cast<long>(v);
}

/// "a=0.5;b=0.3" with shortest round-trip numbers, keys in sorted order.
inline std::string format_params(const Params& p) {
    std::string s;
    for (const auto& [k, v] : p) {
        if (!s.empty()) s += ';';
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        s += k + "=" + std::string(buf, res.ptr);
    }
    return s;
}

namespace detail {

using specfun::bessel_j;

inline double jj(double mu, double nu, double x) {
    const double a = bessel_j(mu, x);
    return a == 0.0 ? 0.0 : a * bessel_j(nu, x);
}

inline void require_abs_below(double v, double bound, const std::string& what) {
    if (!(std::abs(v) < bound)) throw domain_error(what);
}

// (1/(2x)) [(1 - 4x^2)^(-1/2) - 1] without the cancellation at small x.
inline double half_inverse_radical(double x) {
    const double s = std::sqrt(1.0 - 4.0 * x * x);
    return 2.0 * x / ((1.0 + s) * s);
}

inline double sign_pow(long k) { return k % 2 == 0 ? 1.0 : -1.0; }

inline const exact::UPoly& published_pq(long q) {
    static const std::vector<exact::UPoly> table = {
        exact::UPoly{1, 1},
        exact::UPoly{1, 37, 118, 27},
        exact::UPoly{1, 217, 5036, 23630, 22910, 2250},
        exact::UPoly{1, 973, 80130, 1515705, 8635578, 15359862, 7119756, 385875},
    };
    return table.at(static_cast<std::size_t>(q - 1));
}

inline std::vector<Identity> build_registry() {
    using summation::Range;
    std::vector<Identity> r;

    auto nonint_x_sign = [](double nu, double x) {
        if (!specfun::detail::is_integer(nu) && x < 0.0)
            throw domain_error("x >= 0 required for non-integer nu");
    };

    {
        Identity e;
        e.id = "schott";
        e.formula = "sum_{n>=1} J_n(nz)^2 = ((1-z^2)^(-1/2) - 1)/2";
        e.param_names = {"z"};
        e.defaults = {{{"z", 0.3}}, {{"z", 0.5}}};
        e.tolerance = 1e-9;
        e.check_domain = [](const Params& p) { require_abs_below(param(p, "z"), 1.0, "|z| < 1 required"); };
        e.range = [](const Params&) { return Range::from(1); };
        e.term = [](long n, const Params& p) {
            const double j = bessel_j(static_cast<double>(n), n * param(p, "z"));
            return j * j;
        };
        e.closed = [](const Params& p, const AccuracyBudget&) {
            const double z = param(p, "z");
            const double s = std::sqrt(1.0 - z * z);
            return z * z / (2.0 * s * (1.0 + s));
        };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq6";
        e.formula = "2 sum_{n>=1} J_n(X) J'_n(X), X=(2n+1)x = (1/2x)((1-4x^2)^(-1/2) - 1)";
        e.param_names = {"x"};
        e.defaults = {{{"x", 0.3}}};
        e.tolerance = 1e-8;
        e.check_domain = [](const Params& p) { require_abs_below(param(p, "x"), 0.5, "|x| < 1/2 required"); };
        e.range = [](const Params&) { return Range::from(1); };
        e.term = [](long n, const Params& p) {
            const double nn = static_cast<double>(n);
            const double arg = (2.0 * nn + 1.0) * param(p, "x");
            const double deriv = 0.5 * (bessel_j(nn - 1.0, arg) - bessel_j(nn + 1.0, arg));
            return 2.0 * bessel_j(nn, arg) * deriv;
        };
        e.closed = [](const Params& p, const AccuracyBudget&) { return half_inverse_radical(param(p, "x")); };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq16";
        e.formula = "sum_{k>=1} J_{k+n}(ak) J_{k-n}(ak)/(k^2-b^2) = (-1)^(n-1) (pi/2b) csc(pi b) J_{n+b}(ab) J_{n-b}(ab)";
        e.param_names = {"a", "b", "n"};
        e.defaults = {{{"a", 0.5}, {"b", 0.3}, {"n", 1}}, {{"a", 0.5}, {"b", 0.3}, {"n", 2}}};
        e.check_domain = [](const Params& p) {
            const double a = param(p, "a");
            const double b = param(p, "b");
            if (!(a > 0.0 && a < 1.0)) throw domain_error("0 < a < 1 required");
            if (b == 0.0 || specfun::detail::is_integer(b)) throw domain_error("b must not be an integer");
            if (int_param(p, "n") < 1) throw domain_error("n >= 1 required");
        };
        e.range = [](const Params&) { return Range::from(1); };
        e.term = [](long k, const Params& p) {
            const double a = param(p, "a"), b = param(p, "b");
            const double n = static_cast<double>(int_param(p, "n"));
            const double kk = static_cast<double>(k);
            return jj(kk + n, kk - n, a * kk) / (kk * kk - b * b);
        };
        e.closed = [](const Params& p, const AccuracyBudget&) {
            const double a = param(p, "a"), b = param(p, "b");
            const long n = int_param(p, "n");
            const double csc = 1.0 / static_cast<double>(specfun::detail::sin_pi(b));
            return sign_pow(n - 1) * std::numbers::pi / (2.0 * b) * csc * jj(n + b, n - b, a * b);
        };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq17";
        e.formula =
            "sum_{k>=0} (-1)^(n-k) J_{n+k+1}(aK) J_{n-k}(aK)/(K^2-b^2), K=k+1/2 = "
            "(-1)^n (pi/2b) sec(pi b) J_{n+1/2+b}(ab) J_{n+1/2-b}(ab)";
        e.param_names = {"a", "b", "n"};
        e.defaults = {{{"a", 0.5}, {"b", 0.25}, {"n", 1}}};
        e.check_domain = [](const Params& p) {
            const double a = param(p, "a"), b = param(p, "b");
            if (!(a > 0.0 && a < 1.0)) throw domain_error("0 < a < 1 required");
            if (b == 0.0 || specfun::detail::is_integer(b - 0.5)) throw domain_error("b must not be zero or a half-integer");
            if (int_param(p, "n") < 1) throw domain_error("n >= 1 required");
        };
        e.range = [](const Params&) { return Range::from(0); };
        e.term = [](long k, const Params& p) {
            const double a = param(p, "a"), b = param(p, "b");
            const long n = int_param(p, "n");
            const double kk = static_cast<double>(k) + 0.5;
            const double coeff = summation::coefficient(summation::rule::InverseShiftedHalf{b, n}, k);
            return coeff * jj(static_cast<double>(n + k + 1), static_cast<double>(n - k), a * kk);
        };
        e.closed = [](const Params& p, const AccuracyBudget&) {
            const double a = param(p, "a"), b = param(p, "b");
            const long n = int_param(p, "n");
            const double sec = 1.0 / static_cast<double>(specfun::detail::sin_pi(b + 0.5));
            const double nh = static_cast<double>(n) + 0.5;
            return sign_pow(n) * std::numbers::pi / (2.0 * b) * sec * jj(nh + b, nh - b, a * b);
        };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq28";
        e.formula = "sin(pi nu)/(pi nu) + 2 sum_{n>=1} J_{n+nu}(2nx) J_{n-nu}(2nx) = even gamma series";
        e.param_names = {"nu", "x"};
        e.defaults = {{{"nu", 0.25}, {"x", 0.3}}, {{"nu", 1.5}, {"x", 0.3}}, {{"nu", 0.0}, {"x", 0.45}}};
        e.check_domain = [nonint_x_sign](const Params& p) {
            require_abs_below(param(p, "x"), 0.5, "|x| < 1/2 required");
            nonint_x_sign(param(p, "nu"), param(p, "x"));
        };
        e.range = [](const Params&) { return Range::from(1); };
        e.term = [](long n, const Params& p) {
            const double nu = param(p, "nu"), x = param(p, "x");
            const double nn = static_cast<double>(n);
            return 2.0 * jj(nn + nu, nn - nu, 2.0 * nn * x);
        };
        e.offset = [](const Params& p) { return specfun::sinc_pi(param(p, "nu")); };
        e.closed = [](const Params& p, const AccuracyBudget& b) {
            return nielsen_rhs(NielsenKind::even, param(p, "nu"), param(p, "x"), b);
        };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq29";
        e.formula = "2 sum_{n>=0} J_{n+nu}((2n+1)x) J_{n+1-nu}((2n+1)x) = odd gamma series";
        e.param_names = {"nu", "x"};
        e.defaults = {{{"nu", 0.25}, {"x", 0.3}}, {{"nu", 1.5}, {"x", 0.3}}, {{"nu", 0.0}, {"x", 0.45}}};
        e.check_domain = [nonint_x_sign](const Params& p) {
            require_abs_below(param(p, "x"), 0.5, "|x| < 1/2 required");
            nonint_x_sign(param(p, "nu"), param(p, "x"));
        };
        e.range = [](const Params&) { return Range::from(0); };
        e.term = [](long n, const Params& p) {
            const double nu = param(p, "nu"), x = param(p, "x");
            const double nn = static_cast<double>(n);
            return 2.0 * jj(nn + nu, nn + 1.0 - nu, (2.0 * nn + 1.0) * x);
        };
        e.closed = [](const Params& p, const AccuracyBudget& b) {
            return nielsen_rhs(NielsenKind::odd, param(p, "nu"), param(p, "x"), b);
        };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq30";
        e.formula = "1 + 2 sum_{n>=1} J_n(2nx)^2 = (1-4x^2)^(-1/2)";
        e.param_names = {"x"};
        e.defaults = {{{"x", 0.1}}, {{"x", 0.2}}, {{"x", 0.3}}, {{"x", 0.4}}};
        e.tolerance = 1e-10;
        e.check_domain = [](const Params& p) { require_abs_below(param(p, "x"), 0.5, "|x| < 1/2 required"); };
        e.range = [](const Params&) { return Range::from(1); };
        e.term = [](long n, const Params& p) {
            const double j = bessel_j(static_cast<double>(n), 2.0 * n * param(p, "x"));
            return 2.0 * j * j;
        };
        e.offset = [](const Params&) { return 1.0; };
        e.closed = [](const Params& p, const AccuracyBudget&) {
            const double x = param(p, "x");
            return 1.0 / std::sqrt(1.0 - 4.0 * x * x);
        };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq31";
        e.formula = "2 sum_{n>=0} J_n((2n+1)x) J_{n+1}((2n+1)x) = (1/2x)((1-4x^2)^(-1/2) - 1)";
        e.param_names = {"x"};
        e.defaults = {{{"x", 0.3}}};
        e.tolerance = 1e-10;
        e.check_domain = [](const Params& p) { require_abs_below(param(p, "x"), 0.5, "|x| < 1/2 required"); };
        e.range = [](const Params&) { return Range::from(0); };
        e.term = [](long n, const Params& p) {
            const double nn = static_cast<double>(n);
            return 2.0 * jj(nn, nn + 1.0, (2.0 * nn + 1.0) * param(p, "x"));
        };
        e.closed = [](const Params& p, const AccuracyBudget&) { return half_inverse_radical(param(p, "x")); };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq40";
        e.formula =
            "(x/2)^s = s Gamma(1+mu) Gamma(1+nu) sum_{n>=0} C(s+n-1,n) (s+2n)^(-s-1) "
            "J_{mu+n}((s+2n)x) J_{nu+n}((s+2n)x), s=mu+nu";
        e.param_names = {"mu", "nu", "x"};
        e.defaults = {{{"mu", 0.5}, {"nu", 0.5}, {"x", 0.3}}, {{"mu", 1.0}, {"nu", 1.0}, {"x", 0.3}}};
        e.series_on_lhs = false;
        e.check_domain = [](const Params& p) {
            const double mu = param(p, "mu"), nu = param(p, "nu"), x = param(p, "x");
            require_abs_below(x, 0.5, "|x| < 1/2 required");
            if (!(mu + nu > 0.0)) throw domain_error("mu + nu > 0 required");
            if (!(mu > -1.0 && nu > -1.0)) throw domain_error("mu > -1 and nu > -1 required");
            if (!(x > 0.0)) throw domain_error("x > 0 required");
        };
        e.range = [](const Params&) { return Range::from(0); };
        e.term = [](long n, const Params& p) {
            const double mu = param(p, "mu"), nu = param(p, "nu"), x = param(p, "x");
            const double s = mu + nu;
            // C(s+n-1, n) = (s)_n / n!
            long double binom = 1.0L;
            for (long i = 0; i < n; ++i) binom *= (static_cast<long double>(s) + i) / (i + 1.0L);
            const double nn = static_cast<double>(n);
            const double w = s + 2.0 * nn;
            const double pre = s * specfun::gamma_fn(1.0 + mu) * specfun::gamma_fn(1.0 + nu);
            return pre * static_cast<double>(binom) * std::pow(w, -(s + 1.0)) * jj(mu + nn, nu + nn, w * x);
        };
        e.closed = [](const Params& p, const AccuracyBudget&) {
            return std::pow(param(p, "x") / 2.0, param(p, "mu") + param(p, "nu"));
        };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq44";
        e.formula = "sum_{n>=1} J_{2n}(2nz)/n^2 = z^2/2";
        e.param_names = {"z"};
        e.defaults = {{{"z", 0.3}}, {{"z", 0.4}}};
        e.tolerance = 1e-10;
        e.check_domain = [](const Params& p) { require_abs_below(param(p, "z"), 0.5, "|z| < 1/2 required"); };
        e.range = [](const Params&) { return Range::from(1); };
        e.term = [](long n, const Params& p) {
            const double nn = static_cast<double>(n);
            return bessel_j(2.0 * nn, 2.0 * nn * param(p, "z")) / (nn * nn);
        };
        e.closed = [](const Params& p, const AccuracyBudget& b) { return eval_first_kind(1.0, param(p, "z"), b); };
        e.exact_check = [](const Params&) -> std::string {
            return first_kind_poly(1) == exact::UPoly{0, BigRational(1, 2)} ? "" : "polynomial is not z^2/2";
        };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq45";
        e.formula = "sum_{n>=1} J_{2n}(2nz)/n^(2p) = sum_k c_k(p) z^(2k)";
        e.param_names = {"p", "z"};
        e.defaults = {{{"p", 2.0}, {"z", 0.3}}, {{"p", 3.0}, {"z", 0.4}}, {{"p", 1.5}, {"z", 0.3}}};
        e.check_domain = [](const Params& p) {
            if (!(param(p, "p") > 0.0)) throw domain_error("p > 0 required");
            require_abs_below(param(p, "z"), 0.5, "|z| < 1/2 required");
        };
        e.range = [](const Params&) { return Range::from(1); };
        e.term = [](long n, const Params& p) {
            const double nn = static_cast<double>(n);
            return bessel_j(2.0 * nn, 2.0 * nn * param(p, "z")) / std::pow(nn, 2.0 * param(p, "p"));
        };
        e.closed = [](const Params& p, const AccuracyBudget& b) {
            return eval_first_kind(param(p, "p"), param(p, "z"), b);
        };
        e.exact_check = [](const Params& p) -> std::string {
            const double pv = param(p, "p");
            if (!specfun::detail::is_integer(pv) || pv < 2.0) return "";
            return verify_recurrence_eq43(static_cast<long>(pv)) ? "" : "recurrence in p fails";
        };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq47";
        e.formula = "sum_{n>=1} J_n(nz)^2/n^(2p) = sum_k c_k(p) z^(2k)";
        e.param_names = {"p", "z"};
        e.defaults = {{{"p", 1.0}, {"z", 0.3}}, {{"p", 1.5}, {"z", 0.3}}, {{"p", 2.0}, {"z", 0.3}}};
        e.check_domain = [](const Params& p) {
            const double pv = param(p, "p");
            if (!(pv > 0.0)) throw domain_error("p > 0 required");
            if (specfun::detail::is_integer(pv))
                require_abs_below(param(p, "z"), 1.0, "|z| < 1 required");
            else
                require_abs_below(param(p, "z"), 0.5, "|z| < 1/2 required");
        };
        e.range = [](const Params&) { return Range::from(1); };
        e.term = [](long n, const Params& p) {
            const double nn = static_cast<double>(n);
            const double j = bessel_j(nn, nn * param(p, "z"));
            return j * j / std::pow(nn, 2.0 * param(p, "p"));
        };
        e.closed = [](const Params& p, const AccuracyBudget& b) {
            return eval_second_kind_neg(param(p, "p"), param(p, "z"), b);
        };
        e.exact_check = [](const Params& p) -> std::string {
            const double pv = param(p, "p");
            if (!specfun::detail::is_integer(pv)) return "";
            const long pi = static_cast<long>(pv);
            return coeff_second_kind_neg_exact(pi, pi + 1) == 0 ? "" : "series does not terminate at k = p";
        };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq58";
        e.formula = "sum_{n>=1} J_n(2nz)^2 = -1/2 + (1/2)(1-4z^2)^(-1/2)";
        e.param_names = {"z"};
        e.defaults = {{{"z", 0.3}}, {{"z", 0.4}}};
        e.tolerance = 1e-10;
        e.check_domain = [](const Params& p) { require_abs_below(param(p, "z"), 0.5, "|z| < 1/2 required"); };
        e.range = [](const Params&) { return Range::from(1); };
        e.term = [](long n, const Params& p) {
            const double j = bessel_j(static_cast<double>(n), 2.0 * n * param(p, "z"));
            return j * j;
        };
        e.closed = [](const Params& p, const AccuracyBudget&) { return k2_q0(param(p, "z")); };
        r.push_back(std::move(e));
    }
    {
        Identity e;
        e.id = "eq62";
        e.formula = "sum_{n>=1} n^(2q) J_n(2nz)^2 = z^2 P_q(z^2) (1-4z^2)^(-3q-1/2)";
        e.param_names = {"q", "z"};
        e.defaults = {{{"q", 1}, {"z", 0.3}}, {{"q", 2}, {"z", 0.3}}, {{"q", 3}, {"z", 0.3}}, {{"q", 4}, {"z", 0.3}}};
        e.check_domain = [](const Params& p) {
            if (int_param(p, "q") < 1) throw domain_error("q >= 1 required");
            require_abs_below(param(p, "z"), 0.5, "|z| < 1/2 required");
        };
        e.range = [](const Params&) { return Range::from(1); };
        e.term = [](long n, const Params& p) {
            const double nn = static_cast<double>(n);
            const double j = bessel_j(nn, 2.0 * nn * param(p, "z"));
            return std::pow(nn, 2.0 * static_cast<double>(int_param(p, "q"))) * j * j;
        };
        e.closed = [](const Params& p, const AccuracyBudget&) { return eval_k2_pos(int_param(p, "q"), param(p, "z")); };
        e.exact_check = [](const Params& p) -> std::string {
            const long q = int_param(p, "q");
            const K2Family f = k2_chain().get(q);
            if (f.p.degree() != 2 * q - 1) return "P_q has the wrong degree";
            if (f.p.coeff(0) != 1) return "P_q(0) != 1";
            const auto& t = f.symbolic.terms();
            if (t.size() != 1 || t.front().half_exp != -static_cast<int>(6 * q + 1)) return "wrong radical exponent";
            if (q <= 4 && !(f.p == published_pq(q))) return "P_q differs from the published polynomial";
            return "";
        };
        r.push_back(std::move(e));
    }
    return r;
}

}  // namespace detail

/// Every registered identity, in a fixed order.
inline const std::vector<Identity>& identities() {
    static const std::vector<Identity> registry = detail::build_registry();
    return registry;
}

inline const Identity* find_identity(const std::string& id) {
    for (const auto& e : identities())
        if (e.id == id) return &e;
    return nullptr;
}

inline const Identity& get_identity(const std::string& id) {
    const Identity* e = find_identity(id);
    if (!e) throw domain_error("unknown identity id '" + id + "'");
    return *e;
}

/// Series side of an identity (offset included).
inline summation::EvalReport identity_series(const Identity& e, const Params& params, const AccuracyBudget& budget) {
    e.check_domain(params);
    auto report = summation::sum_accelerated([&](long n) { return e.term(n, params); }, e.range(params), budget);
    if (e.offset) report.value += e.offset(params);
    return report;
}

/// Evaluates both sides and compares. The series is summed at a tolerance
/// at least 100 times tighter than the identity's own acceptance threshold.
/// Budget exhaustion inside either side is reported, not thrown.
inline CheckReport identity_check(const std::string& id, const Params& params, const AccuracyBudget& budget = {}) {
    const Identity& e = get_identity(id);
    e.check_domain(params);
    CheckReport r;
    r.id = id;
    r.params = params;
    const double tol = std::max(1e-15, std::min(budget.rel_tol, e.tolerance * 1e-2));
    const AccuracyBudget inner(tol, budget.max_terms);
    double closed = 0.0;
    try {
        r.series = identity_series(e, params, inner);
        closed = e.closed(params, inner);
    } catch (const budget_exhausted& ex) {
        r.series.value = ex.partial_value();
        r.series.terms_used = ex.terms_used();
        r.series.converged = false;
        r.note = ex.what();
        r.lhs = e.series_on_lhs ? r.series.value : closed;
        r.rhs = e.series_on_lhs ? closed : r.series.value;
        r.abs_gap = r.gap = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.lhs = e.series_on_lhs ? r.series.value : closed;
    r.rhs = e.series_on_lhs ? closed : r.series.value;
    r.abs_gap = std::abs(r.lhs - r.rhs);
    r.gap = r.abs_gap / std::max(1.0, std::abs(closed));
    r.pass = r.series.converged && r.gap <= e.tolerance;
    if (!r.series.converged) r.note = "series did not converge";
    if (e.exact_check) {
        const std::string msg = e.exact_check(params);
        if (!msg.empty()) {
            r.pass = false;
            r.note = r.note.empty() ? msg : r.note + "; " + msg;
        }
    }
    return r;
}

}  // namespace kapteyn::catalog
