#pragma once

// Direct and accelerated summation of Kapteyn series, Gauss-Legendre
// quadrature, and the double-series reduction through Q_n and R_m.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <numbers>
#include <variant>
#include <vector>

#include "kapteyn/errors.hpp"
#include "kapteyn/specfun.hpp"

namespace kapteyn::summation {

using specfun::AccuracyBudget;

struct EvalReport {
    double value = 0.0;
    double err_estimate = 0.0;
    std::size_t terms_used = 0;
    bool accelerated = false;
    bool converged = false;
};

/// Summation range: n = n0, n0+1, ... or n = 0, +-1, +-2, ...
struct Range {
    enum class Kind { one_sided, bilateral };
    Kind kind = Kind::one_sided;
    long n0 = 1;

    static Range from(long start) { return {Kind::one_sided, start}; }
    static Range bilateral() { return {Kind::bilateral, 0}; }
};

using TermFn = std::function<double(long)>;

namespace detail {

// Steps through a range one unit at a time. On a bilateral range the unit
// is term(0) first and then term(k) + term(-k) for k = 1, 2, ...
class DirectSummer {
public:
    DirectSummer(TermFn term, Range range) : term_(std::move(term)), range_(range) {}

    double next_unit() {
        double t;
        if (range_.kind == Range::Kind::one_sided) {
            t = eval(range_.n0 + static_cast<long>(units_));
        } else if (units_ == 0) {
            t = eval(0);
        } else {
            const long k = static_cast<long>(units_);
            t = eval(k) + eval(-k);
        }
        ++units_;
        acc_.add(t);
        return t;
    }

    double partial() const { return acc_.value(); }
    std::size_t units() const { return units_; }

private:
    double eval(long n) const {
        const double v = term_(n);
        if (!std::isfinite(v)) throw nonfinite_term(n, v);
        return v;
    }

    TermFn term_;
    Range range_;
    std::size_t units_ = 0;
    specfun::detail::CompensatedSum<double> acc_;
};

// Tracks the "five consecutive small terms" stopping rule.
class StopRule {
public:
    explicit StopRule(double tol) : tol_(tol) {}

    bool observe(double term, double partial) {
        const double a = std::abs(term);
        recent_.push_back(a);
        if (recent_.size() > window) recent_.pop_front();
        if (a < tol_ * (1.0 + std::abs(partial)))
            ++run_;
        else
            run_ = 0;
        return run_ >= window;
    }

    double err() const {
        double m = 0.0;
        for (double a : recent_) m = std::max(m, a);
        return m;
    }

    static constexpr std::size_t window = 5;

private:
    double tol_;
    std::size_t run_ = 0;
    std::deque<double> recent_;
};

struct WynnResult {
    double value = 0.0;
    double err = std::numeric_limits<double>::infinity();
};

inline constexpr std::size_t wynn_max_columns = 50;
inline constexpr double wynn_guard = 1e-300;

// Full epsilon table over the given partials. Column k is returned as a
// vector of length partials.size() - k.
inline std::vector<std::vector<double>> wynn_table(const std::vector<double>& s) {
    const std::size_t n = s.size();
    const std::size_t cols = std::min(n, wynn_max_columns + 1);
    std::vector<std::vector<double>> eps(cols);
    eps[0] = s;
    std::vector<double> prev_prev(n + 1, 0.0);  // column -1
    for (std::size_t k = 1; k < cols; ++k) {
        const auto& cur = eps[k - 1];
        const auto& before = k >= 2 ? eps[k - 2] : prev_prev;
        std::vector<double> next(cur.size() - 1);
        // A vanishing difference makes the odd entry infinite; an infinite
        // odd entry then contributes nothing to the even column after it.
        const bool odd = k % 2 == 1;
        const double inf = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const double diff = cur[i + 1] - cur[i];
            if (!std::isfinite(diff)) {
                next[i] = before[i + 1];
            } else if (std::abs(diff) < wynn_guard) {
                next[i] = odd ? inf : before[i + 1];
            } else {
                next[i] = before[i + 1] + 1.0 / diff;
            }
        }
        eps[k] = std::move(next);
    }
    return eps;
}

// Limit estimate with an error bar: among the even columns, take the one
// whose two most recent entries agree best.
inline WynnResult wynn_estimate(const std::vector<double>& partials) {
    WynnResult best;
    if (partials.empty()) return best;
    const auto eps = wynn_table(partials);
    for (std::size_t k = 0; k < eps.size(); k += 2) {
        const auto& col = eps[k];
        if (col.size() < 2) break;
        const double v = col.back();
        const double e = std::abs(col.back() - col[col.size() - 2]);
        if (std::isfinite(v) && e <= best.err) best = {v, e};
    }
    if (!std::isfinite(best.value)) best = {partials.back(), std::abs(partials.back())};
    return best;
}

}  // namespace detail

/// Compensated direct summation with the five-consecutive-small-terms rule.
/// On exhaustion the report is returned with converged = false.
inline EvalReport sum_direct(const TermFn& term, Range range, const AccuracyBudget& budget) {
    budget.validate();
    detail::DirectSummer summer(term, range);
    detail::StopRule stop(budget.rel_tol);
    EvalReport r;
    while (summer.units() < budget.max_terms) {
        const double t = summer.next_unit();
        if (stop.observe(t, summer.partial())) {
            r.converged = true;
            break;
        }
    }
    r.value = summer.partial();
    r.err_estimate = stop.err();
    r.terms_used = summer.units();
    return r;
}

/// Highest even-column entry of the Wynn epsilon table.
inline double wynn_epsilon(const std::vector<double>& partials) {
    if (partials.size() < 3) throw domain_error("wynn_epsilon: at least 3 partial sums required");
    const auto eps = detail::wynn_table(partials);
    std::size_t k = eps.size() - 1;
    if (k % 2 != 0) --k;
    return eps[k].back();
}

/// Direct summation for `direct_phase` units; if that has not converged,
/// further partial sums are collected in blocks of `accel_phase` and
/// extrapolated with the epsilon algorithm until the estimate settles or
/// the term budget runs out.
inline EvalReport sum_accelerated(const TermFn& term, Range range, const AccuracyBudget& budget,
                                  std::size_t direct_phase = 100, std::size_t accel_phase = 100) {
    budget.validate();
    detail::DirectSummer summer(term, range);
    detail::StopRule stop(budget.rel_tol);
    EvalReport r;

    auto finish_direct = [&](bool converged) {
        r.value = summer.partial();
        r.err_estimate = stop.err();
        r.terms_used = summer.units();
        r.converged = converged;
        r.accelerated = false;
        return r;
    };

    const std::size_t first = std::min(direct_phase, budget.max_terms);
    while (summer.units() < first)
        if (stop.observe(summer.next_unit(), summer.partial())) return finish_direct(true);

    std::vector<double> partials;
    detail::WynnResult est;
    while (summer.units() < budget.max_terms) {
        const std::size_t block_end = std::min(summer.units() + accel_phase, budget.max_terms);
        while (summer.units() < block_end) {
            if (stop.observe(summer.next_unit(), summer.partial())) return finish_direct(true);
            partials.push_back(summer.partial());
        }
        // Extrapolate from the most recent partials only; older ones add
        // nothing once the table depth is capped.
        const std::size_t keep = std::min<std::size_t>(partials.size(), 2 * detail::wynn_max_columns + 1);
        std::vector<double> window(partials.end() - static_cast<long>(keep), partials.end());
        est = detail::wynn_estimate(window);
        if (est.err <= budget.rel_tol * (1.0 + std::abs(est.value))) {
            r.value = est.value;
            r.err_estimate = est.err;
            r.terms_used = summer.units();
            r.accelerated = true;
            r.converged = true;
            return r;
        }
    }
    if (partials.empty()) return finish_direct(false);
    r.value = est.value;
    r.err_estimate = est.err;
    r.terms_used = summer.units();
    r.accelerated = true;
    r.converged = false;
    return r;
}

// ---------------------------------------------------------------------------
// Series specifications

namespace rule {
struct Constant {};
/// n^s
struct Power {
    double s = 0.0;
};
/// t^n
struct Geometric {
    double t = 0.0;
};
/// 1/(n^2 - b^2)
struct InverseQuadratic {
    double b = 0.0;
};
/// (-1)^(n - m) / ((k + 1/2)^2 - b^2) at summation index k
struct InverseShiftedHalf {
    double b = 0.0;
    long m = 0;
};
struct Custom {
    std::function<double(long)> fn;
};
}  // namespace rule

using CoefficientRule =
    std::variant<rule::Constant, rule::Power, rule::Geometric, rule::InverseQuadratic, rule::InverseShiftedHalf, rule::Custom>;

inline double coefficient(const CoefficientRule& c, long n) {
    struct Visitor {
        long n;
        double operator()(const rule::Constant&) const { return 1.0; }
        double operator()(const rule::Power& p) const { return std::pow(static_cast<double>(n), p.s); }
        double operator()(const rule::Geometric& g) const { return std::pow(g.t, static_cast<double>(n)); }
        double operator()(const rule::InverseQuadratic& q) const {
            const double nn = static_cast<double>(n);
            const double d = nn * nn - q.b * q.b;
            if (d == 0.0) throw domain_error("inverse_quadratic: n^2 = b^2 inside the summation range");
            return 1.0 / d;
        }
        double operator()(const rule::InverseShiftedHalf& h) const {
            const double k = static_cast<double>(n) + 0.5;
            const double d = k * k - h.b * h.b;
            if (d == 0.0) throw domain_error("inverse_shifted_half: (n + 1/2)^2 = b^2 inside the summation range");
            const double sign = ((h.m - n) % 2 == 0) ? 1.0 : -1.0;
            return sign / d;
        }
        double operator()(const rule::Custom& c) const {
            if (!c.fn) throw domain_error("custom coefficient rule has no callback");
            return c.fn(n);
        }
    };
    return std::visit(Visitor{n}, c);
}

enum class SeriesKind { K1, K2 };

/// K1: sum a_n J_{alpha n + beta}(c n + b)
/// K2: sum a_n J_{alpha n + beta}(c n + b) J_{gamma n + epsilon}(f n + g)
struct SeriesSpec {
    SeriesKind kind = SeriesKind::K1;
    CoefficientRule coeff = rule::Constant{};
    double alpha = 1.0, beta = 0.0, gamma = 1.0, epsilon = 0.0;
    double c = 0.0, b = 0.0, f = 0.0, g = 0.0;
    Range range = Range::from(1);

    void validate() const {
        const double all[] = {alpha, beta, gamma, epsilon, c, b, f, g};
        for (double v : all)
            if (!std::isfinite(v)) throw domain_error("SeriesSpec: parameters must be finite");
        if (range.kind == Range::Kind::one_sided && range.n0 < 0 &&
            std::holds_alternative<rule::Power>(coeff))
            throw domain_error("SeriesSpec: power rule needs a non-negative start index");
        if (const auto* q = std::get_if<rule::InverseQuadratic>(&coeff)) {
            const double rb = std::nearbyint(q->b);
            if (rb == q->b && (range.kind == Range::Kind::bilateral || std::abs(rb) >= static_cast<double>(range.n0)))
                throw domain_error("SeriesSpec: inverse_quadratic b is an integer inside the summation range");
        }
    }

    double term(long n) const {
        const double nn = static_cast<double>(n);
        const double a = coefficient(coeff, n);
        if (a == 0.0) return 0.0;
        double v = a * specfun::bessel_j(alpha * nn + beta, c * nn + b);
        if (kind == SeriesKind::K2 && v != 0.0) v *= specfun::bessel_j(gamma * nn + epsilon, f * nn + g);
        return v;
    }
};

inline EvalReport eval_series(const SeriesSpec& spec, const AccuracyBudget& budget) {
    spec.validate();
    return sum_accelerated([&spec](long n) { return spec.term(n); }, spec.range, budget);
}

// ---------------------------------------------------------------------------
// Quadrature

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
inline GaussRule gauss_legendre_rule(int n) {
    if (n < 2) throw domain_error("gauss_legendre: at least 2 nodes required");
    GaussRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
        long double dp = 0.0L;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1.0L, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0L);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-18L) break;
        }
        {
            long double p0 = 1.0L, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0L);
        }
        const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
        const auto a = static_cast<std::size_t>(i);
        const auto b = static_cast<std::size_t>(n - 1 - i);
        r.nodes[a] = static_cast<double>(-x);
        r.nodes[b] = static_cast<double>(x);
        r.weights[a] = r.weights[b] = static_cast<double>(w);
    }
    return r;
}

inline double gauss_legendre(const std::function<double(double)>& f, double a, double b, int nodes) {
    const GaussRule rule = gauss_legendre_rule(nodes);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    specfun::detail::CompensatedSum<double> acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
    return half * acc.value();
}

struct ProductCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

/// J_mu(x) J_nu(x) against (2/pi) int_0^{pi/2} J_{mu+nu}(2x cos t) cos((mu-nu) t) dt.
inline ProductCheck product_rep_check(double mu, double nu, double x, int nodes = 64) {
    const bool both_integer = specfun::detail::is_integer(mu) && specfun::detail::is_integer(nu);
    if (!(mu + nu > -1.0) && !both_integer) throw domain_error("product_rep_check: mu + nu > -1 required");
    ProductCheck r;
    r.lhs = specfun::bessel_j(mu, x) * specfun::bessel_j(nu, x);
    const double order = mu + nu;
    const double integral = gauss_legendre(
        [&](double t) { return specfun::bessel_j(order, 2.0 * x * std::cos(t)) * std::cos((mu - nu) * t); }, 0.0,
        std::numbers::pi / 2.0, nodes);
    r.rhs = 2.0 / std::numbers::pi * integral;
    r.gap = std::abs(r.lhs - r.rhs);
    return r;
}

// ---------------------------------------------------------------------------
// Double-series reduction
//
// With a = alpha n + beta, b = gamma n + epsilon and X = c n + b0,
//   J_a(X) J_b(Lambda X) = (X/2)^(a+b) Lambda^b Q_n,
//   Q_n = sum_m (-1)^m (X/2)^(2m) Lambda^(2m) R_m,
//   R_m = sum_{k=0..m} Lambda^(-2k) / (k! (m-k)!) / (Gamma(a+k+1) Gamma(b+m-k+1)).

namespace detail {

inline long double rm_ld(long m, long n, double alpha, double beta, double gamma, double epsilon, double lambda) {
    const long double a = static_cast<long double>(alpha) * n + beta;
    const long double b = static_cast<long double>(gamma) * n + epsilon;
    const long double inv_l2 = 1.0L / (static_cast<long double>(lambda) * lambda);
    specfun::detail::CompensatedSum<long double> acc;
    // 1/(k!(m-k)!) built incrementally from 1/m!.
    long double binom_over_mfact = specfun::detail::recip_gamma_ld(static_cast<long double>(m) + 1.0L);
    long double lpow = 1.0L;
    for (long k = 0; k <= m; ++k) {
        const long double t = lpow * binom_over_mfact * specfun::detail::recip_gamma_ld(a + k + 1.0L) *
                              specfun::detail::recip_gamma_ld(b + (m - k) + 1.0L);
        acc.add(t);
        binom_over_mfact *= static_cast<long double>(m - k) / static_cast<long double>(k + 1);
        lpow *= inv_l2;
    }
    return acc.value();
}

}  // namespace detail

inline double eval_Rm(long m, long n, double alpha, double beta, double gamma, double epsilon, double lambda) {
    if (m < 0) throw domain_error("eval_Rm: m must be >= 0");
    if (lambda == 0.0) throw domain_error("eval_Rm: Lambda must be nonzero");
    return static_cast<double>(detail::rm_ld(m, n, alpha, beta, gamma, epsilon, lambda));
}

namespace detail {

inline long double qn_ld(long n, double arg_half, double alpha, double beta, double gamma, double epsilon,
                         double lambda, const AccuracyBudget& budget) {
    const long double h2l2 = static_cast<long double>(arg_half) * arg_half * lambda * lambda;
    specfun::detail::CompensatedSum<long double> acc;
    long double pw = 1.0L;
    long double prev_abs = std::numeric_limits<long double>::infinity();
    int small = 0;
    for (long m = 0;; ++m) {
        const long double t = pw * rm_ld(m, n, alpha, beta, gamma, epsilon, lambda);
        acc.add(t);
        const long double at = std::abs(t);
        const bool decreasing = at <= prev_abs;
        prev_abs = at;
        if (decreasing && at <= budget.rel_tol * 1e-3L * std::abs(acc.value()))
            ++small;
        else
            small = 0;
        if (h2l2 == 0.0L || small >= 3) break;
        if (static_cast<std::size_t>(m + 1) >= budget.max_terms)
            throw budget_exhausted("eval_Qn: series did not converge within max_terms",
                                   static_cast<double>(acc.value()), static_cast<std::size_t>(m + 1));
        pw *= -h2l2;
    }
    return acc.value();
}

}  // namespace detail

inline double eval_Qn(long n, double arg_half, double alpha, double beta, double gamma, double epsilon, double lambda,
                      const AccuracyBudget& budget = {}) {
    budget.validate();
    if (lambda == 0.0) throw domain_error("eval_Qn: Lambda must be nonzero");
    return static_cast<double>(detail::qn_ld(n, arg_half, alpha, beta, gamma, epsilon, lambda, budget));
}

/// Second-kind series summed through the Q_n representation. The spec must
/// satisfy f = Lambda c and g = Lambda b for a single nonzero Lambda.
inline EvalReport eval_series_via_qn(const SeriesSpec& spec, const AccuracyBudget& budget) {
    spec.validate();
    if (spec.kind != SeriesKind::K2) throw domain_error("eval_series_via_qn: second-kind spec required");
    double lambda;
    if (spec.c != 0.0)
        lambda = spec.f / spec.c;
    else if (spec.b != 0.0)
        lambda = spec.g / spec.b;
    else
        throw domain_error("eval_series_via_qn: both Bessel arguments vanish identically");
    if (lambda == 0.0 || std::abs(spec.f - lambda * spec.c) > 1e-15 * std::abs(spec.f) ||
        std::abs(spec.g - lambda * spec.b) > 1e-15 * (std::abs(spec.g) + 1e-300))
        throw domain_error("eval_series_via_qn: arguments are not proportional (f = Lambda c, g = Lambda b)");

    const AccuracyBudget inner{1e-15, 10000};
    auto term = [&](long n) -> double {
        const double a_n = coefficient(spec.coeff, n);
        if (a_n == 0.0) return 0.0;
        const long double nn = n;
        const long double a = spec.alpha * nn + spec.beta;
        const long double b = spec.gamma * nn + spec.epsilon;
        const long double half = (spec.c * nn + spec.b) / 2.0L;
        if (half == 0.0L) return (a == 0.0L && b == 0.0L) ? a_n : 0.0;
        const long double q = detail::qn_ld(n, static_cast<double>(half), spec.alpha, spec.beta, spec.gamma,
                                            spec.epsilon, lambda, inner);
        const long double pre = std::pow(half, a + b) * std::pow(static_cast<long double>(lambda), b);
        return a_n * static_cast<double>(pre * q);
    };
    return sum_accelerated(term, spec.range, budget);
}

}  // namespace kapteyn::summation
