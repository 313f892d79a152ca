#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <string>

#include "kapteyn/errors.hpp"

namespace kapteyn {

using BigInt = boost::multiprecision::cpp_int;
// Always held in lowest terms with a positive denominator.
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= k;
    return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

/// base^e for any integer e; 0^0 = 1, 0^negative is a domain error.
inline BigRational pow(const BigRational& base, long e) {
    if (e < 0) {
        if (base == 0) throw domain_error("zero raised to a negative power");
        return pow(BigRational(1) / base, -e);
    }
    BigRational result = 1;
    BigRational b = base;
    auto k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1u) result *= b;
        b *= b;
        k >>= 1;
    }
    return result;
}

inline std::string to_string(const BigRational& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const BigRational& r) { return r.convert_to<double>(); }

}  // namespace kapteyn
