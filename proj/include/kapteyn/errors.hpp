#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kapteyn {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Gamma function evaluated at a non-positive integer.
class pole_error : public domain_error {
public:
    using domain_error::domain_error;
};

class overflow_error : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// An iterative evaluation ran out of terms (or could not reach the
/// requested accuracy). Carries whatever partial value was available.
class budget_exhausted : public std::runtime_error {
public:
    budget_exhausted(const std::string& what, double partial, std::size_t terms)
        : std::runtime_error(what), partial_(partial), terms_(terms) {}

    double partial_value() const noexcept { return partial_; }
    std::size_t terms_used() const noexcept { return terms_; }

private:
    double partial_;
    std::size_t terms_;
};

/// An odd-parity operation received an even radical term, or vice versa.
class parity_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Exact symbolic pipeline produced something outside the expected shape.
class structural_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A series term evaluated to inf or NaN.
class nonfinite_term : public std::runtime_error {
public:
    nonfinite_term(long index, double value)
        : std::runtime_error("non-finite series term at n = " + std::to_string(index)),
          index_(index), value_(value) {}

    long index() const noexcept { return index_; }
    double value() const noexcept { return value_; }

private:
    long index_;
    double value_;
};

}  // namespace kapteyn
