#pragma once

#include <stdexcept>
#include <string>

namespace sdmlab {

// Precondition on a numeric argument violated (frequency above Nyquist, zero divider, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Inputs that must agree (lengths, rates) do not.
class MismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Element count or code outside the representable range.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// A modulator integrator left its bounded orbit.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

class LengthError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Input carries no usable signal (constant sequence, DC-only spectrum).
class DegenerateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Polyphase set whose path lengths cannot come from a decomposition.
class InconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sdmlab
