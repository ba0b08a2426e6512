#pragma once

#include <stdexcept>
#include <string>

namespace qclock {

// All library failures derive from Error so callers can map them to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: non-monotone spectra, non-normalized states, bad grid sizes.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Parameters outside the truncation regime of the mass-energy Hamiltonian.
class RegimeError : public Error {
public:
    RegimeError(std::string guard, const std::string& what)
        : Error(what), guard_(std::move(guard)) {}
    const std::string& guard() const noexcept { return guard_; }

private:
    std::string guard_;
};

// An exact operator identity failed beyond tolerance. Indicates a bug.
class IdentityError : public Error {
public:
    using Error::Error;
};

// Grid state leaked into the periodic boundary.
class WraparoundError : public Error {
public:
    using Error::Error;
};

// Numerical procedure (integration, peak fit) did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace qclock
