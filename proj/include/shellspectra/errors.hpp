#pragma once

#include <stdexcept>
#include <string>

namespace shellspectra {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: out-of-range parameters, malformed descriptors, wrong sizes.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// |tau| = 2: the transmission condition splits into two independent
// boundary conditions and R_tau is undefined.
class DecoupledShell : public Error {
public:
    explicit DecoupledShell(double tau)
        : Error("decoupled shell: tau = " + std::to_string(tau) + " (|tau| = 2 is not supported)") {}
};

class NoBoundState : public Error {
public:
    using Error::Error;
};

class RootBracketFailure : public Error {
public:
    using Error::Error;
};

class IllConditioned : public Error {
public:
    using Error::Error;
};

// Solver did not converge, step size underflow, overflow domain, ...
class NumericalFailure : public Error {
public:
    using Error::Error;
};

}  // namespace shellspectra
