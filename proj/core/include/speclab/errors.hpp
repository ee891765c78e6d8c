#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace speclab {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters, malformed configs, out-of-domain requests.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Deliberate refusal to start work that exceeds a configured ceiling
// (dimension, memory, trial count).
class ResourceError : public Error {
public:
    using Error::Error;
};

// A numerical routine started but could not finish to tolerance.
class ComputeError : public Error {
public:
    using Error::Error;
};

class EigensolveError : public ComputeError {
public:
    EigensolveError(const std::string& what, int converged_tail_start,
                    std::vector<std::complex<double>> converged)
        : ComputeError(what),
          converged_tail_start(converged_tail_start),
          converged_eigenvalues(std::move(converged)) {}

    // LAPACK-style index: eigenvalues converged_tail_start..n-1 are good.
    int converged_tail_start;
    std::vector<std::complex<double>> converged_eigenvalues;
};

// Zero finder and argument-principle winding count disagree.
class WindingMismatchError : public ComputeError {
public:
    WindingMismatchError(const std::string& what, long zeros_found, long winding_number)
        : ComputeError(what), zeros_found(zeros_found), winding_number(winding_number) {}

    long zeros_found;
    long winding_number;
};

}  // namespace speclab
